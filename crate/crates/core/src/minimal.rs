//! Global minimal models over Q (Laska–Kraus–Connell), best effort when
//! the gcd of `c4` and `c6` cannot be fully factored.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::factor::{factor_best_effort, FactorBudget};
use crate::rational::Rational;
use crate::weierstrass::{Curve, ModelMap};

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalModel {
    pub curve: Curve<Rational>,
    /// Map from the input model to `curve`.
    pub map: ModelMap<Rational>,
    /// False when an unfactored cofactor might still hide a reducible prime.
    pub certified: bool,
}

fn int(q: &Rational) -> BigInt {
    debug_assert!(q.is_integer());
    q.to_integer()
}

fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    crate::rational::valuation(n, p)
}

/// An integral model `u = 1/d` with `d` the lcm of the coefficient
/// denominators.
pub fn integral_model(e: &Curve<Rational>) -> (Curve<Rational>, ModelMap<Rational>) {
    let d = e.coeffs().iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()));
    let m = ModelMap::scaling(Rational::new(BigInt::one(), d));
    (e.transform(&m), m)
}

/// Kraus' local conditions for `(c4, c6)` to be the invariants of an
/// integral model at 2 and 3.
fn kraus_at(p: u32, c4: &BigInt, c6: &BigInt) -> bool {
    match p {
        3 => valuation(c6, &BigInt::from(3)) != 2,
        2 => {
            let m4 = c6.mod_floor(&BigInt::from(4));
            if m4 == BigInt::from(3) {
                return true;
            }
            let m32 = c6.mod_floor(&BigInt::from(32));
            valuation(c4, &BigInt::from(2)) >= 4 && (m32.is_zero() || m32 == BigInt::from(8))
        }
        _ => true,
    }
}

/// Integral model with the given invariants, in reduced form
/// (a1, a3 in {0,1}, a2 in {-1,0,1}).
fn model_from_c4c6(c4: &BigInt, c6: &BigInt) -> Option<Curve<Rational>> {
    let twelve = BigInt::from(12);
    let mut b2 = (-c6).mod_floor(&twelve);
    if b2 > BigInt::from(6) {
        b2 -= &twelve;
    }
    let (b4, r) = (&b2 * &b2 - c4).div_rem(&BigInt::from(24));
    if !r.is_zero() {
        return None;
    }
    let (b6, r) = (-(&b2 * &b2 * &b2) + BigInt::from(36) * &b2 * &b4 - c6).div_rem(&BigInt::from(216));
    if !r.is_zero() {
        return None;
    }
    let two = BigInt::from(2);
    let a1 = b2.mod_floor(&two);
    let a3 = b6.mod_floor(&two);
    let a2 = (&b2 - &a1) / BigInt::from(4);
    let a4 = (&b4 - &a1 * &a3) / &two;
    let a6 = (&b6 - &a3) / BigInt::from(4);
    let q = |n: BigInt| Rational::from_integer(n);
    let curve = Curve::new(q(a1), q(a2), q(a3), q(a4), q(a6)).ok()?;
    let inv = curve.invariants();
    (inv.c4 == q(c4.clone()) && inv.c6 == q(c6.clone())).then_some(curve)
}

pub fn minimal_model(e: &Curve<Rational>, budget: FactorBudget) -> Result<MinimalModel> {
    let (ei, m0) = integral_model(e);
    let inv = ei.invariants();
    let (c4, c6) = (int(&inv.c4), int(&inv.c6));
    let g = c4.gcd(&c6);
    let fz = factor_best_effort(&g, budget)?;
    let mut u = BigInt::one();
    let (mut c4m, mut c6m) = (c4.clone(), c6.clone());
    for (p, _) in &fz.factors {
        let p = BigInt::from(p.clone());
        let v4 = valuation(&c4, &p);
        let v6 = valuation(&c6, &p);
        let mut e = (v4 / 4).min(v6 / 6);
        if e == 0 {
            continue;
        }
        let small = p.to_u32_digits().1.first().copied().filter(|_| p.bits() <= 2);
        loop {
            let pe4 = p.pow(4 * e);
            let pe6 = p.pow(6 * e);
            let t4 = &c4m / &pe4;
            let t6 = &c6m / &pe6;
            if e == 0 || small.map_or(true, |s| kraus_at(s, &t4, &t6)) {
                if e > 0 {
                    c4m = t4;
                    c6m = t6;
                    u *= p.pow(e);
                }
                break;
            }
            e -= 1;
        }
    }
    let mut certified = fz.is_complete();
    if !certified {
        // a composite cofactor can still be scaled out whole
        let d = BigInt::from(fz.cofactor.clone());
        while (&c4m % d.pow(4)).is_zero() && (&c6m % d.pow(6)).is_zero() && !d.is_one() {
            c4m /= d.pow(4);
            c6m /= d.pow(6);
            u *= &d;
        }
        if d.gcd(&c4m).is_one() || d.gcd(&c6m).is_one() {
            certified = true;
        }
    }
    let target = match model_from_c4c6(&c4m, &c6m) {
        Some(c) => c,
        None => {
            return Ok(MinimalModel { curve: ei, map: m0, certified: false });
        }
    };
    let map = ei
        .find_isomorphism(&target)
        .expect("isomorphic by construction");
    debug_assert_eq!(map.u.abs(), Rational::from_integer(u.clone()));
    Ok(MinimalModel { curve: target, map: m0.compose(&map), certified })
}
