//! Parametric families of Diophantine triples with prescribed torsion on
//! the induced curve, and the square conditions behind them.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{is_perfect_square, rat, Rational};
use crate::torsion::{descent_components, halving_obstruction};
use crate::triples::{induced_curve, make_triple, two_torsion_roots, Triple};
use crate::weierstrass::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    /// `{k-1, k+1, 16k^3-4k}`
    KPlusMinus,
    /// `{k-1, 4k, 16k^3-4k}`
    K4K,
    /// `{1, 3, c}` for the values of `c` that make it a triple
    OneThreeC,
    /// `ab = -1` with `a = (2T+1)/(T-2)`
    Z2Z4Alpha2,
    /// `{a, -1/a, T - 1/T}` with `a` from the doubled solution
    Z2Z4Doubled,
    Z2Z6T,
    Z2Z8T,
}

pub const ALL_FAMILIES: [FamilyId; 7] = [
    FamilyId::KPlusMinus,
    FamilyId::K4K,
    FamilyId::OneThreeC,
    FamilyId::Z2Z4Alpha2,
    FamilyId::Z2Z4Doubled,
    FamilyId::Z2Z6T,
    FamilyId::Z2Z8T,
];

impl FamilyId {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::KPlusMinus => "K_PLUSMINUS",
            FamilyId::K4K => "K_4K",
            FamilyId::OneThreeC => "ONE_THREE_C",
            FamilyId::Z2Z4Alpha2 => "Z2Z4_ALPHA2",
            FamilyId::Z2Z4Doubled => "Z2Z4_DOUBLED",
            FamilyId::Z2Z6T => "Z2Z6_T",
            FamilyId::Z2Z8T => "Z2Z8_T",
        }
    }

    /// The member at parameter `p`, sign-normalized.
    pub fn member(&self, p: &Rational) -> Result<Triple> {
        let t = match self {
            FamilyId::KPlusMinus | FamilyId::K4K => family_k(*self, p)?,
            FamilyId::OneThreeC => triple_or_degenerate(rat(1), rat(3), p.clone())?,
            FamilyId::Z2Z4Alpha2 => z2z4_family(p)?,
            FamilyId::Z2Z4Doubled => {
                let (a, c) = z2z4_doubled_solution(p)?;
                triple_or_degenerate(a.clone(), -a.recip(), c)?
            }
            FamilyId::Z2Z6T => {
                let (al, be) = z2z6_parameters(p)?;
                triple_from_alpha_beta(&al, &be).map_err(|e| Error::DegenerateParameter(e.to_string()))?
            }
            FamilyId::Z2Z8T => z2z8_family(p)?,
        };
        Ok(t.normalized_sign())
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ALL_FAMILIES
            .iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub family: FamilyId,
    pub parameter: Rational,
    pub triple: Triple,
}

impl FamilyMember {
    pub fn new(family: FamilyId, parameter: Rational) -> Result<Self> {
        let triple = family.member(&parameter)?;
        Ok(FamilyMember { family, parameter, triple })
    }
}

fn degenerate(what: &str, p: &Rational) -> Error {
    Error::DegenerateParameter(format!("{what} at {p}"))
}

fn triple_or_degenerate(a: Rational, b: Rational, c: Rational) -> Result<Triple> {
    let shown = format!("{{{a},{b},{c}}}");
    make_triple(a, b, c).map_err(|e| Error::DegenerateParameter(format!("{shown}: {e}")))
}

/// Division that reports a vanishing denominator as a degenerate parameter.
fn div(n: Rational, d: Rational, p: &Rational) -> Result<Rational> {
    if d.is_zero() {
        return Err(degenerate("pole", p));
    }
    Ok(n / d)
}

pub fn family_k(variant: FamilyId, k: &Rational) -> Result<Triple> {
    let one = Rational::one();
    let d = rat(16) * k * k * k - rat(4) * k;
    let second = match variant {
        FamilyId::KPlusMinus => k + &one,
        FamilyId::K4K => rat(4) * k,
        _ => return Err(Error::DegenerateParameter(format!("{variant} is not a k-family"))),
    };
    triple_or_degenerate(k - one, second, d)
}

/// `{(2T+1)/(T-2), (2-T)/(2T+1), 8T/((2T+1)(T-2))}`.
pub fn z2z4_family(t: &Rational) -> Result<Triple> {
    let one = Rational::one();
    let two = rat(2);
    let p = &two * t + &one;
    let q = t - &two;
    let a = div(p.clone(), q.clone(), t)?;
    let b = div(-q.clone(), p.clone(), t)?;
    let c = div(rat(8) * t, p * q, t)?;
    triple_or_degenerate(a, b, c)
}

/// `a = (T^2+1)^2 (T^2-1) / (4T^3)` and `c = T - 1/T`: `ac+1` and `1 - c/a`
/// are both squares.
pub fn z2z4_doubled_solution(t: &Rational) -> Result<(Rational, Rational)> {
    let one = Rational::one();
    let t2 = t * t;
    if t.is_zero() || t2 == one {
        return Err(degenerate("T in {0, 1, -1}", t));
    }
    let u = &t2 + &one;
    let a = &u * &u * (&t2 - &one) / (rat(4) * &t2 * t);
    let c = t - t.recip();
    Ok((a, c))
}

/// `alpha = (2T^5-2T)/(T^6+T^4+3T^2-1)`, `beta = (T^2-1)/(2T)`.
pub fn z2z6_parameters(t: &Rational) -> Result<(Rational, Rational)> {
    let one = Rational::one();
    let t2 = t * t;
    if t.is_zero() || t2 == one {
        return Err(degenerate("T in {0, 1, -1}", t));
    }
    let t4 = &t2 * &t2;
    let num = rat(2) * &t4 * t - rat(2) * t;
    let den = &t4 * &t2 + &t4 + rat(3) * &t2 - &one;
    let alpha = div(num, den, t)?;
    let beta = (&t2 - one) / (rat(2) * t);
    Ok((alpha, beta))
}

/// The quartic whose square values give the third condition for
/// `alpha = 2u/(u^2-1)`, `beta = (v^2-1)/(2v)`.
pub fn f_uv(u: &Rational, v: &Rational) -> Rational {
    let v2 = v * v;
    let v3 = &v2 * v;
    let v4 = &v2 * &v2;
    let edge = &v4 - rat(2) * &v2 + rat(1);
    let c3 = rat(-8) * &v3 + rat(8) * v;
    let c2 = rat(2) * &v4 + rat(2) + rat(12) * &v2;
    let c1 = rat(-8) * v + rat(8) * &v3;
    // Horner in u
    (((&edge * u + c3) * u + c2) * u + c1) * u + edge
}

/// `(beta^2, alpha^2, (alpha beta)^2 / (alpha-beta)^2) = (ac, bc, ab)` for
/// the triple `(beta^2/(beta-alpha), alpha^2/(beta-alpha), beta-alpha)`.
pub fn triple_from_alpha_beta(alpha: &Rational, beta: &Rational) -> Result<Triple> {
    let one = Rational::one();
    if alpha == beta {
        return Err(Error::ConditionFailed("alpha equals beta".into()));
    }
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::ConditionFailed("alpha or beta is zero".into()));
    }
    if is_perfect_square(&(alpha * alpha + &one)).is_none() {
        return Err(Error::ConditionFailed("alpha^2+1 is not a square".into()));
    }
    if is_perfect_square(&(beta * beta + &one)).is_none() {
        return Err(Error::ConditionFailed("beta^2+1 is not a square".into()));
    }
    let diff = alpha - beta;
    if is_perfect_square(&(alpha * alpha * beta * beta + &diff * &diff)).is_none() {
        return Err(Error::ConditionFailed("alpha^2 beta^2 + (alpha-beta)^2 is not a square".into()));
    }
    let c = beta - alpha;
    let a = beta * beta / &c;
    let b = alpha * alpha / &c;
    make_triple(a, b, c).map_err(|e| Error::ConditionFailed(e.to_string()))
}

/// `{a, -1/a, a - 1/a}` with `a = 2T/(T^2-1)`.
pub fn z2z8_family(t: &Rational) -> Result<Triple> {
    let one = Rational::one();
    let a = div(rat(2) * t, t * t - &one, t)?;
    if a.is_zero() || a.abs() == one {
        return Err(degenerate("a in {0, 1, -1}", t));
    }
    let b = -a.recip();
    let c = &a + &b;
    triple_or_degenerate(a, b, c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorsionKind {
    Z2Z4,
    Z2Z6,
    Z2Z8,
}

impl FromStr for TorsionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "Z2Z4" => Ok(TorsionKind::Z2Z4),
            "Z2Z6" => Ok(TorsionKind::Z2Z6),
            "Z2Z8" => Ok(TorsionKind::Z2Z8),
            _ => Err(Error::Parse(format!("unknown torsion kind {s:?}"))),
        }
    }
}

/// Square-root witnesses for the enlarged torsion, or `None` when the
/// conditions fail.
///
/// * `Z2Z4`: some `T_k = [-x_i x_j, 0]` halves, i.e. the two differences
///   `x_k x_i - x_i x_j` and `x_k x_j - x_i x_j` are squares; witnesses are
///   their roots.
/// * `Z2Z6`: an ordering with `bc = alpha^2`, `ac = beta^2`,
///   `ab = (alpha beta / (alpha - beta))^2`; witnesses `alpha, beta`.
/// * `Z2Z8`: some point of order 4 halves; witnesses are the roots of its
///   three descent components.
pub fn torsion_condition(kind: TorsionKind, t: &Triple) -> Option<Vec<Rational>> {
    let roots = monic_roots(t);
    match kind {
        TorsionKind::Z2Z4 => (0..3).find_map(|k| {
            let comps = descent_components(&roots[k], &roots);
            let w: Option<Vec<Rational>> = (0..3).filter(|&i| i != k).map(|i| is_perfect_square(&comps[i])).collect();
            w
        }),
        TorsionKind::Z2Z6 => z2z6_witness(t),
        TorsionKind::Z2Z8 => {
            let e = induced_curve(t).ok()?;
            let fours = order_four_points(t)?;
            fours.iter().find_map(|p| halving_obstruction(&e, p).ok().flatten().map(|w| w.to_vec()))
        }
    }
}

/// Roots `-bc, -ac, -ab` of the monic cubic `(x+bc)(x+ac)(x+ab)`.
fn monic_roots(t: &Triple) -> [Rational; 3] {
    two_torsion_roots(t)
}

fn z2z6_witness(t: &Triple) -> Option<Vec<Rational>> {
    let [a, b, c] = t.elements();
    let orders: [[&Rational; 3]; 6] = [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]];
    for [x, y, z] in orders {
        let Some(al) = is_perfect_square(&(y * z)) else { continue };
        let Some(be) = is_perfect_square(&(x * z)) else { continue };
        for (al, be) in [(al.clone(), be.clone()), (al.clone(), -be.clone()), (-al.clone(), be.clone()), (-al, -be)] {
            if al == be {
                continue;
            }
            let d = &al - &be;
            if x * y * &d * &d == &al * &al * &be * &be {
                return Some(vec![al, be]);
            }
        }
    }
    None
}

/// Points of order 4 on `E'` when some 2-torsion point halves.
fn order_four_points(t: &Triple) -> Option<Vec<Point<Rational>>> {
    let e = induced_curve(t).ok()?;
    let roots = monic_roots(t);
    let mut out = Vec::new();
    for r in &roots {
        let p = crate::torsion::two_torsion_point(&e, r);
        if let Ok(halves) = crate::torsion::halve_point(&e, &p) {
            out.extend(halves);
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::torsion::torsion_subgroup;
    use crate::triples::validate_tuple;
    use proptest::prelude::*;

    fn triple(a: Rational, b: Rational, c: Rational) -> Triple {
        make_triple(a, b, c).unwrap()
    }

    #[test]
    fn k_families() {
        assert_eq!(family_k(FamilyId::KPlusMinus, &rat(2)).unwrap(), triple(rat(1), rat(3), rat(120)));
        let t = family_k(FamilyId::KPlusMinus, &frac(3593, 2323)).unwrap();
        let want = triple(frac(1270, 2323), frac(5916, 2323), frac(664593861324, 12535672267));
        assert_eq!(t, want);
        assert!(family_k(FamilyId::K4K, &frac(-2673, 491)).is_ok());
        for k in [rat(0), rat(1), rat(-1), frac(1, 2), frac(-1, 2)] {
            assert!(matches!(family_k(FamilyId::KPlusMinus, &k), Err(Error::DegenerateParameter(_))), "{k}");
        }
        assert!(matches!(family_k(FamilyId::K4K, &frac(-1, 3)), Err(Error::DegenerateParameter(_))));
    }

    #[test]
    fn z2z4() {
        assert_eq!(z2z4_family(&rat(3)).unwrap(), triple(rat(7), frac(-1, 7), frac(24, 7)));
        let t = z2z4_family(&frac(7995, 6562)).unwrap();
        let want = triple(frac(22552, 5129), frac(-5129, 22552), frac(52463190, 14458651));
        assert!(t.same_up_to_sign(&want));
        for bad in [rat(2), frac(-1, 2), rat(0)] {
            assert!(z2z4_family(&bad).is_err());
        }
        assert!(torsion_condition(TorsionKind::Z2Z4, &t).is_some());
        assert!(torsion_condition(TorsionKind::Z2Z4, &triple(rat(1), rat(3), rat(8))).is_none());
    }

    #[test]
    fn doubled_solution() {
        let (a, c) = z2z4_doubled_solution(&rat(2)).unwrap();
        assert_eq!((a.clone(), c.clone()), (frac(75, 32), frac(3, 2)));
        assert_eq!(&a * &c + rat(1), frac(289, 64));
        assert_eq!(rat(1) - &c / &a, frac(9, 25));
        let (a, c) = z2z4_doubled_solution(&frac(12, 5)).unwrap();
        assert_eq!((a, c), (frac(3398759, 864000), frac(119, 60)));
        // base branch a = T
        let t = frac(5, 3);
        let c = &t - t.recip();
        let (lhs, tt) = (&t * (&t * &c + rat(1)) * (&t - &c), is_perfect_square);
        assert!(tt(&lhs).is_some());
        assert!(z2z4_doubled_solution(&rat(1)).is_err());
    }

    #[test]
    fn z2z6() {
        assert_eq!(z2z6_parameters(&rat(7)).unwrap(), (frac(8400, 30049), frac(24, 7)));
        let (al, be) = z2z6_parameters(&rat(2)).unwrap();
        assert_eq!(be, frac(3, 4));
        let d = &al - &be;
        assert!(is_perfect_square(&(&al * &al * &be * &be + &d * &d)).is_some());
        let (al, be) = z2z6_parameters(&rat(7)).unwrap();
        let t = triple_from_alpha_beta(&al, &be).unwrap();
        let want = triple(frac(721176, 193193), frac(20580000, 829322351), frac(662376, 210343));
        assert!(t.same_up_to_sign(&want));
        assert!(torsion_condition(TorsionKind::Z2Z6, &t).is_some());
        // u = 34/35, v = 8
        let (u, v) = (frac(34, 35), rat(8));
        assert!(is_perfect_square(&f_uv(&u, &v)).is_some());
        let al = rat(2) * &u / (&u * &u - rat(1));
        let be = (&v * &v - rat(1)) / (rat(2) * &v);
        let t = triple_from_alpha_beta(&al, &be).unwrap();
        let want = triple(frac(39123, 96976), frac(12947200, 418209), frac(42427, 1104));
        assert!(t.same_up_to_sign(&want));
        assert!(matches!(triple_from_alpha_beta(&rat(1), &rat(2)), Err(Error::ConditionFailed(_))));
    }

    #[test]
    fn f_uv_values() {
        let v = rat(2);
        let u = (&v * &v * &v + &v) / (&v * &v - rat(1));
        assert_eq!(f_uv(&u, &v), frac(3721, 9));
        for u in [rat(0), frac(3, 7), rat(-5)] {
            let w = &u * &u + rat(1);
            assert_eq!(f_uv(&u, &rat(0)), &w * &w);
        }
    }

    #[test]
    fn z2z8() {
        let t = z2z8_family(&rat(2)).unwrap();
        assert_eq!(t, triple(frac(4, 3), frac(-3, 4), frac(7, 12)));
        let e = induced_curve(&t).unwrap();
        let [r1, r2, r3] = two_torsion_roots(&t);
        // shifted so that T3 = [-ab, 0] sits at the origin: x(x+16/9)(x+9/16)
        let mut roots: Vec<Rational> = [r1, r2, r3].iter().map(|r| r - rat(1)).collect();
        roots.sort();
        assert_eq!(roots, vec![frac(-16, 9), frac(-9, 16), rat(0)]);
        assert!(e.contains(&Point::new(rat(1), rat(0))));
        assert!(torsion_condition(TorsionKind::Z2Z8, &t).is_some());
        // a = 408/145 at T = 17/12
        let t = z2z8_family(&frac(17, 12)).unwrap();
        assert_eq!(t.a(), &frac(408, 145));
        assert_eq!(t.c().abs(), frac(145439, 59160));
        assert!(torsion_condition(TorsionKind::Z2Z8, &triple(rat(1), rat(3), rat(8))).is_none());
        assert!(z2z8_family(&rat(1)).is_err());
    }

    #[test]
    fn family_ids_round_trip() {
        for f in ALL_FAMILIES {
            assert_eq!(f.name().parse::<FamilyId>().unwrap(), f);
        }
        assert!("nope".parse::<FamilyId>().is_err());
        let m = FamilyMember::new(FamilyId::OneThreeC, rat(120)).unwrap();
        assert_eq!(m.triple, triple(rat(1), rat(3), rat(120)));
        assert!(FamilyId::OneThreeC.member(&rat(7)).is_err());
        assert!(FamilyId::Z2Z4Doubled.member(&rat(2)).is_ok());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-60i64..60, 1i64..40).prop_map(|(n, d)| frac(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn families_validate(p in small_rational()) {
            for f in ALL_FAMILIES {
                if f == FamilyId::OneThreeC {
                    continue;
                }
                if let Ok(t) = f.member(&p) {
                    let el: Vec<Rational> = t.elements().into_iter().cloned().collect();
                    prop_assert!(validate_tuple(&el).unwrap().is_some());
                    prop_assert!(!t.a().is_negative());
                    let e = induced_curve(&t).unwrap();
                    prop_assert_eq!(&e, &induced_curve(&t.negate()).unwrap());
                }
            }
            if let Ok(t) = z2z4_family(&p) {
                prop_assert_eq!(t.a() * t.b(), rat(-1));
                prop_assert!(torsion_condition(TorsionKind::Z2Z4, &t).is_some());
            }
            if let Ok(t) = z2z8_family(&p) {
                prop_assert!(is_perfect_square(&(t.a() * t.a() + rat(1))).is_some());
            }
        }

        #[test]
        fn f_uv_square_on_curve(v in small_rational()) {
            let den = &v * &v - rat(1);
            prop_assume!(!den.is_zero());
            let u = (&v * &v * &v + &v) / den;
            prop_assert!(is_perfect_square(&f_uv(&u, &v)).is_some());
        }

        #[test]
        fn alpha_beta_round_trip(p in small_rational()) {
            let Ok((al, be)) = z2z6_parameters(&p) else { return Ok(()) };
            let Ok(t) = triple_from_alpha_beta(&al, &be) else { return Ok(()) };
            let d = &al - &be;
            prop_assert_eq!(t.b() * t.c(), &al * &al);
            prop_assert_eq!(t.a() * t.c(), &be * &be);
            prop_assert_eq!(t.a() * t.b(), &al * &al * &be * &be / (&d * &d));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn z2z8_torsion(p in small_rational()) {
            let Ok(t) = z2z8_family(&p) else { return Ok(()) };
            prop_assert!(torsion_condition(TorsionKind::Z2Z8, &t).is_some());
            let e = induced_curve(&t).unwrap();
            prop_assert!(torsion_subgroup(&e, 20).contains_shape(2, 8));
        }
    }
}
