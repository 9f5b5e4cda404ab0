//! Rational torsion: reduction bounds, point orders, halving, and the
//! structure of the torsion subgroup for curves with rational 2-torsion.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::factor::primes_up_to;
use crate::mestre_nagao::PointCounter;
use crate::poly::rational_roots;
use crate::rational::{is_perfect_square, Rational};
use crate::weierstrass::{Curve, Point};

pub const DEFAULT_PRIME_COUNT: usize = 20;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// gcd of `#E(F_p)` over the first `prime_count` good odd primes. Torsion
/// injects into every such group, so its order divides the result.
pub fn reduction_torsion_bound(e: &Curve<Rational>, prime_count: usize) -> u64 {
    let counter = PointCounter::new(e);
    let mut g = 0u64;
    let mut used = 0;
    let mut limit = 1000u32;
    let mut start = 0;
    while used < prime_count {
        let primes = primes_up_to(limit);
        for &p in &primes[start..] {
            if p == 2 {
                continue;
            }
            if let Ok(c) = counter.count(p as u64) {
                g = g.gcd(&c);
                used += 1;
                if used == prime_count {
                    break;
                }
            }
        }
        start = primes.len();
        limit *= 4;
    }
    g
}

/// Order of `p` if it is at most 12, `None` otherwise (no rational torsion
/// point has larger order).
pub fn point_order(e: &Curve<Rational>, p: &Point<Rational>) -> Result<Option<u32>> {
    if !e.contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    let mut acc = p.clone();
    for n in 1..=12 {
        if acc.is_infinity() {
            return Ok(Some(n));
        }
        acc = e.add_unchecked(&acc, p);
    }
    Ok(None)
}

/// Rational roots of `4x^3 + b2 x^2 + 2 b4 x + b6`, ascending: the
/// x-coordinates of the rational points of order 2.
pub fn two_torsion_x(e: &Curve<Rational>) -> Vec<Rational> {
    let [b2, b4, b6, _] = e.b_invariants();
    rational_roots(&[b6, q(2) * b4, b2, q(4)])
}

pub fn two_torsion_point(e: &Curve<Rational>, x: &Rational) -> Point<Rational> {
    let y = -(e.a1() * x + e.a3()) / q(2);
    Point::new(x.clone(), y)
}

/// All three roots when the 2-torsion is fully rational.
pub fn root_form(e: &Curve<Rational>) -> Result<[Rational; 3]> {
    let r = two_torsion_x(e);
    r.try_into().map_err(|_| Error::FormMismatch)
}

/// Coordinates of the class of `x - e_i`, with `x = e_i` replaced by
/// `(e_i - e_j)(e_i - e_k)`.
pub(crate) fn descent_components(x: &Rational, roots: &[Rational; 3]) -> [Rational; 3] {
    std::array::from_fn(|i| {
        if *x == roots[i] {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            (&roots[i] - &roots[j]) * (&roots[i] - &roots[k])
        } else {
            x - &roots[i]
        }
    })
}

/// Square roots of the three descent components when they are all
/// squares, i.e. when `p` lies in `2E(Q)`.
pub fn halving_obstruction(e: &Curve<Rational>, p: &Point<Rational>) -> Result<Option<[Rational; 3]>> {
    if !e.contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    let roots = root_form(e)?;
    let Some(x) = p.x() else {
        return Ok(Some([q(0), q(0), q(0)]));
    };
    let comps = descent_components(x, &roots);
    let mut w = Vec::with_capacity(3);
    for c in &comps {
        match is_perfect_square(c) {
            Some(r) => w.push(r),
            None => return Ok(None),
        }
    }
    Ok(Some(w.try_into().unwrap()))
}

/// Every rational `S` with `2S = p`.
pub fn halve_point(e: &Curve<Rational>, p: &Point<Rational>) -> Result<Vec<Point<Rational>>> {
    let roots = root_form(e)?;
    if p.is_infinity() {
        let mut out = vec![Point::Infinity];
        out.extend(roots.iter().map(|x| two_torsion_point(e, x)));
        return Ok(out);
    }
    halving_obstruction(e, p)?.ok_or(Error::NotHalvable)?;
    let x0 = p.x().unwrap();
    // square roots of x0 - e_i on the nose (zero at x0 = e_i)
    let r: Vec<Rational> = roots
        .iter()
        .map(|ei| is_perfect_square(&(x0 - ei)).unwrap_or_else(Rational::zero))
        .collect();
    let mut out: Vec<Point<Rational>> = Vec::new();
    for signs in 0..8u8 {
        let s: Vec<Rational> = (0..3)
            .map(|i| if signs >> i & 1 == 1 { -&r[i] } else { r[i].clone() })
            .collect();
        let x = x0 + &s[0] * &s[1] + &s[0] * &s[2] + &s[1] * &s[2];
        // y on the completed-square model, then back
        let yc = (&s[0] + &s[1]) * (&s[0] + &s[2]) * (&s[1] + &s[2]);
        let shift = (e.a1() * &x + e.a3()) / q(2);
        for yc in [yc.clone(), -yc] {
            let cand = Point::new(x.clone(), &yc - &shift);
            if e.contains(&cand) && !out.contains(&cand) && e.add_unchecked(&cand, &cand) == *p {
                out.push(cand);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NotHalvable);
    }
    Ok(out)
}

/// Rational points of order 3, from the rational roots of the
/// 3-division polynomial.
pub fn three_torsion(e: &Curve<Rational>) -> Vec<Point<Rational>> {
    let [b2, b4, b6, b8] = e.b_invariants();
    let psi3 = [b8, q(3) * b6, q(3) * b4, b2, q(3)];
    let mut out = Vec::new();
    for x in rational_roots(&psi3) {
        let h = e.a1() * &x + e.a3();
        let f = ((&x + e.a2()) * &x + e.a4()) * &x + e.a6();
        let disc = &h * &h + q(4) * f;
        if let Some(sq) = is_perfect_square(&disc) {
            for sgn in [1, -1] {
                let y = (-&h + q(sgn) * &sq) / q(2);
                let pt = Point::new(x.clone(), y);
                if !out.contains(&pt) {
                    out.push(pt);
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certainty {
    Exact,
    UpperBoundOnly,
}

/// `Z/n1 x Z/n2` with `n1 | n2`, and generators of those orders.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionGroup {
    pub n1: u32,
    pub n2: u32,
    pub generators: Vec<Point<Rational>>,
    pub certainty: Certainty,
    pub bound: u64,
}

impl TorsionGroup {
    pub fn order(&self) -> u64 {
        self.n1 as u64 * self.n2 as u64
    }

    /// All `i G1 + j G2`.
    pub fn elements(&self, e: &Curve<Rational>) -> Vec<Point<Rational>> {
        let mut out = vec![Point::Infinity];
        for g in &self.generators {
            let mut next = Vec::new();
            for base in &out {
                let mut acc = base.clone();
                loop {
                    next.push(acc.clone());
                    acc = e.add_unchecked(&acc, g);
                    if acc == *base {
                        break;
                    }
                }
            }
            out = next;
        }
        out
    }

    pub fn contains_shape(&self, n1: u32, n2: u32) -> bool {
        self.n1 % n1 == 0 && self.n2 % n2 == 0
    }
}

impl fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.n1, self.n2) {
            (1, 1) => write!(f, "0"),
            (1, n) => write!(f, "Z/{n}Z"),
            (m, n) => write!(f, "Z/{m}Z x Z/{n}Z"),
        }
    }
}

fn odd_part(n: u64) -> u64 {
    let mut n = n;
    while n > 0 && n % 2 == 0 {
        n /= 2;
    }
    n
}

/// Torsion subgroup of a curve with rational 2-torsion.
///
/// The 2-primary part comes from walking the halving tree above the points
/// of order 2, which finds every rational point of 2-power order; the
/// 3-part from the 3-division polynomial. The answer is `Exact` when the
/// odd part of the reduction bound leaves no room for more.
pub fn torsion_subgroup(e: &Curve<Rational>, prime_count: usize) -> TorsionGroup {
    let bound = reduction_torsion_bound(e, prime_count);
    let xs = two_torsion_x(e);
    let twos: Vec<Point<Rational>> = xs.iter().map(|x| two_torsion_point(e, x)).collect();
    let threes = three_torsion(e);
    let odd: u32 = if threes.is_empty() { 1 } else { 3 };

    let (mut n1, mut n2, mut generators) = (1u32, 1u32, Vec::new());
    if twos.len() == 3 {
        // deepest point in the halving tree over the 2-torsion
        let mut level = twos.clone();
        let mut order = 2u32;
        let mut deepest = twos[0].clone();
        while order < 16 {
            let mut next = Vec::new();
            for p in &level {
                if let Ok(hs) = halve_point(e, p) {
                    next.extend(hs);
                }
            }
            if next.is_empty() {
                break;
            }
            deepest = next[0].clone();
            level = next;
            order *= 2;
        }
        let below = e.scalar_mul((order / 2) as i64, &deepest).unwrap();
        let other = twos.iter().find(|t| **t != below).unwrap().clone();
        n1 = 2;
        n2 = order * odd;
        let g = match threes.first() {
            Some(t) => e.add_unchecked(&deepest, t),
            None => deepest,
        };
        generators = vec![other, g];
    } else {
        let two = twos.first().cloned();
        match (two, threes.first()) {
            (Some(t2), Some(t3)) => {
                n2 = 6;
                generators.push(e.add_unchecked(&t2, t3));
            }
            (Some(t2), None) => {
                n2 = 2;
                generators.push(t2);
            }
            (None, Some(t3)) => {
                n2 = 3;
                generators.push(t3.clone());
            }
            (None, None) => {}
        }
    }
    // curves without full 2-torsion only get the exhibited subgroup
    let exact = if twos.len() == 3 {
        odd_part(bound) == odd as u64
    } else {
        bound == n1 as u64 * n2 as u64
    };
    TorsionGroup {
        n1,
        n2,
        generators,
        certainty: if exact { Certainty::Exact } else { Certainty::UpperBoundOnly },
        bound,
    }
}
