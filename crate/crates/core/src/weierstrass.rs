//! Long Weierstrass models `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`,
//! their invariants, the chord-tangent group law and changes of variables.
//!
//! Everything except `find_isomorphism` and the text format is generic over
//! the coordinate field.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{is_perfect_square, parse_rational, Rational};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve<F> {
    a1: F,
    a2: F,
    a3: F,
    a4: F,
    a6: F,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point<F> {
    Infinity,
    Affine(F, F),
}

/// Standard invariants of a Weierstrass model.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants<F> {
    pub b2: F,
    pub b4: F,
    pub b6: F,
    pub b8: F,
    pub c4: F,
    pub c6: F,
    pub disc: F,
    pub j: F,
}

/// Change of variables `x = u^2 x' + r`, `y = u^3 y' + u^2 s x' + t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelMap<F> {
    pub u: F,
    pub r: F,
    pub s: F,
    pub t: F,
}

impl<F: Scalar> Point<F> {
    pub fn new(x: F, y: F) -> Self {
        Point::Affine(x, y)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&F> {
        match self {
            Point::Affine(x, _) => Some(x),
            Point::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&F> {
        match self {
            Point::Affine(_, y) => Some(y),
            Point::Infinity => None,
        }
    }
}

fn b_invariants<F: Scalar>(a1: &F, a2: &F, a3: &F, a4: &F, a6: &F) -> [F; 4] {
    let two = F::from_int(2);
    let four = F::from_int(4);
    let b2 = a1.clone() * a1.clone() + four.clone() * a2.clone();
    let b4 = two * a4.clone() + a1.clone() * a3.clone();
    let b6 = a3.clone() * a3.clone() + four.clone() * a6.clone();
    let b8 = a1.clone() * a1.clone() * a6.clone() + four * a2.clone() * a6.clone()
        - a1.clone() * a3.clone() * a4.clone()
        + a2.clone() * a3.clone() * a3.clone()
        - a4.clone() * a4.clone();
    [b2, b4, b6, b8]
}

fn discriminant_from_b<F: Scalar>(b: &[F; 4]) -> F {
    let [b2, b4, b6, b8] = b.clone();
    -(b2.clone() * b2.clone() * b8.clone()) - F::from_int(8) * b4.clone() * b4.clone() * b4.clone()
        - F::from_int(27) * b6.clone() * b6.clone()
        + F::from_int(9) * b2 * b4 * b6
}

impl<F: Scalar> Curve<F> {
    pub fn new(a1: F, a2: F, a3: F, a4: F, a6: F) -> Result<Self> {
        let b = b_invariants(&a1, &a2, &a3, &a4, &a6);
        if discriminant_from_b(&b).is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(Curve { a1, a2, a3, a4, a6 })
    }

    /// `y^2 = x^3 + a2 x^2 + a4 x + a6`.
    pub fn from_cubic(a2: F, a4: F, a6: F) -> Result<Self> {
        Curve::new(F::zero(), a2, F::zero(), a4, a6)
    }

    pub fn coeffs(&self) -> [&F; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn a1(&self) -> &F {
        &self.a1
    }
    pub fn a2(&self) -> &F {
        &self.a2
    }
    pub fn a3(&self) -> &F {
        &self.a3
    }
    pub fn a4(&self) -> &F {
        &self.a4
    }
    pub fn a6(&self) -> &F {
        &self.a6
    }

    pub fn b_invariants(&self) -> [F; 4] {
        b_invariants(&self.a1, &self.a2, &self.a3, &self.a4, &self.a6)
    }

    pub fn discriminant(&self) -> F {
        discriminant_from_b(&self.b_invariants())
    }

    pub fn invariants(&self) -> Invariants<F> {
        let [b2, b4, b6, b8] = self.b_invariants();
        let c4 = b2.clone() * b2.clone() - F::from_int(24) * b4.clone();
        let c6 = -(b2.clone() * b2.clone() * b2.clone()) + F::from_int(36) * b2.clone() * b4.clone()
            - F::from_int(216) * b6.clone();
        let disc = discriminant_from_b(&[b2.clone(), b4.clone(), b6.clone(), b8.clone()]);
        let j = c4.clone() * c4.clone() * c4.clone() / disc.clone();
        Invariants { b2, b4, b6, b8, c4, c6, disc, j }
    }

    /// Value of `y^2 + a1 xy + a3 y - (x^3 + a2 x^2 + a4 x + a6)`.
    pub fn equation_residual(&self, x: &F, y: &F) -> F {
        let lhs = y.clone() * y.clone() + self.a1.clone() * x.clone() * y.clone() + self.a3.clone() * y.clone();
        let rhs = ((x.clone() + self.a2.clone()) * x.clone() + self.a4.clone()) * x.clone() + self.a6.clone();
        lhs - rhs
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => self.equation_residual(x, y).is_zero(),
        }
    }

    fn check(&self, p: &Point<F>) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointNotOnCurve)
        }
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(
                x.clone(),
                -y.clone() - self.a1.clone() * x.clone() - self.a3.clone(),
            ),
        }
    }

    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Result<Point<F>> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub fn double(&self, p: &Point<F>) -> Result<Point<F>> {
        self.add(p, p)
    }

    pub fn sub(&self, p: &Point<F>, q: &Point<F>) -> Result<Point<F>> {
        self.add(p, &self.neg(q))
    }

    pub(crate) fn add_unchecked(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let (lambda, nu) = if x1 == x2 {
            let denom = y1.clone() + y2.clone() + self.a1.clone() * x2.clone() + self.a3.clone();
            if denom.is_zero() {
                return Point::Infinity;
            }
            let two = F::from_int(2);
            let d = two.clone() * y1.clone() + self.a1.clone() * x1.clone() + self.a3.clone();
            let lambda = (F::from_int(3) * x1.clone() * x1.clone()
                + two.clone() * self.a2.clone() * x1.clone()
                + self.a4.clone()
                - self.a1.clone() * y1.clone())
                / d.clone();
            let nu = (-(x1.clone() * x1.clone() * x1.clone()) + self.a4.clone() * x1.clone()
                + two * self.a6.clone()
                - self.a3.clone() * y1.clone())
                / d;
            (lambda, nu)
        } else {
            let dx = x2.clone() - x1.clone();
            let lambda = (y2.clone() - y1.clone()) / dx.clone();
            let nu = (y1.clone() * x2.clone() - y2.clone() * x1.clone()) / dx;
            (lambda, nu)
        };
        let x3 = lambda.clone() * lambda.clone() + self.a1.clone() * lambda.clone()
            - self.a2.clone()
            - x1.clone()
            - x2.clone();
        let y3 = -(lambda + self.a1.clone()) * x3.clone() - nu - self.a3.clone();
        Point::Affine(x3, y3)
    }

    /// `n * p` by double-and-add.
    pub fn scalar_mul(&self, n: i64, p: &Point<F>) -> Result<Point<F>> {
        self.check(p)?;
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Point::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add_unchecked(&base, &base);
            }
        }
        Ok(acc)
    }

    /// The transformed curve and the point map from this model to it.
    pub fn apply_map(&self, m: &ModelMap<F>) -> (Curve<F>, impl Fn(&Point<F>) -> Point<F>) {
        let curve = self.transform(m);
        let m = m.clone();
        (curve, move |p: &Point<F>| m.map_point(p))
    }

    /// Coefficients after `m` (Silverman's table of transformation formulas).
    pub fn transform(&self, m: &ModelMap<F>) -> Curve<F> {
        let ModelMap { u, r, s, t } = m.clone();
        let two = F::from_int(2);
        let three = F::from_int(3);
        let (a1, a2, a3, a4, a6) = (
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
            self.a4.clone(),
            self.a6.clone(),
        );
        let u2 = u.clone() * u.clone();
        let u3 = u2.clone() * u.clone();
        let u4 = u2.clone() * u2.clone();
        let u6 = u3.clone() * u3.clone();
        let na1 = (a1.clone() + two.clone() * s.clone()) / u.clone();
        let na2 = (a2.clone() - s.clone() * a1.clone() + three.clone() * r.clone() - s.clone() * s.clone()) / u2;
        let na3 = (a3.clone() + r.clone() * a1.clone() + two.clone() * t.clone()) / u3;
        let na4 = (a4.clone() - s.clone() * a3.clone() + two.clone() * r.clone() * a2.clone()
            - (t.clone() + r.clone() * s.clone()) * a1.clone()
            + three * r.clone() * r.clone()
            - two * s * t.clone())
            / u4;
        let na6 = (a6 + r.clone() * a4 + r.clone() * r.clone() * a2 + r.clone() * r.clone() * r.clone()
            - t.clone() * a3
            - t.clone() * t.clone()
            - r * t * a1)
            / u6;
        Curve { a1: na1, a2: na2, a3: na3, a4: na4, a6: na6 }
    }
}

impl<F: Scalar> ModelMap<F> {
    pub fn identity() -> Self {
        ModelMap { u: F::one(), r: F::zero(), s: F::zero(), t: F::zero() }
    }

    pub fn scaling(u: F) -> Self {
        ModelMap { u, r: F::zero(), s: F::zero(), t: F::zero() }
    }

    /// Image of a point of the source model on the target model.
    pub fn map_point(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let u2 = self.u.clone() * self.u.clone();
                let u3 = u2.clone() * self.u.clone();
                let xr = x.clone() - self.r.clone();
                let nx = xr.clone() / u2;
                let ny = (y.clone() - self.s.clone() * xr - self.t.clone()) / u3;
                Point::Affine(nx, ny)
            }
        }
    }

    pub fn inverse(&self) -> Self {
        let ModelMap { u, r, s, t } = self.clone();
        let u2 = u.clone() * u.clone();
        ModelMap {
            u: F::one() / u.clone(),
            r: -r.clone() / u2.clone(),
            s: -s.clone() / u.clone(),
            t: (r * s - t) / (u2 * u),
        }
    }

    /// First `self`, then `next`.
    pub fn compose(&self, next: &ModelMap<F>) -> Self {
        let u2 = self.u.clone() * self.u.clone();
        ModelMap {
            u: self.u.clone() * next.u.clone(),
            r: self.r.clone() + u2.clone() * next.r.clone(),
            s: self.s.clone() + self.u.clone() * next.s.clone(),
            t: self.t.clone()
                + u2.clone() * self.s.clone() * next.r.clone()
                + u2 * self.u.clone() * next.t.clone(),
        }
    }
}

fn nth_root_rational(q: &Rational, n: u32) -> Option<Rational> {
    if q.is_negative() && n % 2 == 0 {
        return None;
    }
    let root = |v: &BigInt| {
        let r = v.nth_root(n);
        (r.pow(n) == *v).then_some(r)
    };
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

impl Curve<Rational> {
    /// A change of variables taking this model to `other`, if one exists
    /// over the rationals.
    pub fn find_isomorphism(&self, other: &Curve<Rational>) -> Option<ModelMap<Rational>> {
        let a = self.invariants();
        let b = other.invariants();
        if a.j != b.j {
            return None;
        }
        let u = if !a.c4.is_zero() && !a.c6.is_zero() {
            if b.c4.is_zero() || b.c6.is_zero() {
                return None;
            }
            let u2 = (&a.c6 * &b.c4) / (&b.c6 * &a.c4);
            is_perfect_square(&u2)?
        } else if a.c4.is_zero() {
            if b.c6.is_zero() {
                return None;
            }
            nth_root_rational(&(&a.c6 / &b.c6), 6).or_else(|| nth_root_rational(&(-(&a.c6 / &b.c6)), 6))?
        } else {
            if b.c4.is_zero() {
                return None;
            }
            nth_root_rational(&(&a.c4 / &b.c4), 4)?
        };
        if u.is_zero() {
            return None;
        }
        let two = Rational::from_integer(2.into());
        let three = Rational::from_integer(3.into());
        for u in [u.clone(), -u] {
            let s = (&u * &other.a1 - &self.a1) / &two;
            let r = (&u * &u * &other.a2 - &self.a2 + &s * &self.a1 + &s * &s) / &three;
            let t = (&u * &u * &u * &other.a3 - &self.a3 - &r * &self.a1) / &two;
            let m = ModelMap { u, r, s, t };
            if self.transform(&m) == *other {
                return Some(m);
            }
        }
        None
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs().iter().all(|a| a.is_integer())
    }
}

impl fmt::Display for Curve<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

impl fmt::Display for Point<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine(x, y) => write!(f, "[{x},{y}]"),
        }
    }
}

pub(crate) fn split_bracketed<'a>(s: &'a str, open: char, close: char) -> Result<Vec<&'a str>> {
    let s = s.trim();
    let inner = s
        .strip_prefix(open)
        .and_then(|r| r.strip_suffix(close))
        .ok_or_else(|| Error::Parse(format!("expected {open}...{close}: '{s}'")))?;
    Ok(inner.split(',').map(str::trim).collect())
}

impl FromStr for Curve<Rational> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = split_bracketed(s, '[', ']')?;
        if parts.len() != 5 {
            return Err(Error::Parse(format!("curve needs 5 coefficients: '{s}'")));
        }
        let a: Vec<Rational> = parts.iter().map(|p| parse_rational(p)).collect::<Result<_>>()?;
        let [a1, a2, a3, a4, a6]: [Rational; 5] = a.try_into().unwrap();
        Curve::new(a1, a2, a3, a4, a6)
    }
}

impl FromStr for Point<Rational> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "O" {
            return Ok(Point::Infinity);
        }
        let parts = split_bracketed(s, '[', ']')?;
        if parts.len() != 2 {
            return Err(Error::Parse(format!("point needs 2 coordinates: '{s}'")));
        }
        Ok(Point::Affine(parse_rational(parts[0])?, parse_rational(parts[1])?))
    }
}

impl Point<Rational> {
    /// Parses and checks membership on `curve`.
    pub fn parse_on(s: &str, curve: &Curve<Rational>) -> Result<Self> {
        let p: Point<Rational> = s.parse()?;
        if curve.contains(&p) {
            Ok(p)
        } else {
            Err(Error::PointNotOnCurve)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};
    use crate::scalar::Fp;
    use proptest::prelude::*;

    fn e138() -> Curve<Rational> {
        Curve::from_cubic(rat(35), rat(288), rat(576)).unwrap()
    }

    fn pt(x: i64, y: i64) -> Point<Rational> {
        Point::new(rat(x), rat(y))
    }

    #[test]
    fn cusp_is_singular() {
        assert_eq!(
            Curve::from_cubic(rat(0), rat(0), rat(0)),
            Err(Error::SingularCurve)
        );
    }

    #[test]
    fn discriminant_of_e138_by_root_product() {
        // (x+3)(x+8)(x+24): disc = 16 * prod (ei-ej)^2
        let e = e138();
        let roots = [-3i64, -8, -24];
        let mut prod = 1i64;
        for i in 0..3 {
            for j in i + 1..3 {
                prod *= (roots[i] - roots[j]).pow(2);
            }
        }
        assert_eq!(e.discriminant(), rat(16 * prod));
        assert_eq!(e.discriminant(), rat(16 * 25 * 441 * 256));
    }

    #[test]
    fn b8_identity() {
        let curves = [
            e138(),
            Curve::new(rat(1), rat(-1), rat(1), frac(-3, 2), frac(7, 5)).unwrap(),
        ];
        for e in curves {
            let i = e.invariants();
            assert_eq!(rat(4) * &i.b8, &i.b2 * &i.b6 - &i.b4 * &i.b4);
            assert_eq!(rat(1728) * &i.disc, &i.c4 * &i.c4 * &i.c4 - &i.c6 * &i.c6);
        }
    }

    #[test]
    fn group_law_examples() {
        let e = e138();
        assert_eq!(e.double(&pt(32, 280)).unwrap(), pt(1, 30));
        assert_eq!(e.add(&pt(0, 24), &pt(1, 30)).unwrap(), pt(0, -24));
        assert_eq!(e.add(&pt(0, 24), &Point::Infinity).unwrap(), pt(0, 24));
        assert_eq!(e.add(&pt(0, 24), &pt(0, -24)).unwrap(), Point::Infinity);
        assert_eq!(e.scalar_mul(2, &pt(-24, 0)).unwrap(), Point::Infinity);
        assert_eq!(e.add(&pt(1, 31), &pt(0, 24)), Err(Error::PointNotOnCurve));
        // Euler-form triple: 2P = -2R
        let two_p = e.scalar_mul(2, &pt(0, 24)).unwrap();
        let two_r = e.scalar_mul(2, &pt(32, 280)).unwrap();
        assert_eq!(two_p, e.neg(&two_r));
    }

    #[test]
    fn hand_slope_oracle_for_sum() {
        // lambda = (30-24)/(1-0) = 6, x3 = 36 - 35 - 0 - 1 = 0, y3 = -(6*0 + 24)
        let lambda = 6i64;
        let x3 = lambda * lambda - 35 - 0 - 1;
        let y3 = -(lambda * (x3 - 0) + 24);
        assert_eq!(pt(x3, y3), pt(0, -24));
    }

    #[test]
    fn scalar_mul_signs() {
        let e = e138();
        let p = pt(32, 280);
        assert_eq!(e.scalar_mul(0, &p).unwrap(), Point::Infinity);
        assert_eq!(e.scalar_mul(-3, &p).unwrap(), e.neg(&e.scalar_mul(3, &p).unwrap()));
        let four = e.scalar_mul(4, &p).unwrap();
        let twice = e.scalar_mul(2, &e.scalar_mul(2, &p).unwrap()).unwrap();
        assert_eq!(four, twice);
    }

    #[test]
    fn maps_compose_and_invert() {
        let e = Curve::new(rat(1), rat(0), rat(0), rat(-7), rat(14)).unwrap();
        let m = ModelMap { u: frac(2, 3), r: rat(5), s: frac(-1, 2), t: rat(7) };
        let (e2, f) = e.apply_map(&m);
        let back = e2.transform(&m.inverse());
        assert_eq!(back, e);
        assert_eq!(e.transform(&ModelMap::identity()), e);
        let n = ModelMap { u: rat(-3), r: frac(1, 4), s: rat(2), t: rat(0) };
        assert_eq!(e.transform(&m.compose(&n)), e2.transform(&n));
        // invariants scale by powers of u
        let (i, i2) = (e.invariants(), e2.invariants());
        let u = &m.u;
        assert_eq!(i2.disc, &i.disc / u.pow(12));
        assert_eq!(i2.c4, &i.c4 / u.pow(4));
        assert_eq!(i2.c6, &i.c6 / u.pow(6));
        assert_eq!(i2.j, i.j);
        // group law commutes with the map
        let p = Point::new(rat(2), rat(2));
        assert!(e.contains(&p));
        let q = e.double(&p).unwrap();
        assert_eq!(f(&e.add(&p, &q).unwrap()), e2.add(&f(&p), &f(&q)).unwrap());
    }

    #[test]
    fn isomorphism_search() {
        let e = e138();
        assert_eq!(e.find_isomorphism(&e), Some(ModelMap::identity()));
        let m = ModelMap { u: frac(5, 2), r: rat(-3), s: rat(1), t: frac(1, 2) };
        let e2 = e.transform(&m);
        let found = e.find_isomorphism(&e2).unwrap();
        assert_eq!(e.transform(&found), e2);
        // {2,4,12}: roots -8,-24,-48, different j
        let e2412 = Curve::from_cubic(rat(80), rat(8 * 24 + 8 * 48 + 24 * 48), rat(8 * 24 * 48)).unwrap();
        assert_ne!(e.invariants().j, e2412.invariants().j);
        assert_eq!(e.find_isomorphism(&e2412), None);
        // quadratic twist: same j, no rational map
        let twist = Curve::from_cubic(rat(-35), rat(288), rat(-576)).unwrap();
        assert_eq!(twist.invariants().j, e.invariants().j);
        assert_eq!(e.find_isomorphism(&twist), None);
    }

    #[test]
    fn j_zero_and_1728_isomorphisms() {
        let e = Curve::from_cubic(rat(0), rat(0), rat(2)).unwrap();
        let e2 = e.transform(&ModelMap { u: rat(3), r: rat(1), s: rat(0), t: rat(2) });
        assert!(e.find_isomorphism(&e2).is_some());
        let f = Curve::from_cubic(rat(0), rat(-1), rat(0)).unwrap();
        let f2 = f.transform(&ModelMap::scaling(frac(1, 2)));
        assert!(f.find_isomorphism(&f2).is_some());
    }

    #[test]
    fn text_round_trip() {
        let e = Curve::new(rat(1), rat(0), frac(-1, 3), rat(-7), rat(10)).unwrap();
        let s = e.to_string();
        assert_eq!(s, "[1,0,-1/3,-7,10]");
        assert_eq!(s.parse::<Curve<Rational>>().unwrap(), e);
        assert_eq!("O".parse::<Point<Rational>>().unwrap(), Point::Infinity);
        assert_eq!("[1/2, -3]".parse::<Point<Rational>>().unwrap(), Point::new(frac(1, 2), rat(-3)));
        assert!("[1,2,3]".parse::<Point<Rational>>().is_err());
    }

    #[test]
    fn prime_field_group_law() {
        type F = Fp<101>;
        let e = Curve::from_cubic(F::new(35), F::new(288), F::new(576)).unwrap();
        // brute-force points, then check group order annihilates every point
        let mut pts = vec![Point::Infinity];
        for x in 0..101 {
            for y in 0..101 {
                let p = Point::new(F::new(x), F::new(y));
                if e.contains(&p) {
                    pts.push(p);
                }
            }
        }
        let n = pts.len() as i64;
        for p in &pts {
            assert_eq!(e.scalar_mul(n, p).unwrap(), Point::Infinity);
        }
        assert_eq!(n % 4, 0);
    }

    #[test]
    fn float_invariants_match_exact() {
        let e = Curve::new(1.0f64, 0.0, 0.0, -7.0, 10.0).unwrap();
        let q = Curve::new(rat(1), rat(0), rat(0), rat(-7), rat(10)).unwrap();
        let fi = e.invariants();
        let qi = q.invariants();
        assert_eq!(fi.c4, crate::rational::to_f64(&qi.c4));
        assert_eq!(fi.disc, crate::rational::to_f64(&qi.disc));
    }

    fn arb_point_multiple() -> impl Strategy<Value = (i64, i64, i64)> {
        (-6i64..6, -6i64..6, -6i64..6)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        // multiples of R and P on E'({1,3,8}) give a supply of exact points
        #[test]
        fn group_axioms((i, j, k) in arb_point_multiple()) {
            let e = e138();
            let r = pt(32, 280);
            let p = pt(0, 24);
            let t = pt(-3, 0);
            let a = e.add(&e.scalar_mul(i, &r).unwrap(), &t).unwrap();
            let b = e.add(&e.scalar_mul(j, &r).unwrap(), &p).unwrap();
            let c = e.scalar_mul(k, &p).unwrap();
            prop_assert_eq!(e.add(&a, &b).unwrap(), e.add(&b, &a).unwrap());
            let left = e.add(&e.add(&a, &b).unwrap(), &c).unwrap();
            let right = e.add(&a, &e.add(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(e.add(&a, &e.neg(&a)).unwrap(), Point::Infinity);
            prop_assert!(e.contains(&a) && e.contains(&b) && e.contains(&c));
        }
    }
}
