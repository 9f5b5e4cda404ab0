//! Rational Diophantine tuples and the curves they induce.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{is_perfect_square, parse_rational, Rational};
use crate::weierstrass::{split_bracketed, Curve, Point};

/// `{a, b, c}` with `ab+1 = r^2`, `ac+1 = s^2`, `bc+1 = t^2`, roots
/// nonnegative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    a: Rational,
    b: Rational,
    c: Rational,
    r: Rational,
    s: Rational,
    t: Rational,
}

/// Square roots of `x_i x_j + 1` for every pair `i < j` in lexicographic
/// order, or `None` if some pair fails.
pub fn validate_tuple(values: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if values.iter().any(|v| v.is_zero()) {
        return Err(Error::ZeroEntry);
    }
    let mut roots = Vec::new();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            match is_perfect_square(&(&values[i] * &values[j] + Rational::one())) {
                Some(r) => roots.push(r),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(roots))
}

pub fn make_triple(a: Rational, b: Rational, c: Rational) -> Result<Triple> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(Error::ZeroEntry);
    }
    if a == b || a == c || b == c {
        return Err(Error::DegenerateTriple);
    }
    let one = Rational::one();
    let root = |x: &Rational, y: &Rational, name: &str| {
        is_perfect_square(&(x * y + &one))
            .ok_or_else(|| Error::NotDiophantine(format!("{name}+1 = {} is not a square", x * y + &one)))
    };
    let r = root(&a, &b, "ab")?;
    let s = root(&a, &c, "ac")?;
    let t = root(&b, &c, "bc")?;
    Ok(Triple { a, b, c, r, s, t })
}

/// `a + b + 2r`, the third element of the regular extension of `{a, b}`.
pub fn euler_extension(a: &Rational, b: &Rational) -> Result<Rational> {
    let r = is_perfect_square(&(a * b + Rational::one())).ok_or(Error::NotDiophantinePair)?;
    let c = a + b + r * Rational::from_integer(2.into());
    if c.is_zero() {
        return Err(Error::ZeroExtension);
    }
    Ok(c)
}

impl Triple {
    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn b(&self) -> &Rational {
        &self.b
    }
    pub fn c(&self) -> &Rational {
        &self.c
    }
    pub fn roots(&self) -> [&Rational; 3] {
        [&self.r, &self.s, &self.t]
    }
    pub fn elements(&self) -> [&Rational; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// `{-a, -b, -c}`; induces the same curve.
    pub fn negate(&self) -> Triple {
        Triple {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            ..self.clone()
        }
    }

    /// Representative with positive first element.
    pub fn normalized_sign(&self) -> Triple {
        if self.a.is_negative() {
            self.negate()
        } else {
            self.clone()
        }
    }

    /// Equality of the underlying sets up to a global sign.
    pub fn same_up_to_sign(&self, other: &Triple) -> bool {
        let key = |t: &Triple| {
            let mut v: Vec<Rational> = t.elements().into_iter().cloned().collect();
            v.sort();
            v
        };
        let k = key(other);
        key(self) == k || key(&self.negate()) == k
    }

    pub fn product(&self) -> Rational {
        &self.a * &self.b * &self.c
    }

    /// True when `c = a + b ± 2r` for some ordering.
    pub fn is_euler_form(&self) -> bool {
        let two = Rational::from_integer(2.into());
        let [a, b, c] = self.elements();
        let [r, s, t] = self.roots();
        let check = |x: &Rational, y: &Rational, z: &Rational, w: &Rational| {
            *z == x + y + &two * w || *z == x + y - &two * w
        };
        check(a, b, c, r) || check(a, c, b, s) || check(b, c, a, t)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{},{}}}", self.a, self.b, self.c)
    }
}

impl FromStr for Triple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = split_bracketed(s, '{', '}')?;
        if parts.len() != 3 {
            return Err(Error::Parse(format!("triple needs 3 entries: '{s}'")));
        }
        let v: Vec<Rational> = parts.iter().map(|p| parse_rational(p)).collect::<Result<_>>()?;
        let [a, b, c]: [Rational; 3] = v.try_into().unwrap();
        make_triple(a, b, c)
    }
}

/// `y^2 = (ax+1)(bx+1)(cx+1)`: not monic, so kept apart from `Curve`.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedCubic {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl InducedCubic {
    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        let one = Rational::one();
        y * y == (&self.a * x + &one) * (&self.b * x + &one) * (&self.c * x + &one)
    }

    fn scale(&self) -> Rational {
        &self.a * &self.b * &self.c
    }

    /// `(x, y) -> (abc x, abc y)` onto the monic model.
    pub fn to_monic(&self, x: &Rational, y: &Rational) -> Point<Rational> {
        let k = self.scale();
        Point::new(x * &k, y * &k)
    }

    /// Inverse of `to_monic`; `None` at infinity.
    pub fn from_monic(&self, p: &Point<Rational>) -> Option<(Rational, Rational)> {
        let k = self.scale();
        p.x().map(|x| (x / &k, p.y().unwrap() / &k))
    }
}

#[derive(Clone, Debug)]
pub struct InducedCurves {
    pub cubic: InducedCubic,
    /// `y^2 = (x+bc)(x+ac)(x+ab)`.
    pub curve: Curve<Rational>,
}

pub fn induced_curves(t: &Triple) -> Result<InducedCurves> {
    let (a, b, c) = (&t.a, &t.b, &t.c);
    let abc = t.product();
    let a2 = a * b + a * c + b * c;
    let a4 = &abc * (a + b + c);
    let a6 = &abc * &abc;
    let curve = Curve::from_cubic(a2, a4, a6).map_err(|_| Error::DegenerateTriple)?;
    Ok(InducedCurves {
        cubic: InducedCubic { a: a.clone(), b: b.clone(), c: c.clone() },
        curve,
    })
}

/// The curve alone.
pub fn induced_curve(t: &Triple) -> Result<Curve<Rational>> {
    Ok(induced_curves(t)?.curve)
}

/// Roots of the cubic of the induced curve: `[-bc, -ac, -ab]`.
pub fn two_torsion_roots(t: &Triple) -> [Rational; 3] {
    [-(&t.b * &t.c), -(&t.a * &t.c), -(&t.a * &t.b)]
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalPoints {
    pub t1: Point<Rational>,
    pub t2: Point<Rational>,
    pub t3: Point<Rational>,
    pub p: Point<Rational>,
    pub q: Point<Rational>,
    pub r: Point<Rational>,
}

pub fn canonical_points(t: &Triple) -> Result<CanonicalPoints> {
    canonical_points_with_roots(t, [&t.r, &t.s, &t.t])
}

/// Roots `(r, a+r, b+r)` of a regular triple `c = a+b+2r`, signed so that
/// `s = a+r` and `t = b+r` hold exactly.
pub fn regular_roots(t: &Triple) -> Option<[Rational; 3]> {
    let two = Rational::from_integer(2.into());
    for r in [t.r.clone(), -t.r.clone()] {
        if t.c == &t.a + &t.b + &two * &r {
            return Some([r.clone(), &t.a + &r, &t.b + &r]);
        }
    }
    None
}

/// Canonical points built from a chosen sign for each root.
pub fn canonical_points_with_roots(t: &Triple, roots: [&Rational; 3]) -> Result<CanonicalPoints> {
    let one = Rational::one();
    for (w, v) in roots.iter().zip([&t.a * &t.b, &t.a * &t.c, &t.b * &t.c]) {
        if *w * *w != &v + &one {
            return Err(Error::NotDiophantine(format!("{w} is not a root of {}", &v + &one)));
        }
    }
    let e = induced_curve(t)?;
    let zero = Rational::zero;
    let [e1, e2, e3] = two_torsion_roots(t);
    let [r, s, u] = roots;
    let pts = CanonicalPoints {
        t1: Point::new(e1, zero()),
        t2: Point::new(e2, zero()),
        t3: Point::new(e3, zero()),
        p: Point::new(zero(), t.product()),
        q: Point::new(Rational::one(), r * s * u),
        r: Point::new(r * s + r * u + s * u + Rational::one(), (r + s) * (r + u) * (s + u)),
    };
    for p in [&pts.t1, &pts.t2, &pts.t3, &pts.p, &pts.q, &pts.r] {
        assert!(e.contains(p), "canonical point {p} off the induced curve");
    }
    assert_eq!(e.double(&pts.r)?, pts.q, "Q = 2R fails for {t}");
    Ok(pts)
}

/// Candidate fourth elements from `P + Q` and `P - Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Extension {
    pub d: Rational,
    pub e: Rational,
}

impl Extension {
    /// True when `v` is nonzero and not already in the triple.
    pub fn is_new(t: &Triple, v: &Rational) -> bool {
        !v.is_zero() && !t.elements().contains(&v)
    }
}

pub fn extend_to_quadruple(t: &Triple) -> Result<Extension> {
    let e = induced_curve(t)?;
    let pts = canonical_points(t)?;
    let abc = t.product();
    let sum = e.add(&pts.p, &pts.q)?;
    let diff = e.sub(&pts.p, &pts.q)?;
    match (sum.x(), diff.x()) {
        (Some(x1), Some(x2)) => Ok(Extension { d: x1 / &abc, e: x2 / &abc }),
        _ => Err(Error::InfiniteSum),
    }
}

/// The closed forms `a+b+c+2abc ± 2rst`.
pub fn extension_closed_form(t: &Triple) -> [Rational; 2] {
    let two = Rational::from_integer(2.into());
    let base = &t.a + &t.b + &t.c + &two * t.product();
    let rst = &two * &t.r * &t.s * &t.t;
    [&base + &rst, base - rst]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};
    use proptest::prelude::*;

    fn tri(a: i64, b: i64, c: i64) -> Triple {
        make_triple(rat(a), rat(b), rat(c)).unwrap()
    }

    #[test]
    fn tuples() {
        let fermat: Vec<Rational> = [1, 3, 8, 120].iter().map(|&v| rat(v)).collect();
        assert!(validate_tuple(&fermat).unwrap().is_some());
        let diophantus = [frac(1, 16), frac(33, 16), frac(17, 4), frac(105, 16)];
        assert!(validate_tuple(&diophantus).unwrap().is_some());
        assert_eq!(validate_tuple(&[rat(1), rat(2), rat(3)]).unwrap(), None);
        assert_eq!(validate_tuple(&[rat(1), rat(0)]), Err(Error::ZeroEntry));
    }

    #[test]
    fn triples() {
        let t = tri(1, 3, 8);
        assert_eq!(t.roots(), [&rat(2), &rat(3), &rat(5)]);
        let k = 3;
        let t = tri(k - 1, k + 1, 4 * k);
        assert_eq!(t.elements(), [&rat(2), &rat(4), &rat(12)]);
        assert_eq!(t.roots(), [&rat(3), &rat(5), &rat(7)]);
        assert!(matches!(make_triple(rat(1), rat(2), rat(5)), Err(Error::NotDiophantine(_))));
        assert_eq!(make_triple(rat(1), rat(3), rat(1)), Err(Error::DegenerateTriple));
        assert_eq!("{1, 3, 8}".parse::<Triple>().unwrap(), tri(1, 3, 8));
        assert_eq!(tri(1, 3, 8).to_string(), "{1,3,8}");
    }

    #[test]
    fn euler() {
        assert_eq!(euler_extension(&rat(1), &rat(3)).unwrap(), rat(8));
        for k in 2..=10 {
            assert_eq!(euler_extension(&rat(k - 1), &rat(k + 1)).unwrap(), rat(4 * k));
        }
        let a = frac(7, 3);
        assert_eq!(euler_extension(&a, &(-a.recip())).unwrap(), &a - a.recip());
        assert_eq!(euler_extension(&rat(1), &rat(2)), Err(Error::NotDiophantinePair));
        // a = -b with ab + 1 = 0
        assert_eq!(euler_extension(&rat(1), &rat(-1)), Err(Error::ZeroExtension));
    }

    #[test]
    fn induced_1_3_8() {
        let ic = induced_curves(&tri(1, 3, 8)).unwrap();
        // (x+3)(x+8)(x+24) expanded by hand
        let want = Curve::from_cubic(rat(35), rat(3 * 8 + 3 * 24 + 8 * 24), rat(3 * 8 * 24)).unwrap();
        assert_eq!(ic.curve, want);
        assert_eq!(ic.curve, induced_curve(&tri(1, 3, 8).negate()).unwrap());
        // Eq.-(2) solution x = 0, y = 1 maps to P
        assert!(ic.cubic.contains(&rat(0), &rat(1)));
        assert_eq!(ic.cubic.to_monic(&rat(0), &rat(1)), Point::new(rat(0), rat(24)));
        let r = Point::new(rat(32), rat(280));
        let (x, y) = ic.cubic.from_monic(&r).unwrap();
        assert!(ic.cubic.contains(&x, &y));
    }

    #[test]
    fn roots_of_2_4_12() {
        let t = tri(2, 4, 12);
        let e = induced_curve(&t).unwrap();
        let roots = two_torsion_roots(&t);
        assert_eq!(roots, [rat(-48), rat(-24), rat(-8)]);
        for r in roots {
            assert!(e.contains(&Point::new(r, rat(0))));
        }
    }

    #[test]
    fn canonical_1_3_8() {
        let c = canonical_points(&tri(1, 3, 8)).unwrap();
        assert_eq!(c.t1, Point::new(rat(-24), rat(0)));
        assert_eq!(c.t2, Point::new(rat(-8), rat(0)));
        assert_eq!(c.t3, Point::new(rat(-3), rat(0)));
        assert_eq!(c.p, Point::new(rat(0), rat(24)));
        assert_eq!(c.q, Point::new(rat(1), rat(30)));
        assert_eq!(c.r, Point::new(rat(32), rat(280)));
    }

    #[test]
    fn quadruples() {
        let x = extend_to_quadruple(&tri(1, 3, 8)).unwrap();
        let mut got = [x.d.clone(), x.e.clone()];
        got.sort();
        assert_eq!(got, [rat(0), rat(120)]);
        assert!(!Extension::is_new(&tri(1, 3, 8), &rat(0)));
        let t = tri(2, 4, 12);
        let x = extend_to_quadruple(&t).unwrap();
        let nonzero: Vec<&Rational> = [&x.d, &x.e].into_iter().filter(|v| !v.is_zero()).collect();
        assert_eq!(nonzero, vec![&rat(420)]);
        let quad = [rat(2), rat(4), rat(12), rat(420)];
        assert!(validate_tuple(&quad).unwrap().is_some());
    }

    #[test]
    fn regular_identity_needs_signed_roots() {
        let t = make_triple(rat(-13), frac(-120, 13), frac(-3, 13)).unwrap();
        let e = induced_curve(&t).unwrap();
        let [r, s, u] = regular_roots(&t).unwrap();
        assert_eq!(s, rat(-2));
        let pts = canonical_points_with_roots(&t, [&r, &s, &u]).unwrap();
        assert_eq!(e.double(&pts.p).unwrap(), e.neg(&e.double(&pts.r).unwrap()));
        let plain = canonical_points(&t).unwrap();
        assert_ne!(e.double(&plain.p).unwrap(), e.neg(&e.double(&plain.r).unwrap()));
        assert!(canonical_points_with_roots(&t, [&r, &r, &u]).is_err());
        assert!(regular_roots(&make_triple(frac(1, 1), rat(3), rat(120)).unwrap()).is_none());
    }

    /// Random triples `{a, b, a+b+2r}` and general ones from
    /// `{a, b}` with `b = (r^2-1)/a`.
    fn arb_pair() -> impl Strategy<Value = (Rational, Rational)> {
        ((1i64..40, 1i64..12), (1i64..40, 1i64..12)).prop_filter_map("degenerate", |((an, ad), (rn, rd))| {
            let a = frac(an, ad);
            let r = frac(rn, rd);
            let b = (&r * &r - Rational::one()) / &a;
            (!b.is_zero() && b != a).then_some((a, b))
        })
    }

    proptest! {
        #[test]
        fn extension_matches_closed_form((a, b) in arb_pair(), flip in any::<bool>()) {
            let Ok(mut c) = euler_extension(&a, &b) else { return Ok(()) };
            if flip {
                // the other regular extension a + b - 2r
                let r = is_perfect_square(&(&a * &b + Rational::one())).unwrap();
                c = &a + &b - r * rat(2);
            }
            let Ok(t) = make_triple(a, b, c) else { return Ok(()) };
            let Ok(x) = extend_to_quadruple(&t) else { return Ok(()) };
            let mut got = [x.d.clone(), x.e.clone()];
            let mut want = extension_closed_form(&t);
            got.sort();
            want.sort();
            prop_assert_eq!(&got, &want);
            for v in &got {
                if Extension::is_new(&t, v) {
                    let quad = [t.a().clone(), t.b().clone(), t.c().clone(), v.clone()];
                    prop_assert!(validate_tuple(&quad).unwrap().is_some());
                }
            }
        }

        #[test]
        fn negation_invariance((a, b) in arb_pair()) {
            let Ok(c) = euler_extension(&a, &b) else { return Ok(()) };
            let Ok(t) = make_triple(a, b, c) else { return Ok(()) };
            prop_assert_eq!(induced_curve(&t).unwrap(), induced_curve(&t.negate()).unwrap());
            prop_assert!(t.same_up_to_sign(&t.negate()));
        }
    }
}
