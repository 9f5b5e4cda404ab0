//! Exact rationals, square detection, square classes and naive heights.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::{factor_best_effort, FactorBudget};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or an integer literal. Surrounding whitespace is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Integer square root if `n` is a perfect square.
pub fn sqrt_exact_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    // cheap residue filter before the Newton root
    let low = n.iter_u64_digits().next().unwrap_or(0);
    if !QR64[(low & 63) as usize] {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

const QR64: [bool; 64] = {
    let mut t = [false; 64];
    let mut i = 0;
    while i < 64 {
        t[(i * i) % 64] = true;
        i += 1;
    }
    t
};

/// Nonnegative square root of `q` when `q` is the square of a rational.
pub fn is_perfect_square(q: &Rational) -> Option<Rational> {
    let n = sqrt_exact_int(q.numer())?;
    let d = sqrt_exact_int(q.denom())?;
    Some(Rational::new_raw(n, d))
}

/// The squarefree integer `d` with `q = d * (rational square)`.
pub fn square_class(q: &Rational) -> Result<BigInt> {
    square_class_with_budget(q, FactorBudget::default())
}

pub fn square_class_with_budget(q: &Rational, budget: FactorBudget) -> Result<BigInt> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    let prod = q.numer() * q.denom();
    let fz = factor_best_effort(&prod, budget)?;
    let mut class = BigUint::one();
    for (p, e) in &fz.factors {
        if e % 2 == 1 {
            class *= p;
        }
    }
    if !fz.is_complete() {
        if sqrt_exact_int(&BigInt::from(fz.cofactor.clone())).is_none() {
            return Err(Error::FactorizationIncomplete(fz));
        }
    }
    let sign = if q.is_negative() { Sign::Minus } else { Sign::Plus };
    Ok(BigInt::from_biguint(sign, class))
}

/// Natural log of |n| for arbitrarily large integers; `ln 0` is -inf.
pub fn ln_abs(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log max(|numerator|, denominator)`; zero at zero.
pub fn naive_height(q: &Rational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    ln_biguint(if n > d { n } else { d })
}

/// Best f64 approximation without overflow in intermediate steps.
pub fn to_f64(q: &Rational) -> f64 {
    let (n, d) = (q.numer(), q.denom());
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    if nb < 1000 && db < 1000 {
        return n.to_f64().unwrap() / d.to_f64().unwrap();
    }
    // scale both to about 64 significant bits
    let ns = (nb - 64).max(0);
    let ds = (db - 64).max(0);
    let nt = (n >> ns as usize).to_f64().unwrap();
    let dt = (d >> ds as usize).to_f64().unwrap();
    (nt / dt) * 2f64.powi((ns - ds) as i32)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() || n.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation_q(q: &Rational, p: &BigInt) -> i64 {
    valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn squares() {
        assert_eq!(is_perfect_square(&frac(4, 9)), Some(frac(2, 3)));
        assert_eq!(is_perfect_square(&rat(1 * 3 + 1)), Some(rat(2)));
        assert_eq!(is_perfect_square(&rat(5)), None);
        assert_eq!(is_perfect_square(&rat(-4)), None);
        assert_eq!(is_perfect_square(&rat(0)), Some(rat(0)));
    }

    #[test]
    fn classes() {
        assert_eq!(square_class(&rat(18)).unwrap(), BigInt::from(2));
        assert_eq!(square_class(&frac(-3, 4)).unwrap(), BigInt::from(-3));
        assert_eq!(square_class(&rat(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn class_of_50_over_8() {
        // 50/8 = 25/4; oracle: exhaustive search for a rational square root
        let q = frac(50, 8);
        let mut found = false;
        for n in 1..=20i64 {
            for d in 1..=20i64 {
                if frac(n * n, d * d) == q {
                    found = true;
                }
            }
        }
        assert!(found);
        assert_eq!(square_class(&q).unwrap(), BigInt::from(1));
    }

    #[test]
    fn heights() {
        assert_eq!(naive_height(&rat(0)), 0.0);
        assert!((naive_height(&rat(120)) - 120f64.ln()).abs() < 1e-15);
        assert!((naive_height(&frac(2880, 24)) - 120f64.ln()).abs() < 1e-15);
        assert!((naive_height(&frac(1, 7)) - 7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn huge_log_and_float() {
        let n = BigInt::from(10).pow(400u32);
        assert!((ln_abs(&n) - 400.0 * 10f64.ln()).abs() < 1e-9);
        let q = Rational::new(BigInt::from(3) * BigInt::from(10).pow(400u32), BigInt::from(10).pow(399u32));
        assert!((to_f64(&q) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("-6/8").unwrap(), frac(-3, 4));
        assert_eq!(parse_rational(" 12 ").unwrap(), rat(12));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.5").is_err());
        assert_eq!(format_rational(&frac(6, -4)), "-3/2");
        assert_eq!(format_rational(&rat(7)), "7");
    }

    #[test]
    fn valuations() {
        let two = BigInt::from(2);
        assert_eq!(valuation(&BigInt::from(48), &two), 4);
        assert_eq!(valuation_q(&frac(3, 8), &two), -3);
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| frac(n, d))
    }

    fn arb_nonzero() -> impl Strategy<Value = Rational> {
        arb_rational().prop_filter("nonzero", |q| !q.is_zero())
    }

    proptest! {
        #[test]
        fn class_invariant_under_squares(p in arb_nonzero(), t in arb_nonzero()) {
            prop_assert_eq!(square_class(&(&p * &t * &t)).unwrap(), square_class(&p).unwrap());
        }

        #[test]
        fn square_iff_class_one(p in arb_nonzero()) {
            let q = p.abs();
            prop_assert_eq!(is_perfect_square(&q).is_some(), square_class(&q).unwrap().is_one());
            let sq = &q * &q;
            prop_assert_eq!(is_perfect_square(&sq), Some(q));
        }

        #[test]
        fn arithmetic_round_trips(p in arb_rational(), q in arb_nonzero()) {
            prop_assert_eq!(&(&p + &q) - &q, p.clone());
            prop_assert_eq!(&(&p * &q) / &q, p.clone());
        }

        #[test]
        fn text_round_trip(p in arb_rational()) {
            prop_assert_eq!(parse_rational(&format_rational(&p)).unwrap(), p);
        }
    }
}
