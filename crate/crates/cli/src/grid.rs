//! Rational parameter grids in canonical order.

use num_bigint::BigInt;
use num_integer::Integer;
use tricurve::Rational;

/// An inclusive integer range `a..b`; `a` alone means `a..a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl std::str::FromStr for Span {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad range {s:?}, expected a..b");
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => {
                let v = s.trim().parse().map_err(|_| bad())?;
                (v, v)
            }
        };
        Ok(Span { lo, hi })
    }
}

/// Distinct reduced `n/d` with `n` in `num` and `d` in `den` (`d > 0`),
/// ordered by `max(|n|, d)`, then `n`, then `d`.
pub fn parameter_grid(num: Span, den: Span) -> Vec<Rational> {
    let mut v: Vec<(i64, i64)> = Vec::new();
    for d in den.lo.max(1)..=den.hi {
        for n in num.lo..=num.hi {
            let g = n.gcd(&d);
            let (n, d) = (n / g, d / g);
            v.push((n, d));
        }
    }
    v.sort_by_key(|&(n, d)| (n.abs().max(d), n, d));
    v.dedup();
    v.into_iter().map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d))).collect()
}
