//! Point counts over prime fields, Frobenius traces and the Mestre–Nagao
//! sum `S(N, E)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::{primes_up_to, FactorBudget};
use crate::minimal::{integral_model, minimal_model};
use crate::rational::Rational;
use crate::triples::{induced_curve, Triple};
use crate::weierstrass::Curve;

fn mod_u64(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Reductions of a curve through its minimal model. Minimality is exact at
/// every prime below the trial-division bound, so good reduction is decided
/// exactly there.
#[derive(Clone, Debug)]
pub struct PointCounter {
    model: Curve<Rational>,
    coeffs: [BigInt; 5],
    disc: BigInt,
}

impl PointCounter {
    pub fn new(e: &Curve<Rational>) -> Self {
        let model = minimal_model(e, FactorBudget::default())
            .map(|m| m.curve)
            .unwrap_or_else(|_| integral_model(e).0);
        let coeffs = model.coeffs().map(|a| a.to_integer());
        let disc = model.discriminant().to_integer();
        PointCounter { model, coeffs, disc }
    }

    pub fn model(&self) -> &Curve<Rational> {
        &self.model
    }

    pub fn is_good(&self, p: u64) -> bool {
        !(&self.disc % BigInt::from(p)).is_zero()
    }

    pub fn reduce(&self, p: u64) -> Result<[u64; 5]> {
        if !self.is_good(p) {
            return Err(Error::BadReduction(p));
        }
        Ok(std::array::from_fn(|i| mod_u64(&self.coeffs[i], p)))
    }

    pub fn count(&self, p: u64) -> Result<u64> {
        Ok(count_reduced(self.reduce(p)?, p))
    }

    /// `(p, #E(F_p))` for every good prime up to `n`, plus the bad-prime
    /// count.
    pub fn counts_up_to(&self, n: u64) -> (Vec<(u64, u64)>, usize) {
        let primes = primes_up_to(n.min(u32::MAX as u64) as u32);
        let counts: Vec<Option<(u64, u64)>> = primes
            .par_iter()
            .map(|&p| self.count(p as u64).ok().map(|c| (p as u64, c)))
            .collect();
        let bad = counts.iter().filter(|c| c.is_none()).count();
        (counts.into_iter().flatten().collect(), bad)
    }
}

/// `#E(F_p)` for reduced coefficients, point at infinity included.
pub fn count_reduced(a: [u64; 5], p: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = a;
    if p == 2 {
        let mut n = 1;
        for x in 0..2u64 {
            for y in 0..2u64 {
                let lhs = (y * y + a1 * x * y + a3 * y) % 2;
                let rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                n += (lhs == rhs) as u64;
            }
        }
        return n;
    }
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    let b2 = (a1 * a1 + 4 * a2) % p;
    let b4 = (2 * a4 + a1 * a3) % p;
    let b6 = (a3 * a3 + 4 * a6) % p;
    let mut is_sq = vec![false; p as usize];
    for y in 0..p {
        is_sq[(y * y % p) as usize] = true;
    }
    let mut n: u64 = 1;
    for x in 0..p {
        let f = ((((4 * x + b2) % p) * x + 2 * b4) % p * x + b6) % p;
        n += if f == 0 { 1 } else if is_sq[f as usize] { 2 } else { 0 };
    }
    n
}

pub fn count_points_fp(e: &Curve<Rational>, p: u64) -> Result<u64> {
    PointCounter::new(e).count(p)
}

pub fn trace_ap(e: &Curve<Rational>, p: u64) -> Result<i64> {
    Ok(p as i64 + 1 - count_points_fp(e, p)? as i64)
}

/// Both printed forms of the summand: `(1 - (p-1)/#E) log p` and
/// `(2 - a_p)/(p + 1 - a_p) log p`.
pub fn summand_forms(p: u64, count: u64) -> (f64, f64) {
    let lp = (p as f64).ln();
    let ap = p as f64 + 1.0 - count as f64;
    let first = (1.0 - (p as f64 - 1.0) / count as f64) * lp;
    let second = (2.0 - ap) / (p as f64 + 1.0 - ap) * lp;
    (first, second)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SieveScore {
    pub n: u64,
    pub score: f64,
    pub primes_used: usize,
    pub skipped_bad: usize,
}

pub fn mestre_nagao_sum(e: &Curve<Rational>, n: u64) -> SieveScore {
    let (counts, skipped_bad) = PointCounter::new(e).counts_up_to(n);
    // summed sequentially in prime order: bit-reproducible
    let score = counts.iter().map(|&(p, c)| summand_forms(p, c).0).sum();
    SieveScore { n, score, primes_used: counts.len(), skipped_bad }
}

/// Integer ranking key: the score rounded to 12 decimals.
fn score_key(s: f64) -> i128 {
    (s * 1e12).round() as i128
}

/// Scores every candidate and returns the indices of the top
/// `ceil(keep * scored)` in rank order: score descending, ties broken by the
/// text form of the triple, then by index. Candidates whose curve is
/// singular are dropped.
pub fn rank_candidates(candidates: &[Triple], n: u64, keep: f64) -> Vec<(usize, SieveScore)> {
    let mut scored: Vec<(usize, String, SieveScore)> = candidates
        .par_iter()
        .enumerate()
        .filter_map(|(i, t)| induced_curve(t).ok().map(|e| (i, t.to_string(), mestre_nagao_sum(&e, n))))
        .collect();
    scored.sort_by(|a, b| {
        score_key(b.2.score)
            .cmp(&score_key(a.2.score))
            .then_with(|| a.1.cmp(&b.1))
            .then_with(|| a.0.cmp(&b.0))
    });
    let count = ((keep * scored.len() as f64).ceil() as usize).min(scored.len());
    scored.truncate(count);
    scored.into_iter().map(|(i, _, s)| (i, s)).collect()
}

/// `rank_candidates` returning the triples themselves.
pub fn sieve_candidates(candidates: &[Triple], n: u64, keep: f64) -> Vec<(Triple, SieveScore)> {
    rank_candidates(candidates, n, keep)
        .into_iter()
        .map(|(i, s)| (candidates[i].clone(), s))
        .collect()
}
