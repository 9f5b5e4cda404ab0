//! Square classes of finitely many rationals as F2 vectors, without
//! factoring.
//!
//! The integers involved are refined into a pairwise coprime base. A base
//! element that is not a perfect square has a nontrivial squarefree part,
//! and coprime elements have coprime squarefree parts, so the exponent
//! parities over the non-square base elements (plus a sign bit) determine
//! the class in Q*/Q*^2 exactly.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{sqrt_exact_int, Rational};

#[derive(Debug, Clone)]
pub struct SquareClassBasis {
    base: Vec<BigUint>,
}

fn refine(base: &mut Vec<BigUint>, n: BigUint) {
    let mut work = vec![n];
    while let Some(x) = work.pop() {
        if x.is_one() || x.is_zero() {
            continue;
        }
        match base
            .iter()
            .enumerate()
            .find_map(|(i, b)| {
                let g = x.gcd(b);
                (!g.is_one()).then_some((i, g))
            }) {
            None => base.push(x),
            Some((i, g)) => {
                let b = base.swap_remove(i);
                work.push(&b / &g);
                work.push(&x / &g);
                work.push(g);
            }
        }
    }
}

impl SquareClassBasis {
    pub fn new<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Self {
        let mut base = Vec::new();
        for q in values {
            if q.is_zero() {
                continue;
            }
            refine(&mut base, q.numer().magnitude().clone());
            refine(&mut base, q.denom().magnitude().clone());
        }
        base.retain(|b| sqrt_exact_int(&b.clone().into()).is_none());
        base.sort();
        SquareClassBasis { base }
    }

    /// Number of coordinates (sign bit included).
    pub fn dim(&self) -> usize {
        self.base.len() + 1
    }

    /// F2 coordinates of the class of `q`, or `None` when `q` does not
    /// factor over the base (or is zero).
    pub fn vector(&self, q: &Rational) -> Option<Vec<bool>> {
        if q.is_zero() {
            return None;
        }
        let mut num = q.numer().magnitude().clone();
        let mut den = q.denom().magnitude().clone();
        let mut out = Vec::with_capacity(self.dim());
        out.push(q.is_negative());
        for b in &self.base {
            let mut parity = false;
            for part in [&mut num, &mut den] {
                loop {
                    let (d, r) = part.div_rem(b);
                    if !r.is_zero() {
                        break;
                    }
                    *part = d;
                    parity = !parity;
                }
            }
            out.push(parity);
        }
        // leftovers must be squares: products of dropped (square) base elements
        let rest = num * den;
        sqrt_exact_int(&rest.into())?;
        Some(out)
    }
}

/// Rank over F2 of a set of bit vectors of equal length.
pub fn f2_rank(rows: &[Vec<bool>]) -> usize {
    let mut m: Vec<Vec<bool>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][c]) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r != rank && m[r][c] {
                for k in c..cols {
                    let v = m[rank][k];
                    m[r][k] ^= v;
                }
            }
        }
        rank += 1;
    }
    rank
}
