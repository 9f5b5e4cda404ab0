//! Exact real-root isolation for small-degree integer polynomials.
//!
//! Coefficients are stored lowest degree first.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect()
}

fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let q = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &q * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn div_exact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().unwrap();
    let mut q = vec![Rational::zero(); a.len() + 1 - b.len()];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &c * bc;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    q
}

fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn primitive(p: &[Rational]) -> Vec<BigInt> {
    let lcm = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

/// Sturm chain scaled to primitive integer polynomials (positive multiples
/// of the rational chain, so sign patterns are unchanged).
struct Sturm {
    seq: Vec<Vec<BigInt>>,
}

impl Sturm {
    fn new(p: &[Rational]) -> Self {
        let mut chain = vec![p.to_vec(), derivative(p)];
        loop {
            let n = chain.len();
            let r = rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        Sturm { seq: chain.iter().map(|q| primitive(q)).collect() }
    }

    fn variations(&self, x: &BigInt) -> usize {
        let signs: Vec<bool> = self
            .seq
            .iter()
            .map(|q| eval_int(q, x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// All integer roots of `p`, ascending.
pub fn integer_roots(p: &[BigInt]) -> Vec<BigInt> {
    let mut q: Vec<Rational> = trim(p.iter().cloned().map(Rational::from_integer).collect());
    if q.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    if q[0].is_zero() {
        roots.push(BigInt::zero());
        let k = q.iter().take_while(|c| c.is_zero()).count();
        q.drain(..k);
    }
    if q.len() > 1 {
        let sf = div_exact(&q, &gcd(&q, &derivative(&q)));
        let sf_int = primitive(&sf);
        let sturm = Sturm::new(&sf);
        let lead = sf.last().unwrap().abs();
        let bound = sf[..sf.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(Rational::zero(), |m, c| m.max(c));
        let b = bound.ceil().to_integer() + BigInt::one();
        // roots in the half-open interval (lo, hi] are V(lo) - V(hi)
        let mut stack = vec![(-&b - BigInt::one(), sturm.variations(&(-&b - BigInt::one())), b.clone(), sturm.variations(&b))];
        while let Some((lo, vlo, hi, vhi)) = stack.pop() {
            if vlo <= vhi {
                continue;
            }
            if &hi - &lo == BigInt::one() {
                if eval_int(&sf_int, &hi).is_zero() {
                    roots.push(hi);
                }
                continue;
            }
            let mid = (&lo + &hi).div_floor(&BigInt::from(2));
            let vmid = sturm.variations(&mid);
            stack.push((lo, vlo, mid.clone(), vmid));
            stack.push((mid, vmid, hi, vhi));
        }
    }
    let set: BTreeSet<BigInt> = roots.into_iter().collect();
    set.into_iter().collect()
}

/// All rational roots of a polynomial with rational coefficients.
pub fn rational_roots(p: &[Rational]) -> Vec<Rational> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let lcm = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    // X = c_n x turns the polynomial monic with integer coefficients
    let n = ints.len() - 1;
    let cn = ints[n].clone();
    let monic: Vec<BigInt> = ints
        .iter()
        .enumerate()
        .map(|(i, c)| if i == n { BigInt::one() } else { c * cn.pow((n - 1 - i) as u32) })
        .collect();
    let mut out: Vec<Rational> = integer_roots(&monic)
        .into_iter()
        .map(|r| Rational::new(r, cn.clone()))
        .collect();
    out.sort();
    out.dedup();
    out
}
