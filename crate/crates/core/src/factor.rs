//! Best-effort integer factorization: trial division followed by Brent's
//! variant of Pollard rho, with Miller-Rabin primality testing.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division bound.
pub const TRIAL_BOUND: u32 = 1_000_000;

/// Effort bound for the rho stage, counted in sequence steps (one modular
/// squaring each) summed over all splitting attempts. Deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget(pub u64);

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget(1 << 21)
    }
}

/// `|n| = prod(p^e) * cofactor`. `cofactor` is 1 when the factorization is
/// complete, otherwise a composite that could not be split within budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigUint, u32)>,
    pub cofactor: BigUint,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// Multiplies everything back together.
    pub fn reassemble(&self) -> BigUint {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn push(&mut self, p: BigUint, e: u32) {
        if let Some(entry) = self.factors.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += e;
        } else {
            self.factors.push((p, e));
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if !self.cofactor.is_one() {
            parts.push(format!("[{}]", self.cofactor));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join("*"))
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_BOUND))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u32) -> Vec<u32> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    r
}

fn miller_rabin_u64(n: u64, a: u64) -> bool {
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    let mut x = pow_mod_u64(a % n, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn miller_rabin_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n1 {
            return true;
        }
    }
    false
}

/// Bases 2..41 are deterministic for n < 3.3 * 10^24.
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Extra rounds above the deterministic range.
const MR_EXTRA_ROUNDS: u32 = 24;

/// Miller-Rabin primality test; deterministic below 3.3e24, probabilistic
/// (with fixed, input-derived bases) above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        if v < 2 {
            return false;
        }
        for &p in &MR_BASES {
            let p = p as u64;
            if v == p {
                return true;
            }
            if v % p == 0 {
                return false;
            }
        }
        return MR_BASES.iter().all(|&a| miller_rabin_u64(v, a as u64));
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let bases_ok = MR_BASES
        .iter()
        .all(|&a| miller_rabin_big(n, &BigUint::from(a)));
    if !bases_ok {
        return false;
    }
    if n.bits() <= 81 {
        return true;
    }
    // Pseudo-random bases from a fixed LCG seeded by the low bits of n.
    let mut state = n.iter_u64_digits().next().unwrap_or(1) | 1;
    let two = BigUint::from(2u32);
    let span = n - 3u32;
    for _ in 0..MR_EXTRA_ROUNDS {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let a = (BigUint::from(state) * BigUint::from(state.rotate_left(29))) % &span + &two;
        if !miller_rabin_big(n, &a) {
            return false;
        }
    }
    true
}

/// Factors `n` as far as the budget allows.
pub fn factor_best_effort(n: &BigInt, budget: FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (_, mag) = n.clone().into_parts();
    Ok(factor_biguint(mag, budget))
}

pub(crate) fn factor_biguint(mut m: BigUint, budget: FactorBudget) -> Factorization {
    let mut fz = Factorization {
        factors: Vec::new(),
        cofactor: BigUint::one(),
    };
    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        let pb = p as u64;
        if let Some(v) = m.to_u64() {
            if pb.saturating_mul(pb) > v {
                break;
            }
        }
        if (&m % p).is_zero() {
            let mut e = 0;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            fz.push(BigUint::from(p), e);
        }
    }
    if m.is_one() {
        return fz;
    }
    let mut remaining = budget.0;
    let mut stack = vec![(m, 1u32)];
    while let Some((c, mult)) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            fz.push(c, mult);
            continue;
        }
        if let Some((r, k)) = perfect_power(&c) {
            stack.push((r, mult * k));
            continue;
        }
        match brent_split(&c, &mut remaining) {
            Some(d) => {
                let other = &c / &d;
                // keep equal parts together so exponents accumulate
                if d == other {
                    stack.push((d, mult * 2));
                } else {
                    stack.push((d, mult));
                    stack.push((other, mult));
                }
            }
            None => {
                fz.cofactor *= c.pow(mult);
            }
        }
    }
    fz.factors.sort();
    fz
}

/// Returns (r, k) with c = r^k, k >= 2, when c is a perfect power.
fn perfect_power(c: &BigUint) -> Option<(BigUint, u32)> {
    let bits = c.bits() as u32;
    for &k in small_primes().iter().take_while(|&&k| k <= bits) {
        let r = c.nth_root(k);
        if r <= BigUint::one() {
            break;
        }
        if &r.pow(k) == c {
            return perfect_power(&r)
                .map(|(r2, k2)| (r2, k * k2))
                .or(Some((r, k)));
        }
    }
    None
}

fn brent_split(n: &BigUint, remaining: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Some(v) = n.to_u64() {
        return brent_split_u64(v, remaining).map(BigUint::from);
    }
    let one = BigUint::one();
    let mut c = BigUint::one();
    while *remaining > 0 {
        let mut y = BigUint::from(2u32);
        let m = 128u64;
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x;
        let mut ys;
        let f = |v: &BigUint| (v * v + &c) % n;
        loop {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            ys = y.clone();
            while k < r && g.is_one() {
                ys = y.clone();
                let lim = m.min(r - k);
                for _ in 0..lim {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                *remaining = remaining.saturating_sub(lim);
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            if !g.is_one() || *remaining == 0 {
                break;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
        c += 1u32;
    }
    None
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn brent_split_u64(n: u64, remaining: &mut u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut c = 1u64;
    while *remaining > 0 {
        let f = |v: u64| (mul_mod_u64(v, v, n) + c) % n;
        let mut y = 2u64;
        let m = 128u64;
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let mut x;
        let mut ys;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            ys = y;
            while k < r && g == 1 {
                ys = y;
                let lim = m.min(r - k);
                for _ in 0..lim {
                    y = f(y);
                    q = mul_mod_u64(q, x.abs_diff(y), n);
                }
                *remaining = remaining.saturating_sub(lim);
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
            if g != 1 || *remaining == 0 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != 1 && g != n {
            return Some(g);
        }
        c += 1;
    }
    None
}
