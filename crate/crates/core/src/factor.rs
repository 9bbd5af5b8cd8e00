//! Integer factorization: trial division, Miller–Rabin, Pollard–Brent rho.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub const DEFAULT_BIT_BOUND: u64 = 96;
const TRIAL_LIMIT: u32 = 1 << 14;
const RHO_ROUNDS: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("cannot factor zero")]
    Zero,
    #[error("composite cofactor {cofactor} exceeds the {bits}-bit bound")]
    TooLarge { cofactor: String, bits: u64 },
    #[error("rho gave up on {0}")]
    GaveUp(String),
}

/// Bit bound from `KF_FACTOR_BITS`, else the default.
pub fn bit_bound_from_env() -> u64 {
    std::env::var("KF_FACTOR_BITS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BIT_BOUND)
}

/// Prime factorization as sorted `(p, e)` pairs; `factor(1)` is empty.
pub fn factor(n: &BigUint, bit_bound: u64) -> Result<Vec<(BigUint, u32)>, FactorError> {
    if n.is_zero() {
        return Err(FactorError::Zero);
    }
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut m = n.clone();
    let mut p = 2u32;
    while p < TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let mut stack = vec![m];
        let mut primes = Vec::new();
        while let Some(c) = stack.pop() {
            if c.is_one() {
                continue;
            }
            if is_probable_prime(&c) {
                primes.push(c);
                continue;
            }
            if let Some(r) = exact_root_split(&c) {
                stack.extend(r);
                continue;
            }
            if c.bits() > bit_bound {
                return Err(FactorError::TooLarge {
                    cofactor: c.to_string(),
                    bits: bit_bound,
                });
            }
            let d = rho(&c).ok_or_else(|| FactorError::GaveUp(c.to_string()))?;
            stack.push(&c / &d);
            stack.push(d);
        }
        primes.sort();
        for q in primes {
            match out.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Splits perfect powers, which rho handles poorly.
fn exact_root_split(c: &BigUint) -> Option<Vec<BigUint>> {
    for k in 2..=c.bits() as u32 {
        let r = c.nth_root(k);
        if r.bits() < 2 {
            break;
        }
        if r.pow(k) == *c {
            return Some(vec![r; k as usize]);
        }
    }
    None
}

const MR_BASES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller–Rabin with the first twenty prime bases (deterministic below 3.3e24).
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for &b in &MR_BASES {
        let bb = BigUint::from(b);
        if *n == bb {
            return true;
        }
        if (n % &bb).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'outer: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Pollard–Brent rho; returns a proper divisor of the composite `n`.
fn rho(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Some(small) = n.to_u64() {
        return rho_u64(small).map(BigUint::from);
    }
    for c in 1u32..20 {
        if let Some(d) = brent(n, &BigUint::from(c)) {
            return Some(d);
        }
    }
    None
}

fn brent(n: &BigUint, c: &BigUint) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let m = 128u64;
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut steps = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        steps += r;
        if steps > RHO_ROUNDS {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn rho_u64(n: u64) -> Option<u64> {
    for c in 1..50u64 {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let (mut r, mut q, mut g) = (1u64, 1u64, 1u64);
        let m = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}
