//! Small integer helpers shared by the series and symbol code.

use crate::error::{Error, Result};

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn ensure_odd_prime(ell: u64) -> Result<()> {
    if ell % 2 == 1 && is_prime(ell) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(ell))
    }
}

/// Primes `p` in `[lo, hi]` with `p ≡ residue (mod modulus)`.
pub fn primes_in_class(lo: u64, hi: u64, residue: u64, modulus: u64) -> Vec<u64> {
    (lo.max(2)..=hi)
        .filter(|&p| p % modulus == residue % modulus && is_prime(p))
        .collect()
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc: u128 = 1;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, or `Err(gcd)` when `gcd(a, m) > 1`.
pub fn mod_inverse(a: u64, m: u64) -> std::result::Result<u64, u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(old_r.unsigned_abs() as u64);
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
