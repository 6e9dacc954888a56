//! Arithmetic in `Z_p` and the simple linear hash family
//! `h_{a,b}(x) = ((a*x + b) mod p) mod m`.
//!
//! All values are `u64`; products go through `u128`, so any prime that fits
//! in 64 bits is usable without Montgomery or Barrett tricks.

use crate::error::{Error, Result};

/// Witnesses for which Miller-Rabin is exact on every 64-bit input.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub(crate) fn mul_mod(x: u64, y: u64, p: u64) -> u64 {
    ((x as u128 * y as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &MR_WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &w in &MR_WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime_at_least(n: u64) -> Result<u64> {
    let mut c = n.max(2);
    loop {
        if is_prime(c) {
            return Ok(c);
        }
        c = c.checked_add(1).ok_or(Error::Overflow(n))?;
    }
}

/// Multiplicative inverse of `x` in `Z_p`.
///
/// Uses the extended Euclidean algorithm, so `p` only has to be coprime to
/// `x`; for a prime `p` every non-zero element qualifies.
pub fn mod_inverse(x: u64, p: u64) -> Result<u64> {
    if x >= p {
        return Err(Error::OutOfField { value: x, p });
    }
    if x == 0 {
        return Err(Error::ZeroInverse);
    }
    let (mut old_r, mut r) = (x as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::Domain(format!("{x} is not invertible modulo {p}")));
    }
    Ok(old_s.rem_euclid(p as i128) as u64)
}

/// A prime field size `p` together with the number of bins `m <= p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    m: u64,
}

impl Modulus {
    pub fn new(p: u64, m: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 || m > p {
            return Err(Error::BinCount { m, p });
        }
        Ok(Modulus { p, m })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Number of functions in the family, `p^2`.
    pub fn family_size(&self) -> u128 {
        self.p as u128 * self.p as u128
    }

    pub fn check_element(&self, x: u64) -> Result<u64> {
        if x < self.p {
            Ok(x)
        } else {
            Err(Error::OutOfField { value: x, p: self.p })
        }
    }
}

/// Parameters `(a, b)` selecting one member of the family. `a = 0` is allowed
/// and gives the constant function `b mod m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HashParams {
    a: u64,
    b: u64,
}

impl HashParams {
    pub fn new(a: u64, b: u64, modulus: &Modulus) -> Result<Self> {
        modulus.check_element(a)?;
        modulus.check_element(b)?;
        Ok(HashParams { a, b })
    }

    /// Caller guarantees `a, b < p`.
    #[inline]
    pub(crate) fn new_unchecked(a: u64, b: u64) -> Self {
        HashParams { a, b }
    }

    #[inline]
    pub fn a(&self) -> u64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> u64 {
        self.b
    }

    /// `(a*x + b) mod p`.
    #[inline]
    pub fn eval_full(&self, modulus: &Modulus, x: u64) -> u64 {
        ((self.a as u128 * x as u128 + self.b as u128) % modulus.p as u128) as u64
    }

    /// `((a*x + b) mod p) mod m`.
    #[inline]
    pub fn eval_binned(&self, modulus: &Modulus, x: u64) -> u64 {
        self.eval_full(modulus, x) % modulus.m
    }

    /// Number of times `a*x + b` wraps around `p`.
    #[inline]
    pub fn leaps(&self, modulus: &Modulus, x: u64) -> LeapCount {
        LeapCount(((self.a as u128 * x as u128 + self.b as u128) / modulus.p as u128) as u64)
    }
}

/// `floor((a*x + b) / p)`. Always in `0..=x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeapCount(pub u64);

impl LeapCount {
    pub fn value(self) -> u64 {
        self.0
    }
}
