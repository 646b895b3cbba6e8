//! Prime fields `GF(p)` with `p < 2^32`.
//!
//! Elements are stored as `u32` residues, so every product fits in a `u64`
//! before reduction. The modulus travels with the values that use it
//! (polynomials, matrices); mixing elements of different fields is a logic
//! error and panics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The Mersenne prime 2^31 - 1, the default modulus.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Largest prime below 2^32; used as the second modulus in cross-check mode.
pub const CROSS_CHECK_PRIME: u64 = 4_294_967_291;

/// A residue in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0 as u64
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut k = 3u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn elem(&self, v: u64) -> Fe {
        Fe((v % self.p) as u32)
    }

    /// Reduces a signed integer, so `-1` maps to `p - 1`.
    pub fn from_i64(&self, v: i64) -> Fe {
        let r = v.rem_euclid(self.p as i64);
        Fe(r as u32)
    }

    /// Symmetric lift to `(-p/2, p/2]`.
    pub fn to_signed(&self, a: Fe) -> i64 {
        let v = a.0 as i64;
        if v as u64 > self.p / 2 {
            v - self.p as i64
        } else {
            v
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = a.0 as u64 + b.0 as u64;
        Fe(if s >= self.p { s - self.p } else { s } as u32)
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if a.0 >= b.0 {
            Fe(a.0 - b.0)
        } else {
            Fe((a.0 as u64 + self.p - b.0 as u64) as u32)
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a.0 == 0 {
            a
        } else {
            Fe((self.p - a.0 as u64) as u32)
        }
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(((a.0 as u64 * b.0 as u64) % self.p) as u32)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero in GF({})", self.p);
        self.pow(a, self.p - 2)
    }
}
