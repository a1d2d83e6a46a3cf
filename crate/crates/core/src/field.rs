//! The prime field GF(p) for 2 <= p <= 251.
//!
//! Residues are stored as `u8`; products are formed in `u32` before reducing.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A validated prime modulus that fits in one byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Prime(u8);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=251).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u8))
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u8 {
        x.rem_euclid(self.0 as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.0 as u16) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.0 as u16 - b as u16) % self.0 as u16) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.0 as u32) as u8
    }

    /// Multiplicative inverse via Fermat. Panics on zero.
    pub fn inv(self, a: u8) -> u8 {
        assert!(a % self.0 != 0, "inverse of zero in GF({})", self.0);
        self.pow(a, self.0 as u32 - 2)
    }

    pub fn pow(self, a: u8, mut e: u32) -> u8 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `acc + f * x` in place over a slice.
    #[inline]
    pub(crate) fn axpy(self, acc: &mut [u8], f: u8, x: &[u8]) {
        if f == 0 {
            return;
        }
        let p = self.0 as u32;
        let f = f as u32;
        for (a, &b) in acc.iter_mut().zip(x) {
            if b != 0 {
                *a = ((*a as u32 + f * b as u32) % p) as u8;
            }
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field element carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u8,
    p: Prime,
}

impl Scalar {
    pub fn new(value: i64, p: Prime) -> Self {
        Scalar {
            value: p.reduce(value),
            p,
        }
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.p
    }

    fn check(self, other: Scalar) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        Ok(())
    }

    pub fn try_add(self, other: Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(Scalar {
            value: self.p.add(self.value, other.value),
            p: self.p,
        })
    }

    pub fn try_mul(self, other: Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(Scalar {
            value: self.p.mul(self.value, other.value),
            p: self.p,
        })
    }

    pub fn inverse(self) -> Option<Scalar> {
        (self.value != 0).then(|| Scalar {
            value: self.p.inv(self.value),
            p: self.p,
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
