use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An odd prime modulus `d`; elements of Z_d are plain `u32` residues in `0..d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(d: u64) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) || d > u64::from(u16::MAX) || !is_prime(d) {
            return Err(Error::InvalidModulus(d));
        }
        Ok(Modulus(d as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn usize(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(i64::from(self.0)) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.0)) as u32
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> Result<u32> {
        inv(a, self)
    }

    /// 2^{-1}, which exists because d is odd.
    #[inline]
    pub fn half(self) -> u32 {
        self.0.div_ceil(2)
    }

    /// Iterator over all residues `0..d`.
    pub fn elements(self) -> std::ops::Range<u32> {
        0..self.0
    }
}

impl TryFrom<u32> for Modulus {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        Modulus::new(u64::from(v))
    }
}

impl From<Modulus> for u32 {
    fn from(m: Modulus) -> u32 {
        m.0
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Multiplicative inverse of `a` modulo `m` (extended Euclid).
pub fn inv(a: u32, m: Modulus) -> Result<u32> {
    let a = a % m.get();
    if a == 0 {
        return Err(Error::ZeroInverse(a, m.get()));
    }
    let (mut r0, mut r1) = (i64::from(m.get()), i64::from(a));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    Ok(m.reduce(t0))
}
