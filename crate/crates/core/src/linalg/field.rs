use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`FieldSpec::new`].
pub const MAX_MODULUS: u64 = 1 << 16;

/// A prime field `F_p`. Elements are canonical residues `0..p` stored as `u16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldSpec {
    p: u32,
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    /// `F_2`, which needs no validation.
    pub const fn binary() -> Self {
        Self { p: 2 }
    }

    #[inline]
    pub const fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub const fn is_binary(self) -> bool {
        self.p == 2
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u16 {
        x.rem_euclid(self.p as i64) as u16
    }

    #[inline]
    pub fn add(self, a: u16, b: u16) -> u16 {
        ((a as u32 + b as u32) % self.p) as u16
    }

    #[inline]
    pub fn sub(self, a: u16, b: u16) -> u16 {
        ((a as u32 + self.p - b as u32) % self.p) as u16
    }

    #[inline]
    pub fn neg(self, a: u16) -> u16 {
        if a == 0 {
            0
        } else {
            (self.p - a as u32) as u16
        }
    }

    #[inline]
    pub fn mul(self, a: u16, b: u16) -> u16 {
        ((a as u32 * b as u32) % self.p) as u16
    }

    pub fn pow(self, a: u16, mut e: u32) -> u16 {
        let mut base = a;
        let mut acc = 1 % self.p as u16;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    ///
    /// # Panics
    /// Panics if `a` is zero.
    pub fn inv(self, a: u16) -> u16 {
        assert!(a != 0, "zero has no inverse in F_{}", self.p);
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        self.reduce(t0)
    }
}

impl TryFrom<u32> for FieldSpec {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Self::new(p as u64)
    }
}

impl From<FieldSpec> for u32 {
    fn from(f: FieldSpec) -> u32 {
        f.p
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_gate() {
        for p in [2, 3, 5, 7, 257, 65521] {
            assert!(FieldSpec::new(p).is_ok(), "{p}");
        }
        for n in [0, 1, 4, 9, 65535] {
            assert_eq!(FieldSpec::new(n), Err(Error::NotPrime(n)));
        }
        assert_eq!(FieldSpec::new(65537), Err(Error::ModulusTooLarge(65537)));
    }

    #[test]
    fn inverses() {
        for p in [2u64, 3, 5, 13, 65521] {
            let f = FieldSpec::new(p).unwrap();
            for a in (1..p.min(2000)).map(|a| a as u16) {
                assert_eq!(f.mul(a, f.inv(a)), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn arithmetic() {
        let f = FieldSpec::new(5).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.sub(1, 3), 3);
        assert_eq!(f.neg(1), 4);
        assert_eq!(f.pow(2, 4), 1);
        assert_eq!(f.reduce(-1), 4);
    }
}
