//! Prime fields `F_p` with elements stored canonically in `[0, p)`.

use crate::error::{Error, Result};

/// Coefficient type used everywhere in the kernel.
pub type Coef = u32;

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// The characteristic used when nothing else is requested.
    pub const DEFAULT_CHARACTERISTIC: u32 = 31991;

    pub fn new(p: u32) -> Result<Self> {
        if p >= (1 << 31) {
            return Err(Error::Usage(format!("characteristic {p} does not fit in 31 bits")));
        }
        if !is_prime(p) {
            return Err(Error::Usage(format!("characteristic {p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: Coef, b: Coef) -> Coef {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: Coef, b: Coef) -> Coef {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: Coef) -> Coef {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Coef, b: Coef) -> Coef {
        ((a as u64 * b as u64) % self.p as u64) as Coef
    }

    pub fn pow(&self, a: Coef, mut e: u64) -> Coef {
        let mut base = a as u64 % self.p as u64;
        let mut acc = 1u64;
        let p = self.p as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as Coef
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Coef) -> Coef {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        // extended Euclid on i64
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        t0.rem_euclid(self.p as i64) as Coef
    }

    #[inline]
    pub fn div(&self, a: Coef, b: Coef) -> Coef {
        self.mul(a, self.inv(b))
    }

    pub fn from_i64(&self, v: i64) -> Coef {
        v.rem_euclid(self.p as i64) as Coef
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for printing.
    pub fn to_signed(&self, a: Coef) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: Self::DEFAULT_CHARACTERISTIC }
    }
}

pub fn is_prime(n: u32) -> bool {
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
    while d * d <= n as u64 {
        if n as u64 % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(31991).is_ok());
        assert!(PrimeField::new(2).is_ok());
    }

    #[test]
    fn characteristic_five() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.add(3, 2), 0);
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.to_signed(4), -1);
    }

    proptest! {
        #[test]
        fn inverse_and_fermat(a in 1u32..31991) {
            let f = PrimeField::default();
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
            prop_assert_eq!(f.mul(f.pow(a, 31991 - 2), a), 1);
        }

        #[test]
        fn distributive(a in 0u32..31991, b in 0u32..31991, c in 0u32..31991) {
            let f = PrimeField::default();
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
        }
    }
}
