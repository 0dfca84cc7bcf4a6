//! Arithmetic in prime fields `F_p`.

use std::fmt;

/// A residue in `0..p`. The modulus lives in the owning [`PrimeField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldScalar(pub u32);

impl FieldScalar {
    pub const ZERO: FieldScalar = FieldScalar(0);
    pub const ONE: FieldScalar = FieldScalar(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("field characteristic {0} is not a prime")]
pub struct NotPrime(pub u64);

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: 2 }
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, NotPrime> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn from_i64(&self, v: i64) -> FieldScalar {
        FieldScalar(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn add(&self, a: FieldScalar, b: FieldScalar) -> FieldScalar {
        FieldScalar(((a.0 as u64 + b.0 as u64) % self.p as u64) as u32)
    }

    pub fn neg(&self, a: FieldScalar) -> FieldScalar {
        if a.0 == 0 {
            a
        } else {
            FieldScalar(self.p - a.0)
        }
    }

    pub fn sub(&self, a: FieldScalar, b: FieldScalar) -> FieldScalar {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldScalar, b: FieldScalar) -> FieldScalar {
        FieldScalar(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    /// Inverse by Fermat's little theorem. Panics on zero.
    pub fn inv(&self, a: FieldScalar) -> FieldScalar {
        assert!(!a.is_zero(), "inverse of zero in F_{}", self.p);
        let mut base = a.0 as u64;
        let mut exp = self.p as u64 - 2;
        let m = self.p as u64;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        FieldScalar(acc as u32)
    }

    pub fn div(&self, a: FieldScalar, b: FieldScalar) -> FieldScalar {
        self.mul(a, self.inv(b))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
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
        assert!(PrimeField::new(0).is_err());
        assert_eq!(PrimeField::new(7).unwrap().characteristic(), 7);
    }

    #[test]
    fn negative_values_reduce() {
        let f = PrimeField::default();
        assert_eq!(f.from_i64(-1), FieldScalar::ONE);
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.from_i64(-7), FieldScalar(3));
    }

    proptest! {
        #[test]
        fn inverse_round_trips(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 101, 65521]), a in 1u32..u32::MAX) {
            let f = PrimeField::new(p).unwrap();
            let x = f.from_i64(a as i64);
            prop_assume!(!x.is_zero());
            prop_assert_eq!(f.mul(x, f.inv(x)), FieldScalar::ONE);
            prop_assert_eq!(f.add(x, f.neg(x)), FieldScalar::ZERO);
        }
    }
}
