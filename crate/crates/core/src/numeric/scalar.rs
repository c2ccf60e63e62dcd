use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Field elements the elimination routines work over.
///
/// Exact fields decide zero by equality; floating-point types compare against
/// a threshold relative to the largest entry of the matrix.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    /// Size used for pivot choice and the relative threshold.
    fn magnitude(&self) -> f64;

    /// Whether elimination treats this value as zero given the matrix scale.
    fn negligible(&self, scale: f64) -> bool;

    fn from_i64(v: i64) -> Self;
}

/// Relative pivot threshold for floating-point elimination.
pub const FLOAT_PIVOT_TOLERANCE: f64 = 1e-9;

impl Scalar for f64 {
    const EXACT: bool = false;

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= FLOAT_PIVOT_TOLERANCE * scale.max(f64::MIN_POSITIVE)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn magnitude(&self) -> f64 {
        self.abs() as f64
    }

    fn negligible(&self, scale: f64) -> bool {
        // f32 cannot resolve 1e-9; use its own epsilon scale
        (self.abs() as f64) <= 1e-5 * scale.max(f64::MIN_POSITIVE)
    }

    fn from_i64(v: i64) -> Self {
        v as f32
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn negligible(&self, _: f64) -> bool {
        self.is_zero()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Integers modulo the Mersenne prime `2^61 - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Fp61(u64);

impl Fp61 {
    pub const MODULUS: u64 = (1 << 61) - 1;

    pub fn new(v: u64) -> Self {
        Fp61(v % Self::MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Uniform element.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp61(rng.random_range(0..Self::MODULUS))
    }

    fn reduce(x: u128) -> u64 {
        let p = Self::MODULUS as u128;
        let folded = (x & p) + (x >> 61);
        let folded = (folded & p) + (folded >> 61);
        let r = folded as u64;
        if r >= Self::MODULUS {
            r - Self::MODULUS
        } else {
            r
        }
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp61(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inverse(self) -> Self {
        assert!(self.0 != 0, "inverse of zero in Fp61");
        self.pow(Self::MODULUS - 2)
    }
}

impl fmt::Debug for Fp61 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp61 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Fp61 {
    type Output = Fp61;
    fn add(self, rhs: Fp61) -> Fp61 {
        let s = self.0 + rhs.0;
        Fp61(if s >= Self::MODULUS { s - Self::MODULUS } else { s })
    }
}

impl Sub for Fp61 {
    type Output = Fp61;
    fn sub(self, rhs: Fp61) -> Fp61 {
        if self.0 >= rhs.0 {
            Fp61(self.0 - rhs.0)
        } else {
            Fp61(self.0 + Self::MODULUS - rhs.0)
        }
    }
}

impl Mul for Fp61 {
    type Output = Fp61;
    fn mul(self, rhs: Fp61) -> Fp61 {
        Fp61(Self::reduce(self.0 as u128 * rhs.0 as u128))
    }
}

impl Div for Fp61 {
    type Output = Fp61;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp61) -> Fp61 {
        self * rhs.inverse()
    }
}

impl Neg for Fp61 {
    type Output = Fp61;
    fn neg(self) -> Fp61 {
        if self.0 == 0 {
            self
        } else {
            Fp61(Self::MODULUS - self.0)
        }
    }
}

impl Zero for Fp61 {
    fn zero() -> Self {
        Fp61(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp61 {
    fn one() -> Self {
        Fp61(1)
    }
}

impl Scalar for Fp61 {
    const EXACT: bool = true;

    fn magnitude(&self) -> f64 {
        if self.0 == 0 {
            0.0
        } else {
            1.0
        }
    }

    fn negligible(&self, _: f64) -> bool {
        self.0 == 0
    }

    fn from_i64(v: i64) -> Self {
        let m = Self::MODULUS as i64;
        Fp61(v.rem_euclid(m) as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_arithmetic() {
        let a = Fp61::from_i64(-1);
        assert_eq!(a.value(), Fp61::MODULUS - 1);
        assert_eq!(a * a, Fp61::one());
        assert_eq!(Fp61::new(7) / Fp61::new(7), Fp61::one());
        assert_eq!(-Fp61::zero(), Fp61::zero());
    }

    proptest! {
        #[test]
        fn mul_matches_u128(a in 0..Fp61::MODULUS, b in 0..Fp61::MODULUS) {
            let expect = (a as u128 * b as u128 % Fp61::MODULUS as u128) as u64;
            prop_assert_eq!((Fp61(a) * Fp61(b)).value(), expect);
        }

        #[test]
        fn inverse_is_inverse(a in 1..Fp61::MODULUS) {
            prop_assert_eq!(Fp61(a) * Fp61(a).inverse(), Fp61::one());
        }

        #[test]
        fn add_sub_round_trip(a in 0..Fp61::MODULUS, b in 0..Fp61::MODULUS) {
            prop_assert_eq!(Fp61(a) + Fp61(b) - Fp61(b), Fp61(a));
        }
    }
}
