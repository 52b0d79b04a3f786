//! Exact quasi-cardinals.

use std::fmt;

use crate::error::{Error, Result};

/// A finite cardinal. Arithmetic is checked: anything that does not fit is
/// reported as [`Error::Overflow`], never wrapped.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cardinal(u128);

impl Cardinal {
    pub const ZERO: Cardinal = Cardinal(0);
    pub const ONE: Cardinal = Cardinal(1);

    /// Largest exponent accepted by [`Cardinal::pow2`].
    pub const MAX_POW2_EXPONENT: u128 = 64;

    pub const fn new(value: u128) -> Self {
        Cardinal(value)
    }

    pub const fn get(self) -> u128 {
        self.0
    }

    /// Narrows to a `u64`, for use as a class count.
    pub fn to_count(self) -> Result<u64> {
        u64::try_from(self.0).map_err(|_| Error::Overflow(format!("{} does not fit a count", self.0)))
    }

    pub fn checked_add(self, rhs: Cardinal) -> Result<Cardinal> {
        self.0
            .checked_add(rhs.0)
            .map(Cardinal)
            .ok_or_else(|| Error::Overflow(format!("{} + {}", self.0, rhs.0)))
    }

    pub fn checked_mul(self, rhs: Cardinal) -> Result<Cardinal> {
        self.0
            .checked_mul(rhs.0)
            .map(Cardinal)
            .ok_or_else(|| Error::Overflow(format!("{} * {}", self.0, rhs.0)))
    }

    pub fn checked_pow(self, exp: Cardinal) -> Result<Cardinal> {
        let e = u32::try_from(exp.0).map_err(|_| Error::Overflow(format!("{}^{}", self.0, exp.0)))?;
        self.0
            .checked_pow(e)
            .map(Cardinal)
            .ok_or_else(|| Error::Overflow(format!("{}^{}", self.0, exp.0)))
    }

    /// `2^self`, defined for exponents up to 64.
    pub fn pow2(self) -> Result<Cardinal> {
        if self.0 > Self::MAX_POW2_EXPONENT {
            return Err(Error::Overflow(format!(
                "2^{} exceeds the exact bound 2^{}",
                self.0,
                Self::MAX_POW2_EXPONENT
            )));
        }
        Ok(Cardinal(1u128 << self.0))
    }
}

impl From<u64> for Cardinal {
    fn from(value: u64) -> Self {
        Cardinal(u128::from(value))
    }
}

impl From<usize> for Cardinal {
    fn from(value: usize) -> Self {
        Cardinal(value as u128)
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_is_exact_up_to_64() {
        assert_eq!(Cardinal::new(0).pow2().unwrap(), Cardinal::ONE);
        assert_eq!(Cardinal::new(12).pow2().unwrap(), Cardinal::new(4096));
        assert_eq!(Cardinal::new(64).pow2().unwrap().get(), 18_446_744_073_709_551_616);
        assert!(matches!(Cardinal::new(65).pow2(), Err(Error::Overflow(_))));
    }

    #[test]
    fn checked_ops_report_overflow() {
        let max = Cardinal::new(u128::MAX);
        assert!(max.checked_add(Cardinal::ONE).is_err());
        assert!(max.checked_mul(Cardinal::new(2)).is_err());
        assert!(Cardinal::new(2).checked_pow(Cardinal::new(128)).is_err());
        assert_eq!(
            Cardinal::new(3).checked_pow(Cardinal::new(3)).unwrap(),
            Cardinal::new(27)
        );
    }
}
