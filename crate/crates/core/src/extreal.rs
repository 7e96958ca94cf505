//! Nonnegative extended reals with the degenerate-case conventions
//! `0·∞ = 0`, `0/0 = 0`, `x/∞ = 0`, `x/0 = ∞` (x > 0) and `∞/∞ = ∞`.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{MorreyError, Result};

/// A value in `[0, ∞]`. Negative and NaN states cannot be constructed.
#[derive(Clone, Copy, PartialEq)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal(0.0);
    pub const ONE: ExtReal = ExtReal(1.0);
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);

    /// Checked constructor: rejects NaN and negative numbers.
    pub fn new(x: f64) -> Result<Self> {
        if x.is_nan() || x < 0.0 {
            Err(MorreyError::InvalidProfile(format!(
                "extended real must be nonnegative, got {x}"
            )))
        } else {
            Ok(ExtReal(x + 0.0))
        }
    }

    /// For values that are nonnegative up to rounding. Tiny negative noise
    /// collapses to zero.
    ///
    /// # Panics
    /// On NaN, which always indicates an upstream bug.
    pub fn clamp(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN reached ExtReal::clamp");
        ExtReal(x.max(0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    /// `self^e` with `0^e = ∞`, `∞^e = 0` for `e < 0`; `0^0` and `∞^0` are errors.
    pub fn pow(self, e: f64) -> Result<Self> {
        if e == 0.0 {
            if self.is_zero() || self.is_infinite() {
                return Err(MorreyError::IndeterminatePower { base: self });
            }
            return Ok(ExtReal::ONE);
        }
        Ok(ExtReal(pow_nonneg(self.0, e)))
    }

    pub fn recip(self) -> Self {
        ExtReal::ONE / self
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

/// `x^e` on `[0, ∞]` for a nonzero exponent, following the same conventions
/// as [`ExtReal::pow`]. Plain `powf` already gets these right except for
/// `0^e` with tiny `e` underflow edge cases, which are handled explicitly.
pub(crate) fn pow_nonneg(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        if e > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else if x.is_infinite() {
        if e > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else if e == 1.0 {
        x
    } else {
        x.powf(e)
    }
}

/// Product with `0·∞ = 0`.
pub(crate) fn mul_nonneg(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// Quotient with the conventions of [`ExtReal`] division.
pub(crate) fn div_nonneg(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else if b == 0.0 {
        f64::INFINITY
    } else if b.is_infinite() {
        if a.is_infinite() {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        a / b
    }
}

impl Mul for ExtReal {
    type Output = ExtReal;
    fn mul(self, rhs: ExtReal) -> ExtReal {
        ExtReal(mul_nonneg(self.0, rhs.0))
    }
}

impl Div for ExtReal {
    type Output = ExtReal;
    fn div(self, rhs: ExtReal) -> ExtReal {
        ExtReal(div_nonneg(self.0, rhs.0))
    }
}

impl Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        ExtReal(self.0 + rhs.0)
    }
}

impl Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> ExtReal {
        iter.fold(ExtReal::ZERO, |a, b| a + b)
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            fmt::Display::fmt(&self.0, f)
        }
    }
}

impl TryFrom<f64> for ExtReal {
    type Error = MorreyError;
    fn try_from(x: f64) -> Result<Self> {
        ExtReal::new(x)
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = crate::exponent::deserialize_ext_f64(d)?;
        ExtReal::new(x).map_err(serde::de::Error::custom)
    }
}

/// The conjugate exponent `p'`:
/// `p/(1-p)` on `(0,1)`, `∞` at 1, `p/(p-1)` on `(1,∞)`, and 1 at `∞`.
pub fn conjugate_exponent(p: f64) -> Result<ExtReal> {
    if p.is_nan() || p <= 0.0 {
        return Err(MorreyError::InvalidExponent(p));
    }
    let v = if p.is_infinite() {
        1.0
    } else if p == 1.0 {
        f64::INFINITY
    } else if p < 1.0 {
        p / (1.0 - p)
    } else {
        p / (p - 1.0)
    };
    Ok(ExtReal(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(v: f64) -> ExtReal {
        ExtReal::new(v).unwrap()
    }

    #[test]
    fn mul_conventions() {
        assert_eq!(ExtReal::ZERO * ExtReal::INFINITY, ExtReal::ZERO);
        assert_eq!(ExtReal::INFINITY * ExtReal::ZERO, ExtReal::ZERO);
        assert_eq!(x(1.0) * x(1.0), x(1.0));
        assert_eq!(x(3.0) * ExtReal::INFINITY, ExtReal::INFINITY);
    }

    #[test]
    fn div_conventions() {
        assert_eq!(ExtReal::ZERO / ExtReal::ZERO, ExtReal::ZERO);
        assert_eq!(x(5.0) / ExtReal::INFINITY, ExtReal::ZERO);
        assert_eq!(x(2.0) / ExtReal::ZERO, ExtReal::INFINITY);
        assert_eq!(ExtReal::INFINITY / ExtReal::INFINITY, ExtReal::INFINITY);
        assert_eq!(ExtReal::ZERO / ExtReal::INFINITY, ExtReal::ZERO);
    }

    #[test]
    fn pow_examples() {
        assert_eq!(x(4.0).pow(0.5).unwrap(), x(2.0));
        assert_eq!(ExtReal::INFINITY.pow(-1.0).unwrap(), ExtReal::ZERO);
        assert_eq!(ExtReal::ZERO.pow(-2.0).unwrap(), ExtReal::INFINITY);
        assert_eq!(ExtReal::ZERO.pow(3.0).unwrap(), ExtReal::ZERO);
        assert_eq!(ExtReal::INFINITY.pow(0.5).unwrap(), ExtReal::INFINITY);
        assert!(matches!(
            ExtReal::ZERO.pow(0.0),
            Err(MorreyError::IndeterminatePower { .. })
        ));
        assert!(ExtReal::INFINITY.pow(0.0).is_err());
        assert_eq!(x(7.0).pow(0.0).unwrap(), ExtReal::ONE);
    }

    #[test]
    fn conjugate_table() {
        assert_eq!(conjugate_exponent(2.0).unwrap(), x(2.0));
        assert_eq!(conjugate_exponent(1.0).unwrap(), ExtReal::INFINITY);
        assert_eq!(conjugate_exponent(0.5).unwrap(), x(1.0));
        assert_eq!(conjugate_exponent(f64::INFINITY).unwrap(), x(1.0));
        assert_eq!(conjugate_exponent(3.0).unwrap(), x(1.5));
        assert!(conjugate_exponent(0.0).is_err());
        assert!(conjugate_exponent(-1.0).is_err());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExtReal::new(-1.0).is_err());
        assert!(ExtReal::new(f64::NAN).is_err());
        assert_eq!(ExtReal::new(-0.0).unwrap().value().to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn ordering_is_total() {
        let mut v = vec![ExtReal::INFINITY, x(2.0), ExtReal::ZERO, x(1.0)];
        v.sort();
        assert_eq!(v, vec![ExtReal::ZERO, x(1.0), x(2.0), ExtReal::INFINITY]);
    }

    fn ext() -> impl Strategy<Value = ExtReal> {
        prop_oneof![
            Just(ExtReal::ZERO),
            Just(ExtReal::INFINITY),
            (1e-6f64..1e6).prop_map(|v| ExtReal::new(v).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn finite_arithmetic_matches_f64(a in 1e-6f64..1e6, b in 1e-6f64..1e6) {
            prop_assert_eq!((x(a) * x(b)).value(), a * b);
            prop_assert_eq!((x(a) / x(b)).value(), a / b);
        }

        #[test]
        fn conjugate_is_involution(p in 1.0001f64..1e4) {
            let q = conjugate_exponent(p).unwrap().value();
            let back = conjugate_exponent(q).unwrap().value();
            prop_assert!((back - p).abs() <= 1e-9 * p);
        }

        #[test]
        fn div_is_mul_by_reciprocal(a in ext(), b in ext()) {
            let lhs = a / b;
            let rhs = a * b.pow(-1.0).unwrap();
            // The two sides differ only for ∞/∞, where division is defined as ∞
            // and ∞·∞^{-1} = ∞·0 = 0.
            if !(a.is_infinite() && b.is_infinite()) {
                if lhs.is_finite() && !lhs.is_zero() {
                    prop_assert!((lhs.value() - rhs.value()).abs() <= 1e-15 * lhs.value());
                } else {
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
