//! The scalar abstraction every numerical routine is written against.
//!
//! All formulas in this crate are polynomial (or ratios of polynomials) in
//! the stored numbers, so they only need a signed field. Exact rationals are
//! the intended instantiation; `f64`/`f32` are supported for quick
//! approximate sweeps such as plot data.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

/// A signed field element usable by the intersection-theory routines.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// Whether the value is an integer.
    fn is_integral(&self) -> bool;

    /// Lossy conversion for approximate output only.
    fn to_f64_approx(&self) -> f64;

    /// `⌊self⌋`, if it fits in an `i64`.
    fn floor_i64(&self) -> Option<i64>;

    /// The value `n / d`.
    ///
    /// Panics if `d == 0`.
    fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_int(n) / Self::from_int(d)
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("small integers are representable")
    }

    /// `self * 2^-1`.
    fn half(&self) -> Self {
        self.clone() / Self::from_int(2)
    }
}

impl Scalar for Ratio<BigInt> {
    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn to_f64_approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn floor_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.floor().to_integer().to_i64()
    }
}

impl Scalar for Ratio<i64> {
    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn to_f64_approx(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn floor_i64(&self) -> Option<i64> {
        Some(self.floor().to_integer())
    }
}

impl Scalar for f64 {
    fn is_integral(&self) -> bool {
        self.is_finite() && self.fract() == 0.0
    }

    fn to_f64_approx(&self) -> f64 {
        *self
    }

    fn floor_i64(&self) -> Option<i64> {
        let f = self.floor();
        (f.is_finite() && f.abs() < 9.0e18).then_some(f as i64)
    }
}

impl Scalar for f32 {
    fn is_integral(&self) -> bool {
        self.is_finite() && self.fract() == 0.0
    }

    fn to_f64_approx(&self) -> f64 {
        f64::from(*self)
    }

    fn floor_i64(&self) -> Option<i64> {
        f64::from(*self).floor_i64()
    }
}

/// `x^2`.
pub(crate) fn sq<S: Scalar>(x: &S) -> S {
    x.clone() * x.clone()
}
