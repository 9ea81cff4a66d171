//! Floating-point abstraction used by the intensity and entropy code.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// A real scalar the apparatus and spectrum code can run on: `f32` or `f64`.
///
/// The tolerances are per-precision. For `f64` they are the values the
/// crate documents (relative merge tolerance `1e-12`, probability-sum
/// tolerance `1e-9`); `f32` gets looser ones matching its epsilon.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Relative tolerance under which two intensities are the same class.
    const MERGE_RTOL: f64;
    /// Absolute floor for the intensity comparison, so values that are zero
    /// up to rounding compare equal.
    const MERGE_ATOL: f64;
    /// Allowed deviation of a probability vector's sum from one.
    const SUM_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar")
    }

    #[inline]
    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable in scalar")
    }

    /// True when `a` and `b` fall in the same intensity class.
    fn same_intensity(a: Self, b: Self) -> bool {
        let diff = (a - b).abs();
        diff <= Self::lit(Self::MERGE_RTOL) * a.abs().max(b.abs()) + Self::lit(Self::MERGE_ATOL)
    }
}

impl Scalar for f64 {
    const MERGE_RTOL: f64 = 1e-12;
    const MERGE_ATOL: f64 = 1e-15;
    const SUM_TOL: f64 = 1e-9;
}

impl Scalar for f32 {
    const MERGE_RTOL: f64 = 1e-5;
    const MERGE_ATOL: f64 = 1e-7;
    const SUM_TOL: f64 = 1e-5;
}

/// `π·√(2/3)·log₂e`, the leading constant of `log₂ p(n)` as `n` grows
/// (≈ 3.7007; often rounded to 3.7).
pub fn hardy_ramanujan_log2_constant<T: Scalar>() -> T {
    T::PI() * (T::lit(2.0) / T::lit(3.0)).sqrt() * T::LOG2_E()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_value() {
        let c: f64 = hardy_ramanujan_log2_constant();
        assert!((c - 3.7007).abs() < 1e-4, "{c}");
        let c32: f32 = hardy_ramanujan_log2_constant();
        assert!((c32 as f64 - c).abs() < 1e-5);
    }

    #[test]
    fn merge_tolerance_is_relative() {
        assert!(f64::same_intensity(0.5, 0.5 + 1e-13));
        assert!(!f64::same_intensity(0.5, 0.5 + 1e-11));
        assert!(f64::same_intensity(0.0, 3.7e-33));
        assert!(!f64::same_intensity(1e-3, 1e-3 + 1e-13 + 1e-14 + 1e-15));
    }
}
