//! Scalar abstraction for the linear-programming and partitioning layers.
//!
//! The simplex, the branch-and-bound driver and the cut-cost routines are
//! written once against [`Scalar`] and instantiated for `f64` (production),
//! `f32`, and [`Rational`] (exact arithmetic, used to cross-check the
//! floating-point path on small instances).

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Arbitrary-precision rational number.
pub type Rational = Ratio<BigInt>;

/// Ordered field used by the LP/MILP code.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    /// Feasibility and pivot tolerance. Zero for exact types.
    fn tolerance() -> Self;

    /// Whether the type rounds.
    fn is_exact() -> bool;

    /// Lossless where possible; exact types convert the binary value of `v`.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(|| panic!("value {v} is not representable"))
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_positive_tol(&self) -> bool {
        *self > Self::tolerance()
    }

    fn is_negative_tol(&self) -> bool {
        *self < -Self::tolerance()
    }

    fn is_zero_tol(&self) -> bool {
        !self.is_positive_tol() && !self.is_negative_tol()
    }

    /// Distance to the nearest integer.
    fn fractionality(&self) -> Self;
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }

    fn is_exact() -> bool {
        false
    }

    fn fractionality(&self) -> Self {
        (self - self.round()).abs()
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }

    fn is_exact() -> bool {
        false
    }

    fn fractionality(&self) -> Self {
        (self - self.round()).abs()
    }
}

impl Scalar for Rational {
    fn tolerance() -> Self {
        Ratio::from_integer(BigInt::from(0))
    }

    fn is_exact() -> bool {
        true
    }

    fn from_f64_lossy(v: f64) -> Self {
        Ratio::from_float(v).unwrap_or_else(|| panic!("value {v} is not finite"))
    }

    fn fractionality(&self) -> Self {
        (self.clone() - self.round()).abs()
    }
}
