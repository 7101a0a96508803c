//! The scalar abstraction shared by all tensor algebra.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use curvlab_expr::Expr;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative ring with exact (or best-effort, for floats) division.
///
/// Everything in [`crate::tensor`], [`crate::linalg`] and
/// [`crate::operators`] is written against this trait; only the metric
/// pipeline, which differentiates, is tied to [`Expr`].
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;

    /// `self / rhs`, or `None` when `rhs` is zero.
    fn try_div(&self, rhs: &Self) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

impl Scalar for Expr {
    fn from_ratio(num: i64, den: i64) -> Self {
        Expr::ratio(num, den)
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        self.checked_div(rhs)
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }
    fn try_div(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
}

macro_rules! impl_float_scalar {
    ($f:ty) => {
        impl Scalar for $f {
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $f / den as $f
            }
            fn try_div(&self, rhs: &Self) -> Option<Self> {
                (*rhs != 0.0).then(|| self / rhs)
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);
