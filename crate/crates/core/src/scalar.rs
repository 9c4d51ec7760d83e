//! Scalar types the LP engine can run on.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// A field the simplex method can pivot over, with its comparison tolerances.
/// Exact types use zero tolerances.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Allowed bound and row violation.
    fn feasibility_tol() -> Self;
    /// Reduced-cost threshold for optimality.
    fn optimality_tol() -> Self;
    /// Smallest magnitude accepted as a pivot element.
    fn pivot_tol() -> Self;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite input")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn feasibility_tol() -> Self {
        1e-7
    }
    fn optimality_tol() -> Self {
        1e-9
    }
    fn pivot_tol() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn feasibility_tol() -> Self {
        1e-4
    }
    fn optimality_tol() -> Self {
        1e-5
    }
    fn pivot_tol() -> Self {
        1e-6
    }
}

impl Scalar for BigRational {
    fn feasibility_tol() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
    fn optimality_tol() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
    fn pivot_tol() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
}
