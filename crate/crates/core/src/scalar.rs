//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the solvers are generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant into this scalar type.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 constant representable in scalar type")
    }

    /// Lossy conversion used when serializing reports.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// A tolerance of `nominal`, widened to what the precision of `Self` can resolve.
    fn tol(nominal: f64) -> Self {
        let floor = Self::epsilon() * Self::of(256.0);
        Self::of(nominal).max(floor)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Infinity norm of a slice; zero for an empty slice.
pub fn inf_norm<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_is_widened_for_single_precision() {
        assert_eq!(f64::tol(1e-9), 1e-9);
        assert!(f32::tol(1e-9) > 1e-6);
    }

    #[test]
    fn inf_norm_of_mixed_signs() {
        assert_eq!(inf_norm(&[1.0, -3.5, 2.0]), 3.5);
        assert_eq!(inf_norm::<f64>(&[]), 0.0);
    }
}
