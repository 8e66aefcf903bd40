//! Scalar abstraction: the whole library is generic over the floating-point
//! type through this trait, with `f32` and `f64` as the provided instances.

use std::fmt;
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar usable everywhere in the library.
///
/// `f64` is what the CLI and the verification suite run on; `f32` works for
/// the geometry and synthesis paths at correspondingly looser tolerances.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + fmt::Debug + fmt::Display + 'static
{
    /// Lossy conversion from `f64`, used for constants and tolerances.
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// Lossless-as-possible view as `f64`, used for reporting and errors.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over a library scalar.
pub type C<T> = Complex<T>;

/// Wrap an angle into the half-open interval `(-pi, pi]`.
pub fn wrap_angle<T: Scalar>(x: T) -> T {
    let tau = T::TAU();
    let pi = T::PI();
    let mut y = x % tau;
    if y > pi {
        y -= tau;
    } else if y <= -pi {
        y += tau;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_half_open() {
        let pi = std::f64::consts::PI;
        assert_eq!(wrap_angle(pi), pi);
        assert_eq!(wrap_angle(-pi), pi);
        assert!((wrap_angle(3.0 * pi) - pi).abs() < 1e-12);
        assert!((wrap_angle(-2.5 * pi) + 0.5 * pi).abs() < 1e-12);
        assert_eq!(wrap_angle(0.25), 0.25);
    }

    #[test]
    fn real_round_trips_constants() {
        assert_eq!(<f64 as Scalar>::real(1e-10), 1e-10);
        assert!((<f32 as Scalar>::real(0.5) - 0.5f32).abs() == 0.0);
    }
}
