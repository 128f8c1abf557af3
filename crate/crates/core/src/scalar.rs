//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating point type the library is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Widens to `f64` for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite real")
    }

    /// Tolerance used for structural preconditions (hermiticity, unitarity).
    /// `1e-10` in double precision, relaxed to the type's resolution otherwise.
    #[inline]
    fn precondition_tol() -> Self {
        Self::lit(1e-10).max(Self::epsilon() * Self::lit(1e3))
    }

    /// Gap below which two eigenvalues are treated as one eigenspace.
    #[inline]
    fn degeneracy_tol() -> Self {
        Self::lit(1e-8).max(Self::epsilon() * Self::lit(1e3))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// `e^{i theta}`.
#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_pi<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut y = x - two_pi * ((x + T::PI()) / two_pi).floor();
    // floor leaves y in [-pi, pi); move the closed end to +pi
    if y <= -T::PI() {
        y += two_pi;
    }
    y
}

/// Reduces an angle to `[0, 2pi)`.
pub fn wrap_two_pi<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let y = x - two_pi * (x / two_pi).floor();
    if y >= two_pi {
        y - two_pi
    } else {
        y
    }
}

/// Distance between two angles on the circle, in `[0, pi]`.
pub fn circular_distance<T: Real>(a: T, b: T) -> T {
    wrap_pi(a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_pi_closed_at_plus_pi() {
        assert_eq!(wrap_pi(PI), PI);
        assert!((wrap_pi(-PI) - PI).abs() < 1e-15);
        assert!((wrap_pi(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_pi(0.25f64) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn wrap_two_pi_range() {
        assert!((wrap_two_pi(-0.5f64) - (2.0 * PI - 0.5)).abs() < 1e-14);
        assert!((wrap_two_pi(7.0f64) - (7.0 - 2.0 * PI)).abs() < 1e-14);
        assert_eq!(wrap_two_pi(0.0f64), 0.0);
    }

    #[test]
    fn circular_distance_wraps() {
        assert!((circular_distance(0.1f64, 2.0 * PI - 0.1) - 0.2).abs() < 1e-14);
    }

    #[test]
    fn tolerances_per_precision() {
        assert_eq!(f64::precondition_tol(), 1e-10);
        assert_eq!(f64::degeneracy_tol(), 1e-8);
        assert!(f32::precondition_tol() > 1e-5);
    }
}
