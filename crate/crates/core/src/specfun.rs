//! Gaussian error function of a complex argument.
//!
//! Two evaluation routes are combined:
//!
//! * the Maclaurin series, used inside [`SERIES_RADIUS`] and in a strip around
//!   the imaginary axis (`|Re z| < AXIS_STRIP_HALF_WIDTH`, `|z| < AXIS_STRIP_RADIUS`)
//!   where the series terms do not cancel;
//! * the Laplace continued fraction for `erfc`, equivalent to evaluating the
//!   Faddeeva function `w(iz)`, everywhere else. It is evaluated with the
//!   modified Lentz algorithm.
//!
//! The half-plane `Re z >= 0, Im z >= 0` is computed directly and the rest is
//! obtained from `erf(-z) = -erf(z)` and `erf(conj z) = conj erf(z)`, so both
//! symmetries hold bit-for-bit.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::{is_finite_complex, Real};

/// Radius below which the Maclaurin series is always used.
pub const SERIES_RADIUS: f64 = 2.5;

/// Half-width of the strip around the imaginary axis where the series is
/// preferred over the continued fraction (which converges slowly there).
pub const AXIS_STRIP_HALF_WIDTH: f64 = 1.2;

/// Outer radius of the imaginary-axis strip handled by the series.
pub const AXIS_STRIP_RADIUS: f64 = 8.0;

/// Working range of [`erf_complex`]. Past this the phase of `z^2` is no
/// longer resolved in double precision.
pub const MAX_ARGUMENT: f64 = 1.0e8;

const MAX_SERIES_TERMS: usize = 4_000;
const MAX_FRACTION_TERMS: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("argument is not finite: {0}")]
    NonFinite(String),
    #[error("argument magnitude {0} exceeds the working range |z| <= 1e8")]
    OutOfRange(f64),
    #[error("chirp rate must be positive and finite, got {0}")]
    NonPositiveRate(f64),
    #[error("erf({0}) overflows the scalar type")]
    Overflow(String),
}

/// Error function `erf(z) = (2/sqrt(pi)) * integral_0^z exp(-s^2) ds`.
pub fn erf_complex<T: Real>(z: Complex<T>) -> Result<Complex<T>, SpecfunError> {
    if !is_finite_complex(z) {
        return Err(SpecfunError::NonFinite(format!("{z}")));
    }
    let r = z.norm();
    if r > T::lit(MAX_ARGUMENT) {
        return Err(SpecfunError::OutOfRange(r.as_f64()));
    }
    if z.re < T::zero() {
        return erf_complex(-z).map(|v| -v);
    }
    if z.im < T::zero() {
        return erf_complex(z.conj()).map(|v| v.conj());
    }

    let value = if r < T::lit(SERIES_RADIUS)
        || (z.re < T::lit(AXIS_STRIP_HALF_WIDTH) && r < T::lit(AXIS_STRIP_RADIUS))
    {
        erf_series(z)
    } else {
        Complex::new(T::one(), T::zero()) - erfc_continued_fraction(z)?
    };
    if !is_finite_complex(value) {
        return Err(SpecfunError::Overflow(format!("{z}")));
    }
    Ok(value)
}

/// `erf(x / (2 sqrt(i R)))` with the principal square root,
/// `sqrt(i R) = sqrt(R) e^{i pi/4}`.
///
/// The argument therefore lies on the ray `arg z = -pi/4` for `x > 0`.
pub fn erf_sqrt_i_scaled<T: Real>(x: T, rate: T) -> Result<Complex<T>, SpecfunError> {
    if !(rate > T::zero()) || !rate.is_finite() {
        return Err(SpecfunError::NonPositiveRate(rate.as_f64()));
    }
    if !x.is_finite() {
        return Err(SpecfunError::NonFinite(format!("{x}")));
    }
    erf_complex(sqrt_i_scaled_argument(x, rate))
}

/// `x / (2 sqrt(i R))` on the principal branch.
pub fn sqrt_i_scaled_argument<T: Real>(x: T, rate: T) -> Complex<T> {
    let s = x / (T::lit(2.0) * (T::lit(2.0) * rate).sqrt());
    Complex::new(s, -s)
}

/// Maclaurin series `(2/sqrt(pi)) sum (-1)^n z^(2n+1) / (n! (2n+1))`.
fn erf_series<T: Real>(z: Complex<T>) -> Complex<T> {
    let neg_z2 = -(z * z);
    let mut power = z;
    let mut sum = z;
    let tol = T::epsilon() * T::lit(0.25);
    for n in 1..MAX_SERIES_TERMS {
        power = power * neg_z2 / T::from_count(n);
        let term = power / T::from_count(2 * n + 1);
        sum = sum + term;
        if term.norm() <= tol * sum.norm() {
            break;
        }
    }
    sum * T::FRAC_2_SQRT_PI()
}

/// `erfc(z) = exp(-z^2) / sqrt(pi) / K(z)` with the continued fraction
/// `K = z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))`, valid for `Re z > 0`.
fn erfc_continued_fraction<T: Real>(z: Complex<T>) -> Result<Complex<T>, SpecfunError> {
    let tiny = T::min_positive_value().sqrt();
    let tol = T::epsilon() * T::lit(0.5);
    let guard = |v: Complex<T>| {
        if v.norm() < tiny {
            Complex::new(tiny, T::zero())
        } else {
            v
        }
    };

    let mut f = guard(z);
    let mut c = f;
    let mut d = Complex::new(T::zero(), T::zero());
    for k in 1..MAX_FRACTION_TERMS {
        let a = T::from_count(k) * T::lit(0.5);
        d = guard(z + d * a).inv();
        c = guard(z + c.inv() * a);
        let delta = c * d;
        f = f * delta;
        if (delta - Complex::new(T::one(), T::zero())).norm() <= tol {
            break;
        }
    }

    // exp(-z^2 - ln(sqrt(pi) K)) avoids a spurious overflow of exp(-z^2)
    // when the quotient itself is representable.
    let log_value = -(z * z) - (f * T::PI().sqrt()).ln();
    if log_value.re > T::max_value().ln() {
        return Err(SpecfunError::Overflow(format!("{z}")));
    }
    Ok(log_value.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_maps_to_zero() {
        let v = erf_complex(Complex::new(0.0_f64, 0.0)).unwrap();
        assert_eq!(v, Complex::new(0.0, 0.0));
    }

    #[test]
    fn real_asymptote() {
        let v = erf_complex(Complex::new(10.0_f64, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() <= 1e-15);
        assert!(v.im.abs() <= 1e-15);
    }

    #[test]
    fn known_value_one_plus_i() {
        // erf(1+i) from tabulated values of the complex error function.
        let v = erf_complex(Complex::new(1.0_f64, 1.0)).unwrap();
        let expected = Complex::new(1.316_151_281_697_947_6, 0.190_453_469_237_834_7);
        assert!((v - expected).norm() / expected.norm() < 1e-14, "{v}");
    }

    #[test]
    fn rejects_non_finite_input() {
        assert!(matches!(
            erf_complex(Complex::new(f64::NAN, 0.0)),
            Err(SpecfunError::NonFinite(_))
        ));
        assert!(matches!(
            erf_complex(Complex::new(0.0, f64::INFINITY)),
            Err(SpecfunError::NonFinite(_))
        ));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            erf_complex(Complex::new(2.0e8_f64, 0.0)),
            Err(SpecfunError::OutOfRange(_))
        ));
    }

    #[test]
    fn overflow_is_reported_not_returned() {
        // erf(30i) = i erfi(30) ~ 1e389
        assert!(matches!(
            erf_complex(Complex::new(0.5_f64, 30.0)),
            Err(SpecfunError::Overflow(_))
        ));
    }

    #[test]
    fn far_field_on_chirp_ray_stays_finite() {
        for &x in &[50.0_f64, 500.0, 5000.0, 9000.0] {
            let z = Complex::new(x, -x) / 2.0_f64.sqrt();
            let v = erf_complex(z).unwrap();
            // |erfc(z)| ~ 1/(sqrt(pi)|z|) on this ray
            let tail = 1.0 / (std::f64::consts::PI.sqrt() * z.norm());
            assert!(((v - Complex::new(1.0, 0.0)).norm() - tail).abs() < 0.01 * tail, "{x}: {v}");
        }
    }

    #[test]
    fn scaled_wrapper_zero_and_oddness() {
        let r = 1.0e13_f64;
        assert_eq!(erf_sqrt_i_scaled(0.0, r).unwrap(), Complex::new(0.0, 0.0));
        let a = erf_sqrt_i_scaled(3.7e7, r).unwrap();
        let b = erf_sqrt_i_scaled(-3.7e7, r).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn scaled_wrapper_matches_composition() {
        let (x, r) = (1.0e8_f64, 1.0e13_f64);
        let root = (Complex::new(0.0, r)).sqrt();
        let z = Complex::new(x, 0.0) / (root * 2.0);
        let direct = erf_complex(z).unwrap();
        let wrapped = erf_sqrt_i_scaled(x, r).unwrap();
        assert!((direct - wrapped).norm() / direct.norm() < 1e-14);
    }

    #[test]
    fn scaled_wrapper_rejects_bad_rate() {
        assert!(matches!(
            erf_sqrt_i_scaled(1.0_f64, 0.0),
            Err(SpecfunError::NonPositiveRate(_))
        ));
        assert!(matches!(
            erf_sqrt_i_scaled(1.0_f64, -2.0),
            Err(SpecfunError::NonPositiveRate(_))
        ));
    }

    #[test]
    fn single_precision_agrees_with_double() {
        for &(re, im) in &[(0.3, 0.2), (1.5, -2.0), (4.0, 4.0), (-6.0, 0.5), (0.2, 5.0)] {
            let d = erf_complex(Complex::new(re, im)).unwrap();
            let s = erf_complex(Complex::new(re as f32, im as f32)).unwrap();
            let s = Complex::new(s.re as f64, s.im as f64);
            assert!((d - s).norm() / d.norm() < 5e-5, "{re}+{im}i");
        }
    }
}
