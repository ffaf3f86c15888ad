//! Composite Simpson quadrature on uniformly sampled integrands.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Composite Simpson rule over `values.len() - 1` intervals of width `h`.
pub fn simpson<T: Real>(values: &[Complex<T>], h: T) -> Result<Complex<T>> {
    let intervals = values.len().saturating_sub(1);
    if intervals == 0 || intervals % 2 != 0 {
        return Err(Error::OddStepCount(intervals));
    }
    let (two, four) = (T::of(2.0), T::of(4.0));
    let mut acc = values[0] + values[intervals];
    for (j, &v) in values.iter().enumerate().take(intervals).skip(1) {
        acc = acc + v * if j % 2 == 1 { four } else { two };
    }
    Ok(acc * (h / T::of(3.0)))
}

/// Running integral at every sample.
///
/// Even samples carry the composite Simpson value; odd samples add the
/// three-point rule `h/12 (5 f0 + 8 f1 - f2)` over the last interval. The
/// final entry agrees with [`simpson`] up to rounding when the interval
/// count is even.
pub fn cumulative_simpson<T: Real>(values: &[Complex<T>], h: T) -> Vec<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; values.len()];
    let third = h / T::of(3.0);
    let twelfth = h / T::of(12.0);
    let (four, five, eight) = (T::of(4.0), T::of(5.0), T::of(8.0));
    for j in 1..values.len() {
        if j % 2 == 0 {
            out[j] = out[j - 2] + (values[j - 2] + values[j - 1] * four + values[j]) * third;
        } else if j + 1 < values.len() {
            out[j] = out[j - 1] + (values[j - 1] * five + values[j] * eight - values[j + 1]) * twelfth;
        } else if j >= 2 {
            out[j] = out[j - 1] + (values[j] * five + values[j - 1] * eight - values[j - 2]) * twelfth;
        } else {
            out[j] = (values[0] + values[1]) * (h * T::of(0.5));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> (Vec<Complex<f64>>, f64) {
        let h = (b - a) / n as f64;
        ((0..=n).map(|j| Complex::new(f(a + h * j as f64), 0.0)).collect(), h)
    }

    #[test]
    fn exact_for_cubics() {
        let (v, h) = samples(|t| 2.0 * t * t * t - t + 1.0, 0.0, 2.0, 4);
        assert!((simpson(&v, h).unwrap().re - (8.0 - 2.0 + 2.0)).abs() < 1e-13);
    }

    #[test]
    fn fourth_order_convergence() {
        let exact = 1.0 - 1.0f64.cos();
        let (v1, h1) = samples(f64::sin, 0.0, 1.0, 8);
        let (v2, h2) = samples(f64::sin, 0.0, 1.0, 16);
        let e1 = (simpson(&v1, h1).unwrap().re - exact).abs();
        let e2 = (simpson(&v2, h2).unwrap().re - exact).abs();
        assert!((e1 / e2 - 16.0).abs() < 0.5, "{}", e1 / e2);
    }

    #[test]
    fn odd_intervals_rejected() {
        let (v, h) = samples(f64::sin, 0.0, 1.0, 3);
        assert_eq!(simpson(&v, h), Err(Error::OddStepCount(3)));
    }

    #[test]
    fn cumulative_matches_total() {
        let (v, h) = samples(f64::exp, 0.0, 1.0, 10);
        let c = cumulative_simpson(&v, h);
        assert!((c[10] - simpson(&v, h).unwrap()).norm() < 1e-15);
        assert!((c[4].re - (0.4f64.exp() - 1.0)).abs() < 1e-6);
        assert!((c[5].re - (0.5f64.exp() - 1.0)).abs() < 1e-5);
    }
}
