//! Multivalued scalar functions: principal values at a point and
//! continuity-tracked values along sampled paths.
//!
//! Along a path the only branch convention is continuity from the first
//! sample, whose argument is taken principal.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_finite_c, Real};

/// A sampled nonzero complex path with its continuous argument.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPath<T> {
    samples: Vec<Complex<T>>,
    unwound_arg: Vec<T>,
}

impl<T: Real> BranchPath<T> {
    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn unwound_arg(&self) -> &[T] {
        &self.unwound_arg
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn final_arg(&self) -> T {
        *self.unwound_arg.last().expect("branch path is never empty")
    }

    /// Continuous logarithm `ln|z_j| + i arg_j`.
    pub fn log(&self) -> Vec<Complex<T>> {
        self.samples.iter().zip(&self.unwound_arg).map(|(z, &a)| Complex::new(z.norm().ln(), a)).collect()
    }

    /// Continuous `z_j^(1/2)`.
    pub fn sqrt(&self) -> Vec<Complex<T>> {
        let half = T::of(0.5);
        self.samples
            .iter()
            .zip(&self.unwound_arg)
            .map(|(z, &a)| Complex::from_polar(z.norm().sqrt(), a * half))
            .collect()
    }
}

/// Reduces an angle difference into `(-pi, pi]`.
fn wrap_pi<T: Real>(x: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut d = x % two_pi;
    if d > T::PI() {
        d = d - two_pi;
    } else if d <= -T::PI() {
        d = d + two_pi;
    }
    d
}

/// Continuous argument along a sampled path.
///
/// Fails with [`Error::ZeroSample`] on an exactly zero (or non-finite)
/// sample and with [`Error::UndersampledPath`] when two adjacent principal
/// arguments differ by a full `pi`, where the direction of travel is
/// ambiguous.
pub fn unwind<T: Real>(path: &[Complex<T>]) -> Result<BranchPath<T>> {
    if path.is_empty() {
        return Err(Error::EmptyPath);
    }
    let mut unwound = Vec::with_capacity(path.len());
    for (index, &z) in path.iter().enumerate() {
        if !is_finite_c(z) {
            return Err(Error::NonFinite("branch path sample"));
        }
        if z.re == T::zero() && z.im == T::zero() {
            return Err(Error::ZeroSample { index });
        }
        let arg = z.arg();
        if index == 0 {
            unwound.push(arg);
            continue;
        }
        let prev: T = unwound[index - 1];
        let jump = wrap_pi(arg - prev);
        if jump.abs() >= T::PI() {
            return Err(Error::UndersampledPath { index: index - 1, jump: jump.to_f64_lossy() });
        }
        unwound.push(prev + jump);
    }
    Ok(BranchPath { samples: path.to_vec(), unwound_arg: unwound })
}

/// Square root continuous along the path, principal at the first sample.
pub fn continuous_sqrt<T: Real>(path: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    Ok(unwind(path)?.sqrt())
}

/// Logarithm continuous along the path, principal at the first sample.
pub fn continuous_log<T: Real>(path: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    Ok(unwind(path)?.log())
}

/// Principal complex arctangent `(1/2i) log((1+iz)/(1-iz))`.
///
/// Real part lies in `(-pi/2, pi/2]`; the real-axis restriction agrees with
/// the real `atan`.
pub fn principal_arctan<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if !is_finite_c(z) {
        return Err(Error::NonFinite("arctan argument"));
    }
    let i = Complex::new(T::zero(), T::one());
    let one = Complex::new(T::one(), T::zero());
    let num = one + i * z;
    let den = one - i * z;
    if num.norm() == T::zero() || den.norm() == T::zero() {
        return Err(Error::PoleAtI { re: z.re.to_f64_lossy(), im: z.im.to_f64_lossy() });
    }
    if z.im == T::zero() {
        return Ok(Complex::new(z.re.atan(), T::zero()));
    }
    // log(num) - log(den) keeps the real part in (-pi/2, pi/2] without a 2pi wrap of the quotient.
    let w = num.ln() - den.ln();
    let mut out = w / (i + i);
    let half_pi = T::FRAC_PI_2();
    if out.re <= -half_pi {
        out.re = out.re + T::PI();
    } else if out.re > half_pi {
        out.re = out.re - T::PI();
    }
    Ok(out)
}

/// Result of tracking `arctan(k tan x)` along a path of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedArctan<T> {
    /// Continuous values, one per sample, starting at the principal value.
    pub values: Vec<Complex<T>>,
    /// Smallest distance from the origin reached by either factor
    /// `cos x ± i k sin x` between samples (linear interpolation).
    /// Small values mean the path grazes a branch point where
    /// `k tan x = ±i`.
    pub closest_approach: T,
}

/// `arctan(k tan x)` continued along a path of `x` values.
///
/// Evaluated as `(1/2i)[log(cos x + i k sin x) - log(cos x - i k sin x)]`
/// with both logarithms unwound, which has no singularity where `tan x`
/// does; the poles of `tan` are crossed continuously.
pub fn arctan_k_tan_along<T: Real>(k: Complex<T>, xs: &[Complex<T>]) -> Result<TrackedArctan<T>> {
    let i = Complex::new(T::zero(), T::one());
    let plus: Vec<Complex<T>> = xs.iter().map(|&x| x.cos() + i * k * x.sin()).collect();
    let minus: Vec<Complex<T>> = xs.iter().map(|&x| x.cos() - i * k * x.sin()).collect();
    let lp = continuous_log(&plus)?;
    let lm = continuous_log(&minus)?;
    let values = lp.iter().zip(&lm).map(|(&a, &b)| (a - b) / (i + i)).collect();
    let closest_approach = closest_approach_to_origin(&plus).min(closest_approach_to_origin(&minus));
    Ok(TrackedArctan { values, closest_approach })
}

/// Minimum distance from 0 to the polyline through `path`.
pub fn closest_approach_to_origin<T: Real>(path: &[Complex<T>]) -> T {
    let mut best = path.iter().fold(T::infinity(), |acc, z| acc.min(z.norm()));
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        let d = b - a;
        let len2 = d.norm_sqr();
        if len2 == T::zero() {
            continue;
        }
        // projection of the origin onto the segment a + s d
        let s = -(a.re * d.re + a.im * d.im) / len2;
        if s > T::zero() && s < T::one() {
            best = best.min((a + d * s).norm());
        }
    }
    best
}

/// `n + 1` evenly spaced points on the segment `from -> to`.
pub fn segment<T: Real>(from: Complex<T>, to: Complex<T>, n: usize) -> Vec<Complex<T>> {
    let nn = T::of(n as f64);
    (0..=n).map(|j| from + (to - from) * (T::of(j as f64) / nn)).collect()
}
