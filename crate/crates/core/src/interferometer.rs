//! Mach-Zehnder interferometry with a partially absorbing arm and with
//! internal states driven by a non-Hermitian Hamiltonian in one arm.
//!
//! The product space is ordered `|spatial> (x) |internal>` with the spatial
//! index slow, so the channel-0 block is the leading `N x N` block.
//! Intensities are unnormalized (`2 + ...`); [`normalized`] halves them.

use num_complex::Complex;

use crate::algebra::gates::{hadamard, pauli_x, projector};
use crate::algebra::{unwind, ComplexMatrix};
use crate::biortho::GeneralizedDensityOperator;
use crate::error::{Error, Result};
use crate::scalar::{is_finite_c, Real};

/// Traces below this magnitude make the relative phase undefined.
pub const NODAL_THRESHOLD: f64 = 1e-12;

/// Tolerance on `R^† L = I` accepted by [`ArmConfiguration`].
pub const ARM_BINORM_TOLERANCE: f64 = 1e-8;

/// Partial absorber with transmission `T` and phase shift `chi` in arm 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorberSetting<T> {
    transmission: T,
    chi: T,
}

impl<T: Real> AbsorberSetting<T> {
    pub fn new(transmission: T, chi: T) -> Result<Self> {
        if !(transmission > T::zero() && transmission <= T::one()) || !chi.is_finite() {
            return Err(Error::InvalidTransmission(transmission.to_f64_lossy()));
        }
        Ok(Self { transmission, chi })
    }

    pub fn transmission(&self) -> T {
        self.transmission
    }

    pub fn chi(&self) -> T {
        self.chi
    }

    /// `z = sqrt(T) e^{i chi}`.
    pub fn z(&self) -> Complex<T> {
        Complex::from_polar(self.transmission.sqrt(), self.chi)
    }
}

/// Arm-1 multiplier `z` and the internal-state pair `(L, R)` acting in arm 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmConfiguration<T> {
    z: Complex<T>,
    left: ComplexMatrix<T>,
    right: ComplexMatrix<T>,
}

impl<T: Real> ArmConfiguration<T> {
    pub fn new(z: Complex<T>, left: ComplexMatrix<T>, right: ComplexMatrix<T>) -> Result<Self> {
        if z.norm() == T::zero() {
            return Err(Error::ZeroZ);
        }
        if !is_finite_c(z) || !left.is_finite() || !right.is_finite() {
            return Err(Error::NonFinite("arm configuration"));
        }
        let product = right.adjoint().try_mul(&left)?;
        let defect = product.identity_defect();
        let tolerance = T::of(ARM_BINORM_TOLERANCE);
        if !(defect <= tolerance) {
            return Err(Error::BinormalizationBroken {
                defect: defect.to_f64_lossy(),
                tolerance: tolerance.to_f64_lossy(),
            });
        }
        Ok(Self { z, left, right })
    }

    pub fn z(&self) -> Complex<T> {
        self.z
    }

    pub fn left(&self) -> &ComplexMatrix<T> {
        &self.left
    }

    pub fn right(&self) -> &ComplexMatrix<T> {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.left.dim()
    }

    /// Block operators `(P0 (x) L + z P1 (x) I, P0 (x) R + (1/z^*) P1 (x) I)`.
    pub fn block_operators(&self) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
        let n = self.dim();
        let p0 = projector::<T>(2, 0);
        let p1 = projector::<T>(2, 1);
        let id = ComplexMatrix::identity(n);
        let one = Complex::new(T::one(), T::zero());
        let big_l = &p0.kron(&self.left) + &p1.kron(&id).scale(self.z);
        let big_r = &p0.kron(&self.right) + &p1.kron(&id).scale(one / self.z.conj());
        (big_l, big_r)
    }
}

/// Complex relative phase and visibility extracted from one interference
/// pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceResult<T> {
    /// Unnormalized channel-0 intensity at `z = 1`.
    pub intensity: Complex<T>,
    pub phase: Complex<T>,
    pub visibility: Complex<T>,
    /// `Tr[L rho]`.
    pub trace_left: Complex<T>,
    /// `Tr[rho R^†]`.
    pub trace_right: Complex<T>,
    /// Set when the square-root sign was fixed by a principal value rather
    /// than by continuity along an evolution path.
    pub branch_ambiguous: bool,
}

impl<T: Real> InterferenceResult<T> {
    /// Unnormalized intensity `2 (1 + V cos(phi - Phi))` with `e^{i phi} = z`.
    pub fn intensity_at(&self, z: Complex<T>) -> Result<Complex<T>> {
        if z.norm() == T::zero() {
            return Err(Error::ZeroZ);
        }
        let i = Complex::new(T::zero(), T::one());
        let phi = -i * z.ln();
        let two = T::of(2.0);
        Ok((Complex::new(T::one(), T::zero()) + self.visibility * (phi - self.phase).cos()) * two)
    }
}

/// Halves an unnormalized intensity.
pub fn normalized<T: Real>(intensity: Complex<T>) -> Complex<T> {
    intensity * T::of(0.5)
}

/// Conventional squared-modulus analysis of the absorber: returns
/// `(1 + nu cos chi, nu)` with `nu = 2 sqrt(T) / (1 + T)`.
pub fn standard_intensity<T: Real>(setting: &AbsorberSetting<T>) -> (T, T) {
    let t = setting.transmission;
    let nu = (t.sqrt() + t.sqrt()) / (T::one() + t);
    (T::one() + nu * setting.chi.cos(), nu)
}

/// `2 + 1/z + z`.
pub fn scalar_intensity<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if z.norm() == T::zero() {
        return Err(Error::ZeroZ);
    }
    let one = Complex::new(T::one(), T::zero());
    Ok(Complex::new(T::of(2.0), T::zero()) + one / z + z)
}

/// Polar form `J = cos phi = |J| e^{-i theta}` of the absorber interference
/// term, `e^{i phi} = sqrt(T) e^{i chi}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarInterference<T> {
    pub theta: T,
    pub magnitude: T,
}

/// Closed forms `tan theta = ((1-T)/(1+T)) tan chi` (principal arctan) and
/// `|J| = sqrt(cos^2 chi + (1-T)^2 / (4T))`.
pub fn polar_interference<T: Real>(setting: &AbsorberSetting<T>) -> PolarInterference<T> {
    let t = setting.transmission;
    let chi = setting.chi;
    let k = (T::one() - t) / (T::one() + t);
    let theta = (k * chi.tan()).atan();
    let c = chi.cos();
    let magnitude = (c * c + (T::one() - t) * (T::one() - t) / (T::of(4.0) * t)).sqrt();
    PolarInterference { theta, magnitude }
}

/// [`polar_interference`] over a sweep of `chi` values with `theta`
/// continued across the poles of `tan chi`, starting from the principal
/// value at the first sample.
pub fn polar_interference_sweep<T: Real>(transmission: T, chis: &[T]) -> Result<Vec<PolarInterference<T>>> {
    let mut out = Vec::with_capacity(chis.len());
    for &chi in chis {
        out.push(polar_interference(&AbsorberSetting::new(transmission, chi)?));
    }
    if out.is_empty() {
        return Ok(out);
    }
    let k = (T::one() - transmission) / (T::one() + transmission);
    if k == T::zero() {
        return Ok(out);
    }
    let kc = Complex::new(k, T::zero());
    let xs: Vec<Complex<T>> = chis.iter().map(|&c| Complex::new(c, T::zero())).collect();
    let tracked = crate::algebra::arctan_k_tan_along(kc, &xs)?;
    let offset = out[0].theta - tracked.values[0].re;
    for (p, v) in out.iter_mut().zip(&tracked.values) {
        p.theta = v.re + offset;
    }
    Ok(out)
}

/// Full output state `U_B U_M L U_B (|0><0| (x) rho) U_B^† R^† U_M^† U_B^†`
/// on the `2N`-dimensional product space.
pub fn output_state<T: Real>(
    rho: &GeneralizedDensityOperator<T>,
    arms: &ArmConfiguration<T>,
) -> Result<ComplexMatrix<T>> {
    let n = arms.dim();
    if rho.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rho.dim() });
    }
    let id = ComplexMatrix::identity(n);
    let ub = hadamard::<T>().kron(&id);
    let um = pauli_x::<T>().kron(&id);
    let (big_l, big_r) = arms.block_operators();
    let rho_in = projector::<T>(2, 0).kron(&rho.matrix_form());
    let forward = &(&ub * &um) * &(&big_l * &ub);
    let backward = &(&ub.adjoint() * &big_r.adjoint()) * &(&um.adjoint() * &ub.adjoint());
    Ok(&(&forward * &rho_in) * &backward)
}

/// Trace of the leading `n x n` block of a `2n`-dimensional operator.
pub fn channel0_block_trace<T: Real>(out: &ComplexMatrix<T>, n: usize) -> Complex<T> {
    (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + out[(i, i)])
}

/// `2 + (1/z) Tr[L rho] + z Tr[rho R^†]`.
pub fn channel0_intensity<T: Real>(
    rho: &GeneralizedDensityOperator<T>,
    arms: &ArmConfiguration<T>,
) -> Result<Complex<T>> {
    if rho.dim() != arms.dim() {
        return Err(Error::DimensionMismatch { expected: arms.dim(), found: rho.dim() });
    }
    let z = arms.z;
    if z.norm() == T::zero() {
        return Err(Error::ZeroZ);
    }
    let a = rho.expectation(&arms.left);
    let b = rho.expectation(&arms.right.adjoint());
    let one = Complex::new(T::one(), T::zero());
    Ok(Complex::new(T::of(2.0), T::zero()) + a * (one / z) + z * b)
}

fn traces<T: Real>(
    rho: &GeneralizedDensityOperator<T>,
    left: &ComplexMatrix<T>,
    right: &ComplexMatrix<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    if left.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: left.dim() });
    }
    if right.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: right.dim() });
    }
    let a = rho.expectation(left);
    let b = rho.expectation(&right.adjoint());
    let floor = T::of(NODAL_THRESHOLD);
    let smallest = a.norm().min(b.norm());
    if !(smallest >= floor) {
        return Err(Error::VanishingInterference { magnitude: smallest.to_f64_lossy() });
    }
    Ok((a, b))
}

fn result_from<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    v: Complex<T>,
    phase: Complex<T>,
    ambiguous: bool,
) -> InterferenceResult<T> {
    InterferenceResult {
        intensity: Complex::new(T::of(2.0), T::zero()) + a + b,
        phase,
        visibility: v,
        trace_left: a,
        trace_right: b,
        branch_ambiguous: ambiguous,
    }
}

/// Endpoint form of `e^{i Phi} = sqrt(Tr[L rho] / Tr[rho R^†])`,
/// `V = sqrt(Tr[L rho] Tr[rho R^†])`.
///
/// `V` takes the principal square root and `e^{i Phi} = Tr[L rho] / V`
/// with a principal logarithm, so that `V e^{i Phi} = Tr[L rho]` and
/// `V e^{-i Phi} = Tr[rho R^†]` hold exactly. The joint sign of `V` and
/// `e^{i Phi}` is not determined by an endpoint; the result is flagged.
pub fn relative_phase_visibility<T: Real>(
    rho: &GeneralizedDensityOperator<T>,
    left: &ComplexMatrix<T>,
    right: &ComplexMatrix<T>,
) -> Result<InterferenceResult<T>> {
    let (a, b) = traces(rho, left, right)?;
    let v = (a * b).sqrt();
    let i = Complex::new(T::zero(), T::one());
    let phase = -i * (a / v).ln();
    Ok(result_from(a, b, v, phase, true))
}

/// Relative phase and visibility at every sample of an evolution path,
/// with both square roots continued from `Phi = 0`, `V = 1` when the path
/// starts at the identity.
pub fn relative_phase_visibility_along<T: Real>(
    rho: &GeneralizedDensityOperator<T>,
    lefts: &[ComplexMatrix<T>],
    rights: &[ComplexMatrix<T>],
) -> Result<Vec<InterferenceResult<T>>> {
    if lefts.len() != rights.len() {
        return Err(Error::DimensionMismatch { expected: lefts.len(), found: rights.len() });
    }
    if lefts.is_empty() {
        return Err(Error::EmptyPath);
    }
    let mut ab = Vec::with_capacity(lefts.len());
    for (l, r) in lefts.iter().zip(rights) {
        ab.push(traces(rho, l, r)?);
    }
    let products: Vec<Complex<T>> = ab.iter().map(|&(a, b)| a * b).collect();
    let visibilities = unwind(&products)?.sqrt();
    let phase_factors: Vec<Complex<T>> = ab.iter().zip(&visibilities).map(|(&(a, _), &v)| a / v).collect();
    let logs = unwind(&phase_factors)?.log();
    let i = Complex::new(T::zero(), T::one());
    Ok(ab
        .iter()
        .zip(visibilities.iter().zip(&logs))
        .map(|(&(a, b), (&v, &lg))| result_from(a, b, v, -i * lg, false))
        .collect())
}
