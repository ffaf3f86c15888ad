//! Dissipative one-qubit geometric phase-shift gate.
//!
//! `H = (eta - i gamma) sigma_z / 2`, input
//! `rho = (1+r)/2 |a+><a+| + (1-r)/2 |a-><a-|` with `a+-` tilted by `theta`.
//! Closed forms are continued along the straight segment `s -> s phi`,
//! `phi = (eta - i gamma) tau`, which is also the path traced by the
//! evolution in time; every arctangent is tracked through the poles of
//! `tan` instead of being taken principal.

use num_complex::Complex;

use crate::algebra::gates::pauli_z;
use crate::algebra::{
    arctan_k_tan_along, principal_arctan, segment, unwind, ComplexMatrix, TimeGrid, TrackedArctan, Vector,
};
use crate::biortho::GeneralizedDensityOperator;
use crate::error::{Error, Result};
use crate::geometric::{connection, geometric_phase};
use crate::interferometer::{relative_phase_visibility_along, InterferenceResult};
use crate::propagator::{evolve, ConstantHamiltonian, PropagatorPair};
use crate::scalar::Real;

/// Samples along `0 -> phi/2` before any densification.
pub const UNWIND_SAMPLES: usize = 2048;

/// Densification stops here.
pub const MAX_UNWIND_SAMPLES: usize = 1 << 21;

/// A tracked arctangent whose factors pass closer than this to zero is
/// reported as a pole crossing.
pub const POLE_TOLERANCE: f64 = 1e-9;

/// Minimum number of points for [`robustness_order`].
pub const MIN_FIT_POINTS: usize = 7;

/// Deviations below this are indistinguishable from rounding.
pub const NOISE_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateParams<T> {
    eta: T,
    gamma: T,
    theta: T,
    r: T,
    tau: T,
}

impl<T: Real> GateParams<T> {
    /// Requires `0 < r <= 1`, `gamma >= 0`, `tau > 0`.
    pub fn new(eta: T, gamma: T, theta: T, r: T, tau: T) -> Result<Self> {
        if gamma < T::zero() {
            return Err(Error::InvalidGateParams("gamma must be non-negative"));
        }
        Self::continued(eta, gamma, theta, r, tau)
    }

    /// Like [`GateParams::new`] but admits `gamma < 0`, for checking the
    /// parity of the closed forms in `gamma`.
    pub fn continued(eta: T, gamma: T, theta: T, r: T, tau: T) -> Result<Self> {
        if ![eta, gamma, theta, r, tau].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidGateParams("parameters must be finite"));
        }
        if !(r > T::zero() && r <= T::one()) {
            return Err(Error::InvalidGateParams("r must lie in (0, 1]"));
        }
        if !(tau > T::zero()) {
            return Err(Error::InvalidGateParams("tau must be positive"));
        }
        Ok(Self { eta, gamma, theta, r, tau })
    }

    pub fn eta(&self) -> T {
        self.eta
    }
    pub fn gamma(&self) -> T {
        self.gamma
    }
    pub fn theta(&self) -> T {
        self.theta
    }
    pub fn r(&self) -> T {
        self.r
    }
    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn with_gamma(&self, gamma: T) -> Result<Self> {
        Self::continued(self.eta, gamma, self.theta, self.r, self.tau)
    }

    /// `omega = eta - i gamma`.
    pub fn omega(&self) -> Complex<T> {
        Complex::new(self.eta, -self.gamma)
    }

    /// Total precession angle `phi = omega tau`.
    pub fn precession(&self) -> Complex<T> {
        self.omega() * self.tau
    }
}

/// `H = omega sigma_z / 2`.
pub fn hamiltonian<T: Real>(p: &GateParams<T>) -> ComplexMatrix<T> {
    pauli_z::<T>().scale(p.omega() * T::of(0.5))
}

pub fn gate_hamiltonian<T: Real>(p: &GateParams<T>) -> ConstantHamiltonian<T> {
    ConstantHamiltonian::new(hamiltonian(p))
}

/// `(|a+>, |a->)` with `|a+> = cos(theta/2)|g> + sin(theta/2)|e>`.
pub fn tilted_basis<T: Real>(theta: T) -> (Vector<T>, Vector<T>) {
    let half = theta * T::of(0.5);
    let (c, s) = (Complex::new(half.cos(), T::zero()), Complex::new(half.sin(), T::zero()));
    (vec![c, s], vec![-s, c])
}

pub fn input_state<T: Real>(p: &GateParams<T>) -> Result<GeneralizedDensityOperator<T>> {
    let (plus, minus) = tilted_basis(p.theta);
    let half = T::of(0.5);
    GeneralizedDensityOperator::hermitian(vec![(T::one() + p.r) * half, (T::one() - p.r) * half], vec![plus, minus])
}

/// `U = exp(i (1 - sigma_theta) 2 pi (1 - cos theta))`
/// `= |a+><a+| + e^{i 4 pi (1 - cos theta)} |a-><a-|`.
pub fn ideal_gate<T: Real>(theta: T) -> ComplexMatrix<T> {
    let (plus, minus) = tilted_basis(theta);
    let four_pi = T::of(4.0) * T::PI();
    let phase = Complex::from_polar(T::one(), four_pi * (T::one() - theta.cos()));
    &ComplexMatrix::outer(&plus, &plus) + &ComplexMatrix::outer(&minus, &minus).scale(phase)
}

/// Retries `f(n)` with doubled sample counts while the path is undersampled.
fn densified<R>(f: impl Fn(usize) -> Result<R>) -> Result<R> {
    let mut n = UNWIND_SAMPLES;
    loop {
        match f(n) {
            Err(Error::UndersampledPath { .. }) if n < MAX_UNWIND_SAMPLES => n *= 2,
            other => return other,
        }
    }
}

fn half_angle_path<T: Real>(p: &GateParams<T>, n: usize) -> Vec<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    segment(zero, p.precession() * T::of(0.5), n)
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn is_pole<T: Real>(t: &TrackedArctan<T>) -> bool {
    t.closest_approach < T::of(POLE_TOLERANCE)
}

fn departs_from_principal<T: Real>(tracked: Complex<T>, k: Complex<T>, x: Complex<T>) -> bool {
    match principal_arctan(k * x.tan()) {
        Ok(p) => (p - tracked).norm() > T::of(1e-6),
        Err(_) => true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseVisibility<T> {
    pub phi: Complex<T>,
    pub visibility: Complex<T>,
    pub pole_crossing: bool,
}

/// `Phi = -arctan(r cos theta tan(phi/2))`,
/// `V = sqrt(cos^2(phi/2) + r^2 cos^2 theta sin^2(phi/2))`.
///
/// `V` is the continued square root of
/// `(cos x + i k sin x)(cos x - i k sin x)`, `k = r cos theta`.
pub fn phase_visibility_closed<T: Real>(p: &GateParams<T>) -> Result<PhaseVisibility<T>> {
    let k = real(p.r * p.theta.cos());
    densified(|n| {
        let xs = half_angle_path(p, n);
        let tracked = arctan_k_tan_along(k, &xs)?;
        let i = Complex::new(T::zero(), T::one());
        let products: Vec<Complex<T>> =
            xs.iter().map(|&x| (x.cos() + i * k * x.sin()) * (x.cos() - i * k * x.sin())).collect();
        let visibility = *unwind(&products)?.sqrt().last().expect("non-empty path");
        Ok(PhaseVisibility {
            phi: -*tracked.values.last().expect("non-empty path"),
            visibility,
            pole_crossing: is_pole(&tracked),
        })
    })
}

struct OmegaTrack<T> {
    omegas: Vec<Complex<T>>,
    tracked: TrackedArctan<T>,
    end: Complex<T>,
}

fn omega_track<T: Real>(p: &GateParams<T>, n: usize) -> Result<OmegaTrack<T>> {
    let c = real(p.theta.cos());
    let xs = half_angle_path(p, n);
    let tracked = arctan_k_tan_along(c, &xs)?;
    let two = T::of(2.0);
    let omegas = tracked.values.iter().zip(&xs).map(|(&a, &x)| a * two - x * two * c).collect();
    Ok(OmegaTrack { omegas, tracked, end: *xs.last().expect("non-empty path") })
}

/// `Omega = 2 arctan(cos theta tan(phi/2)) - phi cos theta`, arctan term
/// continued along `0 -> phi`.
pub fn solid_angle<T: Real>(p: &GateParams<T>) -> Result<Complex<T>> {
    densified(|n| Ok(*omega_track(p, n)?.omegas.last().expect("non-empty path")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricClosed<T> {
    pub gamma: Complex<T>,
    pub omega: Complex<T>,
    pub pole_crossing: bool,
}

/// `Gamma = -arctan(r tan(Omega/2))`, continued along the `Omega` path
/// from `Gamma = 0` at `tau = 0`.
pub fn geometric_phase_closed<T: Real>(p: &GateParams<T>) -> Result<GeometricClosed<T>> {
    densified(|n| {
        let track = omega_track(p, n)?;
        let half = T::of(0.5);
        let xs: Vec<Complex<T>> = track.omegas.iter().map(|&o| o * half).collect();
        let tracked = arctan_k_tan_along(real(p.r), &xs)?;
        Ok(GeometricClosed {
            gamma: -*tracked.values.last().expect("non-empty path"),
            omega: *track.omegas.last().expect("non-empty path"),
            pole_crossing: is_pole(&tracked),
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateReport<T> {
    pub phi: Complex<T>,
    pub visibility: Complex<T>,
    pub gamma: Complex<T>,
    pub omega: Complex<T>,
    /// Some arctangent left its principal branch.
    pub branch_unwound: bool,
    /// Some tracked arctangent grazed a branch point.
    pub pole_crossing: bool,
}

pub fn gate_report<T: Real>(p: &GateParams<T>) -> Result<GateReport<T>> {
    let pv = phase_visibility_closed(p)?;
    let gc = geometric_phase_closed(p)?;
    let (omega_pole, unwound_omega) = densified(|n| {
        let t = omega_track(p, n)?;
        let last = *t.tracked.values.last().expect("non-empty path");
        Ok((is_pole(&t.tracked), departs_from_principal(last, real(p.theta.cos()), t.end)))
    })?;
    let half_phi = p.precession() * T::of(0.5);
    let unwound_phi = departs_from_principal(-pv.phi, real(p.r * p.theta.cos()), half_phi);
    let unwound_gamma = departs_from_principal(-gc.gamma, real(p.r), gc.omega * T::of(0.5));
    Ok(GateReport {
        phi: pv.phi,
        visibility: pv.visibility,
        gamma: gc.gamma,
        omega: gc.omega,
        branch_unwound: unwound_phi || unwound_omega || unwound_gamma,
        pole_crossing: pv.pole_crossing || gc.pole_crossing || omega_pole,
    })
}

/// First-order expansion of `Omega` in `gamma tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaExpansion<T> {
    /// `2 arctan(cos theta tan(eta tau/2)) - eta tau cos theta`.
    pub zeroth: T,
    /// Coefficient `c` of `-i gamma tau`: `cos theta S / (1 - S)`,
    /// `S = sin^2(eta tau/2) sin^2 theta`.
    pub coefficient: T,
    /// `zeroth - i gamma tau c`.
    pub approximation: Complex<T>,
}

fn real_tracked_arctan<T: Real>(k: T, x_end: T) -> Result<T> {
    let zero = Complex::new(T::zero(), T::zero());
    densified(|n| {
        let xs = segment(zero, real(x_end), n);
        Ok(arctan_k_tan_along(real(k), &xs)?.values.last().expect("non-empty path").re)
    })
}

pub fn omega_expansion<T: Real>(p: &GateParams<T>) -> Result<OmegaExpansion<T>> {
    let et = p.eta * p.tau;
    let half = et * T::of(0.5);
    let s = half.sin().powi(2) * p.theta.sin().powi(2);
    let den = T::one() - s;
    if den.abs() < T::of(1e-12) {
        return Err(Error::ExpansionSingular(den.to_f64_lossy()));
    }
    let c = p.theta.cos();
    let zeroth = T::of(2.0) * real_tracked_arctan(c, half)? - et * c;
    let coefficient = c * s / den;
    let approximation = Complex::new(zeroth, -p.gamma * p.tau * coefficient);
    Ok(OmegaExpansion { zeroth, coefficient, approximation })
}

/// First-order expansion of `Phi` in `gamma tau`:
/// `Phi ~ zeroth + i gamma tau c`,
/// `c = (r cos theta / 2) / (1 - (1 - r^2 cos^2 theta) sin^2(eta tau/2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiExpansion<T> {
    pub zeroth: T,
    pub coefficient: T,
    /// `gamma tau c`, the first-order imaginary part.
    pub im_phi: T,
}

pub fn phi_expansion<T: Real>(p: &GateParams<T>) -> Result<PhiExpansion<T>> {
    let k = p.r * p.theta.cos();
    let half = p.eta * p.tau * T::of(0.5);
    let den = T::one() - (T::one() - k * k) * half.sin().powi(2);
    if den.abs() < T::of(1e-12) {
        return Err(Error::ExpansionSingular(den.to_f64_lossy()));
    }
    let coefficient = k * T::of(0.5) / den;
    Ok(PhiExpansion { zeroth: -real_tracked_arctan(k, half)?, coefficient, im_phi: p.gamma * p.tau * coefficient })
}

/// Scalar extracted from a [`GateReport`] for robustness fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Omega,
    Gamma,
    ImPhi,
    Phi,
    Visibility,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Omega => "omega",
            Quantity::Gamma => "gamma",
            Quantity::ImPhi => "im_phi",
            Quantity::Phi => "phi",
            Quantity::Visibility => "visibility",
        }
    }

    pub fn pick<T: Real>(self, r: &GateReport<T>) -> Complex<T> {
        match self {
            Quantity::Omega => r.omega,
            Quantity::Gamma => r.gamma,
            Quantity::ImPhi => Complex::new(r.phi.im, T::zero()),
            Quantity::Phi => r.phi,
            Quantity::Visibility => r.visibility,
        }
    }
}

/// Least-squares fit of `log |q(gamma) - q(0)|` against `log gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessFit<T> {
    pub slope: T,
    pub intercept: T,
    pub gammas: Vec<T>,
    pub deviations: Vec<T>,
}

/// `points` log-spaced values from `min` to `max` inclusive.
pub fn log_spaced<T: Real>(min: T, max: T, points: usize) -> Vec<T> {
    if points == 1 {
        return vec![min];
    }
    let (a, b) = (min.ln(), max.ln());
    (0..points).map(|j| (a + (b - a) * T::of(j as f64 / (points - 1) as f64)).exp()).collect()
}

/// Order of the deviation of `quantity` from its `gamma = 0` value,
/// sweeping `gamma` over `gammas` with the other parameters from `template`.
pub fn robustness_order<T: Real>(
    template: &GateParams<T>,
    quantity: Quantity,
    gammas: &[T],
) -> Result<RobustnessFit<T>> {
    if gammas.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints { needed: MIN_FIT_POINTS, got: gammas.len() });
    }
    let base = quantity.pick(&gate_report(&template.with_gamma(T::zero())?)?);
    let mut deviations = Vec::with_capacity(gammas.len());
    for &g in gammas {
        if !(g > T::zero()) {
            return Err(Error::InvalidGateParams("robustness sweep needs positive gamma"));
        }
        let d = (quantity.pick(&gate_report(&GateParams::new(
            template.eta,
            g,
            template.theta,
            template.r,
            template.tau,
        )?)?)
            - base)
            .norm();
        if !(d >= T::of(NOISE_FLOOR)) {
            return Err(Error::InsufficientSignal { gamma: g.to_f64_lossy(), deviation: d.to_f64_lossy() });
        }
        deviations.push(d);
    }
    let xs: Vec<T> = gammas.iter().map(|g| g.ln()).collect();
    let ys: Vec<T> = deviations.iter().map(|d| d.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    Ok(RobustnessFit { slope, intercept, gammas: gammas.to_vec(), deviations })
}

/// Ordinary least-squares line `y = slope x + intercept`.
pub fn least_squares<T: Real>(xs: &[T], ys: &[T]) -> (T, T) {
    let n = T::of(xs.len() as f64);
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxy = sxy + (x - mx) * (y - my);
        sxx = sxx + (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Relative phase and visibility from exact propagators sampled on
/// `steps` intervals of `[0, tau]`, continued in time.
pub fn phase_visibility_pipeline<T: Real>(p: &GateParams<T>, steps: usize) -> Result<InterferenceResult<T>> {
    let pair = PropagatorPair::exact(&hamiltonian(p), TimeGrid::new(T::zero(), p.tau, steps)?)?;
    let rho = input_state(p)?;
    let path = relative_phase_visibility_along(&rho, pair.left_samples(), pair.right_samples())?;
    Ok(*path.last().expect("non-empty grid"))
}

/// Geometric phase from RK4 propagators on `steps` intervals, Simpson
/// connection and the continued square root.
pub fn geometric_phase_pipeline<T: Real>(p: &GateParams<T>, steps: usize) -> Result<Complex<T>> {
    let h = gate_hamiltonian(p);
    let pair = evolve(&h, TimeGrid::new(T::zero(), p.tau, steps)?)?;
    let rho = input_state(p)?;
    let conn = connection(&pair, &rho, &h)?;
    geometric_phase(&pair, &rho, &conn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::eig_pairs;
    use crate::scalar::cplx;
    use std::f64::consts::PI;

    fn params(eta: f64, gamma: f64, theta: f64, r: f64, tau: f64) -> GateParams<f64> {
        GateParams::new(eta, gamma, theta, r, tau).unwrap()
    }

    #[test]
    fn hamiltonian_examples() {
        let h = hamiltonian(&params(1.0, 0.0, 0.0, 1.0, 1.0));
        assert_eq!(h, pauli_z::<f64>().scale(cplx(0.5, 0.0)));
        let h = hamiltonian(&params(0.0, 2.0, 0.0, 1.0, 1.0));
        assert_eq!(h, pauli_z::<f64>().scale(cplx(0.0, -1.0)));
        let h = hamiltonian(&params(1.0, 0.1, 0.0, 1.0, 1.0));
        assert_eq!(h, ComplexMatrix::diag(&[cplx(0.5, -0.05), cplx(-0.5, 0.05)]));
    }

    #[test]
    fn parameter_validation() {
        assert!(GateParams::new(1.0, -0.1, 0.0, 1.0, 1.0).is_err());
        assert!(GateParams::continued(1.0, -0.1, 0.0, 1.0, 1.0).is_ok());
        assert!(GateParams::new(1.0, 0.1, 0.0, 0.0, 1.0).is_err());
        assert!(GateParams::new(1.0, 0.1, 0.0, 1.2, 1.0).is_err());
        assert!(GateParams::new(1.0, 0.1, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn input_state_examples() {
        let rho = input_state(&params(1.0, 0.0, 0.0, 1.0, 1.0)).unwrap();
        assert_eq!(rho.matrix_form(), ComplexMatrix::diag(&[cplx(1.0, 0.0), cplx(0.0, 0.0)]));
        let rho = input_state(&params(1.0, 0.0, PI / 2.0, 1.0, 1.0)).unwrap();
        let plus = ComplexMatrix::from_rows(&[vec![cplx(0.5, 0.0); 2], vec![cplx(0.5, 0.0); 2]]).unwrap();
        assert!(rho.matrix_form().max_abs_diff(&plus) < 1e-15);
        let rho = input_state(&params(1.0, 0.0, 0.7, 0.3, 1.0)).unwrap();
        assert!((rho.matrix_form().trace() - cplx(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ideal_gate_examples() {
        assert!(ideal_gate(0.0f64).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        let theta = 0.75f64.acos();
        let (plus, minus) = tilted_basis(theta);
        let sigma = &ComplexMatrix::outer(&plus, &plus) - &ComplexMatrix::outer(&minus, &minus);
        assert!(ideal_gate(theta).max_abs_diff(&sigma) < 1e-14);
        for &t in &[0.3, 1.2, 2.9] {
            let u = ideal_gate(t);
            assert!((&u.adjoint() * &u).identity_defect() < 1e-14);
            let (plus, _) = tilted_basis(t);
            let up = u.mul_vec(&plus);
            assert!((up[0] - plus[0]).norm() + (up[1] - plus[1]).norm() < 1e-14);
        }
        // eigenvalues of the ideal gate are 1 and e^{i 4 pi (1 - cos theta)}
        let pairs = eig_pairs(&ideal_gate(1.0)).unwrap();
        assert!(pairs.iter().any(|p| (p.value - cplx(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn equator_has_zero_relative_phase() {
        for &(g, r) in &[(0.0, 1.0), (0.3, 0.5), (1.0, 0.9)] {
            let pv = phase_visibility_closed(&params(1.0, g, PI / 2.0, r, 1.0)).unwrap();
            assert!(pv.phi.norm() < 1e-15, "{:?}", pv.phi);
        }
    }

    #[test]
    fn pole_state_phase_unwinds() {
        let tau = 9.0;
        let pv = phase_visibility_closed(&params(1.0, 0.0, 0.0, 1.0, tau)).unwrap();
        assert!((pv.phi - cplx(-tau / 2.0, 0.0)).norm() < 1e-12);
        assert!((pv.visibility - cplx(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn lossless_visibility_formula() {
        let (theta, tau) = (1.1f64, 2.3f64);
        let pv = phase_visibility_closed(&params(1.0, 0.0, theta, 1.0, tau)).unwrap();
        let x = tau / 2.0;
        let v = (x.cos().powi(2) + theta.cos().powi(2) * x.sin().powi(2)).sqrt();
        assert!((pv.visibility - cplx(v, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn closed_forms_match_pipeline() {
        for &(g, theta, r, tau) in &[(0.05, PI / 3.0, 0.8, 2.0 * PI), (0.2, 0.3, 0.2, 1.0), (0.0, 2.0, 1.0, PI)] {
            let p = params(1.0, g, theta, r, tau);
            let closed = phase_visibility_closed(&p).unwrap();
            let pipe = phase_visibility_pipeline(&p, 2048).unwrap();
            assert!((closed.phi - pipe.phase).norm() < 1e-10);
            assert!((closed.visibility - pipe.visibility).norm() < 1e-10);
        }
    }

    #[test]
    fn solid_angle_examples() {
        for &tau in &[0.5, 3.0, 8.0] {
            assert!(solid_angle(&params(1.0, 0.2, 0.0, 1.0, tau)).unwrap().norm() < 1e-12);
        }
        let o = solid_angle(&params(1.0, 0.0, PI / 3.0, 1.0, 2.0 * PI)).unwrap();
        assert!((o - cplx(PI, 0.0)).norm() < 1e-10);
        let o = solid_angle(&params(1.0, 0.0, PI / 2.0, 1.0, 2.0 * PI)).unwrap();
        assert!((o - cplx(2.0 * PI, 0.0)).norm() < 1e-10);
        for &theta in &[0.2, 1.0, 1.5] {
            let o = solid_angle(&params(2.0, 0.0, theta, 1.0, PI)).unwrap();
            assert!((o.re - 2.0 * PI * (1.0 - theta.cos())).abs() < 1e-10);
        }
    }

    #[test]
    fn geometric_closed_examples() {
        // r tan(Omega/2) = r at Omega = pi/2
        let t = arctan_k_tan_along(cplx(1.0, 0.0), &segment(cplx(0.0, 0.0), cplx(PI / 4.0, 0.0), 64)).unwrap();
        assert!((-t.values.last().unwrap().re + PI / 4.0).abs() < 1e-15);
        let t = arctan_k_tan_along(cplx(0.8, 0.0), &segment(cplx(0.0, 0.0), cplx(PI / 4.0, 0.0), 64)).unwrap();
        assert!((-t.values.last().unwrap().re + 0.6747_f64).abs() < 5e-5);
        let g = geometric_phase_closed(&params(1.0, 0.0, 1.0, 1.0, 2.0 * PI)).unwrap();
        assert!((g.gamma - cplx(-PI * (1.0 - 1f64.cos()), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn closed_gamma_matches_numerical_pipeline() {
        let p = params(1.0, 0.01, PI / 3.0, 0.8, 2.0 * PI);
        let closed = geometric_phase_closed(&p).unwrap().gamma;
        let pipe = geometric_phase_pipeline(&p, 10_000).unwrap();
        assert!((closed - pipe).norm() < 1e-6, "{closed} vs {pipe}");
    }

    #[test]
    fn lossless_report_is_real() {
        let r = gate_report(&params(1.3, 0.0, 0.8, 0.6, 4.0)).unwrap();
        for z in [r.phi, r.visibility, r.gamma, r.omega] {
            assert!(z.im.abs() < 1e-10);
        }
    }

    #[test]
    fn omega_expansion_examples() {
        let e = omega_expansion(&params(1.0, 0.01, PI / 3.0, 0.8, 2.0 * PI)).unwrap();
        assert!(e.coefficient.abs() < 1e-15);
        assert!((e.zeroth - PI).abs() < 1e-10);
        let e = omega_expansion(&params(1.0, 0.01, PI / 4.0, 0.8, PI)).unwrap();
        assert!((e.coefficient - (PI / 4.0).cos()).abs() < 1e-12);
        assert_eq!(omega_expansion(&params(1.0, 0.01, 0.0, 0.8, 2.0)).unwrap().coefficient, 0.0);
        assert!(matches!(omega_expansion(&params(1.0, 0.01, PI / 2.0, 0.8, PI)), Err(Error::ExpansionSingular(_))));
    }

    #[test]
    fn phi_expansion_examples() {
        assert!(phi_expansion(&params(1.0, 0.01, PI / 2.0, 0.8, 2.0)).unwrap().im_phi.abs() < 1e-17);
        let p = params(1.0, 0.01, PI / 3.0, 0.8, 2.0 * PI);
        let e = phi_expansion(&p).unwrap();
        assert!((e.im_phi - 0.01 * 2.0 * PI * 0.8 * 0.5 / 2.0).abs() < 1e-15);
        // sign and size agree with the exact closed form
        let exact = phase_visibility_closed(&p).unwrap().phi.im;
        assert!((exact - e.im_phi).abs() < 1e-2 * e.im_phi.abs(), "{exact} vs {}", e.im_phi);
        assert!(exact > 0.0);
        let tiny = phi_expansion(&params(1.0, 0.01, 0.4, 1e-9, 2.0)).unwrap();
        assert!(tiny.coefficient.abs() < 1e-8);
    }

    #[test]
    fn robustness_orders() {
        let p = params(1.0, 0.0, PI / 3.0, 0.8, 2.0 * PI);
        let gammas = log_spaced(1e-4, 1e-2, 9);
        let phi = robustness_order(&p, Quantity::ImPhi, &gammas).unwrap();
        assert!((phi.slope - 1.0).abs() < 0.1, "{}", phi.slope);
        for q in [Quantity::Omega, Quantity::Gamma] {
            let fit = robustness_order(&p, q, &gammas).unwrap();
            assert!(fit.slope >= 1.9, "{:?} slope {}", q, fit.slope);
        }
        assert!(matches!(robustness_order(&p, Quantity::Omega, &gammas[..5]), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn equator_phase_has_no_signal() {
        let p = params(1.0, 0.0, PI / 2.0, 0.8, 1.0);
        let err = robustness_order(&p, Quantity::ImPhi, &log_spaced(1e-4, 1e-2, 7)).unwrap_err();
        assert!(matches!(err, Error::InsufficientSignal { .. }));
    }

    #[test]
    fn least_squares_recovers_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let (s, c) = least_squares(&xs, &ys);
        assert!((s - 2.5).abs() < 1e-14 && (c + 1.0).abs() < 1e-14);
    }
}
