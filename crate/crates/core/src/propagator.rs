//! Left/right propagator pairs for a non-Hermitian Hamiltonian.
//!
//! `i dL/dt = H(t) L` and `i dR/dt = H^†(t) R` with `L(0) = R(0) = I` are
//! integrated together by classical fixed-step RK4. The invariant
//! `R^† L = I` is measured at every sample and never projected back.

use num_complex::Complex;

use crate::algebra::{eig_pairs, mat_exp, spectral_radius, spectral_sum, ComplexMatrix, TimeGrid};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Steps per characteristic period `2 pi / max |lambda(H)|` used by [`default_grid`].
pub const STEPS_PER_PERIOD: usize = 1000;

/// Default bound on `||R^† L - I||_max` enforced by [`evolve`].
pub const DEFAULT_DEFECT_TOLERANCE: f64 = 1e-8;

/// A (possibly time-dependent, possibly non-Hermitian) Hamiltonian.
///
/// Implementations must be deterministic: the same `t` always yields the
/// same matrix.
pub trait Hamiltonian<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    fn at(&self, t: T) -> ComplexMatrix<T>;

    fn is_constant(&self) -> bool {
        false
    }

    fn hermitian_hint(&self) -> bool {
        false
    }
}

/// Time-independent Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantHamiltonian<T> {
    matrix: ComplexMatrix<T>,
    hermitian: bool,
}

impl<T: Real> ConstantHamiltonian<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Self {
        let hermitian = matrix.max_abs_diff(&matrix.adjoint()) == T::zero();
        Self { matrix, hermitian }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }
}

impl<T: Real> Hamiltonian<T> for ConstantHamiltonian<T> {
    fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn at(&self, _t: T) -> ComplexMatrix<T> {
        self.matrix.clone()
    }

    fn is_constant(&self) -> bool {
        true
    }

    fn hermitian_hint(&self) -> bool {
        self.hermitian
    }
}

/// Hamiltonian given by a closure `t -> H(t)`.
pub struct FnHamiltonian<F> {
    dim: usize,
    rule: F,
    hermitian: bool,
}

impl<F> FnHamiltonian<F> {
    pub fn new(dim: usize, rule: F) -> Self {
        Self { dim, rule, hermitian: false }
    }

    /// Marks the rule as always producing Hermitian matrices.
    pub fn hermitian(mut self) -> Self {
        self.hermitian = true;
        self
    }
}

impl<T, F> Hamiltonian<T> for FnHamiltonian<F>
where
    T: Real,
    F: Fn(T) -> ComplexMatrix<T> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn at(&self, t: T) -> ComplexMatrix<T> {
        (self.rule)(t)
    }

    fn hermitian_hint(&self) -> bool {
        self.hermitian
    }
}

impl<T: Real, H: Hamiltonian<T> + ?Sized> Hamiltonian<T> for &H {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn at(&self, t: T) -> ComplexMatrix<T> {
        (**self).at(t)
    }
    fn is_constant(&self) -> bool {
        (**self).is_constant()
    }
    fn hermitian_hint(&self) -> bool {
        (**self).hermitian_hint()
    }
}

/// Sampled solution `(L(t_j), R(t_j))` on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorPair<T> {
    grid: TimeGrid<T>,
    left: Vec<ComplexMatrix<T>>,
    right: Vec<ComplexMatrix<T>>,
}

impl<T: Real> PropagatorPair<T> {
    /// Wraps precomputed samples. `left[0]` and `right[0]` must be the identity.
    pub fn from_samples(grid: TimeGrid<T>, left: Vec<ComplexMatrix<T>>, right: Vec<ComplexMatrix<T>>) -> Result<Self> {
        if left.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: left.len() });
        }
        if right.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), found: right.len() });
        }
        let n = left[0].dim();
        if let Some(m) = left.iter().chain(&right).find(|m| m.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: m.dim() });
        }
        Ok(Self { grid, left, right })
    }

    /// Exact samples `L(t) = exp(-iHt)`, `R(t) = exp(-iH^† t)` for constant `H`.
    pub fn exact(h: &ComplexMatrix<T>, grid: TimeGrid<T>) -> Result<Self> {
        let minus_i = Complex::new(T::zero(), -T::one());
        let (left, right) = match (eig_pairs(h), eig_pairs(&h.adjoint())) {
            (Ok(lp), Ok(rp)) => {
                let left = grid.times().map(|t| spectral_sum(&lp, |l| (minus_i * l * (t - grid.t0())).exp())).collect();
                let right =
                    grid.times().map(|t| spectral_sum(&rp, |l| (minus_i * l * (t - grid.t0())).exp())).collect();
                (left, right)
            }
            _ => {
                let mut left = Vec::with_capacity(grid.len());
                let mut right = Vec::with_capacity(grid.len());
                for t in grid.times() {
                    let (l, r) = evolve_constant(h, t - grid.t0())?;
                    left.push(l);
                    right.push(r);
                }
                (left, right)
            }
        };
        let mut pair = Self { grid, left, right };
        // exact identity at t0
        let n = h.dim();
        pair.left[0] = ComplexMatrix::identity(n);
        pair.right[0] = ComplexMatrix::identity(n);
        Ok(pair)
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.left[0].dim()
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn left(&self, j: usize) -> &ComplexMatrix<T> {
        &self.left[j]
    }

    pub fn right(&self, j: usize) -> &ComplexMatrix<T> {
        &self.right[j]
    }

    pub fn left_samples(&self) -> &[ComplexMatrix<T>] {
        &self.left
    }

    pub fn right_samples(&self) -> &[ComplexMatrix<T>] {
        &self.right
    }

    pub fn final_left(&self) -> &ComplexMatrix<T> {
        self.left.last().expect("non-empty")
    }

    pub fn final_right(&self) -> &ComplexMatrix<T> {
        self.right.last().expect("non-empty")
    }

    /// `||R^†(t_j) L(t_j) - I||_max` per sample.
    pub fn defects(&self) -> Vec<T> {
        self.left.iter().zip(&self.right).map(|(l, r)| (&r.adjoint() * l).identity_defect()).collect()
    }

    pub fn binorm_defect(&self) -> T {
        self.defects().into_iter().fold(T::zero(), T::max)
    }
}

/// Grid over `[t0, t1]` with [`STEPS_PER_PERIOD`] steps per characteristic
/// period of `h`, at least `STEPS_PER_PERIOD` steps in total, and an even
/// step count.
///
/// The spectral radius of a time-dependent `h` is probed at 17 evenly
/// spaced times.
pub fn default_grid<T: Real, H: Hamiltonian<T> + ?Sized>(h: &H, t0: T, t1: T) -> Result<TimeGrid<T>> {
    let probes = if h.is_constant() { 1 } else { 17 };
    let mut radius = T::zero();
    for j in 0..probes {
        let t = if probes == 1 { t0 } else { t0 + (t1 - t0) * T::of(j as f64 / (probes - 1) as f64) };
        radius = radius.max(spectral_radius(&h.at(t))?);
    }
    let periods = (t1 - t0) * radius / (T::PI() + T::PI());
    let wanted = (periods * T::of(STEPS_PER_PERIOD as f64)).ceil().to_usize().unwrap_or(usize::MAX / 4);
    let mut steps = wanted.max(STEPS_PER_PERIOD);
    if steps % 2 == 1 {
        steps += 1;
    }
    TimeGrid::new(t0, t1, steps)
}

/// RK4 solution of both equations of motion, rejecting any sample whose
/// binormalization defect exceeds [`DEFAULT_DEFECT_TOLERANCE`].
pub fn evolve<T: Real, H: Hamiltonian<T> + ?Sized>(h: &H, grid: TimeGrid<T>) -> Result<PropagatorPair<T>> {
    evolve_with_tolerance(h, grid, T::of(DEFAULT_DEFECT_TOLERANCE))
}

pub fn evolve_with_tolerance<T: Real, H: Hamiltonian<T> + ?Sized>(
    h: &H,
    grid: TimeGrid<T>,
    defect_tolerance: T,
) -> Result<PropagatorPair<T>> {
    let pair = integrate_rk4(h, grid)?;
    for (sample, d) in pair.defects().into_iter().enumerate() {
        if !(d <= defect_tolerance) {
            return Err(Error::DefectExceeded {
                sample,
                defect: d.to_f64_lossy(),
                tolerance: defect_tolerance.to_f64_lossy(),
            });
        }
    }
    Ok(pair)
}

/// RK4 integration without the defect check.
pub fn integrate_rk4<T: Real, H: Hamiltonian<T> + ?Sized>(h: &H, grid: TimeGrid<T>) -> Result<PropagatorPair<T>> {
    let n = h.dim();
    let minus_i = Complex::new(T::zero(), -T::one());
    let step = grid.step();
    let half = step * T::of(0.5);
    let c = |x: T| Complex::new(x, T::zero());
    let sixth = step / T::of(6.0);

    let mut left = Vec::with_capacity(grid.len());
    let mut right = Vec::with_capacity(grid.len());
    let mut l = ComplexMatrix::identity(n);
    let mut r = ComplexMatrix::identity(n);
    left.push(l.clone());
    right.push(r.clone());

    let generator = |t: T| -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
        let m = h.at(t);
        if m.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.dim() });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite("Hamiltonian sample"));
        }
        let gl = m.scale(minus_i);
        let gr = m.adjoint().scale(minus_i);
        Ok((gl, gr))
    };

    let (mut g0l, mut g0r) = generator(grid.time(0))?;
    for j in 0..grid.steps() {
        let t = grid.time(j);
        let (gml, gmr) = generator(t + half)?;
        let (g1l, g1r) = generator(grid.time(j + 1))?;

        let k1 = &g0l * &l;
        let k2 = &gml * &l.add_scaled(&k1, c(half));
        let k3 = &gml * &l.add_scaled(&k2, c(half));
        let k4 = &g1l * &l.add_scaled(&k3, c(step));
        let dl = &(&k1 + &k4) + &(&k2 + &k3).scale(c(T::of(2.0)));
        l = l.add_scaled(&dl, c(sixth));

        let m1 = &g0r * &r;
        let m2 = &gmr * &r.add_scaled(&m1, c(half));
        let m3 = &gmr * &r.add_scaled(&m2, c(half));
        let m4 = &g1r * &r.add_scaled(&m3, c(step));
        let dr = &(&m1 + &m4) + &(&m2 + &m3).scale(c(T::of(2.0)));
        r = r.add_scaled(&dr, c(sixth));

        left.push(l.clone());
        right.push(r.clone());
        g0l = g1l;
        g0r = g1r;
    }
    Ok(PropagatorPair { grid, left, right })
}

/// `L = exp(-iHt)`, `R = exp(-iH^† t)`.
pub fn evolve_constant<T: Real>(h: &ComplexMatrix<T>, t: T) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let minus_it = Complex::new(T::zero(), -t);
    let l = mat_exp(&h.scale(minus_it))?;
    let r = mat_exp(&h.adjoint().scale(minus_it))?;
    Ok((l, r))
}

pub fn binorm_defect<T: Real>(pair: &PropagatorPair<T>) -> T {
    pair.binorm_defect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gates::*;
    use crate::scalar::cplx;
    use std::f64::consts::PI;

    type M = ComplexMatrix<f64>;

    fn gate_h(eta: f64, gamma: f64) -> M {
        pauli_z().scale(cplx(eta / 2.0, -gamma / 2.0))
    }

    #[test]
    fn zero_hamiltonian_stays_at_identity() {
        let h = ConstantHamiltonian::new(M::zeros(2));
        let pair = evolve(&h, TimeGrid::new(0.0, 3.0, 10).unwrap()).unwrap();
        for j in 0..pair.len() {
            assert_eq!(pair.left(j), &M::identity(2));
            assert_eq!(pair.right(j), &M::identity(2));
        }
        assert_eq!(binorm_defect(&pair), 0.0);
    }

    #[test]
    fn rk4_matches_closed_form_decay() {
        let h = ConstantHamiltonian::new(gate_h(1.0, 0.1));
        let pair = evolve(&h, TimeGrid::new(0.0, PI, 1000).unwrap()).unwrap();
        let omega = cplx(1.0, -0.1);
        let expect = (cplx(0.0, -1.0) * omega * PI / 2.0).exp();
        assert!((pair.final_left()[(0, 0)] - expect).norm() < 1e-8);
        // e^{-0.05 pi} e^{-i pi/2} = -0.8546 i
        assert!((expect - cplx(0.0, -0.8546)).norm() < 5e-5);
    }

    #[test]
    fn hermitian_pauli_x_half_turn() {
        let hx = pauli_x::<f64>().scale(cplx(0.5, 0.0));
        let h = ConstantHamiltonian::new(hx.clone());
        assert!(h.hermitian_hint());
        let pair = evolve(&h, TimeGrid::new(0.0, PI, 1000).unwrap()).unwrap();
        let expect = pauli_x::<f64>().scale(cplx(0.0, -1.0));
        assert!(pair.final_left().max_abs_diff(&expect) < 1e-10);
        assert!(pair.final_right().max_abs_diff(&expect) < 1e-10);
        let (l, r) = evolve_constant(&hx, PI).unwrap();
        assert!(l.max_abs_diff(&expect) < 1e-14);
        assert_eq!(l, r);
    }

    #[test]
    fn evolve_constant_gate_form() {
        let (eta, gamma, t) = (1.3, 0.2, 2.1);
        let (l, r) = evolve_constant(&gate_h(eta, gamma), t).unwrap();
        let w = cplx(eta, -gamma);
        let i = cplx(0.0, 1.0);
        assert!((l[(0, 0)] - (-i * w * t / 2.0).exp()).norm() < 1e-14);
        assert!((l[(1, 1)] - (i * w * t / 2.0).exp()).norm() < 1e-14);
        assert!((r[(0, 0)] - (-i * w.conj() * t / 2.0).exp()).norm() < 1e-14);
        assert!((r[(1, 1)] - (i * w.conj() * t / 2.0).exp()).norm() < 1e-14);
        assert!((&r.adjoint() * &l).identity_defect() < 1e-14);
    }

    #[test]
    fn evolve_constant_at_zero_time() {
        let (l, r) = evolve_constant(&gate_h(1.0, 0.5), 0.0).unwrap();
        assert_eq!(l, M::identity(2));
        assert_eq!(r, M::identity(2));
    }

    #[test]
    fn exact_pair_has_tiny_defect() {
        let pair = PropagatorPair::exact(&gate_h(1.0, 0.3), TimeGrid::new(0.0, 2.0 * PI, 64).unwrap()).unwrap();
        assert!(pair.binorm_defect() <= 1e-12);
    }

    #[test]
    fn rk4_agrees_with_exact() {
        let hm = M::from_rows(&[
            vec![cplx(0.4, -0.05), cplx(0.3, 0.1), cplx(0.0, 0.0)],
            vec![cplx(0.3, -0.1), cplx(-0.2, -0.1), cplx(0.5, 0.0)],
            vec![cplx(0.0, 0.0), cplx(0.5, 0.0), cplx(0.1, -0.02)],
        ])
        .unwrap();
        let h = ConstantHamiltonian::new(hm.clone());
        let grid = default_grid(&h, 0.0, 5.0).unwrap();
        let rk = evolve(&h, grid).unwrap();
        let ex = PropagatorPair::exact(&hm, grid).unwrap();
        for j in 0..rk.len() {
            assert!(rk.left(j).max_abs_diff(ex.left(j)) < 1e-8);
            assert!(rk.right(j).max_abs_diff(ex.right(j)) < 1e-8);
        }
    }

    #[test]
    fn hermitian_time_dependent_keeps_l_equal_r() {
        let h = FnHamiltonian::new(2, |t: f64| {
            &pauli_x::<f64>().scale(cplx(0.7 * t.cos(), 0.0)) + &pauli_z().scale(cplx(0.4, 0.0))
        })
        .hermitian();
        let pair = evolve(&h, TimeGrid::new(0.0, 4.0, 1000).unwrap()).unwrap();
        for j in 0..pair.len() {
            assert!(pair.left(j).max_abs_diff(pair.right(j)) <= 1e-10);
        }
    }

    #[test]
    fn non_finite_hamiltonian_surfaces() {
        let h = FnHamiltonian::new(1, |t: f64| M::diag(&[cplx(1.0 / (t - 0.5), 0.0)]));
        assert!(evolve(&h, TimeGrid::new(0.0, 1.0, 2).unwrap()).is_err());
    }

    #[test]
    fn undersampled_evolution_trips_defect() {
        let h = ConstantHamiltonian::new(gate_h(50.0, 0.0));
        let err = evolve(&h, TimeGrid::new(0.0, 10.0, 20).unwrap()).unwrap_err();
        assert!(matches!(err, Error::DefectExceeded { .. }));
    }

    #[test]
    fn default_grid_counts_periods() {
        let h = ConstantHamiltonian::new(gate_h(1.0, 0.0));
        // radius 1/2, period 4 pi: 20 pi covers 5 periods
        let g = default_grid(&h, 0.0, 20.0 * PI).unwrap();
        assert_eq!(g.steps(), 5000);
        let short = default_grid(&h, 0.0, 1.0).unwrap();
        assert_eq!(short.steps(), STEPS_PER_PERIOD);
    }
}
