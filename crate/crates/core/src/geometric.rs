//! Gauge classes of propagator pairs, parallel transport and the complex
//! mixed-state geometric phase.
//!
//! With `|alpha_k(t)> = L(t)|alpha_k>` and `|beta_k(t)> = R(t)|beta_k>` the
//! connection integrand is `<beta_k(t)|d/dt alpha_k(t)>`, evaluated from the
//! equation of motion `d/dt alpha_k = -i H L alpha_k`. Gauge functions carry
//! their own analytic time derivatives.

use num_complex::Complex;

use crate::algebra::quadrature::{cumulative_simpson, simpson};
use crate::algebra::{inner, norm2, unwind, ComplexMatrix, TimeGrid, Vector};
use crate::biortho::GeneralizedDensityOperator;
use crate::error::{Error, Result};
use crate::propagator::{Hamiltonian, PropagatorPair};
use crate::scalar::{is_finite_c, Real};

/// Sums below this magnitude in the geometric phase factor are nodal.
pub const NODAL_THRESHOLD: f64 = 1e-12;

/// Allowed departure from `z_k(0) = 1`.
pub const ANCHOR_TOLERANCE: f64 = 1e-12;

/// Return-condition tolerance for [`cyclic_pure_phase`].
pub const CYCLIC_TOLERANCE: f64 = 1e-8;

/// Per-pair factors `z_k(t_j)` and their time derivatives on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFunction<T> {
    values: Vec<Vec<Complex<T>>>,
    derivatives: Vec<Vec<Complex<T>>>,
}

impl<T: Real> GaugeFunction<T> {
    /// `z_k = 1`.
    pub fn identity(pairs: usize, samples: usize) -> Self {
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        Self { values: vec![vec![one; samples]; pairs], derivatives: vec![vec![zero; samples]; pairs] }
    }

    /// Samples `f(k, t) = (z_k(t), dz_k/dt(t))` on `grid`.
    pub fn from_fn(grid: &TimeGrid<T>, pairs: usize, f: impl Fn(usize, T) -> (Complex<T>, Complex<T>)) -> Result<Self> {
        let mut values = Vec::with_capacity(pairs);
        let mut derivatives = Vec::with_capacity(pairs);
        for k in 0..pairs {
            let (v, d): (Vec<_>, Vec<_>) = grid.times().map(|t| f(k, t)).unzip();
            values.push(v);
            derivatives.push(d);
        }
        Self::from_samples(values, derivatives)
    }

    /// Validates precomputed samples indexed `[pair][sample]`.
    pub fn from_samples(values: Vec<Vec<Complex<T>>>, derivatives: Vec<Vec<Complex<T>>>) -> Result<Self> {
        if values.len() != derivatives.len() {
            return Err(Error::DimensionMismatch { expected: values.len(), found: derivatives.len() });
        }
        let samples = values.first().map_or(0, Vec::len);
        for (pair, (v, d)) in values.iter().zip(&derivatives).enumerate() {
            if v.len() != samples || d.len() != samples {
                return Err(Error::DimensionMismatch { expected: samples, found: v.len().min(d.len()) });
            }
            if let Some(sample) = v.iter().position(|z| z.norm() == T::zero() || !is_finite_c(*z)) {
                return Err(Error::ZeroGauge { pair, sample });
            }
            if d.iter().any(|z| !is_finite_c(*z)) {
                return Err(Error::NonFinite("gauge derivative"));
            }
            if samples > 0 && (v[0] - Complex::new(T::one(), T::zero())).norm() > T::of(ANCHOR_TOLERANCE) {
                return Err(Error::GaugeNotAnchored { pair });
            }
        }
        Ok(Self { values, derivatives })
    }

    /// Parallel-transport gauge `z_k(t) = exp(-int_0^t <beta_k|d alpha_k>)`,
    /// with `dz_k/dt = -<beta_k(t)|d alpha_k(t)> z_k(t)`.
    pub fn parallel(conn: &ConnectionIntegral<T>) -> Result<Self> {
        let values: Vec<Vec<Complex<T>>> =
            conn.cumulative.iter().map(|c| c.iter().map(|&x| (-x).exp()).collect()).collect();
        let derivatives =
            values.iter().zip(&conn.integrand).map(|(z, f)| z.iter().zip(f).map(|(&z, &f)| -f * z).collect()).collect();
        Self::from_samples(values, derivatives)
    }

    pub fn pairs(&self) -> usize {
        self.values.len()
    }

    pub fn len(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, k: usize, j: usize) -> Complex<T> {
        self.values[k][j]
    }

    pub fn derivative(&self, k: usize, j: usize) -> Complex<T> {
        self.derivatives[k][j]
    }

    fn check_against(&self, pair: &PropagatorPair<T>, rho: &GeneralizedDensityOperator<T>) -> Result<()> {
        if self.pairs() != rho.dim() {
            return Err(Error::DimensionMismatch { expected: rho.dim(), found: self.pairs() });
        }
        if self.len() != pair.len() {
            return Err(Error::DimensionMismatch { expected: pair.len(), found: self.len() });
        }
        Ok(())
    }

    /// `(sum z_k |alpha_k><beta_k|, sum dz_k |alpha_k><beta_k|, sum (1/z_k^*) |beta_k><alpha_k|)` at sample `j`.
    fn operators(&self, rho: &GeneralizedDensityOperator<T>, j: usize) -> [ComplexMatrix<T>; 3] {
        let n = rho.dim();
        let one = Complex::new(T::one(), T::zero());
        let mut z = ComplexMatrix::zeros(n);
        let mut dz = ComplexMatrix::zeros(n);
        let mut w = ComplexMatrix::zeros(n);
        for (k, (a, b)) in rho.alphas().iter().zip(rho.betas()).enumerate() {
            let ab = ComplexMatrix::outer(a, b);
            z = z.add_scaled(&ab, self.values[k][j]);
            dz = dz.add_scaled(&ab, self.derivatives[k][j]);
            w = w.add_scaled(&ComplexMatrix::outer(b, a), one / self.values[k][j].conj());
        }
        [z, dz, w]
    }
}

/// Connection integrand, running integral and total per eigenpair,
/// indexed `[pair][sample]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionIntegral<T> {
    pub integrand: Vec<Vec<Complex<T>>>,
    pub cumulative: Vec<Vec<Complex<T>>>,
    pub totals: Vec<Complex<T>>,
}

impl<T: Real> ConnectionIntegral<T> {
    fn from_integrand(integrand: Vec<Vec<Complex<T>>>, h: T) -> Result<Self> {
        let mut totals = Vec::with_capacity(integrand.len());
        let mut cumulative = Vec::with_capacity(integrand.len());
        for f in &integrand {
            totals.push(simpson(f, h)?);
            cumulative.push(cumulative_simpson(f, h));
        }
        Ok(Self { integrand, cumulative, totals })
    }
}

/// `L~ = L sum z_k |alpha_k><beta_k|`, `R~ = R sum (1/z_k^*) |beta_k><alpha_k|`.
pub fn gauge_transform<T: Real>(
    pair: &PropagatorPair<T>,
    rho: &GeneralizedDensityOperator<T>,
    g: &GaugeFunction<T>,
) -> Result<PropagatorPair<T>> {
    g.check_against(pair, rho)?;
    let mut left = Vec::with_capacity(pair.len());
    let mut right = Vec::with_capacity(pair.len());
    for j in 0..pair.len() {
        let [z, _, w] = g.operators(rho, j);
        left.push(pair.left(j) * &z);
        right.push(pair.right(j) * &w);
    }
    PropagatorPair::from_samples(*pair.grid(), left, right)
}

fn hamiltonian_at<T: Real, H: Hamiltonian<T> + ?Sized>(h: &H, t: T, n: usize) -> Result<ComplexMatrix<T>> {
    let m = h.at(t);
    if m.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.dim() });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("Hamiltonian sample"));
    }
    Ok(m)
}

fn check_dims<T: Real>(pair: &PropagatorPair<T>, rho: &GeneralizedDensityOperator<T>) -> Result<()> {
    if pair.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: pair.dim() });
    }
    Ok(())
}

/// `c_k = int <beta_k| R^†(t) (-i H(t)) L(t) |alpha_k> dt` by composite Simpson.
pub fn connection<T: Real, H: Hamiltonian<T> + ?Sized>(
    pair: &PropagatorPair<T>,
    rho: &GeneralizedDensityOperator<T>,
    h: &H,
) -> Result<ConnectionIntegral<T>> {
    check_dims(pair, rho)?;
    let n = rho.dim();
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut integrand = vec![Vec::with_capacity(pair.len()); n];
    for (j, t) in pair.grid().times().enumerate() {
        let generator = hamiltonian_at(h, t, n)?.scale(minus_i);
        let velocity = &generator * pair.left(j);
        for (k, (a, b)) in rho.alphas().iter().zip(rho.betas()).enumerate() {
            integrand[k].push(inner(&pair.right(j).mul_vec(b), &velocity.mul_vec(a)));
        }
    }
    ConnectionIntegral::from_integrand(integrand, pair.grid().step())
}

/// Connection of the gauge-transformed pair, `<beta_k| R~^† dL~/dt |alpha_k>`
/// with `dL~/dt = -i H L~ + L sum dz_k |alpha_k><beta_k|`.
pub fn connection_in_gauge<T: Real, H: Hamiltonian<T> + ?Sized>(
    pair: &PropagatorPair<T>,
    rho: &GeneralizedDensityOperator<T>,
    h: &H,
    g: &GaugeFunction<T>,
) -> Result<ConnectionIntegral<T>> {
    check_dims(pair, rho)?;
    g.check_against(pair, rho)?;
    let n = rho.dim();
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut integrand = vec![Vec::with_capacity(pair.len()); n];
    for (j, t) in pair.grid().times().enumerate() {
        let generator = hamiltonian_at(h, t, n)?.scale(minus_i);
        let [z, dz, w] = g.operators(rho, j);
        let lt = pair.left(j) * &z;
        let rt = pair.right(j) * &w;
        let velocity = &(&generator * &lt) + &(pair.left(j) * &dz);
        let pulled = &rt.adjoint() * &velocity;
        for (k, (a, b)) in rho.alphas().iter().zip(rho.betas()).enumerate() {
            integrand[k].push(pulled.sandwich(b, a));
        }
    }
    ConnectionIntegral::from_integrand(integrand, pair.grid().step())
}

/// `z_k = e^{-c_k}`.
pub fn parallel_factors<T: Real>(conn: &ConnectionIntegral<T>) -> Vec<Complex<T>> {
    conn.totals.iter().map(|&c| (-c).exp()).collect()
}

/// Largest `|<beta_k| R~^† dL~/dt |alpha_k>|` over the grid and all pairs.
pub fn parallel_defect<T: Real, H: Hamiltonian<T> + ?Sized>(
    pair: &PropagatorPair<T>,
    rho: &GeneralizedDensityOperator<T>,
    g: &GaugeFunction<T>,
    h: &H,
) -> Result<T> {
    let conn = connection_in_gauge(pair, rho, h, g)?;
    Ok(conn.integrand.iter().flatten().fold(T::zero(), |m, z| m.max(z.norm())))
}

/// Numerator and denominator sums of the geometric phase factor at each sample.
fn phase_sums<T: Real>(
    pair: &PropagatorPair<T>,
    rho: &GeneralizedDensityOperator<T>,
    conn: &ConnectionIntegral<T>,
) -> Result<Vec<(Complex<T>, Complex<T>)>> {
    check_dims(pair, rho)?;
    if conn.cumulative.len() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: conn.cumulative.len() });
    }
    if conn.cumulative.iter().any(|c| c.len() != pair.len()) {
        return Err(Error::DimensionMismatch { expected: pair.len(), found: conn.cumulative[0].len() });
    }
    let zero = Complex::new(T::zero(), T::zero());
    let floor = T::of(NODAL_THRESHOLD);
    let mut out = Vec::with_capacity(pair.len());
    for j in 0..pair.len() {
        let (mut num, mut den) = (zero, zero);
        for (k, (w, a, b)) in rho.pairs().enumerate() {
            let c = conn.cumulative[k][j];
            num = num + inner(b, &pair.left(j).mul_vec(a)) * (-c).exp() * w;
            den = den + inner(&pair.right(j).mul_vec(b), a) * c.exp() * w;
        }
        let magnitude = num.norm().min(den.norm());
        if !(magnitude >= floor) {
            return Err(Error::NodalPoint { sample: j, magnitude: magnitude.to_f64_lossy() });
        }
        out.push((num, den));
    }
    Ok(out)
}

/// `Gamma(t_j)` along the grid with
/// `e^{i Gamma} = sqrt( sum w_k <beta_k|L|alpha_k> e^{-c_k} / sum w_k <beta_k|R^†|alpha_k> e^{c_k} )`,
/// the square root continued from `Gamma = 0` at the first sample.
pub fn geometric_phase_path<T: Real>(
    pair: &PropagatorPair<T>,
    rho: &GeneralizedDensityOperator<T>,
    conn: &ConnectionIntegral<T>,
) -> Result<Vec<Complex<T>>> {
    let sums = phase_sums(pair, rho, conn)?;
    let ratios: Vec<Complex<T>> = sums.iter().map(|&(n, d)| n / d).collect();
    let half = T::of(0.5);
    let i = Complex::new(T::zero(), T::one());
    Ok(unwind(&ratios)?.log().into_iter().map(|l| -i * l * half).collect())
}

/// Geometric phase `Gamma` at the end of the grid.
pub fn geometric_phase<T: Real>(
    pair: &PropagatorPair<T>,
    rho: &GeneralizedDensityOperator<T>,
    conn: &ConnectionIntegral<T>,
) -> Result<Complex<T>> {
    Ok(*geometric_phase_path(pair, rho, conn)?.last().expect("grid has at least two samples"))
}

/// Both pure cyclic forms of the geometric phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclicPhase<T> {
    /// Return phase: `L(tau)|alpha> = e^{i zeta}|alpha>`.
    pub zeta: Complex<T>,
    /// `int <beta(t)|d alpha(t)> dt`.
    pub connection: Complex<T>,
    /// `Gamma` from `e^{i Gamma} = e^{i zeta} e^{-connection}`.
    pub gamma: Complex<T>,
    /// `Gamma = i int <beta~|d alpha~> dt` after rephasing with `f(t) = zeta t / tau`.
    pub gamma_rephased: Complex<T>,
}

impl<T: Real> CyclicPhase<T> {
    /// `|e^{i Gamma} - e^{i Gamma_rephased}|`.
    pub fn form_mismatch(&self) -> T {
        let i = Complex::new(T::zero(), T::one());
        ((i * self.gamma).exp() - (i * self.gamma_rephased).exp()).norm()
    }
}

/// Complex geometric phase of a pure cyclic state `|alpha><beta|`.
///
/// `zeta` is the continuous logarithm of `<beta|L(t)|alpha>` along the
/// grid, so it carries the full winding rather than a principal value.
pub fn cyclic_pure_phase<T: Real, H: Hamiltonian<T> + ?Sized>(
    pair: &PropagatorPair<T>,
    h: &H,
    alpha: &[Complex<T>],
    beta: &[Complex<T>],
) -> Result<CyclicPhase<T>> {
    let n = pair.dim();
    for v in [alpha, beta] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
    }
    let one = Complex::new(T::one(), T::zero());
    let overlap = inner(beta, alpha);
    if (overlap - one).norm() > T::of(1e-10) {
        return Err(Error::NotBiorthonormal { deviation: (overlap - one).norm().to_f64_lossy(), tolerance: 1e-10 });
    }
    let i = Complex::new(T::zero(), T::one());
    let minus_i = -i;

    let mut returns = Vec::with_capacity(pair.len());
    let mut plain = Vec::with_capacity(pair.len());
    let mut norms = Vec::with_capacity(pair.len());
    for (j, t) in pair.grid().times().enumerate() {
        let a_t = pair.left(j).mul_vec(alpha);
        let b_t = pair.right(j).mul_vec(beta);
        let generator = hamiltonian_at(h, t, n)?.scale(minus_i);
        returns.push(inner(beta, &a_t));
        plain.push(inner(&b_t, &generator.mul_vec(&a_t)));
        norms.push(inner(&b_t, &a_t));
    }
    let log_return = *unwind(&returns)?.log().last().expect("non-empty grid");
    let zeta = minus_i * log_return;
    let e_zeta = log_return.exp();

    let a_end = pair.final_left().mul_vec(alpha);
    let b_end = pair.final_right().mul_vec(beta);
    let res_l = norm2(&sub(&a_end, &scaled(alpha, e_zeta))) / norm2(alpha);
    let res_r = norm2(&sub(&b_end, &scaled(beta, (one / e_zeta).conj()))) / norm2(beta);
    let residual = res_l.max(res_r);
    if !(residual <= T::of(CYCLIC_TOLERANCE)) {
        return Err(Error::NotCyclic { residual: residual.to_f64_lossy() });
    }

    let h_step = pair.grid().step();
    let connection = simpson(&plain, h_step)?;
    let gamma = zeta + i * connection;

    let duration = pair.grid().t1() - pair.grid().t0();
    let f_dot = zeta / duration;
    let rephased: Vec<Complex<T>> = plain.iter().zip(&norms).map(|(&p, &s)| minus_i * f_dot * s + p).collect();
    let gamma_rephased = i * simpson(&rephased, h_step)?;

    Ok(CyclicPhase { zeta, connection, gamma, gamma_rephased })
}

fn scaled<T: Real>(v: &[Complex<T>], s: Complex<T>) -> Vector<T> {
    v.iter().map(|&x| x * s).collect()
}

fn sub<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vector<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gates::pauli_z;
    use crate::propagator::ConstantHamiltonian;
    use crate::scalar::cplx;
    use std::f64::consts::PI;

    type M = ComplexMatrix<f64>;

    fn gate_h(eta: f64, gamma: f64) -> ConstantHamiltonian<f64> {
        ConstantHamiltonian::new(pauli_z::<f64>().scale(cplx(eta / 2.0, -gamma / 2.0)))
    }

    fn tilted(theta: f64, r: f64) -> GeneralizedDensityOperator<f64> {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let plus = vec![cplx(c, 0.0), cplx(s, 0.0)];
        let minus = vec![cplx(-s, 0.0), cplx(c, 0.0)];
        GeneralizedDensityOperator::hermitian(vec![(1.0 + r) / 2.0, (1.0 - r) / 2.0], vec![plus, minus]).unwrap()
    }

    fn exact(eta: f64, gamma: f64, tau: f64, steps: usize) -> PropagatorPair<f64> {
        PropagatorPair::exact(gate_h(eta, gamma).matrix(), TimeGrid::new(0.0, tau, steps).unwrap()).unwrap()
    }

    #[test]
    fn zero_hamiltonian_has_zero_connection() {
        let h = ConstantHamiltonian::new(M::zeros(2));
        let pair = exact(0.0, 0.0, 2.0, 8);
        let conn = connection(&pair, &tilted(0.4, 0.6), &h).unwrap();
        assert!(conn.totals.iter().all(|c| c.norm() == 0.0));
        assert_eq!(parallel_factors(&conn), vec![cplx(1.0, 0.0); 2]);
        let g = GaugeFunction::identity(2, pair.len());
        assert_eq!(parallel_defect(&pair, &tilted(0.4, 0.6), &g, &h).unwrap(), 0.0);
    }

    #[test]
    fn gate_connection_matches_analytic() {
        let (eta, gamma, theta, tau) = (1.0, 0.2, PI / 3.0, 2.0 * PI);
        let pair = exact(eta, gamma, tau, 512);
        let conn = connection(&pair, &tilted(theta, 0.8), &gate_h(eta, gamma)).unwrap();
        let w = cplx(eta, -gamma);
        let expect = cplx(0.0, -1.0) * w * tau * theta.cos() / 2.0;
        assert!((conn.totals[0] - expect).norm() < 1e-10);
        assert!((conn.totals[1] + expect).norm() < 1e-10);
    }

    #[test]
    fn parallel_factor_examples() {
        let pair = exact(1.0, 0.0, 2.0 * PI, 256);
        let conn = connection(&pair, &tilted(PI / 3.0, 0.8), &gate_h(1.0, 0.0)).unwrap();
        assert!((parallel_factors(&conn)[0] - cplx(0.0, 1.0)).norm() < 1e-12);
        let c = ConnectionIntegral { integrand: vec![], cumulative: vec![], totals: vec![cplx(2f64.ln(), 0.0)] };
        assert!((parallel_factors(&c)[0] - cplx(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn unparallel_baseline_has_connection() {
        let (eta, gamma, theta) = (1.0, 0.1, PI / 3.0);
        let pair = exact(eta, gamma, 1.0, 16);
        let rho = tilted(theta, 0.8);
        let g = GaugeFunction::identity(2, pair.len());
        let d = parallel_defect(&pair, &rho, &g, &gate_h(eta, gamma)).unwrap();
        let expect = cplx(eta, -gamma).norm() * theta.cos() / 2.0;
        assert!((d - expect).abs() < 1e-12);
    }

    #[test]
    fn parallel_gauge_annihilates_connection() {
        let h = gate_h(1.0, 0.1);
        let pair = exact(1.0, 0.1, 2.0 * PI, 512);
        let rho = tilted(PI / 3.0, 0.8);
        let conn = connection(&pair, &rho, &h).unwrap();
        let g = GaugeFunction::parallel(&conn).unwrap();
        assert!(parallel_defect(&pair, &rho, &g, &h).unwrap() <= 1e-8);
    }

    #[test]
    fn gauge_validation() {
        let grid = TimeGrid::new(0.0, 1.0, 4).unwrap();
        let unanchored = GaugeFunction::from_fn(&grid, 1, |_, t| (cplx(2.0 + t, 0.0), cplx(1.0, 0.0)));
        assert_eq!(unanchored, Err(Error::GaugeNotAnchored { pair: 0 }));
        let vanishing = GaugeFunction::from_fn(&grid, 1, |_, t| (cplx(1.0 - t, 0.0), cplx(-1.0, 0.0)));
        assert_eq!(vanishing, Err(Error::ZeroGauge { pair: 0, sample: 4 }));
    }

    #[test]
    fn gauge_preserves_states_and_phase() {
        let h = gate_h(1.0, 0.15);
        let pair = exact(1.0, 0.15, 5.0, 1000);
        let rho = tilted(1.1, 0.7);
        let s = cplx(0.3, 0.2);
        let g = GaugeFunction::from_fn(pair.grid(), 2, |_, t| ((s * t).exp(), s * (s * t).exp())).unwrap();
        let gauged = gauge_transform(&pair, &rho, &g).unwrap();
        assert!(gauged.final_left().max_abs_diff(pair.final_left()) > 0.1);
        assert!(gauged.binorm_defect() < 1e-12);
        for j in (0..pair.len()).step_by(97) {
            let a = rho.evolve(pair.left(j), pair.right(j)).unwrap().matrix_form();
            let b = rho.evolve(gauged.left(j), gauged.right(j)).unwrap().matrix_form();
            assert!(a.max_abs_diff(&b) < 1e-10);
        }
        let base = geometric_phase(&pair, &rho, &connection(&pair, &rho, &h).unwrap()).unwrap();
        let other = geometric_phase(&gauged, &rho, &connection_in_gauge(&pair, &rho, &h, &g).unwrap()).unwrap();
        let i = cplx(0.0, 1.0);
        assert!(((i * base).exp() - (i * other).exp()).norm() < 1e-8);
    }

    #[test]
    fn identity_gauge_is_a_no_op() {
        let pair = exact(1.0, 0.1, 1.0, 8);
        let rho = tilted(0.5, 0.5);
        let same = gauge_transform(&pair, &rho, &GaugeFunction::identity(2, pair.len())).unwrap();
        for j in 0..pair.len() {
            assert!(same.left(j).max_abs_diff(pair.left(j)) < 1e-15);
            assert!(same.right(j).max_abs_diff(pair.right(j)) < 1e-15);
        }
    }

    #[test]
    fn phase_vanishes_at_start() {
        let pair = exact(1.0, 0.1, 1.0, 8);
        let rho = tilted(0.5, 0.5);
        let path = geometric_phase_path(&pair, &rho, &connection(&pair, &rho, &gate_h(1.0, 0.1)).unwrap()).unwrap();
        assert_eq!(path[0], cplx(0.0, 0.0));
    }

    #[test]
    fn hermitian_mixed_phase_is_real_and_matches_unitary_form() {
        let (theta, r, tau) = (PI / 3.0, 0.8, 2.0 * PI);
        let h = gate_h(1.0, 0.0);
        let pair = exact(1.0, 0.0, tau, 1024);
        let rho = tilted(theta, r);
        let conn = connection(&pair, &rho, &h).unwrap();
        let g = geometric_phase(&pair, &rho, &conn).unwrap();
        assert!(g.im.abs() < 1e-9);
        // unitary oracle: Gamma = arg sum_k w_k <a_k|U|a_k> e^{-c_k}
        let u = pair.final_left();
        let sum = rho
            .pairs()
            .enumerate()
            .fold(cplx(0.0, 0.0), |acc, (k, (w, a, _))| acc + inner(a, &u.mul_vec(a)) * (-conn.totals[k]).exp() * w);
        let i = cplx(0.0, 1.0);
        assert!(((i * g).exp() - sum / sum.norm()).norm() < 1e-9);
        // closed form for this case: -arctan(r tan(pi/2)) continued = -pi/2
        assert!((g.re + PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn cyclic_pole_state() {
        let h = gate_h(1.0, 0.0);
        let pair = exact(1.0, 0.0, 2.0 * PI, 512);
        let g = [cplx(1.0, 0.0), cplx(0.0, 0.0)];
        let c = cyclic_pure_phase(&pair, &h, &g, &g).unwrap();
        assert!((c.zeta - cplx(-PI, 0.0)).norm() < 1e-12);
        assert!((c.connection - cplx(0.0, -PI)).norm() < 1e-12);
        assert!(c.gamma.norm() < 1e-12);
        assert!(c.form_mismatch() < 1e-9);
    }

    #[test]
    fn cyclic_decaying_pole_state() {
        let (eta, gamma, tau) = (1.0, 0.1, 3.0);
        let h = gate_h(eta, gamma);
        let pair = exact(eta, gamma, tau, 512);
        let g = [cplx(1.0, 0.0), cplx(0.0, 0.0)];
        let c = cyclic_pure_phase(&pair, &h, &g, &g).unwrap();
        assert!((c.zeta + cplx(eta, -gamma) * tau / 2.0).norm() < 1e-12);
        assert!(c.gamma.norm() < 1e-10);
        assert!(c.gamma_rephased.norm() < 1e-10);
    }

    #[test]
    fn cyclic_zero_hamiltonian() {
        let h = ConstantHamiltonian::new(M::zeros(2));
        let pair = exact(0.0, 0.0, 4.0, 8);
        let a = [cplx(0.6, 0.0), cplx(0.0, 0.8)];
        let c = cyclic_pure_phase(&pair, &h, &a, &a).unwrap();
        assert_eq!(c.zeta, cplx(0.0, 0.0));
        assert_eq!(c.gamma, cplx(0.0, 0.0));
    }

    #[test]
    fn non_cyclic_state_rejected() {
        let h = gate_h(1.0, 0.0);
        let pair = exact(1.0, 0.0, 1.0, 64);
        let s = 0.5f64.sqrt();
        let a = [cplx(s, 0.0), cplx(s, 0.0)];
        assert!(matches!(cyclic_pure_phase(&pair, &h, &a, &a), Err(Error::NotCyclic { .. })));
    }

    #[test]
    fn tilted_pure_state_full_period() {
        let theta: f64 = 1.0;
        let h = gate_h(1.0, 0.0);
        let pair = exact(1.0, 0.0, 2.0 * PI, 1024);
        let a = [cplx((theta / 2.0).cos(), 0.0), cplx((theta / 2.0).sin(), 0.0)];
        let c = cyclic_pure_phase(&pair, &h, &a, &a).unwrap();
        assert!((c.gamma - cplx(-PI * (1.0 - theta.cos()), 0.0)).norm() < 1e-8);
    }
}
