//! Generalized pure and mixed states in a biorthonormal basis and their
//! evolution `rho -> L rho R^†`.

use num_complex::Complex;

use crate::algebra::{eig_pairs, inner, ComplexMatrix, Vector};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Generalized one-dimensional projector `|alpha><beta|` with `<beta|alpha> = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedProjector<T> {
    alpha: Vector<T>,
    beta: Vector<T>,
}

impl<T: Real> GeneralizedProjector<T> {
    pub fn alpha(&self) -> &[Complex<T>] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Complex<T>] {
        &self.beta
    }

    pub fn matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::outer(&self.alpha, &self.beta)
    }
}

/// Rescales `beta` so that `<beta|alpha> = 1`; `alpha` is left untouched.
pub fn binormalize<T: Real>(alpha: &[Complex<T>], beta: &[Complex<T>]) -> Result<GeneralizedProjector<T>> {
    if alpha.len() != beta.len() {
        return Err(Error::DimensionMismatch { expected: alpha.len(), found: beta.len() });
    }
    let overlap = inner(beta, alpha);
    if overlap.norm() < T::of(1e-12) {
        return Err(Error::OrthogonalPair { overlap: overlap.norm().to_f64_lossy() });
    }
    let scale = overlap.conj();
    Ok(GeneralizedProjector { alpha: alpha.to_vec(), beta: beta.iter().map(|&b| b / scale).collect() })
}

/// Validation tolerances for [`GeneralizedDensityOperator`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// `|sum w_k - 1|`
    pub weight_sum: T,
    /// max-entry deviation of `<beta_k|alpha_l>` from `delta_kl` and of
    /// `sum |alpha_k><beta_k|` from the identity
    pub basis: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self { weight_sum: T::of(1e-12), basis: T::of(1e-10) }
    }
}

/// `rho = sum_k w_k |alpha_k><beta_k|` over a complete biorthonormal basis.
///
/// Pairs with zero weight are kept so the basis stays complete.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedDensityOperator<T> {
    weights: Vec<T>,
    alphas: Vec<Vector<T>>,
    betas: Vec<Vector<T>>,
}

impl<T: Real> GeneralizedDensityOperator<T> {
    pub fn assemble(weights: Vec<T>, alphas: Vec<Vector<T>>, betas: Vec<Vector<T>>) -> Result<Self> {
        Self::assemble_with(weights, alphas, betas, Tolerances::default())
    }

    pub fn assemble_with(
        weights: Vec<T>,
        alphas: Vec<Vector<T>>,
        betas: Vec<Vector<T>>,
        tol: Tolerances<T>,
    ) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::BadWeights("no weights given".into()));
        }
        if alphas.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: alphas.len() });
        }
        if betas.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: betas.len() });
        }
        for v in alphas.iter().chain(&betas) {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
            if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::NonFinite("basis vector"));
            }
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < T::zero()) {
            return Err(Error::BadWeights(format!("weight {w} is negative or not finite")));
        }
        let sum = weights.iter().fold(T::zero(), |a, &w| a + w);
        if (sum - T::one()).abs() > tol.weight_sum {
            return Err(Error::BadWeights(format!("weights sum to {sum}, expected 1")));
        }
        let rho = Self { weights, alphas, betas };
        let deviation = rho.biorthonormality_defect().max(rho.completeness_defect());
        if deviation > tol.basis {
            return Err(Error::NotBiorthonormal {
                deviation: deviation.to_f64_lossy(),
                tolerance: tol.basis.to_f64_lossy(),
            });
        }
        Ok(rho)
    }

    /// Ordinary density operator: `beta_k = alpha_k`.
    pub fn hermitian(weights: Vec<T>, basis: Vec<Vector<T>>) -> Result<Self> {
        Self::assemble(weights, basis.clone(), basis)
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn alphas(&self) -> &[Vector<T>] {
        &self.alphas
    }

    pub fn betas(&self) -> &[Vector<T>] {
        &self.betas
    }

    /// `(w_k, |alpha_k>, |beta_k>)` triples.
    pub fn pairs(&self) -> impl Iterator<Item = (T, &Vector<T>, &Vector<T>)> {
        self.weights.iter().copied().zip(self.alphas.iter()).zip(self.betas.iter()).map(|((w, a), b)| (w, a, b))
    }

    pub fn matrix_form(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for (w, a, b) in self.pairs() {
            m = m.add_scaled(&ComplexMatrix::outer(a, b), Complex::new(w, T::zero()));
        }
        m
    }

    /// `max_kl |<beta_k|alpha_l> - delta_kl|`
    pub fn biorthonormality_defect(&self) -> T {
        let mut worst = T::zero();
        for (k, b) in self.betas.iter().enumerate() {
            for (l, a) in self.alphas.iter().enumerate() {
                let expect = if k == l { T::one() } else { T::zero() };
                worst = worst.max((inner(b, a) - Complex::new(expect, T::zero())).norm());
            }
        }
        worst
    }

    /// `|| sum_k |alpha_k><beta_k| - I ||_max`
    pub fn completeness_defect(&self) -> T {
        let n = self.dim();
        let mut sum = ComplexMatrix::zeros(n);
        for (a, b) in self.alphas.iter().zip(&self.betas) {
            sum = &sum + &ComplexMatrix::outer(a, b);
        }
        sum.identity_defect()
    }

    /// Eigen-decomposition of a generalized density matrix.
    ///
    /// Weights are sorted descending; each `alpha_k` has unit norm with its
    /// largest component real positive and `beta_k` is binormalized to it.
    /// `tol` bounds the admissible imaginary part and negativity of the
    /// eigenvalues.
    pub fn decompose(rho: &ComplexMatrix<T>, tol: T) -> Result<Self> {
        let pairs = eig_pairs(rho)?;
        let mut triples = Vec::with_capacity(pairs.len());
        for p in pairs {
            if p.value.im.abs() > tol {
                return Err(Error::ComplexWeights { im: p.value.im.to_f64_lossy() });
            }
            if p.value.re < -tol {
                return Err(Error::NegativeWeight(p.value.re.to_f64_lossy()));
            }
            triples.push((p.value.re.max(T::zero()), p.right, p.left));
        }
        triples.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
        let mut weights = Vec::new();
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        for (w, a, b) in triples {
            weights.push(w);
            alphas.push(a);
            betas.push(b);
        }
        let tols = Tolerances { weight_sum: tol.max(T::of(1e-12)), basis: Tolerances::default().basis };
        Self::assemble_with(weights, alphas, betas, tols)
    }

    /// `rho -> L rho R^†`: `alpha_k <- L alpha_k`, `beta_k <- R beta_k`,
    /// weights unchanged.
    pub fn evolve(&self, left: &ComplexMatrix<T>, right: &ComplexMatrix<T>) -> Result<Self> {
        self.evolve_with_tolerance(left, right, T::of(1e-8))
    }

    pub fn evolve_with_tolerance(
        &self,
        left: &ComplexMatrix<T>,
        right: &ComplexMatrix<T>,
        tolerance: T,
    ) -> Result<Self> {
        let n = self.dim();
        for m in [left, right] {
            if m.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.dim() });
            }
        }
        let defect = (&right.adjoint() * left).identity_defect();
        if !(defect <= tolerance) {
            return Err(Error::BinormalizationBroken {
                defect: defect.to_f64_lossy(),
                tolerance: tolerance.to_f64_lossy(),
            });
        }
        Ok(Self {
            weights: self.weights.clone(),
            alphas: self.alphas.iter().map(|a| left.mul_vec(a)).collect(),
            betas: self.betas.iter().map(|b| right.mul_vec(b)).collect(),
        })
    }

    /// `Tr[A rho] = sum_k w_k <beta_k|A|alpha_k>`.
    pub fn expectation(&self, op: &ComplexMatrix<T>) -> Complex<T> {
        self.pairs().fold(Complex::new(T::zero(), T::zero()), |acc, (w, a, b)| acc + op.sandwich(b, a) * w)
    }
}

pub fn assemble_density<T: Real>(
    weights: Vec<T>,
    alphas: Vec<Vector<T>>,
    betas: Vec<Vector<T>>,
) -> Result<GeneralizedDensityOperator<T>> {
    GeneralizedDensityOperator::assemble(weights, alphas, betas)
}

pub fn decompose_density<T: Real>(rho: &ComplexMatrix<T>, tol: T) -> Result<GeneralizedDensityOperator<T>> {
    GeneralizedDensityOperator::decompose(rho, tol)
}

pub fn evolve_density<T: Real>(
    rho: &GeneralizedDensityOperator<T>,
    left: &ComplexMatrix<T>,
    right: &ComplexMatrix<T>,
) -> Result<GeneralizedDensityOperator<T>> {
    rho.evolve(left, right)
}
