#![allow(dead_code)]

use proptest::prelude::*;
use qdissip::algebra::eig_pairs;
use qdissip::{cplx, Complex64, DensityOperator, GeneralizedDensityOperator, Matrix};

pub fn entry(scale: f64) -> impl Strategy<Value = Complex64> {
    (-scale..scale, -scale..scale).prop_map(|(a, b)| cplx(a, b))
}

pub fn matrix(n: usize, scale: f64) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(entry(scale), n * n).prop_map(move |d| Matrix::from_row_major(n, d))
}

pub fn sized_matrix(dims: std::ops::RangeInclusive<usize>, scale: f64) -> impl Strategy<Value = Matrix> {
    dims.prop_flat_map(move |n| matrix(n, scale))
}

pub fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.05..1.0f64, n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    })
}

pub fn hermitian_part(m: &Matrix) -> Matrix {
    (m + &m.adjoint()).scale(cplx(0.5, 0.0))
}

/// Biorthonormal basis from the eigenvectors of a random matrix.
pub fn density_from(basis_source: &Matrix, w: Vec<f64>) -> Option<DensityOperator> {
    let pairs = eig_pairs(basis_source).ok()?;
    let alphas = pairs.iter().map(|p| p.right.clone()).collect();
    let betas = pairs.iter().map(|p| p.left.clone()).collect();
    GeneralizedDensityOperator::assemble(w, alphas, betas).ok()
}

pub fn hermitian_density_from(basis_source: &Matrix, w: Vec<f64>) -> Option<DensityOperator> {
    let pairs = eig_pairs(&hermitian_part(basis_source)).ok()?;
    let basis = pairs.iter().map(|p| p.right.clone()).collect();
    GeneralizedDensityOperator::hermitian(w, basis).ok()
}

/// A random generalized state together with a random Hamiltonian, both of dimension `n`.
pub fn state_and_hamiltonian(
    dims: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (Matrix, Vec<f64>, Matrix)> {
    dims.prop_flat_map(|n| (matrix(n, 1.0), weights(n), matrix(n, 1.0)))
}

pub fn min_gap(values: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            best = best.min((values[i] - values[j]).abs());
        }
    }
    best
}
