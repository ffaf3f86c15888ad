//! Dense complex linear algebra, eigen-decomposition of non-normal
//! matrices, matrix exponentials and branch-tracked multivalued functions.

pub mod branch;
pub mod eigen;
pub mod grid;
pub mod matrix;
pub mod quadrature;

pub use branch::{
    arctan_k_tan_along, closest_approach_to_origin, continuous_log, continuous_sqrt, principal_arctan, segment, unwind,
    BranchPath, TrackedArctan,
};
pub use eigen::{
    eig_pairs, eigenvalues, mat_exp, mat_exp_series, schur, spectral_radius, spectral_sum, EigenPair, Schur,
};
pub use grid::TimeGrid;
pub use matrix::{adjoint, gates, inner, mat_mul, norm2, trace, ComplexMatrix, Vector};
