//! Frozen-time spectral analysis of the linearisation about the family.
//!
//! * [`operator`] — discretisations of `𝓛` and `𝓛̃`;
//! * [`eigen`] — eigenpairs, zero counts and biorthogonal adjoints;
//! * [`matched`] — matched-asymptotic eigenfunctions and eigenvalue
//!   predictions;
//! * [`tridiagonal`] — cyclic tridiagonal solves used by inverse iteration.

pub mod eigen;
pub mod matched;
pub mod operator;
pub mod tridiagonal;

pub use eigen::{
    adjoint_basis, adjoint_eigenfunction, eigenpairs, sign_normalize, zero_count, AdjointBasis, SpectralResult,
};
pub use matched::{predicted_eigenvalues, MatchedEigenfunction, PredictedEigenvalue};
pub use operator::{assemble, DiscretizationKind, OperatorDiscretization, Which};
