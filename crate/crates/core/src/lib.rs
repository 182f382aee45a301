//! Numerical laboratory for metastable dynamics of the periodic viscous
//! Burgers equation
//!
//! ```text
//! u_t = ν u_xx − u u_x,   x ∈ [−π, π) periodic.
//! ```
//!
//! The crate provides
//!
//! * [`special_fn`] — overflow-safe special functions and the asymptotic
//!   expansion tables used by the matched eigenfunctions;
//! * [`family`] — the explicit Whitham family `W(x,t; ν,Δx,c)`, its
//!   derivatives, shock profile and conjugation weight;
//! * [`solver`] — a Godunov + explicit-diffusion time stepper with seeded
//!   random Fourier initial data;
//! * [`cole_hopf`] — exact reference solutions via heat-kernel quadrature and
//!   the Laplace-method profile;
//! * [`spectrum`] — discretisations of the frozen-time linearisation about the
//!   family, its self-adjoint conjugate, eigenpairs, zero counts, adjoint
//!   eigenfunctions and the matched-asymptotic eigenfunctions;
//! * [`metastability`] — the projection fit that makes a perturbation
//!   orthogonal to the leading adjoint eigenfunctions, and decay-rate fits;
//! * [`io`] — deterministic CSV export.
//!
//! The closed-form layers are generic over [`Real`] (`f32`/`f64`); the
//! aliases at the crate root fix the scalar type.

// Guards are written as `!(x < bound)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cole_hopf;
pub mod error;
pub mod family;
pub mod fourier;
pub mod grid;
pub mod io;
pub mod metastability;
pub mod quadrature;
pub mod scalar;
pub mod solver;
pub mod special_fn;
pub mod spectrum;

pub use error::{Error, Result};
pub use family::{FamilyParams, ThetaSum};
pub use grid::GridFunction;
pub use scalar::Real;
pub use solver::SimConfig;

/// Double-precision family parameters.
pub type FamilyParams64 = FamilyParams<f64>;
/// Single-precision family parameters.
pub type FamilyParams32 = FamilyParams<f32>;
/// Double-precision grid function.
pub type GridFunction64 = GridFunction<f64>;
/// Single-precision grid function.
pub type GridFunction32 = GridFunction<f32>;
/// Double-precision simulation configuration.
pub type SimConfig64 = SimConfig<f64>;
/// Single-precision simulation configuration.
pub type SimConfig32 = SimConfig<f32>;
