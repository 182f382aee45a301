//! Floating-point abstraction for the scalar-generic parts of the crate.
//!
//! The closed-form pieces (special functions, the Whitham family, grid
//! functions and the Godunov time stepper) are written once against
//! [`Real`] and instantiated for `f32` and `f64`.  The spectral, quadrature
//! and fitting layers rely on dense linear algebra and FFTs in double
//! precision and are therefore `f64`-only.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::Debug;

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Converts an `f64` literal; exact for `f64`, rounded for `f32`.
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Converts a count or index.
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    /// Unit roundoff of the type.
    fn unit_roundoff() -> Self {
        Self::epsilon() * Self::c(0.5)
    }
}

impl Real for f32 {}
impl Real for f64 {}
