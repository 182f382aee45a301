//! Periodic grid functions on `[−π, π)`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Samples `u_j = u(x_j)` of a 2π-periodic function at `x_j = −π + j·h`,
/// `h = 2π/M`, `j = 0, …, M−1`.
///
/// `M` is even and at least 16; all values are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<S: Real = f64> {
    values: Vec<S>,
}

/// Smallest admissible grid.
pub const MIN_GRID: usize = 16;

/// Checks that `m` is an admissible grid size.
pub fn validate_grid_size(m: usize) -> Result<()> {
    if m < MIN_GRID || !m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "grid size must be even and >= {MIN_GRID}, got {m}"
        )));
    }
    Ok(())
}

/// Reduces `x` modulo 2π into `[−π, π)`.
pub fn reduce_angle<S: Real>(x: S) -> S {
    let two_pi = S::c(2.0) * S::PI();
    let r = x - two_pi * ((x + S::PI()) / two_pi).floor();
    // Guard against r == π after rounding.
    if r >= S::PI() {
        r - two_pi
    } else {
        r
    }
}

impl<S: Real> GridFunction<S> {
    /// Wraps samples after validating size and finiteness.
    pub fn new(values: Vec<S>) -> Result<Self> {
        validate_grid_size(values.len())?;
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite grid value at index {j}")));
        }
        Ok(Self { values })
    }

    /// Samples `f` on an `m`-point grid.
    pub fn from_fn(m: usize, mut f: impl FnMut(S) -> S) -> Result<Self> {
        validate_grid_size(m)?;
        let values = (0..m).map(|j| f(node::<S>(m, j))).collect();
        Self::new(values)
    }

    /// Constant function.
    pub fn constant(m: usize, c: S) -> Result<Self> {
        Self::from_fn(m, |_| c)
    }

    /// Number of samples `M`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always `false` (grids have at least 16 points); provided for API
    /// completeness.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Spacing `h = 2π/M`.
    pub fn spacing(&self) -> S {
        S::c(2.0) * S::PI() / S::from_usize_lossy(self.len())
    }

    /// Left end of the period, `−π`.
    pub fn origin(&self) -> S {
        -S::PI()
    }

    /// Node `x_j`.
    pub fn x(&self, j: usize) -> S {
        node(self.len(), j)
    }

    /// All nodes.
    pub fn nodes(&self) -> Vec<S> {
        (0..self.len()).map(|j| self.x(j)).collect()
    }

    /// Sample values.
    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// Consumes the grid function, returning its samples.
    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    /// Trapezoid (spectrally accurate for periodic data) integral over one
    /// period.
    pub fn integral(&self) -> S {
        self.values.iter().fold(S::zero(), |a, &v| a + v) * self.spacing()
    }

    /// Mean over one period.
    pub fn mean(&self) -> S {
        self.values.iter().fold(S::zero(), |a, &v| a + v) / S::from_usize_lossy(self.len())
    }

    /// Discrete `L²` inner product `h Σ a_j b_j`.
    pub fn inner(&self, other: &Self) -> S {
        assert_eq!(self.len(), other.len(), "grid size mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .fold(S::zero(), |a, (&x, &y)| a + x * y)
            * self.spacing()
    }

    /// Discrete `L²` norm.
    pub fn l2_norm(&self) -> S {
        self.inner(self).sqrt()
    }

    /// `max_j |u_j|`.
    pub fn max_abs(&self) -> S {
        self.values.iter().fold(S::zero(), |a, &v| a.max(v.abs()))
    }

    /// Pointwise difference `self − other`.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "grid size mismatch");
        Self { values: self.values.iter().zip(&other.values).map(|(&a, &b)| a - b).collect() }
    }

    /// Pointwise `self + s·other`.
    pub fn add_scaled(&self, s: S, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "grid size mismatch");
        Self { values: self.values.iter().zip(&other.values).map(|(&a, &b)| a + s * b).collect() }
    }

    /// Pointwise scaling.
    pub fn scale(&self, s: S) -> Self {
        Self { values: self.values.iter().map(|&a| a * s).collect() }
    }

    /// Cyclic shift by `k` nodes: the result samples `u(x − k h)`.
    pub fn shift_nodes(&self, k: isize) -> Self {
        let m = self.len() as isize;
        let values = (0..m)
            .map(|j| self.values[((j - k).rem_euclid(m)) as usize])
            .collect();
        Self { values }
    }

    /// The same samples with the mean removed.
    pub fn zero_mean(&self) -> Self {
        let mu = self.mean();
        Self { values: self.values.iter().map(|&v| v - mu).collect() }
    }
}

/// Node `x_j = −π + j·2π/m`.
pub fn node<S: Real>(m: usize, j: usize) -> S {
    -S::PI() + S::c(2.0) * S::PI() * S::from_usize_lossy(j) / S::from_usize_lossy(m)
}
