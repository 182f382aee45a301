//! Discretisations of the frozen-time linearisation about a family member.
//!
//! The operator `𝓛φ = νφ'' − (W₀φ)'` and its conjugate
//! `𝓛̃ = 𝓣⁻¹𝓛𝓣 = ν∂ₓₓ − V`, `V = ½[W₀' + W₀²/(2ν)]`, `𝓣 = 1/ψ^W`, are sampled
//! in the frame of the layer: node `x_j` carries the coefficients at
//! `y_j = x_j − (Δx + c t)`, so eigenfunctions come out as functions of the
//! laboratory coordinate of the family member `W(·, t; ν, Δx, c)`.
//!
//! Three discretisations are offered.
//!
//! * [`DiscretizationKind::GroundStateFiniteVolume`] (default) writes
//!   `𝓛φ = ν(φ₀(φ/φ₀)')'` with the exact zero mode `φ₀ = 𝓣²` and uses the
//!   geometric mean `𝓣_j𝓣_{j+1}` as the face value of `φ₀`:
//!   `(𝓛φ)_j = (ν/h²)[(𝓣_j/𝓣_{j+1})φ_{j+1} + (𝓣_j/𝓣_{j−1})φ_{j−1} − (r⁺_j + r⁻_j)φ_j]`,
//!   `r^±_j = 𝓣_{j±1}/𝓣_j`.  The zero mode is exact on every grid, the
//!   column sums vanish (discrete mean conservation), and
//!   `𝓣⁻¹𝓛𝓣 = 𝓛̃` holds entry by entry, with `𝓛̃` symmetric.  All ratios are
//!   formed from `ln 𝓣`, so nothing overflows even when `𝓣` spans
//!   `e^{±π²/ε²}`.  It is second-order accurate on the slow scale `ε` and
//!   needs `M ε ≥ 8π`.
//! * [`DiscretizationKind::FourierPseudospectral`] and
//!   [`DiscretizationKind::FiniteDifference4th`] differentiate the explicit
//!   coefficients; they must resolve the layer width `ε²` and need
//!   `M ε² ≥ 8π`.

use nalgebra::DMatrix;

use super::tridiagonal::CyclicTridiagonal;
use crate::error::{Error, Result};
use crate::family::{conjugate_potential, log_conjugation_weight, w0, FamilyParams};
use crate::grid::{node, validate_grid_size, GridFunction};

/// Smallest grid accepted by [`assemble`].
pub const MIN_OPERATOR_GRID: usize = 64;

/// Points per `2π`-scaled resolution unit demanded by the guards.
const RESOLUTION_FACTOR: f64 = 8.0 * std::f64::consts::PI;

/// How derivatives are discretised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DiscretizationKind {
    /// Flux form about the exact zero mode (see the module docs).
    #[default]
    GroundStateFiniteVolume,
    /// Fourier collocation.
    FourierPseudospectral,
    /// Fourth-order centred finite differences.
    FiniteDifference4th,
}

impl DiscretizationKind {
    /// Short name used in files and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Self::GroundStateFiniteVolume => "ground-state",
            Self::FourierPseudospectral => "fourier",
            Self::FiniteDifference4th => "fd4",
        }
    }

    /// Inverse of [`Self::name`].
    pub fn from_name(s: &str) -> Option<Self> {
        [Self::GroundStateFiniteVolume, Self::FourierPseudospectral, Self::FiniteDifference4th]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

/// Which operator is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    /// `𝓛φ = νφ'' − (W₀φ)'`.
    L,
    /// `𝓛̃ = ν∂ₓₓ − V`.
    LTilde,
}

/// An assembled operator.
#[derive(Debug, Clone)]
pub struct OperatorDiscretization {
    /// Grid size.
    pub m: usize,
    /// Discretisation.
    pub kind: DiscretizationKind,
    /// Family member linearised about.
    pub p: FamilyParams,
    /// Operator.
    pub which: Which,
    /// Dense matrix.
    pub matrix: DMatrix<f64>,
    /// `ln 𝓣` at the (frame-shifted) nodes.
    pub log_weight: Vec<f64>,
    /// Cyclic tridiagonal form (ground-state kind only).
    pub tridiagonal: Option<CyclicTridiagonal>,
}

/// Frame-shifted sample points `y_j = x_j − (Δx + ct)`.
pub fn frame_nodes(m: usize, p: &FamilyParams) -> Vec<f64> {
    let s = p.frame_shift();
    (0..m).map(|j| node::<f64>(m, j) - s).collect()
}

/// `ln 𝓣` at the frame-shifted nodes.
pub fn log_weight(m: usize, p: &FamilyParams) -> Vec<f64> {
    frame_nodes(m, p).into_iter().map(|y| log_conjugation_weight(y, p)).collect()
}

/// Checks the grid-size and resolution preconditions of `kind`.
pub fn check_resolution(kind: DiscretizationKind, m: usize, p: &FamilyParams) -> Result<()> {
    validate_grid_size(m)?;
    if m < MIN_OPERATOR_GRID {
        return Err(Error::InvalidParameter(format!(
            "operator grids need at least {MIN_OPERATOR_GRID} points, got {m}"
        )));
    }
    let eps = p.epsilon();
    let (measure, label) = match kind {
        DiscretizationKind::GroundStateFiniteVolume => (m as f64 * eps, "M*eps"),
        _ => (m as f64 * eps * eps, "M*eps^2"),
    };
    if measure < RESOLUTION_FACTOR {
        return Err(Error::Resolution(format!(
            "{} discretisation needs {label} >= 8*pi, got {measure:.4} (M = {m}, eps = {eps:.4})",
            kind.name()
        )));
    }
    Ok(())
}

/// Ground-state flux-form operator (`which` selects `𝓛` or `𝓛̃`).
pub fn ground_state_tridiagonal(log_t: &[f64], nu: f64, which: Which) -> CyclicTridiagonal {
    let m = log_t.len();
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let s = nu / (h * h);
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    for j in 0..m {
        let jm = (j + m - 1) % m;
        let jp = (j + 1) % m;
        let rp = (log_t[jp] - log_t[j]).exp();
        let rm = (log_t[jm] - log_t[j]).exp();
        diag[j] = -s * (rp + rm);
        match which {
            Which::LTilde => {
                lower[j] = s;
                upper[j] = s;
            }
            Which::L => {
                lower[j] = s / rm;
                upper[j] = s / rp;
            }
        }
    }
    CyclicTridiagonal { lower, diag, upper }
}

/// Fourier first-derivative matrix on the `2π`-periodic grid.
pub fn fourier_d1(m: usize) -> DMatrix<f64> {
    let h = 2.0 * std::f64::consts::PI / m as f64;
    DMatrix::from_fn(m, m, |j, k| {
        if j == k {
            0.0
        } else {
            let d = j as f64 - k as f64;
            let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
            0.5 * sign / (0.5 * d * h).tan()
        }
    })
}

/// Fourier second-derivative matrix on the `2π`-periodic grid.
pub fn fourier_d2(m: usize) -> DMatrix<f64> {
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let pi = std::f64::consts::PI;
    DMatrix::from_fn(m, m, |j, k| {
        if j == k {
            -pi * pi / (3.0 * h * h) - 1.0 / 6.0
        } else {
            let d = j as f64 - k as f64;
            let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
            let s = (0.5 * d * h).sin();
            -0.5 * sign / (s * s)
        }
    })
}

fn circulant(m: usize, stencil: &[(isize, f64)]) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(m, m);
    for j in 0..m {
        for &(off, w) in stencil {
            let k = (j as isize + off).rem_euclid(m as isize) as usize;
            a[(j, k)] += w;
        }
    }
    a
}

/// Fourth-order centred first-derivative matrix.
pub fn fd4_d1(m: usize) -> DMatrix<f64> {
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let s = 1.0 / (12.0 * h);
    circulant(m, &[(-2, s), (-1, -8.0 * s), (1, 8.0 * s), (2, -s)])
}

/// Fourth-order centred second-derivative matrix.
pub fn fd4_d2(m: usize) -> DMatrix<f64> {
    let h = 2.0 * std::f64::consts::PI / m as f64;
    let s = 1.0 / (12.0 * h * h);
    circulant(m, &[(-2, -s), (-1, 16.0 * s), (0, -30.0 * s), (1, 16.0 * s), (2, -s)])
}

fn tridiagonal_to_dense(t: &CyclicTridiagonal) -> DMatrix<f64> {
    let m = t.len();
    let mut a = DMatrix::zeros(m, m);
    for j in 0..m {
        a[(j, (j + m - 1) % m)] += t.lower[j];
        a[(j, j)] += t.diag[j];
        a[(j, (j + 1) % m)] += t.upper[j];
    }
    a
}

/// Assembles `𝓛` or `𝓛̃` about the family member `p`.
///
/// # Errors
/// [`Error::InvalidParameter`] for bad grid sizes and
/// [`Error::Resolution`] when the resolution guard of `kind` fails.
pub fn assemble(kind: DiscretizationKind, m: usize, p: &FamilyParams, which: Which) -> Result<OperatorDiscretization> {
    check_resolution(kind, m, p)?;
    let log_t = log_weight(m, p);
    let (matrix, tridiagonal) = match kind {
        DiscretizationKind::GroundStateFiniteVolume => {
            let t = ground_state_tridiagonal(&log_t, p.nu, which);
            (tridiagonal_to_dense(&t), Some(t))
        }
        DiscretizationKind::FourierPseudospectral | DiscretizationKind::FiniteDifference4th => {
            let (d1, d2) = if kind == DiscretizationKind::FourierPseudospectral {
                (fourier_d1(m), fourier_d2(m))
            } else {
                (fd4_d1(m), fd4_d2(m))
            };
            let ys = frame_nodes(m, p);
            let a = match which {
                Which::L => {
                    let w = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                        m,
                        ys.iter().map(|&y| w0(y, p)),
                    ));
                    d2 * p.nu - d1 * w
                }
                Which::LTilde => {
                    let mut a = d2 * p.nu;
                    for (j, &y) in ys.iter().enumerate() {
                        a[(j, j)] -= conjugate_potential(y, p);
                    }
                    a
                }
            };
            (a, None)
        }
    };
    Ok(OperatorDiscretization { m, kind, p: *p, which, matrix, log_weight: log_t, tridiagonal })
}

impl OperatorDiscretization {
    /// `A v` for a grid function.
    pub fn apply(&self, v: &GridFunction) -> GridFunction {
        let x = nalgebra::DVector::from_column_slice(v.values());
        GridFunction::new((&self.matrix * x).iter().copied().collect()).expect("finite operator image")
    }

    /// Relative Frobenius symmetry defect `‖A − Aᵀ‖_F / ‖A‖_F`.
    pub fn symmetry_defect(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).norm() / self.matrix.norm()
    }

    /// Frobenius norm, the scale for eigenvalue and residual tolerances.
    pub fn scale(&self) -> f64 {
        self.matrix.norm()
    }

    /// The exact zero mode `φ₀ ∝ 𝓣²` of `𝓛` (or `𝓣` for `𝓛̃`), scaled to
    /// unit maximum in log space.
    pub fn zero_mode(&self) -> GridFunction {
        let power = match self.which {
            Which::L => 2.0,
            Which::LTilde => 1.0,
        };
        let lmax = self.log_weight.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        GridFunction::new(self.log_weight.iter().map(|&l| (power * (l - lmax)).exp()).collect())
            .expect("finite zero mode")
    }
}
