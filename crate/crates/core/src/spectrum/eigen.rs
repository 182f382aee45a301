//! Eigenpairs, zero counts and biorthogonal adjoint eigenfunctions.
//!
//! Normalisation conventions:
//!
//! * [`SpectralResult`] stores unit-`L²`, sign-normalised eigenfunctions
//!   (positive at the point of largest modulus, ties broken toward positive
//!   `x`).
//! * Biorthogonal pairs `(φ_n, ψ_n)` with `⟨φ_n, ψ_n⟩ = 1` fix the scale of
//!   `ψ_n = 𝓣⁻²φ_n` as follows: `ψ₀ = 1/√(2π)`; `ψ₁` and `ψ₂` match the
//!   reference profiles `g₁ = −ε⁻¹e^{−d²/ε²}` and `g₂ = −ε⁻³d e^{−d²/ε²}`
//!   (`d` the distance from the slow centre, reduced to `[−π, π)`) in the
//!   least-squares sense; for `n ≥ 3`, `φ_n` keeps unit norm.  With this
//!   choice `⟨∂ₓW₀, ψ₁⟩ ≈ −√π/t` and `⟨∂ₜW₀, ψ₂⟩ ≈ √π/(2t²)`.

use nalgebra::DMatrix;

use super::operator::{
    assemble, check_resolution, frame_nodes, ground_state_tridiagonal, log_weight, DiscretizationKind,
    OperatorDiscretization, Which,
};
use super::tridiagonal::CyclicTridiagonal;
use crate::error::{Error, Result};
use crate::family::FamilyParams;
use crate::grid::{reduce_angle, GridFunction};

/// Largest number of eigenpairs returned by [`eigenpairs`].
pub const MAX_EIGENPAIRS: usize = 10;

/// Ordered eigenpairs of a discretised operator.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    /// Eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm, sign-normalised eigenfunctions of the assembled operator.
    pub eigenfunctions: Vec<GridFunction>,
    /// `‖Aφ − λφ‖₂` per pair.
    pub residuals: Vec<f64>,
    /// Operator the pairs belong to.
    pub which: Which,
    /// Discretisation used.
    pub kind: DiscretizationKind,
    /// Family member.
    pub p: FamilyParams,
    /// Frobenius norm of the assembled matrix.
    pub scale: f64,
    log_weight: Vec<f64>,
}

/// Flips `v` so that it is positive where `|v|` is largest (ties within
/// `10⁻¹²` go to the node with the largest `x`).
pub fn sign_normalize(v: &mut GridFunction) {
    let vals = v.values();
    let vmax = v.max_abs();
    let j = (0..vals.len()).rev().find(|&j| vals[j].abs() >= vmax * (1.0 - 1e-12)).unwrap_or(0);
    if vals[j] < 0.0 {
        *v = v.scale(-1.0);
    }
}

fn unit(v: &GridFunction) -> GridFunction {
    let n = v.l2_norm();
    v.scale(1.0 / n)
}

/// Deterministic, parity-free start vector for inverse iteration.
fn start_vector(m: usize) -> Vec<f64> {
    (0..m)
        .map(|j| {
            let x = crate::grid::node::<f64>(m, j);
            1.0 + 0.7 * (x + 0.3).cos() + 0.5 * (2.0 * x + 1.1).sin() + 0.3 * (3.0 * x - 0.4).cos()
                + 0.2 * (4.0 * x + 0.9).sin()
        })
        .collect()
}

fn normalize_vec(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 && n.is_finite() {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// `𝓣⁻²φ` (for `𝓛` eigenvectors) or `𝓣⁻¹φ̃` (for `𝓛̃` eigenvectors), formed
/// in log space and scaled to unit maximum.
fn adjoint_raw(phi: &[f64], log_t: &[f64], which: Which) -> Vec<f64> {
    let power = match which {
        Which::L => 2.0,
        Which::LTilde => 1.0,
    };
    let logs: Vec<f64> = phi
        .iter()
        .zip(log_t)
        .map(|(&f, &l)| if f == 0.0 { f64::NEG_INFINITY } else { f.abs().ln() - power * l })
        .collect();
    let lmax = logs.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    phi.iter().zip(&logs).map(|(&f, &l)| f.signum() * (l - lmax).exp()).collect()
}

/// Inverse iteration on a cyclic tridiagonal `𝓛` with shift `sigma`, then a
/// two-sided Rayleigh quotient and one polishing sweep.  Returns
/// `(λ, φ)` with `φ` of unit Euclidean norm.
fn tridiagonal_inverse_iteration(t: &CyclicTridiagonal, log_t: &[f64], sigma: f64) -> Result<(f64, Vec<f64>)> {
    let m = t.len();
    let scale = t.norm_inf().max(1.0);
    let mut v = start_vector(m);
    normalize_vec(&mut v);
    let factor = t.shifted_factor(sigma)?;
    for _ in 0..3 {
        factor.solve(&mut v);
        normalize_vec(&mut v);
    }
    let rq = |v: &[f64]| -> f64 {
        let psi = adjoint_raw(v, log_t, Which::L);
        let av = t.apply(v);
        let num: f64 = psi.iter().zip(&av).map(|(a, b)| a * b).sum();
        let den: f64 = psi.iter().zip(v).map(|(a, b)| a * b).sum();
        num / den
    };
    let mut lambda = rq(&v);
    let polish = t.shifted_factor(lambda + 1e-10 * scale.min(1.0 + lambda.abs()))?;
    for _ in 0..2 {
        polish.solve(&mut v);
        normalize_vec(&mut v);
    }
    lambda = rq(&v);
    if !lambda.is_finite() || v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigen(format!("inverse iteration near {sigma} did not converge")));
    }
    Ok((lambda, v))
}

fn residual_norm(a: &DMatrix<f64>, lambda: f64, v: &GridFunction) -> f64 {
    let x = nalgebra::DVector::from_column_slice(v.values());
    let r = a * &x - &x * lambda;
    (r.norm_squared() * v.spacing()).sqrt()
}

fn dense_inverse_iteration(a: &DMatrix<f64>, lambda: f64) -> Result<Vec<f64>> {
    let m = a.nrows();
    let scale = a.norm().max(1.0);
    let shifted = a - DMatrix::identity(m, m) * (lambda + 1e-10 * scale.min(1.0 + lambda.abs()));
    let lu = shifted.lu();
    let mut v = nalgebra::DVector::from_vec(start_vector(m));
    for _ in 0..4 {
        v = lu
            .solve(&v)
            .ok_or_else(|| Error::Eigen(format!("shifted matrix singular near {lambda}")))?;
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Eigen(format!("inverse iteration near {lambda} broke down")));
        }
        v /= n;
    }
    Ok(v.iter().copied().collect())
}

/// Top-`k` eigenpairs by (real part of the) eigenvalue.
///
/// * Ground-state kind: eigenvalues from a dense symmetric solve of `𝓛̃`;
///   eigenvectors from tridiagonal inverse iteration on the well-scaled `𝓛`
///   (and `𝓛̃`'s as `𝓣⁻¹φ`).
/// * Other kinds: symmetric solve for `𝓛̃`; Schur eigenvalues and dense
///   inverse iteration for `𝓛`.
///
/// # Errors
/// [`Error::InvalidParameter`] if `k > 10`; [`Error::Eigen`] on solver
/// breakdown.
pub fn eigenpairs(opd: &OperatorDiscretization, k: usize) -> Result<SpectralResult> {
    if k == 0 || k > MAX_EIGENPAIRS {
        return Err(Error::InvalidParameter(format!("between 1 and {MAX_EIGENPAIRS} eigenpairs, got {k}")));
    }
    let m = opd.m;
    let k = k.min(m);
    let mut eigenvalues = Vec::with_capacity(k);
    let mut eigenfunctions = Vec::with_capacity(k);
    match (opd.kind, &opd.tridiagonal) {
        (DiscretizationKind::GroundStateFiniteVolume, Some(_)) => {
            let lt = ground_state_tridiagonal(&opd.log_weight, opd.p.nu, Which::LTilde);
            let l = ground_state_tridiagonal(&opd.log_weight, opd.p.nu, Which::L);
            let dense = DMatrix::from_fn(m, m, |i, j| {
                if i == j {
                    lt.diag[i]
                } else if j == (i + 1) % m {
                    lt.upper[i]
                } else if j == (i + m - 1) % m {
                    lt.lower[i]
                } else {
                    0.0
                }
            });
            let mut vals: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
            vals.sort_by(|a, b| b.total_cmp(a));
            for (n, &lambda) in vals.iter().take(k).enumerate() {
                // The zero mode 𝓣² is exact on this grid; inverse iteration on
                // its e^{π²/ε²}-wide dynamic range would only lose accuracy.
                let v = if n == 0 {
                    let lmax = opd.log_weight.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
                    opd.log_weight.iter().map(|&x| (2.0 * (x - lmax)).exp()).collect()
                } else {
                    tridiagonal_inverse_iteration(&l, &opd.log_weight, lambda)?.1
                };
                let v = match opd.which {
                    Which::L => v,
                    Which::LTilde => adjoint_raw(&v, &opd.log_weight, Which::LTilde),
                };
                eigenvalues.push(lambda);
                eigenfunctions.push(GridFunction::new(v)?);
            }
        }
        _ => match opd.which {
            Which::LTilde => {
                let sym = (&opd.matrix + opd.matrix.transpose()) * 0.5;
                let eig = nalgebra::SymmetricEigen::new(sym);
                let mut order: Vec<usize> = (0..m).collect();
                order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
                for &i in order.iter().take(k) {
                    eigenvalues.push(eig.eigenvalues[i]);
                    eigenfunctions.push(GridFunction::new(eig.eigenvectors.column(i).iter().copied().collect())?);
                }
            }
            Which::L => {
                let ev = opd
                    .matrix
                    .clone()
                    .try_schur(f64::EPSILON, 0)
                    .ok_or_else(|| Error::Eigen("Schur decomposition did not converge".into()))?
                    .complex_eigenvalues();
                let mut vals: Vec<f64> = ev.iter().map(|z| z.re).collect();
                vals.sort_by(|a, b| b.total_cmp(a));
                for &lambda in vals.iter().take(k) {
                    eigenvalues.push(lambda);
                    eigenfunctions.push(GridFunction::new(dense_inverse_iteration(&opd.matrix, lambda)?)?);
                }
            }
        },
    }
    let mut residuals = Vec::with_capacity(k);
    for (lambda, f) in eigenvalues.iter().zip(eigenfunctions.iter_mut()) {
        *f = unit(f);
        sign_normalize(f);
        residuals.push(residual_norm(&opd.matrix, *lambda, f));
    }
    Ok(SpectralResult {
        eigenvalues,
        eigenfunctions,
        residuals,
        which: opd.which,
        kind: opd.kind,
        p: opd.p,
        scale: opd.scale(),
        log_weight: opd.log_weight.clone(),
    })
}

/// Fraction of samples allowed in the near-zero band.
const PLATEAU_FRACTION: f64 = 0.05;

/// Number of sign changes of a periodic grid function, ignoring samples with
/// `|φ| < 10⁻¹⁰ ‖φ‖∞`.
///
/// Small samples are skipped when locating sign changes.  A wide band of
/// them is only an ambiguity when both signs occur among them, since a
/// sign change may then hide inside the band; a one-signed band (such as the
/// exponentially small, possibly underflowed tail of the zero mode) is
/// accepted.
///
/// # Errors
/// [`Error::Plateau`] if more than 5% of the samples are in the band and the
/// band is ambiguous.
pub fn zero_count(phi: &GridFunction) -> Result<usize> {
    let tol = 1e-10 * phi.max_abs();
    let band: Vec<f64> = phi.values().iter().copied().filter(|v| v.abs() < tol).collect();
    let ambiguous = band.iter().any(|&v| v > 0.0) && band.iter().any(|&v| v < 0.0);
    if phi.max_abs() == 0.0
        || (band.len() as f64 > PLATEAU_FRACTION * phi.len() as f64 && ambiguous)
    {
        return Err(Error::Plateau(format!(
            "{} of {} samples are numerically zero",
            band.len(),
            phi.len()
        )));
    }
    let signs: Vec<bool> = phi.values().iter().filter(|v| v.abs() >= tol).map(|&v| v > 0.0).collect();
    let n = signs.len();
    Ok((0..n).filter(|&i| signs[i] != signs[(i + 1) % n]).count())
}

/// Reference adjoint profiles `g₁`, `g₂` at the frame-shifted nodes.
pub fn reference_adjoint(n: usize, p: &FamilyParams, m: usize) -> Result<GridFunction> {
    let eps = p.epsilon();
    let pi = std::f64::consts::PI;
    let vals = frame_nodes(m, p)
        .into_iter()
        .map(|y| {
            let d = reduce_angle(y - pi);
            let g = (-(d * d) / (eps * eps)).exp();
            match n {
                1 => -g / eps,
                2 => -d * g / (eps * eps * eps),
                _ => f64::NAN,
            }
        })
        .collect();
    if n != 1 && n != 2 {
        return Err(Error::InvalidParameter(format!("reference profiles exist for n = 1, 2 only, got {n}")));
    }
    GridFunction::new(vals)
}

/// Applies the biorthogonal normalisation to an eigenfunction `phi` of
/// `which` with index `n`; returns `(φ_n, ψ_n)` with `⟨φ_n, ψ_n⟩ = 1`.
fn normalize_pair(
    n: usize,
    phi: &GridFunction,
    log_t: &[f64],
    which: Which,
    p: &FamilyParams,
) -> Result<(GridFunction, GridFunction)> {
    let m = phi.len();
    // φ of 𝓛 and ψ = 𝓣⁻²φ; for 𝓛̃ input, φ = 𝓣φ̃ and ψ = 𝓣⁻¹φ̃.
    let (phi_l, psi_raw) = match which {
        Which::L => (phi.clone(), GridFunction::new(adjoint_raw(phi.values(), log_t, Which::L))?),
        Which::LTilde => {
            let neg: Vec<f64> = log_t.iter().map(|l| -l).collect();
            let phi_l = GridFunction::new(adjoint_raw(phi.values(), &neg, Which::LTilde))?;
            (phi_l, GridFunction::new(adjoint_raw(phi.values(), log_t, Which::LTilde))?)
        }
    };
    let mut phi_l = unit(&phi_l);
    sign_normalize(&mut phi_l);
    let overlap = phi_l.inner(&psi_raw);
    if !(overlap.abs() >= 1e-12 * psi_raw.l2_norm()) {
        return Err(Error::Normalization(format!("<phi_{n}, psi_{n}> = {overlap:e} too small")));
    }
    let psi = match n {
        0 => {
            let target = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
            psi_raw.scale(target / psi_raw.mean())
        }
        1 | 2 => {
            let g = reference_adjoint(n, p, m)?;
            let s = psi_raw.inner(&g) / g.inner(&g);
            if !(s.abs() > 0.0) {
                return Err(Error::Normalization(format!("psi_{n} orthogonal to its reference profile")));
            }
            psi_raw.scale(1.0 / s)
        }
        _ => psi_raw.scale(1.0 / overlap),
    };
    let c = phi_l.inner(&psi);
    Ok((phi_l.scale(1.0 / c), psi))
}

impl SpectralResult {
    /// Biorthogonal pair `(φ_n, ψ_n)`; see the module docs.
    pub fn biorthogonal_pair(&self, n: usize) -> Result<(GridFunction, GridFunction)> {
        let phi = self.eigenfunctions.get(n).ok_or_else(|| {
            Error::InvalidParameter(format!("eigenpair {n} not computed ({} available)", self.eigenfunctions.len()))
        })?;
        normalize_pair(n, phi, &self.log_weight, self.which, &self.p)
    }

    /// Sign changes of every eigenfunction of `𝓛` (for `𝓛̃` results the
    /// counts are taken on `𝓣φ̃`, which has the same zeros).
    pub fn zero_counts(&self) -> Vec<Result<usize>> {
        self.eigenfunctions
            .iter()
            .map(|f| match self.which {
                Which::L => zero_count(f),
                Which::LTilde => {
                    let neg: Vec<f64> = self.log_weight.iter().map(|l| -l).collect();
                    zero_count(&GridFunction::new(adjoint_raw(f.values(), &neg, Which::LTilde))?)
                }
            })
            .collect()
    }
}

/// Adjoint eigenfunction `ψ_n = 𝓣⁻¹φ̃_n` with the biorthogonal
/// normalisation (requires `n ≤ 4` and `n` pairs in `spec`).
pub fn adjoint_eigenfunction(n: usize, spec: &SpectralResult) -> Result<GridFunction> {
    if n > 4 {
        return Err(Error::InvalidParameter(format!("adjoint eigenfunctions are provided for n <= 4, got {n}")));
    }
    Ok(spec.biorthogonal_pair(n)?.1)
}

/// Biorthogonal pairs `(λ_n, φ_n, ψ_n)`, `n = 0..=nmax`, of the ground-state
/// discretisation, found without a dense solve: `φ₀ = 𝓣²` exactly, and for
/// `n ≥ 1` inverse iteration from `−n/t` with Rayleigh-quotient refinement.
#[derive(Debug, Clone)]
pub struct AdjointBasis {
    /// Family member.
    pub p: FamilyParams,
    /// Eigenvalues.
    pub lambda: Vec<f64>,
    /// Eigenfunctions of `𝓛`.
    pub phi: Vec<GridFunction>,
    /// Adjoint eigenfunctions.
    pub psi: Vec<GridFunction>,
    /// `‖𝓛φ − λφ‖₂ / ‖φ‖₂`.
    pub residuals: Vec<f64>,
}

/// Builds an [`AdjointBasis`] on an `m`-point grid.
pub fn adjoint_basis(p: &FamilyParams, m: usize, nmax: usize) -> Result<AdjointBasis> {
    check_resolution(DiscretizationKind::GroundStateFiniteVolume, m, p)?;
    let log_t = log_weight(m, p);
    let l = ground_state_tridiagonal(&log_t, p.nu, Which::L);
    let mut basis = AdjointBasis { p: *p, lambda: vec![], phi: vec![], psi: vec![], residuals: vec![] };
    for n in 0..=nmax {
        let (lambda, v) = if n == 0 {
            let lmax = log_t.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            (0.0, log_t.iter().map(|&x| (2.0 * (x - lmax)).exp()).collect())
        } else {
            tridiagonal_inverse_iteration(&l, &log_t, -(n as f64) / p.t)?
        };
        let phi = GridFunction::new(v)?;
        let (phi, psi) = normalize_pair(n, &phi, &log_t, Which::L, p)?;
        let r: Vec<f64> = l.apply(phi.values()).iter().zip(phi.values()).map(|(a, b)| a - lambda * b).collect();
        let res = GridFunction::new(r)?.l2_norm() / phi.l2_norm();
        basis.lambda.push(lambda);
        basis.phi.push(phi);
        basis.psi.push(psi);
        basis.residuals.push(res);
    }
    Ok(basis)
}

/// Convenience: assemble (default kind) and solve for `k` pairs of `which`.
pub fn spectrum(p: &FamilyParams, m: usize, k: usize, which: Which) -> Result<SpectralResult> {
    eigenpairs(&assemble(DiscretizationKind::default(), m, p, which)?, k)
}
