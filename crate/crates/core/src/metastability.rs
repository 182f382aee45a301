//! Projection fit onto the family and metastable decay rates.
//!
//! Given data `u` with mean `c`, the fit finds `(x*, t*)` such that the
//! perturbation `v* = u − W(·, t*; ν, x*, c)` is orthogonal to the adjoint
//! eigenfunctions `ψ₀, ψ₁, ψ₂` of the linearisation about that member.  The
//! `ψ₀` condition holds for every `(x*, t*)` because `ψ₀` is constant and
//! `c` matches the mean; the remaining two conditions
//! `F(x*, t*) = (⟨v*, ψ₁⟩, ⟨v*, ψ₂⟩) = 0` are solved by Newton's method with
//! the Jacobian
//!
//! ```text
//! A = [ ⟨∂ₓW₀, ψ₁⟩   ⟨c∂ₓW₀ − ∂ₜW₀, ψ₁⟩ ]
//!     [ ⟨∂ₓW₀, ψ₂⟩   ⟨c∂ₓW₀ − ∂ₜW₀, ψ₂⟩ ]
//! ```
//!
//! (the derivative of `v*` with respect to `(x*, t*)`), with the adjoint
//! functions recomputed at every iterate.  In the small-`ε` regime
//! `A ≈ [[−√π/t, −c√π/t], [0, −√π/(2t²)]]` and `det A ≈ π/(2t³)`.

use crate::error::{Error, Result};
use crate::family::{w0_all, w_family, FamilyParams};
use crate::grid::GridFunction;
use crate::spectrum::eigen::{adjoint_basis, AdjointBasis};
use crate::spectrum::matched::MATCHED_EPSILON;
use crate::spectrum::operator::frame_nodes;

/// Result of [`fit_parameters`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Fitted shift `x*`.
    pub x_star: f64,
    /// Fitted family time `t*`.
    pub t_star: f64,
    /// `⟨v*, ψ_n⟩`, `n = 0, 1, 2`, at the returned parameters.
    pub residual_projections: [f64; 3],
    /// Jacobian `A` at the returned parameters (row `n−1` is `ψ_n`).
    pub a_matrix: [[f64; 2]; 2],
    /// `det A`.
    pub det_a: f64,
    /// Newton steps taken.
    pub iterations: usize,
    /// `true` when the convergence test was met.
    pub converged: bool,
    /// `‖v*‖₂`.
    pub distance: f64,
    /// `|F|` before each Newton step (for contraction diagnostics).
    pub residual_history: Vec<f64>,
}

/// Tuning of [`fit_parameters_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Convergence when `|F| ≤ tol·‖v*‖`.
    pub tol: f64,
    /// Iteration cap.
    pub max_iter: usize,
    /// Neighbourhood guard: `‖v*‖ < guard·‖W‖`.
    pub guard: f64,
    /// Singular Jacobian when `|det A| < singular·π/(2t³)`.
    pub singular: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 25, guard: 0.2, singular: 1e-3 }
    }
}

/// `W(·, time; ν, Δx, c)` on an `m`-point grid.
pub fn family_on_grid(m: usize, time: f64, p: &FamilyParams) -> Result<GridFunction> {
    GridFunction::from_fn(m, |x| w_family(x, time, p))
}

/// [`family_on_grid`] shifted by a constant so that the discrete mean is
/// exactly `c`.  The samples of `W` carry a trapezoid aliasing error of size
/// `e^{−O(Mε²)}` in their mean; removing it keeps the `ψ₀` condition exact on
/// the grid when `c` is the discrete mean of the data.
pub fn family_member_on_grid(m: usize, p: &FamilyParams) -> Result<GridFunction> {
    let w = family_on_grid(m, p.t, p)?;
    let shift = p.c - w.mean();
    GridFunction::new(w.values().iter().map(|&x| x + shift).collect())
}

/// Derivative columns `(∂ₓW₀, c∂ₓW₀ − ∂ₜW₀)` of `v*` at the frame nodes.
fn jacobian_columns(m: usize, p: &FamilyParams) -> Result<(GridFunction, GridFunction)> {
    let ys = frame_nodes(m, p);
    let mut dx = Vec::with_capacity(m);
    let mut dt = Vec::with_capacity(m);
    for y in ys {
        let (_, wx, wt) = w0_all(y, p);
        dx.push(wx);
        dt.push(p.c * wx - wt);
    }
    Ok((GridFunction::new(dx)?, GridFunction::new(dt)?))
}

struct Iterate {
    v: GridFunction,
    w: GridFunction,
    basis: AdjointBasis,
}

fn evaluate(u: &GridFunction, p: &FamilyParams) -> Result<Iterate> {
    let w = family_member_on_grid(u.len(), p)?;
    let v = u.sub(&w);
    let basis = adjoint_basis(p, u.len(), 2)?;
    Ok(Iterate { v, w, basis })
}

/// `⟨v, ψ_n(· − x₀ − ct₀)⟩`, `n = 0, 1, 2`, with `v = u − W(·, t₀; ν, x₀, c)`.
pub fn projections(u: &GridFunction, x0: f64, t0: f64, nu: f64, c: f64) -> Result<[f64; 3]> {
    let p = FamilyParams::new(nu, t0, x0, c)?;
    let it = evaluate(u, &p)?;
    Ok([it.v.inner(&it.basis.psi[0]), it.v.inner(&it.basis.psi[1]), it.v.inner(&it.basis.psi[2])])
}

/// [`fit_parameters_with`] with default options.
pub fn fit_parameters(u: &GridFunction, x0_init: f64, t0_init: f64, nu: f64, c: f64) -> Result<FitResult> {
    fit_parameters_with(u, x0_init, t0_init, nu, c, &FitOptions::default())
}

/// Newton solve of the projection conditions.
///
/// Convergence is declared when `|F| ≤ tol·‖v*‖`, or when `|F|` has reached
/// the rounding level of the inner products (`10⁻¹³·‖W‖·‖ψ‖`; this covers
/// data lying exactly on the family, where `v* = 0`).
///
/// # Errors
/// [`Error::OutsideNeighbourhood`] if `‖v*‖ ≥ guard·‖W‖`;
/// [`Error::SingularJacobian`] if `|det A|` is below its threshold;
/// [`Error::Divergence`] if `t*` leaves `(0, ∞)` or the cap is reached.
pub fn fit_parameters_with(
    u: &GridFunction,
    x0_init: f64,
    t0_init: f64,
    nu: f64,
    c: f64,
    opts: &FitOptions,
) -> Result<FitResult> {
    let m = u.len();
    let (mut x, mut t) = (x0_init, t0_init);
    let mut history = Vec::new();
    for iter in 0..=opts.max_iter {
        let p = FamilyParams::new(nu, t, x, c)?;
        let it = evaluate(u, &p)?;
        let dist = it.v.l2_norm();
        let wnorm = it.w.l2_norm();
        if !(dist < opts.guard * wnorm) {
            return Err(Error::OutsideNeighbourhood(format!(
                "distance {dist:.3e} to the family member (x = {x}, t = {t}) exceeds {} x |W| = {:.3e}",
                opts.guard,
                opts.guard * wnorm
            )));
        }
        let (cx, ct) = jacobian_columns(m, &p)?;
        let psi = &it.basis.psi;
        let a = [[cx.inner(&psi[1]), ct.inner(&psi[1])], [cx.inner(&psi[2]), ct.inner(&psi[2])]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let det_ref = std::f64::consts::PI / (2.0 * t * t * t);
        if !(det.abs() >= opts.singular * det_ref) {
            return Err(Error::SingularJacobian(format!(
                "|det A| = {:.3e} below {} x pi/(2t^3) = {:.3e}",
                det.abs(),
                opts.singular,
                opts.singular * det_ref
            )));
        }
        let proj = [it.v.inner(&psi[0]), it.v.inner(&psi[1]), it.v.inner(&psi[2])];
        let r = proj[1].hypot(proj[2]);
        history.push(r);
        let floor = 1e-13 * wnorm * psi[1].l2_norm().max(psi[2].l2_norm());
        let result = |converged: bool, history: Vec<f64>| FitResult {
            x_star: x,
            t_star: t,
            residual_projections: proj,
            a_matrix: a,
            det_a: det,
            iterations: iter,
            converged,
            distance: dist,
            residual_history: history,
        };
        if r <= opts.tol * dist || r <= floor {
            return Ok(result(true, history));
        }
        if iter == opts.max_iter {
            break;
        }
        let dx = -(a[1][1] * proj[1] - a[0][1] * proj[2]) / det;
        let dt = -(-a[1][0] * proj[1] + a[0][0] * proj[2]) / det;
        x += dx;
        t += dt;
        if !(t > 0.0 && t.is_finite() && x.is_finite()) {
            return Err(Error::Divergence(format!("Newton iterate left the admissible region (t = {t})")));
        }
    }
    Err(Error::Divergence(format!(
        "projection fit did not converge in {} iterations (last |F| = {:.3e})",
        opts.max_iter,
        history.last().copied().unwrap_or(f64::NAN)
    )))
}

/// Inner products `⟨∂ₓW₀, ψ₁⟩`, `⟨∂ₜW₀, ψ₂⟩` and the two that vanish by
/// parity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProducts {
    /// `⟨∂ₓW₀, ψ₁⟩ ≈ −√π/t`.
    pub dx_psi1: f64,
    /// `⟨∂ₜW₀, ψ₂⟩ ≈ √π/(2t²)`.
    pub dt_psi2: f64,
    /// `⟨∂ₜW₀, ψ₁⟩ = 0` (odd against even).
    pub dt_psi1: f64,
    /// `⟨∂ₓW₀, ψ₂⟩ = 0` (even against odd).
    pub dx_psi2: f64,
}

/// Quadrature of the inner products entering `A` at the member `p`.
///
/// # Errors
/// [`Error::Regime`] for `ε > 0.25`.
pub fn inner_product_checks(p: &FamilyParams, m: usize) -> Result<InnerProducts> {
    if p.epsilon() > MATCHED_EPSILON {
        return Err(Error::Regime(format!(
            "inner-product expansions need eps <= {MATCHED_EPSILON}, got {}",
            p.epsilon()
        )));
    }
    let basis = adjoint_basis(p, m, 2)?;
    let ys = frame_nodes(m, p);
    let mut wx = Vec::with_capacity(m);
    let mut wt = Vec::with_capacity(m);
    for y in ys {
        let (_, a, b) = w0_all(y, p);
        wx.push(a);
        wt.push(b);
    }
    let wx = GridFunction::new(wx)?;
    let wt = GridFunction::new(wt)?;
    Ok(InnerProducts {
        dx_psi1: wx.inner(&basis.psi[1]),
        dt_psi2: wt.inner(&basis.psi[2]),
        dt_psi1: wt.inner(&basis.psi[1]),
        dx_psi2: wx.inner(&basis.psi[2]),
    })
}

/// One point of [`track_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackPoint {
    /// Snapshot time.
    pub tau: f64,
    /// `‖v*‖₂` (NaN when the fit failed).
    pub distance: f64,
    /// Fitted shift.
    pub x_star: f64,
    /// Fitted family time.
    pub t_star: f64,
    /// `det A`.
    pub det_a: f64,
    /// Fit success flag.
    pub converged: bool,
}

/// Fits every snapshot `(τ, u)`, warm-starting each fit from the previous
/// one (with `t*` advanced by the elapsed time).  The first fit starts from
/// `(x_init, t_init)`.  Failed fits are recorded with `converged = false`
/// and NaN fields; the chain continues from the last successful fit.
pub fn track_distance(snapshots: &[(f64, GridFunction)], nu: f64, x_init: f64, t_init: f64) -> Vec<TrackPoint> {
    let mut out = Vec::with_capacity(snapshots.len());
    let mut guess = (x_init, t_init);
    let mut last_tau = snapshots.first().map_or(0.0, |s| s.0);
    for (tau, u) in snapshots {
        let t_guess = guess.1 + (tau - last_tau);
        let c = u.mean();
        match fit_parameters(u, guess.0, t_guess, nu, c) {
            Ok(fit) => {
                out.push(TrackPoint {
                    tau: *tau,
                    distance: fit.distance,
                    x_star: fit.x_star,
                    t_star: fit.t_star,
                    det_a: fit.det_a,
                    converged: fit.converged,
                });
                guess = (fit.x_star, fit.t_star);
                last_tau = *tau;
            }
            Err(_) => out.push(TrackPoint {
                tau: *tau,
                distance: f64::NAN,
                x_star: f64::NAN,
                t_star: f64::NAN,
                det_a: f64::NAN,
                converged: false,
            }),
        }
    }
    out
}

/// Least-squares exponential rate over a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// `[τ_a, τ_b]`.
    pub window: (f64, f64),
    /// Slope of `ln(distance)` against `τ`.
    pub rate: f64,
    /// Coefficient of determination in `[0, 1]`.
    pub r_squared: f64,
    /// Points used.
    pub points: usize,
}

/// Default decay window `[0.05 t₀, 0.25 t₀]`.
pub fn default_decay_window(t0: f64) -> (f64, f64) {
    (0.05 * t0, 0.25 * t0)
}

/// Fits `ln(distance) ≈ a + rate·τ` over the samples with `τ` in `window`.
///
/// # Errors
/// [`Error::DegenerateWindow`] with fewer than 5 samples in the window or a
/// distance `≤ 10⁻¹²` (or non-finite) among them.
pub fn fit_decay_rate(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> =
        series.iter().copied().filter(|&(tau, _)| tau >= window.0 && tau <= window.1).collect();
    if pts.len() < 5 {
        return Err(Error::DegenerateWindow(format!(
            "{} samples in [{}, {}], need at least 5",
            pts.len(),
            window.0,
            window.1
        )));
    }
    if let Some(&(tau, d)) = pts.iter().find(|&&(_, d)| !(d > 1e-12 && d.is_finite())) {
        return Err(Error::DegenerateWindow(format!("distance {d} at tau = {tau} is not > 1e-12")));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateWindow("all samples at the same time".into()));
    }
    let rate = sxy / sxx;
    let intercept = my - rate * mx;
    let ss_tot: f64 = pts.iter().map(|p| (p.1.ln() - my).powi(2)).sum();
    let ss_res: f64 = pts.iter().map(|p| (p.1.ln() - intercept - rate * p.0).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    Ok(DecayFit { window, rate, r_squared, points: pts.len() })
}
