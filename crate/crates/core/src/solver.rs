//! Godunov + explicit-diffusion time stepping of the periodic viscous Burgers
//! equation `u_t + (u²/2)_x = ν u_xx`.
//!
//! The scheme is conservative: the advective part uses the exact Riemann
//! (Godunov) flux of the convex flux `f(u) = u²/2` at every cell interface and
//! the diffusive part the centred second difference, so the discrete mean
//! `Σ u_j h` telescopes and is conserved to rounding.
//!
//! Random initial data are truncated Fourier series with coefficients drawn
//! uniformly from `[−1, 1]` by a SplitMix64 stream; the stream is specified by
//! its reference test vectors so that runs are reproducible across platforms.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::grid::{node, reduce_angle, validate_grid_size, GridFunction};
use crate::scalar::Real;

/// Configuration of a simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig<S: Real = f64> {
    /// Viscosity `ν > 0`.
    pub nu: S,
    /// Grid size `M` (even, ≥ 16).
    pub m: usize,
    /// CFL number `λ ∈ (0, 1)`.
    pub cfl_lambda: S,
    /// Final time `≥ 0`.
    pub t_end: S,
    /// Seed of the coefficient stream.
    pub seed: u64,
    /// Number of Fourier modes `m ≥ 1` in the random initial data.
    pub modes: usize,
    /// Mean `a₀` of the initial data.
    pub a0: S,
}

impl<S: Real> SimConfig<S> {
    /// Checks every field.
    pub fn validate(&self) -> Result<()> {
        if !(self.nu > S::zero() && self.nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("viscosity must be positive, got {:?}", self.nu)));
        }
        validate_grid_size(self.m)?;
        if !(self.cfl_lambda > S::zero() && self.cfl_lambda < S::one()) {
            return Err(Error::InvalidParameter(format!(
                "CFL number must lie in (0, 1), got {:?}",
                self.cfl_lambda
            )));
        }
        if !(self.t_end >= S::zero() && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("final time must be >= 0, got {:?}", self.t_end)));
        }
        if self.modes == 0 {
            return Err(Error::InvalidParameter("at least one Fourier mode is required".into()));
        }
        if !self.a0.is_finite() {
            return Err(Error::InvalidParameter("mean must be finite".into()));
        }
        Ok(())
    }

    /// Grid spacing `h = 2π/M`.
    pub fn spacing(&self) -> S {
        S::c(2.0) * S::PI() / S::from_usize_lossy(self.m)
    }
}

/// Fourier coefficients `(a_n, b_n)`, `n = 1..m`, of the random initial data.
///
/// Each draw maps one 64-bit output `x` to `(x >> 11)·2⁻⁵³·2 − 1 ∈ [−1, 1)`;
/// the draws are taken in the order `a₁, b₁, a₂, b₂, …`.
pub fn random_coefficients(seed: u64, modes: usize) -> Vec<(f64, f64)> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut draw = || ((rng.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) * 2.0 - 1.0;
    (0..modes)
        .map(|_| {
            let a = draw();
            let b = draw();
            (a, b)
        })
        .collect()
}

/// `u(x,0) = a₀ + Σ_{n=1..m} [a_n sin(nx) + b_n cos(nx)]` sampled on the grid.
///
/// The series is summed in `f64` and converted, so `f32` and `f64` runs see
/// the same data up to the final rounding.
pub fn random_initial_data<S: Real>(cfg: &SimConfig<S>) -> Result<GridFunction<S>> {
    cfg.validate()?;
    let coeffs = random_coefficients(cfg.seed, cfg.modes);
    let a0 = cfg.a0.to_f64().unwrap_or(0.0);
    let values = (0..cfg.m)
        .map(|j| {
            let x: f64 = node(cfg.m, j);
            let mut u = 0.0;
            for (k, &(a, b)) in coeffs.iter().enumerate() {
                let n = (k + 1) as f64;
                u += a * (n * x).sin() + b * (n * x).cos();
            }
            S::c(a0 + u)
        })
        .collect();
    GridFunction::new(values)
}

/// Exact Godunov flux of `f(u) = u²/2` between states `ul` (left) and `ur`.
///
/// For `ul ≤ ur` (rarefaction) the flux is the minimum of `f` over
/// `[ul, ur]`, which is `0` when the fan straddles the sonic point `u = 0`;
/// for `ul > ur` (shock) it is the maximum of `f(ul)` and `f(ur)`.
pub fn godunov_flux<S: Real>(ul: S, ur: S) -> S {
    let half = S::c(0.5);
    if ul <= ur {
        if ul > S::zero() {
            half * ul * ul
        } else if ur < S::zero() {
            half * ur * ur
        } else {
            S::zero()
        }
    } else {
        (half * ul * ul).max(half * ur * ur)
    }
}

/// Step size `k = λ·min(h/max|u|, h²/(2ν))` for the current state.
///
/// # Errors
/// [`Error::Cfl`] if the state is not finite.
pub fn time_step<S: Real>(u: &GridFunction<S>, nu: S, cfl_lambda: S) -> Result<S> {
    let umax = u.max_abs();
    if !umax.is_finite() || u.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::Cfl("state contains non-finite values".into()));
    }
    let h = u.spacing();
    let diffusive = h * h / (S::c(2.0) * nu);
    let k = if umax > S::zero() { (h / umax).min(diffusive) } else { diffusive };
    Ok(cfl_lambda * k)
}

/// One explicit step of size `k`.
pub fn step_with<S: Real>(u: &GridFunction<S>, nu: S, k: S) -> Result<GridFunction<S>> {
    let v = u.values();
    let m = v.len();
    let h = u.spacing();
    // flux[j] is the flux through the interface between cells j and j+1.
    let flux: Vec<S> = (0..m).map(|j| godunov_flux(v[j], v[(j + 1) % m])).collect();
    let r = k / h;
    let d = nu * k / (h * h);
    let out = (0..m)
        .map(|j| {
            let jm = (j + m - 1) % m;
            let jp = (j + 1) % m;
            v[j] - r * (flux[j] - flux[jm]) + d * (v[jp] - S::c(2.0) * v[j] + v[jm])
        })
        .collect::<Vec<_>>();
    if out.iter().any(|x| !x.is_finite()) {
        return Err(Error::Cfl("step produced non-finite values".into()));
    }
    GridFunction::new(out)
}

/// One step with the CFL-limited step size; returns the new state and `k`.
pub fn step<S: Real>(u: &GridFunction<S>, cfg: &SimConfig<S>) -> Result<(GridFunction<S>, S)> {
    let k = time_step(u, cfg.nu, cfg.cfl_lambda)?;
    Ok((step_with(u, cfg.nu, k)?, k))
}

/// A recorded state `(time, u)`.
pub type Snapshot<S = f64> = (S, GridFunction<S>);

/// Runs from the random initial data of `cfg`.  See [`simulate_from`].
pub fn simulate<S: Real>(cfg: &SimConfig<S>, snapshot_times: &[S]) -> Result<Vec<Snapshot<S>>> {
    let u0 = random_initial_data(cfg)?;
    simulate_from(u0, cfg, snapshot_times)
}

/// Advances `initial` to `cfg.t_end`, recording the initial state and, for
/// every requested time `τ > 0`, the state at the first step time `≥ τ`
/// (the actual time is recorded).
///
/// The random-data fields of `cfg` (`seed`, `modes`, `a0`) are ignored.
///
/// # Errors
/// [`Error::InvalidParameter`] if the times are unsorted, negative or exceed
/// `t_end`, or the grid size differs from `cfg.m`; step errors propagate.
pub fn simulate_from<S: Real>(
    initial: GridFunction<S>,
    cfg: &SimConfig<S>,
    snapshot_times: &[S],
) -> Result<Vec<Snapshot<S>>> {
    cfg.validate()?;
    if initial.len() != cfg.m {
        return Err(Error::InvalidParameter(format!(
            "initial data has {} points, configuration expects {}",
            initial.len(),
            cfg.m
        )));
    }
    if snapshot_times.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter("snapshot times must be sorted ascending".into()));
    }
    if let Some(&bad) = snapshot_times.iter().find(|&&t| !(t >= S::zero() && t <= cfg.t_end)) {
        return Err(Error::InvalidParameter(format!(
            "snapshot time {bad:?} outside [0, t_end = {:?}]",
            cfg.t_end
        )));
    }
    let mut out = vec![(S::zero(), initial.clone())];
    let mut pending = snapshot_times.iter().copied().filter(|&t| t > S::zero()).peekable();
    let mut u = initial;
    let mut time = S::zero();
    while let Some(&target) = pending.peek() {
        while time < target {
            let (next, k) = step(&u, cfg)?;
            u = next;
            time = time + k;
        }
        while pending.peek().is_some_and(|&t| t <= time) {
            pending.next();
            if out.last().map(|(t, _)| *t) != Some(time) {
                out.push((time, u.clone()));
            }
        }
    }
    Ok(out)
}

/// Relative tolerance for declaring two grid maxima of the primitive equal.
const TIE_TOL: f64 = 1e-12;

/// Samples of the primitive `F(y) = −∫₀^y (u₀ − ū) ds` at the grid nodes,
/// by the cumulative trapezoid rule, offset so that `F(0) = 0`.
pub fn primitive<S: Real>(u0: &GridFunction<S>) -> Vec<S> {
    let v = u0.zero_mean();
    let v = v.values();
    let m = v.len();
    let h = u0.spacing();
    let mut f = vec![S::zero(); m];
    for j in 1..m {
        f[j] = f[j - 1] - S::c(0.5) * h * (v[j - 1] + v[j]);
    }
    let f0 = f[m / 2];
    f.iter_mut().for_each(|x| *x = *x - f0);
    f
}

/// Parabolic vertex offset (in units of `h`) through three equally spaced
/// samples centred on the middle one; zero if the samples are collinear.
fn parabolic_offset<S: Real>(fm: S, f0: S, fp: S) -> S {
    let denom = fm - S::c(2.0) * f0 + fp;
    if denom == S::zero() {
        S::zero()
    } else {
        (S::c(0.5) * (fm - fp) / denom).max(S::c(-0.5)).min(S::c(0.5))
    }
}

/// Global maximiser `y₀ ∈ [−π, π)` of the primitive; see [`primitive`].
///
/// The discrete maximum is refined by quadratic interpolation through its two
/// neighbours.
///
/// # Errors
/// [`Error::Tie`] if a non-adjacent grid point attains the maximum to within
/// `10⁻¹²` (relative to `max(1, max|F|)`).
pub fn primitive_argmax<S: Real>(u0: &GridFunction<S>) -> Result<S> {
    let f = primitive(u0);
    let m = f.len();
    let (jmax, &fmax) = f
        .iter()
        .enumerate()
        .fold((0, &f[0]), |best, cur| if *cur.1 > *best.1 { cur } else { best });
    let scale = f.iter().fold(S::one(), |a, &x| a.max(x.abs()));
    let tol = S::c(TIE_TOL) * scale;
    for (j, &fj) in f.iter().enumerate() {
        let dist = (j as isize - jmax as isize).rem_euclid(m as isize);
        let dist = dist.min(m as isize - dist);
        if dist > 1 && fmax - fj <= tol {
            return Err(Error::Tie(format!(
                "primitive maximum attained at nodes {jmax} and {j} (difference {:?})",
                fmax - fj
            )));
        }
    }
    let fm = f[(jmax + m - 1) % m];
    let fp = f[(jmax + 1) % m];
    let off = parabolic_offset(fm, fmax, fp);
    Ok(reduce_angle(u0.x(jmax) + off * u0.spacing()))
}

/// Position of the steepest descent of `u` (the shock layer): argmin of the
/// centred difference `u_{j+1} − u_{j−1}`, refined quadratically.
pub fn layer_position<S: Real>(u: &GridFunction<S>) -> S {
    let v = u.values();
    let m = v.len();
    let d: Vec<S> = (0..m).map(|j| v[(j + 1) % m] - v[(j + m - 1) % m]).collect();
    let (jmin, _) = d
        .iter()
        .enumerate()
        .fold((0, d[0]), |best, (j, &x)| if x < best.1 { (j, x) } else { best });
    let off = parabolic_offset(-d[(jmin + m - 1) % m], -d[jmin], -d[(jmin + 1) % m]);
    reduce_angle(u.x(jmin) + off * u.spacing())
}
