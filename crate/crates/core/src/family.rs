//! The metastable Whitham family of periodic Burgers solutions.
//!
//! A 2π-periodic array of heat kernels centred at the odd multiples of π,
//!
//! ```text
//! ψ^W(x,t) = (4πνt)^{-1/2} Σₙ exp[−(x + π − 2nπ)²/(4νt)],
//! ```
//!
//! solves the heat equation, and its Cole–Hopf image `W₀ = −2ν ψ^W_x/ψ^W`
//! solves `u_t = ν u_xx − u u_x`.  With `aₙ = x + π − 2nπ` and Gaussian
//! weights `wₙ = exp(−aₙ²/4νt)`, `W₀ = ā/t` is `1/t` times the weighted mean
//! of the `aₙ`.  Every quantity below is computed from weighted central
//! moments after the dominant exponent has been factored out, so nothing
//! underflows to `0/0` at small `νt`:
//!
//! * `∂ₓW₀ = (1/t)[1 − Var(a)/(2νt)]`,
//! * `∂ₜW₀ = −ā/t² + Cov(a, a²)/(4νt³)`.
//!
//! The shifted, Galilean-boosted family member is
//! `W(x,t; ν,Δx,c) = c + W₀(x − Δx − ct, t; ν)`.  Its two-image truncation is
//! the shock profile `(1/t)[x − π tanh(πx/2νt)]`.

use crate::error::{Error, Result};
use crate::grid::reduce_angle;
use crate::scalar::Real;

/// Parameters `(ν, t, Δx, c)` of a family member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams<S: Real = f64> {
    /// Viscosity `ν > 0`.
    pub nu: S,
    /// Family time `t > 0`.
    pub t: S,
    /// Spatial shift `Δx` (defined modulo 2π).
    pub dx: S,
    /// Mean value, equal to the drift speed of the layer.
    pub c: S,
}

/// Largest `ε` for which the asymptotic-regime flag is set.
pub const ASYMPTOTIC_EPSILON: f64 = 0.5;

/// Largest `νt` for which the shock-profile estimate is stated.
pub const PROFILE_REGIME_NU_T: f64 = 0.25;

impl<S: Real> FamilyParams<S> {
    /// Validated constructor.
    pub fn new(nu: S, t: S, dx: S, c: S) -> Result<Self> {
        if !(nu > S::zero() && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("viscosity must be positive, got {nu:?}")));
        }
        if !(t > S::zero() && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("family time must be positive, got {t:?}")));
        }
        if !dx.is_finite() || !c.is_finite() {
            return Err(Error::InvalidParameter("shift and mean must be finite".into()));
        }
        Ok(Self { nu, t, dx, c })
    }

    /// Unshifted, zero-mean member `(ν, t, 0, 0)`.
    pub fn centered(nu: S, t: S) -> Result<Self> {
        Self::new(nu, t, S::zero(), S::zero())
    }

    /// `ε² = 2νt`.
    pub fn epsilon_sq(&self) -> S {
        S::c(2.0) * self.nu * self.t
    }

    /// `ε = √(2νt)`.
    pub fn epsilon(&self) -> S {
        self.epsilon_sq().sqrt()
    }

    /// `true` when `ε ≤ 0.5`.
    pub fn is_asymptotic(&self) -> bool {
        self.epsilon() <= S::c(ASYMPTOTIC_EPSILON)
    }

    /// The same member at another family time.
    pub fn at_time(&self, t: S) -> Self {
        Self { t, ..*self }
    }

    /// Position of the layer centre at the family time: `Δx + c t`.
    pub fn frame_shift(&self) -> S {
        self.dx + self.c * self.t
    }
}

/// Truncation of the image sum: indices `n = 1−N, …, N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaSum {
    /// Number `N ≥ 1` of image pairs retained.
    pub truncation_n: usize,
}

/// Relative size below which further images are dropped.
const THETA_TAIL: f64 = 1e-17;

/// Hard cap on the number of image pairs (reached only for `νt ≫ 1`).
const THETA_MAX: usize = 4096;

impl ThetaSum {
    /// Smallest `N` whose first omitted image is below `10⁻¹⁷` of the
    /// retained sum for every `x ∈ [−π, π)`.
    ///
    /// The retained sum is at least `exp(−π²/4νt)` (one of the two central
    /// images is within π of `x`) and the first omitted image is at distance
    /// at least `2Nπ`, so the criterion is `exp(−((2Nπ)² − π²)/4νt) < 10⁻¹⁷`.
    pub fn for_params<S: Real>(p: &FamilyParams<S>) -> Self {
        let four_nu_t = 4.0 * (p.nu * p.t).to_f64().unwrap_or(f64::MAX);
        let pi = std::f64::consts::PI;
        let mut n = 1usize;
        while n < THETA_MAX {
            let d = 2.0 * n as f64 * pi;
            if (-(d * d - pi * pi) / four_nu_t) < THETA_TAIL.ln() {
                break;
            }
            n += 1;
        }
        Self { truncation_n: n }
    }

    /// Image indices retained.
    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        (1 - self.truncation_n as i64)..=(self.truncation_n as i64)
    }

    /// Ratio of the first omitted image (`n = N+1` or `n = −N`, whichever is
    /// larger) to the retained sum at `x`.
    pub fn first_omitted_ratio<S: Real>(&self, x: S, p: &FamilyParams<S>) -> S {
        let m = moments_with(x, p, *self);
        let four_nu_t = S::c(4.0) * p.nu * p.t;
        let xr = reduce_angle(x);
        let n = self.truncation_n as i64;
        let a_hi = xr + S::PI() - S::c(2.0) * S::PI() * S::c((n + 1) as f64);
        let a_lo = xr + S::PI() - S::c(2.0) * S::PI() * S::c((-n) as f64);
        let e = (-(a_hi * a_hi) / four_nu_t).max(-(a_lo * a_lo) / four_nu_t);
        (e - m.max_exponent).exp() / m.weight_sum
    }
}

/// Weighted statistics of the image positions at one point.
#[derive(Debug, Clone, Copy)]
struct Moments<S> {
    /// Largest exponent `−aₙ²/4νt` (factored out of every weight).
    max_exponent: S,
    /// `Σ exp(eₙ − max)` (≥ 1).
    weight_sum: S,
    /// Weighted mean `ā`.
    mean: S,
    /// Weighted variance.
    var: S,
    /// `Cov(a, a²) = μ₃ + 2ā·Var`.
    cov_a_a2: S,
}

fn moments<S: Real>(x: S, p: &FamilyParams<S>) -> Moments<S> {
    moments_with(x, p, ThetaSum::for_params(p))
}

fn moments_with<S: Real>(x: S, p: &FamilyParams<S>, theta: ThetaSum) -> Moments<S> {
    let xr = reduce_angle(x);
    let four_nu_t = S::c(4.0) * p.nu * p.t;
    let two_pi = S::c(2.0) * S::PI();
    let a_of = |n: i64| xr + S::PI() - two_pi * S::c(n as f64);
    let mut max_e = S::neg_infinity();
    for n in theta.indices() {
        let a = a_of(n);
        max_e = max_e.max(-(a * a) / four_nu_t);
    }
    let mut w_sum = S::zero();
    let mut wa = S::zero();
    for n in theta.indices() {
        let a = a_of(n);
        let w = (-(a * a) / four_nu_t - max_e).exp();
        w_sum = w_sum + w;
        wa = wa + w * a;
    }
    let mean = wa / w_sum;
    let mut m2 = S::zero();
    let mut m3 = S::zero();
    for n in theta.indices() {
        let a = a_of(n);
        let w = (-(a * a) / four_nu_t - max_e).exp();
        let d = a - mean;
        m2 = m2 + w * d * d;
        m3 = m3 + w * d * d * d;
    }
    let var = m2 / w_sum;
    let mu3 = m3 / w_sum;
    Moments { max_exponent: max_e, weight_sum: w_sum, mean, var, cov_a_a2: mu3 + S::c(2.0) * mean * var }
}

/// `ln ψ^W(x, t; ν)`; finite for every `x` and `νt > 0`.
pub fn log_psi_w<S: Real>(x: S, p: &FamilyParams<S>) -> S {
    let m = moments(x, p);
    -S::c(0.5) * (S::c(4.0) * S::PI() * p.nu * p.t).ln() + m.max_exponent + m.weight_sum.ln()
}

/// `ψ^W(x, t; ν)`.  Underflows to zero only when `ψ^W` itself is below the
/// smallest positive float (`νt ≲ 0.0035` near `x = 0` in `f64`); use
/// [`log_psi_w`] there.
pub fn psi_w<S: Real>(x: S, p: &FamilyParams<S>) -> S {
    log_psi_w(x, p).exp()
}

/// `∂ₓ ln ψ^W = −ā/(2νt)`.
pub fn psi_w_log_x<S: Real>(x: S, p: &FamilyParams<S>) -> S {
    -moments(x, p).mean / (S::c(2.0) * p.nu * p.t)
}

/// `W₀(x, t; ν)`: odd about every `nπ`, zero there, 2π-periodic.
pub fn w0<S: Real>(x: S, p: &FamilyParams<S>) -> S {
    moments(x, p).mean / p.t
}

/// `∂ₓW₀`, from the analytically differentiated ratio.
pub fn w0_x<S: Real>(x: S, p: &FamilyParams<S>) -> S {
    let m = moments(x, p);
    (S::one() - m.var / (S::c(2.0) * p.nu * p.t)) / p.t
}

/// `∂ₜW₀`, from the analytically differentiated ratio.
pub fn w0_t<S: Real>(x: S, p: &FamilyParams<S>) -> S {
    let m = moments(x, p);
    let t = p.t;
    -m.mean / (t * t) + m.cov_a_a2 / (S::c(4.0) * p.nu * t * t * t)
}

/// `(W₀, ∂ₓW₀, ∂ₜW₀)` in one pass.
pub fn w0_all<S: Real>(x: S, p: &FamilyParams<S>) -> (S, S, S) {
    let m = moments(x, p);
    let t = p.t;
    let w = m.mean / t;
    let wx = (S::one() - m.var / (S::c(2.0) * p.nu * t)) / t;
    let wt = -m.mean / (t * t) + m.cov_a_a2 / (S::c(4.0) * p.nu * t * t * t);
    (w, wx, wt)
}

/// Family member `W(x, time; ν, Δx, c) = c + W₀(x − Δx − c·time, time; ν)`.
///
/// `p.nu`, `p.dx` and `p.c` are used; the family time is `time`.
pub fn w_family<S: Real>(x: S, time: S, p: &FamilyParams<S>) -> S {
    let q = p.at_time(time);
    p.c + w0(x - p.dx - p.c * time, &q)
}

/// `(W, ∂ₓW, ∂ₜW)` of the family member at `(x, time)`.
pub fn w_family_all<S: Real>(x: S, time: S, p: &FamilyParams<S>) -> (S, S, S) {
    let q = p.at_time(time);
    let (w, wx, wt) = w0_all(x - p.dx - p.c * time, &q);
    (p.c + w, wx, wt - p.c * wx)
}

fn check_profile_regime<S: Real>(p: &FamilyParams<S>) -> Result<()> {
    let nt = (p.nu * p.t).to_f64().unwrap_or(f64::MAX);
    if nt > PROFILE_REGIME_NU_T {
        return Err(Error::Regime(format!(
            "shock-profile estimate requires nu*t <= {PROFILE_REGIME_NU_T}, got {nt}"
        )));
    }
    Ok(())
}

/// Shock profile `(1/t)[x − π tanh(πx/2νt)]` with `x` reduced to `[−π, π)`.
///
/// # Errors
/// [`Error::Regime`] if `νt > 0.25`.
pub fn w0_tanh_profile<S: Real>(x: S, p: &FamilyParams<S>) -> Result<S> {
    check_profile_regime(p)?;
    let xr = reduce_angle(x);
    let arg = S::PI() * xr / (S::c(2.0) * p.nu * p.t);
    Ok((xr - S::PI() * crate::special_fn::stable_tanh(arg)) / p.t)
}

/// `∂ₓ` of the shock profile: `(1/t)[1 − (π²/2νt) sech²(πx/2νt)]`.
pub fn w0_tanh_profile_x<S: Real>(x: S, p: &FamilyParams<S>) -> Result<S> {
    check_profile_regime(p)?;
    let xr = reduce_angle(x);
    let k = S::PI() / (S::c(2.0) * p.nu * p.t);
    let s = crate::special_fn::stable_sech(k * xr);
    Ok((S::one() - S::PI() * k * s * s) / p.t)
}

/// `∂ₜ` of the shock profile:
/// `(1/t²)[−x + π tanh(πx/2νt) + (π²x/2νt) sech²(πx/2νt)]`.
pub fn w0_tanh_profile_t<S: Real>(x: S, p: &FamilyParams<S>) -> Result<S> {
    check_profile_regime(p)?;
    let xr = reduce_angle(x);
    let k = S::PI() / (S::c(2.0) * p.nu * p.t);
    let s = crate::special_fn::stable_sech(k * xr);
    let th = crate::special_fn::stable_tanh(k * xr);
    let t2 = p.t * p.t;
    Ok((-xr + S::PI() * th + S::PI() * k * xr * s * s) / t2)
}

/// `W₀ − profile` at `x`, computed from the images beyond the central pair
/// so that no cancellation occurs:
/// `ā − ā₂ = Σ_{n∉{0,1}} wₙ(aₙ − ā₂) / Σₙ wₙ`, where `ā₂` is the two-image
/// mean (which equals `x − π tanh(πx/2νt)` exactly).
pub fn profile_deviation<S: Real>(x: S, p: &FamilyParams<S>) -> S {
    let xr = reduce_angle(x);
    let four_nu_t = S::c(4.0) * p.nu * p.t;
    let two_pi = S::c(2.0) * S::PI();
    // The image sum may be truncated to the central pair at small νt; the
    // deviation needs the next images explicitly.
    let theta = ThetaSum { truncation_n: ThetaSum::for_params(p).truncation_n.max(1) + 2 };
    let a_of = |n: i64| xr + S::PI() - two_pi * S::c(n as f64);
    let e_of = |n: i64| {
        let a = a_of(n);
        -(a * a) / four_nu_t
    };
    let max_e = theta.indices().map(e_of).fold(S::neg_infinity(), |a, b| a.max(b));
    let w0c = (e_of(0) - max_e).exp();
    let w1c = (e_of(1) - max_e).exp();
    let mean2 = (w0c * a_of(0) + w1c * a_of(1)) / (w0c + w1c);
    let mut total = S::zero();
    let mut extra = S::zero();
    for n in theta.indices() {
        let w = (e_of(n) - max_e).exp();
        total = total + w;
        if n != 0 && n != 1 {
            extra = extra + w * (a_of(n) - mean2);
        }
    }
    extra / total / p.t
}

/// Number of grid points used for the sup-norm in [`approximation_error`].
pub const APPROXIMATION_GRID: usize = 4096;

/// `sup |W₀ − profile|` over a 4096-point grid of `[−π, π)`.
///
/// # Errors
/// [`Error::Regime`] if `νt > 0.25`.
pub fn approximation_error<S: Real>(p: &FamilyParams<S>) -> Result<S> {
    check_profile_regime(p)?;
    let m = APPROXIMATION_GRID;
    let mut sup = S::zero();
    for j in 0..m {
        let x = crate::grid::node::<S>(m, j);
        sup = sup.max(profile_deviation(x, p).abs());
    }
    Ok(sup)
}

/// Conjugation weight `𝓣 = 1/ψ^W`.
pub fn conjugation_weight<S: Real>(x: S, p: &FamilyParams<S>) -> S {
    (-log_psi_w(x, p)).exp()
}

/// Inverse conjugation weight `𝓣⁻¹ = ψ^W`.
pub fn conjugation_weight_inv<S: Real>(x: S, p: &FamilyParams<S>) -> S {
    psi_w(x, p)
}

/// `ln 𝓣 = −ln ψ^W`.
pub fn log_conjugation_weight<S: Real>(x: S, p: &FamilyParams<S>) -> S {
    -log_psi_w(x, p)
}

/// Potential of the self-adjoint conjugate operator,
/// `V = ½[∂ₓW₀ + W₀²/(2ν)]`, so that `𝓛̃ = ν∂ₓₓ − V`.
pub fn conjugate_potential<S: Real>(x: S, p: &FamilyParams<S>) -> S {
    let (w, wx, _) = w0_all(x, p);
    S::c(0.5) * (wx + w * w / (S::c(2.0) * p.nu))
}
