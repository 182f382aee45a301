//! Exact solutions of the periodic initial-value problem via the Cole–Hopf
//! transformation, and the Laplace-method shock profile.
//!
//! For zero-mean `u₀` with primitive `F(y) = −∫₀^y u₀`, the solution is the
//! ratio of heat-kernel convolutions
//!
//! ```text
//! u(x,t) = ∫ (x−y)/t · e^{Φ(y)} dy / ∫ e^{Φ(y)} dy,
//! Φ(y) = [F(y) − (x−y)²/(2t)] / (2ν),
//! ```
//!
//! and a non-zero mean `c` enters through the Galilean shift
//! `u(x,t; u₀) = c + u(x − ct, t; u₀ − c)`.
//!
//! The integrals are evaluated with composite 64-point Gauss–Legendre panels
//! whose boundaries are fixed multiples of `2π/P`, so that `F` is sampled
//! once per period and reused for every `x`.  Exponentials are formed after
//! subtracting the largest exponent, which keeps the `1/2ν` scaling from
//! overflowing.

use crate::error::{Error, Result};
use crate::fourier::TrigSeries;
use crate::grid::{reduce_angle, GridFunction};
use crate::quadrature::Panel;
use crate::solver::primitive_argmax;

/// Nodes per Gauss–Legendre panel.
pub const PANEL_NODES: usize = 64;

/// `ln(10¹⁶)` plus a margin: the neglected Gaussian tail is below
/// `e^{−40} < 10⁻¹⁷` of the integrand's peak.
const TAIL_EXPONENT: f64 = 40.0;

/// A periodic initial-value problem.
#[derive(Debug, Clone)]
pub struct CHProblem {
    u0: GridFunction,
    c: f64,
    nu: f64,
    primitive: TrigSeries,
}

/// `F(x; u₀) = −∫₀^x u₀(s) ds` of the zero-mean part, as a trigonometric
/// series (periodic, `F(0) = 0`).
pub fn antiderivative_f(u0: &GridFunction) -> TrigSeries {
    let g = TrigSeries::from_grid(u0).antiderivative();
    TrigSeries { mean: -g.mean, modes: g.modes.iter().map(|&(k, a, b)| (k, -a, -b)).collect() }
}

impl CHProblem {
    /// Splits grid data into its mean `c` and zero-mean part.
    pub fn new(u0: &GridFunction, nu: f64) -> Result<Self> {
        let c = u0.mean();
        Self::with_mean(&u0.zero_mean(), c, nu)
    }

    /// Problem with zero-mean part `u0` (its residual mean is removed) and
    /// mean `c`.
    pub fn with_mean(u0: &GridFunction, c: f64, nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("viscosity must be positive, got {nu}")));
        }
        if !c.is_finite() {
            return Err(Error::InvalidParameter("mean must be finite".into()));
        }
        let u0 = u0.zero_mean();
        let primitive = antiderivative_f(&u0);
        Ok(Self { u0, c, nu, primitive })
    }

    /// Zero-mean initial data.
    pub fn u0(&self) -> &GridFunction {
        &self.u0
    }

    /// Mean `c`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Viscosity.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// The primitive `F`.
    pub fn primitive(&self) -> &TrigSeries {
        &self.primitive
    }

    /// Global maximiser `y₀` of `F`: grid argmax with quadratic refinement,
    /// then a golden-section polish of the continuous `F` to `10⁻¹⁰`.
    pub fn y0(&self) -> Result<f64> {
        let coarse = primitive_argmax(&self.u0)?;
        let h = self.u0.spacing();
        let f = |y: f64| -self.primitive.eval(y);
        Ok(reduce_angle(golden_section_min(f, coarse - h, coarse + h, 1e-10)))
    }
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Cole–Hopf evaluator at a fixed time, caching `F` on one period of panel
/// nodes.
#[derive(Debug, Clone)]
pub struct ChEvaluator {
    c: f64,
    nu: f64,
    t: f64,
    panels_per_period: usize,
    width: f64,
    /// `(offset in panel, weight)` of the panel rule mapped to `[0, width]`.
    rule: Vec<(f64, f64)>,
    /// `F` at node `q` of panel `p`, index `p·64 + q`, for `p < P`.
    f_cache: Vec<f64>,
    half_window: f64,
}

impl ChEvaluator {
    /// Prepares evaluation at time `t > 0`.
    pub fn new(prob: &CHProblem, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
        }
        let nu = prob.nu;
        let slope = prob.primitive.derivative().derivative_bound().max(1e-300);
        let target = (2.0 * nu * t).sqrt().min((2.0 * nu / slope).sqrt());
        let two_pi = 2.0 * std::f64::consts::PI;
        let panels_per_period = ((two_pi / target).ceil() as usize).max(4);
        let width = two_pi / panels_per_period as f64;
        let rule: Vec<(f64, f64)> = Panel::new(PANEL_NODES)?.mapped(0.0, width).collect();
        let mut f_cache = Vec::with_capacity(panels_per_period * PANEL_NODES);
        for p in 0..panels_per_period {
            let base = -std::f64::consts::PI + p as f64 * width;
            for &(dy, _) in &rule {
                f_cache.push(prob.primitive.eval(base + dy));
            }
        }
        let (fmin, fmax) = f_cache.iter().fold((f64::MAX, f64::MIN), |(a, b), &v| (a.min(v), b.max(v)));
        let spread = (fmax - fmin).max(0.0);
        let half_window = (4.0 * TAIL_EXPONENT * nu * t + 2.0 * t * spread).sqrt();
        Ok(Self { c: prob.c, nu, t, panels_per_period, width, rule, f_cache, half_window })
    }

    /// Half-width `L` of the integration window.
    pub fn half_window(&self) -> f64 {
        self.half_window
    }

    /// Panels per period.
    pub fn panels_per_period(&self) -> usize {
        self.panels_per_period
    }

    /// `u(x, t)` including the mean.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let xs = x - self.c * self.t;
        let pi = std::f64::consts::PI;
        let lo = ((xs - self.half_window + pi) / self.width).floor() as i64;
        let hi = ((xs + self.half_window + pi) / self.width).ceil() as i64;
        let inv = 1.0 / (2.0 * self.nu);
        let two_t = 2.0 * self.t;
        let pp = self.panels_per_period as i64;
        let n = PANEL_NODES;
        let exponent = |p: i64, q: usize| -> (f64, f64) {
            let y = -pi + p as f64 * self.width + self.rule[q].0;
            let f = self.f_cache[(p.rem_euclid(pp) as usize) * n + q];
            let d = xs - y;
            ((f - d * d / two_t) * inv, d)
        };
        let mut emax = f64::NEG_INFINITY;
        for p in lo..hi {
            for q in 0..n {
                emax = emax.max(exponent(p, q).0);
            }
        }
        if !emax.is_finite() {
            return Err(Error::Quadrature(format!("cannot bracket the exponent maximum at x = {x}")));
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for p in lo..hi {
            for q in 0..n {
                let (e, d) = exponent(p, q);
                let w = self.rule[q].1 * (e - emax).exp();
                num += w * d;
                den += w;
            }
        }
        Ok(self.c + num / (den * self.t))
    }

    /// Samples on an `m`-point grid.
    pub fn sample(&self, m: usize) -> Result<GridFunction> {
        crate::grid::validate_grid_size(m)?;
        let values = (0..m)
            .map(|j| self.eval(crate::grid::node(m, j)))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(values)
    }
}

/// `u^CH(x, t)`.  For many points at one time, build a [`ChEvaluator`].
pub fn ch_solution(prob: &CHProblem, x: f64, t: f64) -> Result<f64> {
    ChEvaluator::new(prob, t)?.eval(x)
}

/// Laplace-method profile
/// `c + (1/t)[ξ − π tanh(πξ/2νt)]`, `ξ = x − ct − y₀ − π` reduced to
/// `[−π, π)`.
pub fn laplace_profile(prob: &CHProblem, x: f64, t: f64) -> Result<f64> {
    let y0 = prob.y0()?;
    Ok(laplace_profile_with(y0, prob.c, prob.nu, x, t))
}

/// [`laplace_profile`] with a precomputed `y₀`.
pub fn laplace_profile_with(y0: f64, c: f64, nu: f64, x: f64, t: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let xi = reduce_angle(x - c * t - y0 - pi);
    c + (xi - pi * crate::special_fn::stable_tanh(pi * xi / (2.0 * nu * t))) / t
}
