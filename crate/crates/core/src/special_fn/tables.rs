//! Asymptotic expansions of the integrals and elementary functions that
//! appear in the slow-scale and fast-scale eigenfunction constructions.
//!
//! Two families are provided:
//!
//! * [`SlowRow`]: nine large-`ξ` expansions of Gaussian moments, of `erfi`
//!   and of Dawson-type moment integrals.  Each is stored as a list of
//!   [`ExpansionTerm`]s (constant, logarithmic, algebraic and
//!   Gaussian-weighted pieces) together with its first omitted term, so that
//!   callers can check the residual against the expected order.
//! * [`FastRow`]: nine functions of the fast variable `z` with their `z → 0`
//!   Taylor expansions and `z → ∞` exponential expansions.
//!
//! The digamma constants are hard-coded.  The value printed for
//! `ψ⁽⁰⁾(−5/2)` (`45/15 − γ − ln 4`) differs from the recurrence
//! `ψ(x+1) = ψ(x) + 1/x`, which gives `46/15 − γ − ln 4`; both are exposed via
//! [`DigammaVariant`].  Quadrature of the `τ⁵` Dawson moment confirms the
//! recurrence value (with the printed constant the residual stalls at a
//! fixed offset of `15/16·(1/15) = 1/16` instead of decaying like `ξ⁻²`), so
//! the recurrence value is the default.

use crate::error::{Error, Result};
use crate::special_fn::{dawson, erfi_scaled, polylog, stable_sech, stable_tanh};
use std::f64::consts::{LN_2, PI};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Apéry's constant ζ(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// `ψ⁽⁰⁾(1/2) = −γ − ln 4`.
pub const DIGAMMA_HALF: f64 = -EULER_GAMMA - 2.0 * LN_2;
/// `ψ⁽⁰⁾(−1/2) = 2 − γ − ln 4`.
pub const DIGAMMA_MINUS_HALF: f64 = 2.0 - EULER_GAMMA - 2.0 * LN_2;
/// `ψ⁽⁰⁾(−3/2) = 8/3 − γ − ln 4`.
pub const DIGAMMA_MINUS_THREE_HALVES: f64 = 8.0 / 3.0 - EULER_GAMMA - 2.0 * LN_2;
/// `ψ⁽⁰⁾(−5/2)` exactly as printed in the source table: `45/15 − γ − ln 4`.
pub const DIGAMMA_MINUS_FIVE_HALVES_PRINTED: f64 = 45.0 / 15.0 - EULER_GAMMA - 2.0 * LN_2;
/// `ψ⁽⁰⁾(−5/2)` from the recurrence `ψ(x) = ψ(x+1) − 1/x`: `46/15 − γ − ln 4`.
pub const DIGAMMA_MINUS_FIVE_HALVES: f64 = 46.0 / 15.0 - EULER_GAMMA - 2.0 * LN_2;

/// Which value of `ψ⁽⁰⁾(−5/2)` the `τ⁵` Dawson-moment row uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DigammaVariant {
    /// `45/15 − γ − ln 4`, as printed.
    AsPrinted,
    /// `46/15 − γ − ln 4`, from the digamma recurrence.
    #[default]
    Recurrence,
}

/// Shape of an expansion term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    /// `coefficient · ξ^power`.
    Algebraic,
    /// `coefficient · ln(1/ξ)` (`power` is ignored).
    Log,
    /// `coefficient` (`power` is ignored).
    Constant,
}

/// Gaussian weight multiplying an expansion term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianFactor {
    /// No weight.
    None,
    /// Multiplied by `e^{-ξ²}`.
    Decaying,
    /// Multiplied by `e^{+ξ²}`.
    Growing,
}

/// One term of a large-argument expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    /// Finite real coefficient.
    pub coefficient: f64,
    /// Power of `ξ` for algebraic terms.
    pub power: i32,
    /// Algebraic, logarithmic or constant.
    pub kind: TermKind,
    /// Gaussian weight (only algebraic terms carry one).
    pub gaussian: GaussianFactor,
}

impl ExpansionTerm {
    const fn constant(c: f64) -> Self {
        Self { coefficient: c, power: 0, kind: TermKind::Constant, gaussian: GaussianFactor::None }
    }
    const fn log(c: f64) -> Self {
        Self { coefficient: c, power: 0, kind: TermKind::Log, gaussian: GaussianFactor::None }
    }
    const fn alg(c: f64, p: i32) -> Self {
        Self { coefficient: c, power: p, kind: TermKind::Algebraic, gaussian: GaussianFactor::None }
    }
    const fn decaying(c: f64, p: i32) -> Self {
        Self { coefficient: c, power: p, kind: TermKind::Algebraic, gaussian: GaussianFactor::Decaying }
    }
    const fn growing(c: f64, p: i32) -> Self {
        Self { coefficient: c, power: p, kind: TermKind::Algebraic, gaussian: GaussianFactor::Growing }
    }

    /// Value of the term with its Gaussian weight removed.
    pub fn eval_unweighted(&self, xi: f64) -> f64 {
        match self.kind {
            TermKind::Constant => self.coefficient,
            TermKind::Log => self.coefficient * (1.0 / xi).ln(),
            TermKind::Algebraic => self.coefficient * xi.powi(self.power),
        }
    }

    /// Value of the term including its Gaussian weight.
    pub fn eval(&self, xi: f64) -> f64 {
        let base = self.eval_unweighted(xi);
        match self.gaussian {
            GaussianFactor::None => base,
            GaussianFactor::Decaying => base * (-xi * xi).exp(),
            GaussianFactor::Growing => base * (xi * xi).exp(),
        }
    }
}

/// The nine large-`ξ` rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlowRow {
    /// `erfi(ξ)`.
    Erfi,
    /// `∫₀^ξ e^{-τ²} dτ`.
    Gauss0,
    /// `∫₀^ξ τ² e^{-τ²} dτ`.
    Gauss2,
    /// `∫₀^ξ τ⁴ e^{-τ²} dτ`.
    Gauss4,
    /// `∫₀^ξ τ⁶ e^{-τ²} dτ`.
    Gauss6,
    /// `√π ∫₀^ξ e^{-τ²} erfi(τ) dτ`.
    ErfiGauss,
    /// `∫₀^ξ τ [1 − √π τ e^{-τ²} erfi(τ)] dτ`.
    ErfiMoment1,
    /// `∫₀^ξ τ³ [1 − √π τ e^{-τ²} erfi(τ)] dτ`.
    ErfiMoment3,
    /// `∫₀^ξ τ⁵ [1 − √π τ e^{-τ²} erfi(τ)] dτ`.
    ErfiMoment5,
}

impl SlowRow {
    /// All rows in table order.
    pub const ALL: [SlowRow; 9] = [
        SlowRow::Erfi,
        SlowRow::Gauss0,
        SlowRow::Gauss2,
        SlowRow::Gauss4,
        SlowRow::Gauss6,
        SlowRow::ErfiGauss,
        SlowRow::ErfiMoment1,
        SlowRow::ErfiMoment3,
        SlowRow::ErfiMoment5,
    ];

    /// Stable identifier used in reports and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            SlowRow::Erfi => "erfi",
            SlowRow::Gauss0 => "gauss0",
            SlowRow::Gauss2 => "gauss2",
            SlowRow::Gauss4 => "gauss4",
            SlowRow::Gauss6 => "gauss6",
            SlowRow::ErfiGauss => "erfi_gauss",
            SlowRow::ErfiMoment1 => "erfi_moment1",
            SlowRow::ErfiMoment3 => "erfi_moment3",
            SlowRow::ErfiMoment5 => "erfi_moment5",
        }
    }

    /// Inverse of [`SlowRow::name`].
    pub fn from_name(name: &str) -> Result<Self> {
        SlowRow::ALL
            .iter()
            .copied()
            .find(|r| r.name() == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown slow-table row `{name}`")))
    }

    /// `true` for rows whose correction is Gaussian-weighted (algebraic
    /// order is then measured on the scaled tail).
    pub fn is_exponential(self) -> bool {
        matches!(
            self,
            SlowRow::Erfi | SlowRow::Gauss0 | SlowRow::Gauss2 | SlowRow::Gauss4 | SlowRow::Gauss6
        )
    }

    /// The truncated expansion and its first omitted term.
    pub fn expansion(self, digamma: DigammaVariant) -> SlowExpansion {
        let sqrt_pi = PI.sqrt();
        let psi52 = match digamma {
            DigammaVariant::AsPrinted => DIGAMMA_MINUS_FIVE_HALVES_PRINTED,
            DigammaVariant::Recurrence => DIGAMMA_MINUS_FIVE_HALVES,
        };
        use ExpansionTerm as T;
        let (terms, omitted) = match self {
            SlowRow::Erfi => (
                vec![T::growing(1.0 / sqrt_pi, -1), T::growing(0.5 / sqrt_pi, -3)],
                T::growing(0.75 / sqrt_pi, -5),
            ),
            SlowRow::Gauss0 => (
                vec![T::constant(0.5 * sqrt_pi), T::decaying(-0.5, -1), T::decaying(0.25, -3)],
                T::decaying(-0.375, -5),
            ),
            SlowRow::Gauss2 => (
                vec![T::constant(0.25 * sqrt_pi), T::decaying(-0.5, 1), T::decaying(-0.25, -1)],
                T::decaying(0.125, -3),
            ),
            SlowRow::Gauss4 => (
                vec![T::constant(0.375 * sqrt_pi), T::decaying(-0.5, 3), T::decaying(-0.75, 1)],
                T::decaying(-0.375, -1),
            ),
            SlowRow::Gauss6 => (
                vec![T::constant(15.0 / 16.0 * sqrt_pi), T::decaying(-0.5, 5), T::decaying(-1.25, 3)],
                T::decaying(-1.875, 1),
            ),
            SlowRow::ErfiGauss => (
                vec![T::log(-1.0), T::constant(-0.5 * DIGAMMA_HALF)],
                T::alg(-0.25, -2),
            ),
            SlowRow::ErfiMoment1 => (
                vec![T::log(0.5), T::constant(0.25 * DIGAMMA_MINUS_HALF)],
                T::alg(0.375, -2),
            ),
            SlowRow::ErfiMoment3 => (
                vec![T::alg(-0.25, 2), T::log(0.75), T::constant(0.375 * DIGAMMA_MINUS_THREE_HALVES)],
                T::alg(15.0 / 16.0, -2),
            ),
            SlowRow::ErfiMoment5 => (
                vec![
                    T::alg(-0.125, 4),
                    T::alg(-0.375, 2),
                    T::log(15.0 / 8.0),
                    T::constant(15.0 / 16.0 * psi52),
                ],
                T::alg(105.0 / 32.0, -2),
            ),
        };
        SlowExpansion { row: self, terms, first_omitted: omitted }
    }
}

/// A truncated large-`ξ` expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct SlowExpansion {
    /// Row the expansion belongs to.
    pub row: SlowRow,
    /// Retained terms in decreasing significance within each weight class.
    pub terms: Vec<ExpansionTerm>,
    /// First term dropped from the expansion.
    pub first_omitted: ExpansionTerm,
}

impl SlowExpansion {
    /// Sum of all retained terms.
    pub fn eval(&self, xi: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(xi)).sum()
    }

    /// Sum of the retained terms without a Gaussian weight.
    pub fn eval_unweighted_part(&self, xi: f64) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.gaussian == GaussianFactor::None)
            .map(|t| t.eval(xi))
            .sum()
    }

    /// Sum of the Gaussian-weighted retained terms with the weight removed.
    pub fn eval_weighted_part_scaled(&self, xi: f64) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.gaussian != GaussianFactor::None)
            .map(|t| t.eval_unweighted(xi))
            .sum()
    }
}

/// Truncated large-`ξ` expansion of the named row at `ξ ≥ 5`.
///
/// # Errors
/// [`Error::Regime`] for `ξ < 5`, where the expansions are not meaningful.
pub fn slow_table_expansion(row: SlowRow, xi: f64, digamma: DigammaVariant) -> Result<f64> {
    if !(xi >= 5.0) {
        return Err(Error::Regime(format!("large-argument expansion requires xi >= 5, got {xi}")));
    }
    Ok(row.expansion(digamma).eval(xi))
}

/// `1 − √π τ e^{-τ²} erfi(τ)`, evaluated through the scaled `erfi` so that
/// no overflowing factor is formed.
pub fn sqrt_pi_tau_dawson_defect(tau: f64) -> f64 {
    1.0 - PI.sqrt() * tau * erfi_scaled(tau)
}

/// Integrand of each slow row (with `erfi` in scaled form), for quadrature.
pub fn slow_row_integrand(row: SlowRow, tau: f64) -> f64 {
    match row {
        SlowRow::Erfi => 0.0,
        SlowRow::Gauss0 => (-tau * tau).exp(),
        SlowRow::Gauss2 => tau * tau * (-tau * tau).exp(),
        SlowRow::Gauss4 => tau.powi(4) * (-tau * tau).exp(),
        SlowRow::Gauss6 => tau.powi(6) * (-tau * tau).exp(),
        SlowRow::ErfiGauss => 2.0 * dawson(tau),
        SlowRow::ErfiMoment1 => tau * sqrt_pi_tau_dawson_defect(tau),
        SlowRow::ErfiMoment3 => tau.powi(3) * sqrt_pi_tau_dawson_defect(tau),
        SlowRow::ErfiMoment5 => tau.powi(5) * sqrt_pi_tau_dawson_defect(tau),
    }
}

/// The nine fast-scale functions of `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FastRow {
    /// `Li₂(−e^{−2πz})`.
    Li2,
    /// `Li₃(−e^{−2πz})`.
    Li3,
    /// `ln(1 + e^{−2πz})`.
    Log1pExp,
    /// `cosh(πz)`.
    Cosh,
    /// `sinh(πz)`.
    Sinh,
    /// `tanh(πz)`.
    Tanh,
    /// `sech(πz)`.
    Sech,
    /// `csch(πz)`.
    Csch,
    /// `coth(πz)`.
    Coth,
}

/// Exponential large-`z` expansion `constant + lead · e^{rate·πz}` with
/// first omitted term `omitted · e^{omitted_rate·πz}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LargeZExpansion {
    /// Additive constant.
    pub constant: f64,
    /// Coefficient of the leading exponential.
    pub lead: f64,
    /// Exponential rate of the leading term in units of `π`.
    pub rate: f64,
    /// Coefficient of the first omitted exponential.
    pub omitted: f64,
    /// Exponential rate of the omitted term in units of `π`.
    pub omitted_rate: f64,
}

impl LargeZExpansion {
    /// Retained value.
    pub fn eval(&self, z: f64) -> f64 {
        self.constant + self.lead * (self.rate * PI * z).exp()
    }
    /// Magnitude of the first omitted term.
    pub fn omitted_magnitude(&self, z: f64) -> f64 {
        (self.omitted * (self.omitted_rate * PI * z).exp()).abs()
    }
}

/// Polynomial small-`z` expansion `Σ cₖ z^{pₖ}` with its first omitted term.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallZExpansion {
    /// `(coefficient, power)` pairs; powers may be negative.
    pub terms: Vec<(f64, i32)>,
    /// First omitted `(coefficient, power)`.
    pub omitted: (f64, i32),
}

impl SmallZExpansion {
    /// Retained value.
    pub fn eval(&self, z: f64) -> f64 {
        self.terms.iter().map(|&(c, p)| c * z.powi(p)).sum()
    }
    /// Magnitude of the first omitted term.
    pub fn omitted_magnitude(&self, z: f64) -> f64 {
        (self.omitted.0 * z.powi(self.omitted.1)).abs()
    }
}

impl FastRow {
    /// All rows in table order.
    pub const ALL: [FastRow; 9] = [
        FastRow::Li2,
        FastRow::Li3,
        FastRow::Log1pExp,
        FastRow::Cosh,
        FastRow::Sinh,
        FastRow::Tanh,
        FastRow::Sech,
        FastRow::Csch,
        FastRow::Coth,
    ];

    /// Stable identifier.
    pub fn name(self) -> &'static str {
        match self {
            FastRow::Li2 => "li2",
            FastRow::Li3 => "li3",
            FastRow::Log1pExp => "log1p_exp",
            FastRow::Cosh => "cosh",
            FastRow::Sinh => "sinh",
            FastRow::Tanh => "tanh",
            FastRow::Sech => "sech",
            FastRow::Csch => "csch",
            FastRow::Coth => "coth",
        }
    }

    /// Function value computed from the crate's special functions.
    pub fn value(self, z: f64) -> f64 {
        let w = (-2.0 * PI * z).exp();
        let pz = PI * z;
        match self {
            FastRow::Li2 => polylog(2, -w).expect("argument in [-1,0]"),
            FastRow::Li3 => polylog(3, -w).expect("argument in [-1,0]"),
            FastRow::Log1pExp => w.ln_1p(),
            FastRow::Cosh => pz.cosh(),
            FastRow::Sinh => pz.sinh(),
            FastRow::Tanh => stable_tanh(pz),
            FastRow::Sech => stable_sech(pz),
            FastRow::Csch => 1.0 / pz.sinh(),
            FastRow::Coth => 1.0 / stable_tanh(pz),
        }
    }

    /// `z → 0` expansion.
    pub fn small_z(self) -> SmallZExpansion {
        let p = PI;
        let (terms, omitted) = match self {
            FastRow::Li2 => (
                vec![(-p * p / 12.0, 0), (2.0 * p * LN_2, 1), (-p * p, 2), (p.powi(3) / 3.0, 3)],
                (-p.powi(5) / 30.0, 5),
            ),
            FastRow::Li3 => (
                vec![
                    (-0.75 * ZETA_3, 0),
                    (p.powi(3) / 6.0, 1),
                    (-p * p * 4f64.ln(), 2),
                    (2.0 * p.powi(3) / 3.0, 3),
                ],
                (-p.powi(4) / 6.0, 4),
            ),
            FastRow::Log1pExp => (vec![(LN_2, 0), (-p, 1), (p * p / 2.0, 2)], (-p.powi(4) / 12.0, 4)),
            FastRow::Cosh => (vec![(1.0, 0), (p * p / 2.0, 2)], (p.powi(4) / 24.0, 4)),
            FastRow::Sinh => (vec![(p, 1), (p.powi(3) / 6.0, 3)], (p.powi(5) / 120.0, 5)),
            FastRow::Tanh => (vec![(p, 1), (-p.powi(3) / 3.0, 3)], (2.0 * p.powi(5) / 15.0, 5)),
            FastRow::Sech => (vec![(1.0, 0), (-p * p / 2.0, 2)], (5.0 * p.powi(4) / 24.0, 4)),
            FastRow::Csch => (vec![(1.0 / p, -1), (-p / 6.0, 1)], (7.0 * p.powi(3) / 360.0, 3)),
            FastRow::Coth => (vec![(1.0 / p, -1), (p / 3.0, 1)], (-p.powi(3) / 45.0, 3)),
        };
        SmallZExpansion { terms, omitted }
    }

    /// `z → ∞` expansion.
    pub fn large_z(self) -> LargeZExpansion {
        let e = |constant, lead, rate, omitted, omitted_rate| LargeZExpansion {
            constant,
            lead,
            rate,
            omitted,
            omitted_rate,
        };
        match self {
            FastRow::Li2 => e(0.0, -1.0, -2.0, 0.25, -4.0),
            FastRow::Li3 => e(0.0, -1.0, -2.0, 0.125, -4.0),
            FastRow::Log1pExp => e(0.0, 1.0, -2.0, -0.5, -4.0),
            FastRow::Cosh => e(0.0, 0.5, 1.0, 0.5, -1.0),
            FastRow::Sinh => e(0.0, 0.5, 1.0, -0.5, -1.0),
            FastRow::Tanh => e(1.0, 0.0, 0.0, -2.0, -2.0),
            FastRow::Sech => e(0.0, 2.0, -1.0, -2.0, -3.0),
            FastRow::Csch => e(0.0, 2.0, -1.0, 2.0, -3.0),
            FastRow::Coth => e(1.0, 0.0, 0.0, 2.0, -2.0),
        }
    }
}
