//! Expansion-versus-oracle verification of the asymptotic tables.
//!
//! Slow-scale rows are compared with adaptive quadrature of their defining
//! integrals; Gaussian-weighted rows are compared on the scaled tail
//! `e^{±ξ²}·(value − constant)` so that the corrections are not lost to
//! rounding.  Fast-scale rows are compared with direct evaluations
//! (polylogarithms by their alternating power series).
//!
//! A row passes when its residual is of the stated order, i.e. at most ten
//! times the first omitted term (plus a few ulps of the value).  Small-`z`
//! rows must in addition reach a relative error below `10⁻⁴`.  The relative
//! error of every row is reported alongside.

use std::f64::consts::PI;

use burgers_metastab::quadrature::adaptive;
use burgers_metastab::special_fn::tables::{
    slow_row_integrand, DigammaVariant, FastRow, SlowRow, DIGAMMA_MINUS_FIVE_HALVES,
    DIGAMMA_MINUS_FIVE_HALVES_PRINTED,
};
use rayon::prelude::*;
use serde::Serialize;

/// Order factor: a residual may be at most this multiple of the first
/// omitted term.
pub const ORDER_FACTOR: f64 = 10.0;
/// Relative-error requirement of the small-`z` rows.
pub const SMALL_Z_REL_TOL: f64 = 1e-4;
/// Small-`z` argument.
pub const SMALL_Z: f64 = 1e-2;
/// Large-`z` argument at which the exponential corrections are resolvable.
pub const RESOLVING_Z: f64 = 2.0;

/// One verified row.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct TableCheck {
    /// `slow`, `fast-small` or `fast-large`.
    pub table: &'static str,
    /// Row identifier.
    pub row: String,
    /// Argument (`ξ` or `z`).
    pub argument: f64,
    /// Compared quantity from the expansion.
    pub expansion: f64,
    /// Compared quantity from the oracle.
    pub oracle: f64,
    /// `oracle − expansion`.
    pub residual: f64,
    /// First omitted term at the argument.
    pub omitted: f64,
    /// `residual / omitted`.
    pub ratio: f64,
    /// `|residual / oracle|`.
    pub rel_err: f64,
    /// Verdict.
    pub pass: bool,
}

/// How the quadrature oracle resolves the constant `ψ⁽⁰⁾(−5/2)`.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct DigammaResolution {
    /// `ξ` used.
    pub xi: f64,
    /// Constant term extracted from quadrature, divided by `15/16`.
    pub oracle_value: f64,
    /// `45/15 − γ − ln 4`.
    pub printed: f64,
    /// `46/15 − γ − ln 4`.
    pub recurrence: f64,
    /// `|oracle − printed|`.
    pub printed_error: f64,
    /// `|oracle − recurrence|`.
    pub recurrence_error: f64,
    /// `"recurrence"` or `"printed"`.
    pub selected: &'static str,
}

/// Full report.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct TablesReport {
    pub rows: Vec<TableCheck>,
    pub digamma: DigammaResolution,
}

impl TablesReport {
    /// `true` when every row passes.
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn check(table: &'static str, row: &str, argument: f64, expansion: f64, oracle: f64, omitted: f64) -> TableCheck {
    let residual = oracle - expansion;
    let slack = 8.0 * f64::EPSILON * oracle.abs().max(expansion.abs());
    TableCheck {
        table,
        row: row.to_owned(),
        argument,
        expansion,
        oracle,
        residual,
        omitted,
        ratio: residual / omitted,
        rel_err: if oracle != 0.0 { (residual / oracle).abs() } else { residual.abs() },
        pass: residual.abs() <= ORDER_FACTOR * omitted.abs() + slack,
    }
}

fn gauss_power(row: SlowRow) -> i32 {
    match row {
        SlowRow::Gauss0 => 0,
        SlowRow::Gauss2 => 2,
        SlowRow::Gauss4 => 4,
        _ => 6,
    }
}

/// `∫₀^ξ integrand` by adaptive quadrature.
fn slow_quadrature(row: SlowRow, xi: f64) -> Result<f64, burgers_metastab::Error> {
    adaptive(|t| slow_row_integrand(row, t), 0.0, xi, 1e-14, 1e-14)
}

fn slow_check(row: SlowRow, xi: f64) -> Result<TableCheck, burgers_metastab::Error> {
    let e = row.expansion(DigammaVariant::Recurrence);
    let omitted_scaled = e.first_omitted.eval_unweighted(xi);
    Ok(match row {
        SlowRow::Erfi => {
            // e^{−ξ²} erfi(ξ) = (2/√π) ∫₀^ξ e^{τ²−ξ²} dτ.
            let oracle = 2.0 / PI.sqrt() * adaptive(|t| ((t - xi) * (t + xi)).exp(), 0.0, xi, 1e-300, 1e-14)?;
            check("slow", row.name(), xi, e.eval_weighted_part_scaled(xi), oracle, omitted_scaled)
        }
        SlowRow::Gauss0 | SlowRow::Gauss2 | SlowRow::Gauss4 | SlowRow::Gauss6 => {
            // e^{ξ²}(∫₀^ξ − ∫₀^∞) = −∫_ξ^∞ τ^p e^{ξ²−τ²} dτ; the integrand is
            // below 10⁻³⁰⁰ relative beyond ξ + 30.
            let p = gauss_power(row);
            let oracle = -adaptive(|t| t.powi(p) * ((xi - t) * (xi + t)).exp(), xi, xi + 30.0, 1e-300, 1e-14)?;
            check("slow", row.name(), xi, e.eval_weighted_part_scaled(xi), oracle, omitted_scaled)
        }
        _ => check("slow", row.name(), xi, e.eval(xi), slow_quadrature(row, xi)?, e.first_omitted.eval(xi)),
    })
}

/// `Σ_{k≥1} x^k / k^s` for `x ∈ [−1, 0]`, summed until the terms stall.
pub fn polylog_series(s: i32, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for k in 1..2_000_000u64 {
        pow *= x;
        let term = pow / (k as f64).powi(s);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Direct evaluation of a fast-scale row.
pub fn fast_oracle(row: FastRow, z: f64) -> f64 {
    let w = (-2.0 * PI * z).exp();
    let pz = PI * z;
    match row {
        FastRow::Li2 => polylog_series(2, -w),
        FastRow::Li3 => polylog_series(3, -w),
        FastRow::Log1pExp => w.ln_1p(),
        FastRow::Cosh => pz.cosh(),
        FastRow::Sinh => pz.sinh(),
        FastRow::Tanh => pz.tanh(),
        FastRow::Sech => 1.0 / pz.cosh(),
        FastRow::Csch => 1.0 / pz.sinh(),
        FastRow::Coth => 1.0 / pz.tanh(),
    }
}

fn fast_small_check(row: FastRow, z: f64) -> TableCheck {
    let s = row.small_z();
    let mut c = check("fast-small", row.name(), z, s.eval(z), fast_oracle(row, z), s.omitted_magnitude(z));
    c.pass &= c.rel_err < SMALL_Z_REL_TOL;
    c
}

fn fast_large_check(row: FastRow, z: f64) -> TableCheck {
    let l = row.large_z();
    let omitted = l.omitted * (l.omitted_rate * PI * z).exp();
    check("fast-large", row.name(), z, l.eval(z), fast_oracle(row, z), omitted)
}

/// Extracts `ψ⁽⁰⁾(−5/2)` from quadrature of the `τ⁵` Dawson moment and
/// compares it with the printed and the recurrence value.
pub fn resolve_digamma(xi: f64) -> Result<DigammaResolution, burgers_metastab::Error> {
    let e = SlowRow::ErfiMoment5.expansion(DigammaVariant::Recurrence);
    let non_constant: f64 = e
        .terms
        .iter()
        .filter(|t| t.kind != burgers_metastab::special_fn::tables::TermKind::Constant)
        .map(|t| t.eval(xi))
        .sum();
    let constant = slow_quadrature(SlowRow::ErfiMoment5, xi)? - non_constant - e.first_omitted.eval(xi);
    let oracle_value = constant / (15.0 / 16.0);
    let printed_error = (oracle_value - DIGAMMA_MINUS_FIVE_HALVES_PRINTED).abs();
    let recurrence_error = (oracle_value - DIGAMMA_MINUS_FIVE_HALVES).abs();
    Ok(DigammaResolution {
        xi,
        oracle_value,
        printed: DIGAMMA_MINUS_FIVE_HALVES_PRINTED,
        recurrence: DIGAMMA_MINUS_FIVE_HALVES,
        printed_error,
        recurrence_error,
        selected: if recurrence_error < printed_error { "recurrence" } else { "printed" },
    })
}

/// Verifies all rows: slow rows at `ξ`, small-`z` rows at [`SMALL_Z`],
/// large-`z` rows at [`RESOLVING_Z`] and at `z`.
pub fn verify(xi: f64, z: f64) -> Result<TablesReport, burgers_metastab::Error> {
    enum Job {
        Slow(SlowRow),
        Small(FastRow),
        Large(FastRow, f64),
    }
    let mut jobs: Vec<Job> = SlowRow::ALL.iter().map(|&r| Job::Slow(r)).collect();
    jobs.extend(FastRow::ALL.iter().map(|&r| Job::Small(r)));
    for zz in [RESOLVING_Z, z] {
        jobs.extend(FastRow::ALL.iter().map(|&r| Job::Large(r, zz)));
    }
    let rows = jobs
        .par_iter()
        .map(|j| match *j {
            Job::Slow(r) => slow_check(r, xi),
            Job::Small(r) => Ok(fast_small_check(r, SMALL_Z)),
            Job::Large(r, zz) => Ok(fast_large_check(r, zz)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TablesReport { rows, digamma: resolve_digamma(xi)? })
}
