//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p burgers-metastab --test acceptance -- --nocapture`
//! (the target has its own `main`, so the lines are printed regardless).
//! Tolerances and budgets are pinned below.  Two criteria are known to be
//! unattainable as stated; for those the line reads FAIL and the suite
//! instead asserts the analysis that explains the failure (see
//! [`KNOWN_UNATTAINABLE`]).  The process exits non-zero only on an
//! unexpected failure.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use burgers_metastab::cole_hopf::{laplace_profile, ChEvaluator, CHProblem};
use burgers_metastab::family::{approximation_error, log_conjugation_weight};
use burgers_metastab::fourier::spectral_derivative;
use burgers_metastab::grid::reduce_angle;
use burgers_metastab::metastability::{family_member_on_grid, fit_decay_rate, fit_parameters, track_distance};
use burgers_metastab::solver::{primitive_argmax, random_initial_data, simulate_from};
use burgers_metastab::spectrum::{
    adjoint_basis, assemble, eigenpairs, DiscretizationKind as Kind, Which,
};
use burgers_metastab::special_fn::tables::{
    slow_row_integrand, DigammaVariant, FastRow, SlowRow, TermKind, DIGAMMA_MINUS_FIVE_HALVES,
    DIGAMMA_MINUS_FIVE_HALVES_PRINTED,
};
use burgers_metastab::{FamilyParams, GridFunction, SimConfig};

// ---- pinned tolerances ----------------------------------------------------

const C1_TOL: f64 = 1e-8;
const C2_TOL_PER_N: f64 = 0.05;
const C2_ZERO_TOL: f64 = 1e-8;
const C4_TOL: f64 = 1e-7;
const C5_RATIO_FACTOR: f64 = 10.0;
const C6_L2_TOL: f64 = 5e-3;
const C6_MIN_RATE: f64 = 0.9;
const C7_FACTOR: f64 = 3.0;
const C7_FRACTION: f64 = 0.9;
const C8_PARAM_TOL: f64 = 1e-6;
const C8_MAX_ITER: usize = 6;
const C8_DET_FACTOR: f64 = 2.0;
const C8_PROJ_TOL: f64 = 1e-8;
const C9_REL_TOL: f64 = 0.25;
const C9_FAMILY_FACTOR: f64 = 2.0;
const C10_REL_TOL: f64 = 1e-3;
const C10_ORDER_FACTOR: f64 = 10.0;
const C11_DIST_FRACTION: f64 = 0.05;
const C11_SHIFT_TOL: f64 = 0.15;

/// Criteria that cannot be met as stated; each has an asserted analysis.
const KNOWN_UNATTAINABLE: [u32; 2] = [5, 10];

struct Outcome {
    pass: bool,
    detail: String,
    /// For known-unattainable criteria: whether the explanation holds.
    analysis: Option<(bool, String)>,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail, analysis: None }
}

// ---- 1. zero mode ---------------------------------------------------------

fn c1() -> Outcome {
    let mut worst_discrete: f64 = 0.0;
    let mut worst_continuum: f64 = 0.0;
    for &(nu, t, m_disc, m_cont) in &[(0.05, 1.0, 1024, 2048), (0.01, 5.0, 1024, 2048), (0.001, 5.0, 1024, 16384)] {
        // Discrete: the ground-state discretisation's zero mode.
        let p = FamilyParams::centered(nu, t).unwrap();
        let op = assemble(Kind::GroundStateFiniteVolume, m_disc, &p, Which::L).unwrap();
        let z = op.zero_mode();
        worst_discrete = worst_discrete.max(op.apply(&z).l2_norm() / z.l2_norm());
        // Continuum: φ₀ = C/ψ² from the direct image sum, 𝓛φ = νφ'' − (W₀φ)'
        // by spectral differentiation on a grid resolving the layer.
        let xs: Vec<f64> = (0..m_cont).map(|j| common::node(m_cont, j)).collect();
        let lp: Vec<f64> = xs.iter().map(|&x| common::log_psi(x, nu, t)).collect();
        let lmin = lp.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let phi = GridFunction::new(lp.iter().map(|l| (-2.0 * (l - lmin)).exp()).collect()).unwrap();
        let flux = GridFunction::new(
            xs.iter().zip(phi.values()).map(|(&x, &f)| common::whitham(x, nu, t) * f).collect(),
        )
        .unwrap();
        let lphi = spectral_derivative(&spectral_derivative(&phi)).scale(nu).sub(&spectral_derivative(&flux));
        worst_continuum = worst_continuum.max(lphi.l2_norm() / phi.l2_norm());
    }
    outcome(
        worst_discrete < C1_TOL && worst_continuum < C1_TOL,
        format!("max ‖𝓛φ₀‖/‖φ₀‖: discrete {worst_discrete:.2e}, continuum {worst_continuum:.2e} (tol {C1_TOL:e})"),
    )
}

// ---- 2. spectrum ----------------------------------------------------------

fn c2() -> Outcome {
    let (nu, t) = (0.005, 1.0); // ε² = 2νt = 0.01
    let p = FamilyParams::centered(nu, t).unwrap();
    let solve = |m| eigenpairs(&assemble(Kind::GroundStateFiniteVolume, m, &p, Which::LTilde).unwrap(), 5).unwrap();
    let fine = solve(1024);
    let coarse = solve(512);
    let mut ok = fine.eigenvalues[0].abs() <= C2_ZERO_TOL * fine.scale;
    let mut worst_dev: f64 = 0.0;
    let mut worst_rich: f64 = 0.0;
    for n in 1..5 {
        let nf = n as f64;
        let dev = (fine.eigenvalues[n] * t + nf).abs();
        // Second-order Richardson estimate of the M=1024 discretisation error.
        let rich = ((coarse.eigenvalues[n] - fine.eigenvalues[n]) * t / 3.0).abs();
        ok &= dev <= C2_TOL_PER_N * nf && rich < 0.5 * C2_TOL_PER_N * nf;
        worst_dev = worst_dev.max(dev / nf);
        worst_rich = worst_rich.max(rich / nf);
    }
    outcome(
        ok,
        format!(
            "λ₀ = {:.1e} (scale {:.1e}); max |λₙt+n|/n = {worst_dev:.2e}, Richardson error/n = {worst_rich:.2e} \
             (leading term only; the e^(−1/ε²) corrections are below f64 resolution)",
            fine.eigenvalues[0], fine.scale
        ),
    )
}

// ---- 3. zero counts -------------------------------------------------------

fn c3() -> Outcome {
    let mut draws = common::Draws::new(2024);
    let mut checked = 0;
    let mut bad = Vec::new();
    for &eps in &[0.1, 0.15] {
        for _ in 0..3 {
            let t = 1.0 + 4.0 * (draws.next() + 1.0);
            let dx = PI * draws.next();
            let p = FamilyParams::new(eps * eps / (2.0 * t), t, dx, 0.0).unwrap();
            for which in [Which::L, Which::LTilde] {
                let r = eigenpairs(&assemble(Kind::GroundStateFiniteVolume, 1024, &p, which).unwrap(), 5).unwrap();
                let z: Vec<Option<usize>> = r.zero_counts().into_iter().map(|z| z.ok()).collect();
                checked += 1;
                if z[1..] != [Some(2), Some(2), Some(4), Some(4)] {
                    bad.push(format!("ε={eps} t={t:.2} {which:?}: {z:?}"));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} members × operators; zero counts [2,2,4,4] {bad:?}"))
}

// ---- 4. conjugation identity ----------------------------------------------

fn c4() -> Outcome {
    let mut worst: f64 = 0.0;
    for &(eps, t) in &[(0.1, 1.0), (0.2, 5.0)] {
        let p = FamilyParams::new(eps * eps / (2.0 * t), t, 0.3, 0.0).unwrap();
        let m = 1024;
        let l = assemble(Kind::GroundStateFiniteVolume, m, &p, Which::L).unwrap();
        let lt = assemble(Kind::GroundStateFiniteVolume, m, &p, Which::LTilde).unwrap();
        let nodes: Vec<f64> = burgers_metastab::spectrum::operator::frame_nodes(m, &p);
        let ln_t: Vec<f64> = nodes.iter().map(|&y| log_conjugation_weight(y, &p)).collect();
        let mut draws = common::Draws::new(4);
        for _ in 0..20 {
            let v = draws.vec(m);
            // (𝓣⁻¹𝓛𝓣)_{ik} = L_ik · exp(ln T_k − ln T_i), formed in logs.
            let mut diff = vec![0.0; m];
            for i in 0..m {
                let mut a = 0.0;
                let mut b = 0.0;
                for k in 0..m {
                    let lik = l.matrix[(i, k)];
                    if lik != 0.0 {
                        a += lik * (ln_t[k] - ln_t[i]).exp() * v[k];
                    }
                    b += lt.matrix[(i, k)] * v[k];
                }
                diff[i] = a - b;
            }
            worst = worst.max(common::norm(&diff) / common::norm(&v));
        }
    }
    outcome(worst < C4_TOL, format!("max ‖(𝓣⁻¹𝓛𝓣 − 𝓛̃)v‖/‖v‖ = {worst:.2e} over 40 random v (tol {C4_TOL:e})"))
}

// ---- 5. shock-profile trend -----------------------------------------------

fn c5() -> Outcome {
    let nts = [0.1, 0.05, 0.025];
    let errs: Vec<f64> = nts.iter().map(|&nt| approximation_error(&FamilyParams::centered(nt, 1.0).unwrap()).unwrap()).collect();
    let mut pass = true;
    let mut ratios = Vec::new();
    let mut analysis_ok = true;
    let mut excess = Vec::new();
    for k in 0..2 {
        let observed = errs[k] / errs[k + 1];
        let predicted = (1.0 / nts[k + 1] - 1.0 / nts[k]).exp();
        let q = observed / predicted;
        pass &= (1.0 / C5_RATIO_FACTOR..=C5_RATIO_FACTOR).contains(&q);
        ratios.push(format!("{observed:.2e} vs e^{{Δ(1/νt)}} = {predicted:.2e}"));
        // The images omitted by the profile give sup error ≈ (2π/t)e^{−π²/νt}:
        // the successive ratios follow e^{π²Δ(1/νt)} instead.
        let pi2 = (PI * PI * (1.0 / nts[k + 1] - 1.0 / nts[k])).exp();
        let e = (observed / pi2).ln();
        excess.push(format!("{e:.2}"));
        analysis_ok &= e.abs() < C5_RATIO_FACTOR.ln();
    }
    Outcome {
        pass,
        detail: format!("sup errors {:?}; ratios {ratios:?}", errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>()),
        analysis: Some((
            analysis_ok,
            format!("ratios match e^(π²Δ(1/νt)) (ln of quotient {excess:?}); e^(−1/νt) is an upper bound, not the scaling"),
        )),
    }
}

// ---- 6. Cole–Hopf cross-validation ----------------------------------------

fn c6() -> Outcome {
    // u₀ = sin x; the exact solution is evaluated at the recorded step time.
    let err = |m: usize| {
        let cfg = SimConfig { nu: 0.05, m, cfl_lambda: 0.5, t_end: 1.0, seed: 0, modes: 1, a0: 0.0 };
        let u0 = GridFunction::from_fn(m, |x: f64| x.sin()).unwrap();
        let snaps = simulate_from(u0, &cfg, &[1.0]).unwrap();
        let (time, u) = snaps.last().unwrap();
        let prob = CHProblem::new(&snaps[0].1, 0.05).unwrap();
        let exact = ChEvaluator::new(&prob, *time).unwrap().sample(m).unwrap();
        u.sub(&exact).l2_norm()
    };
    let (e512, e1024) = (err(512), err(1024));
    let rate = (e512 / e1024).log2();
    outcome(
        e1024 < C6_L2_TOL && rate >= C6_MIN_RATE,
        format!("L² error M=512 {e512:.3e}, M=1024 {e1024:.3e}; observed order {rate:.3}"),
    )
}

// ---- 7. Laplace profile ---------------------------------------------------

fn c7() -> Outcome {
    let (nu, t, m) = (0.01, 20.0, 512);
    let cfg = SimConfig { nu, m, cfl_lambda: 0.5, t_end: 0.0, seed: 7, modes: 3, a0: 0.0 };
    let u0 = random_initial_data(&cfg).unwrap();
    let prob = CHProblem::new(&u0, nu).unwrap();
    let ev = ChEvaluator::new(&prob, t).unwrap();
    let bound = C7_FACTOR * (nu.sqrt() + 1.0 / t);
    let mut within = 0;
    let mut worst: f64 = 0.0;
    for j in 0..m {
        let x = common::node(m, j);
        let d = (ev.eval(x).unwrap() - laplace_profile(&prob, x, t).unwrap()).abs();
        worst = worst.max(d);
        if d <= bound {
            within += 1;
        }
    }
    let frac = within as f64 / m as f64;
    outcome(frac >= C7_FRACTION, format!("{:.1}% of points within {bound:.3} (max deviation {worst:.2e})", 100.0 * frac))
}

// ---- 8. projection fit ----------------------------------------------------

fn c8() -> Outcome {
    let (nu, m, x0, c) = (0.005, 1024, 0.4, 0.1);
    let mut ok = true;
    let mut parts = Vec::new();
    for &t0 in &[5.0, 10.0] {
        let p = FamilyParams::new(nu, t0, x0, c).unwrap();
        let w = family_member_on_grid(m, &p).unwrap();
        let basis = adjoint_basis(&p, m, 3).unwrap();
        // A perturbation with no ψ₀, ψ₁, ψ₂ component: the exact answer is (x₀, t₀).
        let u = w.add_scaled(0.01 * w.l2_norm() / basis.phi[3].l2_norm(), &basis.phi[3]);
        let fit = fit_parameters(&u, x0 + 0.01, t0 + 0.01, nu, u.mean()).unwrap();
        let perr = (fit.x_star - x0).abs().max((fit.t_star - t0).abs());
        let det_q = fit.det_a / (PI / (2.0 * t0.powi(3)));
        let proj = fit.residual_projections.iter().fold(0.0f64, |a, b| a.max(b.abs())) / fit.distance;
        ok &= fit.converged
            && perr < C8_PARAM_TOL
            && fit.iterations <= C8_MAX_ITER
            && (1.0 / C8_DET_FACTOR..=C8_DET_FACTOR).contains(&det_q)
            && proj < C8_PROJ_TOL;
        parts.push(format!(
            "t₀={t0}: error {perr:.1e} in {} steps, det A/ref {det_q:.3}, max|⟨v*,ψₙ⟩|/‖v*‖ {proj:.1e}",
            fit.iterations
        ));
    }
    outcome(ok, parts.join("; "))
}

// ---- 9. metastable decay --------------------------------------------------

fn c9() -> Outcome {
    let (nu, m, t0) = (0.005, 2048, 10.0);
    let p = FamilyParams::new(nu, t0, 0.0, 0.0).unwrap();
    let basis = adjoint_basis(&p, m, 3).unwrap();
    let phi = basis.phi[3].scale(1.0 / basis.phi[3].l2_norm());
    let u0 = family_member_on_grid(m, &p).unwrap().add_scaled(0.01, &phi);
    let cfg = SimConfig { nu, m, cfl_lambda: 0.5, t_end: 2.5, seed: 0, modes: 1, a0: 0.0 };
    let taus: Vec<f64> = (0..=25).map(|i| 0.1 * i as f64).collect();
    let snaps = simulate_from(u0, &cfg, &taus).unwrap();
    let track = track_distance(&snaps, nu, 0.0, t0);
    let series: Vec<(f64, f64)> = track.iter().filter(|q| q.converged).map(|q| (q.tau, q.distance)).collect();
    let fit = fit_decay_rate(&series, (0.5, 2.5)).unwrap();
    let predicted = -3.0 / t0;
    let rel = (fit.rate / predicted - 1.0).abs();
    let over_family = fit.rate.abs() * t0;
    outcome(
        rel <= C9_REL_TOL && over_family >= C9_FAMILY_FACTOR,
        format!(
            "rate {:.5} vs −3/t₀ = {predicted} (rel {rel:.3}), r² {:.4}; |rate|/(1/t₀) = {over_family:.2}",
            fit.rate, fit.r_squared
        ),
    )
}

// ---- 10. asymptotic tables ------------------------------------------------

struct RowCheck {
    name: String,
    rel: f64,
    ratio: f64,
    order_ok: bool,
    rel_required: bool,
}

fn c10() -> Outcome {
    let xi = 10.0;
    let mut rows = Vec::new();
    let slack = |v: f64| 8.0 * f64::EPSILON * v.abs();
    for row in SlowRow::ALL {
        let e = row.expansion(DigammaVariant::Recurrence);
        let (exp, oracle, om, algebraic) = match row {
            SlowRow::Erfi => {
                // e^{−ξ²}erfi(ξ) = (2/√π)∫₀^ξ e^{(τ−ξ)(τ+ξ)} dτ.
                let o = 2.0 / PI.sqrt() * common::integrate(|s| ((s - xi) * (s + xi)).exp(), 0.0, xi, 1e-18);
                (e.eval_weighted_part_scaled(xi), o, e.first_omitted.eval_unweighted(xi), false)
            }
            SlowRow::Gauss0 | SlowRow::Gauss2 | SlowRow::Gauss4 | SlowRow::Gauss6 => {
                let pw = match row {
                    SlowRow::Gauss0 => 0,
                    SlowRow::Gauss2 => 2,
                    SlowRow::Gauss4 => 4,
                    _ => 6,
                };
                let o = -common::integrate(|s| s.powi(pw) * ((xi - s) * (xi + s)).exp(), xi, xi + 30.0, 1e-16);
                (e.eval_weighted_part_scaled(xi), o, e.first_omitted.eval_unweighted(xi), false)
            }
            _ => {
                let o = common::integrate(|s| slow_row_integrand(row, s), 0.0, xi, 1e-13);
                (e.eval(xi), o, e.first_omitted.eval(xi), true)
            }
        };
        let res = oracle - exp;
        rows.push(RowCheck {
            name: format!("slow:{}", row.name()),
            rel: (res / oracle).abs(),
            ratio: res / om,
            order_ok: res.abs() <= C10_ORDER_FACTOR * om.abs() + slack(oracle),
            rel_required: algebraic,
        });
    }
    let fast_oracle = |row: FastRow, z: f64| {
        let w = (-2.0 * PI * z).exp();
        let pz = PI * z;
        match row {
            FastRow::Li2 => common::polylog(2, -w),
            FastRow::Li3 => common::polylog(3, -w),
            FastRow::Log1pExp => w.ln_1p(),
            FastRow::Cosh => pz.cosh(),
            FastRow::Sinh => pz.sinh(),
            FastRow::Tanh => pz.tanh(),
            FastRow::Sech => 1.0 / pz.cosh(),
            FastRow::Csch => 1.0 / pz.sinh(),
            FastRow::Coth => 1.0 / pz.tanh(),
        }
    };
    for row in FastRow::ALL {
        // Small-z series (algebraic order) at z = 10⁻².
        let s = row.small_z();
        let z = 1e-2;
        let o = fast_oracle(row, z);
        let res = o - s.eval(z);
        let om = s.omitted_magnitude(z);
        rows.push(RowCheck {
            name: format!("fast-small:{}", row.name()),
            rel: (res / o).abs(),
            ratio: res / om,
            order_ok: res.abs() <= C10_ORDER_FACTOR * om + slack(o),
            rel_required: true,
        });
        // Large-z exponential expansions at a resolving z = 2 and at z = 8.
        for z in [2.0, 8.0] {
            let l = row.large_z();
            let o = fast_oracle(row, z);
            let res = o - l.eval(z);
            let om = l.omitted_magnitude(z);
            rows.push(RowCheck {
                name: format!("fast-large:{}@{z}", row.name()),
                rel: (res / o).abs(),
                ratio: res / om,
                order_ok: res.abs() <= C10_ORDER_FACTOR * om + slack(o),
                rel_required: false,
            });
        }
    }
    // ψ(−5/2): extract the constant of the τ⁵ moment from quadrature.
    let e5 = SlowRow::ErfiMoment5.expansion(DigammaVariant::Recurrence);
    let xi5 = 20.0;
    let nonconst: f64 = e5.terms.iter().filter(|t| t.kind != TermKind::Constant).map(|t| t.eval(xi5)).sum();
    let q = common::integrate(|s| slow_row_integrand(SlowRow::ErfiMoment5, s), 0.0, xi5, 1e-12);
    let digamma = (q - nonconst - e5.first_omitted.eval(xi5)) / (15.0 / 16.0);
    let digamma_ok = (digamma - DIGAMMA_MINUS_FIVE_HALVES).abs() < (digamma - DIGAMMA_MINUS_FIVE_HALVES_PRINTED).abs();

    let failing: Vec<&RowCheck> = rows.iter().filter(|r| !r.order_ok || (r.rel_required && r.rel >= C10_REL_TOL)).collect();
    let pass = failing.is_empty() && digamma_ok;
    let detail = format!(
        "{} rows; failing {:?}; ψ(−5/2) from quadrature {digamma:.5} (recurrence {:.5}, printed {:.5})",
        rows.len(),
        failing.iter().map(|r| format!("{} rel {:.2e} ratio {:.3}", r.name, r.rel, r.ratio)).collect::<Vec<_>>(),
        DIGAMMA_MINUS_FIVE_HALVES,
        DIGAMMA_MINUS_FIVE_HALVES_PRINTED
    );
    // The only failure is a row whose residual *is* its first omitted term
    // (ratio ≈ 1): the expansion holds at its stated order, and at ξ = 10 the
    // omitted term itself exceeds the relative tolerance.
    let analysis_ok = digamma_ok
        && rows.iter().all(|r| r.order_ok)
        && failing.iter().all(|r| r.rel_required && (0.5..2.0).contains(&r.ratio));
    Outcome {
        pass,
        detail,
        analysis: Some((
            analysis_ok,
            "every row is at its stated order; the relative-error miss is the size of the first omitted term at ξ=10"
                .into(),
        )),
    }
}

// ---- 11. regime reproduction ----------------------------------------------

fn c11() -> Outcome {
    let (nu, m, t) = (0.008, 350, 24.0);
    let cfg = SimConfig { nu, m, cfl_lambda: 0.5, t_end: t, seed: 3, modes: 20, a0: 0.0 };
    let u0 = random_initial_data(&cfg).unwrap();
    let y0 = primitive_argmax(&u0).unwrap();
    let guess = reduce_angle(y0 + PI);
    let snaps = simulate_from(u0, &cfg, &[t]).unwrap();
    let (time, u) = snaps.last().unwrap();
    let fit = fit_parameters(u, guess, *time, nu, u.mean()).unwrap();
    let frac = fit.distance / u.l2_norm();
    let shift = reduce_angle(fit.x_star - guess).abs();
    // Repository goldens for seed 3.
    let golden = (y0 + 2.4542).abs() < 1e-3 && (fit.x_star - 0.6833).abs() < 1e-3 && (frac - 0.0205).abs() < 1e-3;
    outcome(
        fit.converged && frac < C11_DIST_FRACTION && shift < C11_SHIFT_TOL && golden,
        format!(
            "seed 3: y₀ = {y0:.4}, x* = {:.4}, |x* − (y₀+π)| = {shift:.4}, dist/‖u‖ = {frac:.4} at t = {time:.3}",
            fit.x_star
        ),
    )
}

// ---- driver ---------------------------------------------------------------

type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "zero mode", c1, Duration::from_secs(30)),
        (2, "spectrum", c2, Duration::from_secs(120)),
        (3, "zero counts", c3, Duration::from_secs(60)),
        (4, "conjugation identity", c4, Duration::from_secs(30)),
        (5, "shock-profile trend", c5, Duration::from_secs(30)),
        (6, "Cole-Hopf cross-validation", c6, Duration::from_secs(60)),
        (7, "Laplace profile", c7, Duration::from_secs(60)),
        (8, "projection fit", c8, Duration::from_secs(30)),
        (9, "metastable decay", c9, Duration::from_secs(300)),
        (10, "asymptotic tables", c10, Duration::from_secs(30)),
        (11, "regime reproduction", c11, Duration::from_secs(300)),
    ];
    let mut unexpected = Vec::new();
    for (n, name, f, budget) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f);
        let elapsed = start.elapsed();
        let o = result.unwrap_or_else(|_| outcome(false, "panicked".into()));
        let in_budget = elapsed <= budget;
        let pass = o.pass && in_budget;
        let verdict = if pass { "PASS" } else { "FAIL" };
        let budget_note = if in_budget { String::new() } else { format!(" [over budget {budget:?}]") };
        println!("{verdict} criterion {n:>2} ({name}): {} [{elapsed:.1?}]{budget_note}", o.detail);
        let known = KNOWN_UNATTAINABLE.contains(&n);
        if let Some((ok, why)) = &o.analysis {
            if !pass && known {
                println!("     known unattainable — analysis {}: {why}", if *ok { "holds" } else { "DOES NOT HOLD" });
                if !ok {
                    unexpected.push(n);
                }
            }
        }
        if !pass && !known {
            unexpected.push(n);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria pass except the documented known-unattainable ones {KNOWN_UNATTAINABLE:?}");
    } else {
        println!("acceptance: unexpected failures {unexpected:?}");
        std::process::exit(1);
    }
}
