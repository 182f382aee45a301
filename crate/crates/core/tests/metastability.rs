//! Projection fit, distance tracking and decay-rate estimation.

mod common;

use std::f64::consts::PI;

use burgers_metastab::metastability::{
    default_decay_window, family_member_on_grid, fit_decay_rate, fit_parameters, fit_parameters_with, projections,
    track_distance, FitOptions,
};
use burgers_metastab::solver::simulate_from;
use burgers_metastab::spectrum::adjoint_basis;
use burgers_metastab::{Error, FamilyParams, GridFunction, SimConfig};
use proptest::prelude::*;

const NU: f64 = 0.005;
const M: usize = 1024;

/// `W(x₀, t₀, c) + δ‖W‖ φ₃/‖φ₃‖`: the perturbation is orthogonal to
/// `ψ₀, ψ₁, ψ₂`, so the fit must return `(x₀, t₀)` exactly.
fn manufactured(x0: f64, t0: f64, c: f64, delta: f64) -> GridFunction {
    manufactured_on(M, x0, t0, c, delta)
}

fn manufactured_on(m: usize, x0: f64, t0: f64, c: f64, delta: f64) -> GridFunction {
    let p = FamilyParams::new(NU, t0, x0, c).unwrap();
    let w = family_member_on_grid(m, &p).unwrap();
    let basis = adjoint_basis(&p, m, 3).unwrap();
    let phi = &basis.phi[3];
    w.add_scaled(delta * w.l2_norm() / phi.l2_norm(), phi)
}

#[test]
fn fit_recovers_manufactured_parameters() {
    let (x0, t0, c) = (0.4, 10.0, 0.1);
    let u = manufactured(x0, t0, c, 0.01);
    let fit = fit_parameters(&u, x0 + 0.01, t0 * 1.02, NU, u.mean()).unwrap();
    assert!(fit.converged);
    assert!((fit.x_star - x0).abs() < 1e-10, "{}", fit.x_star - x0);
    assert!((fit.t_star - t0).abs() < 1e-8, "{}", fit.t_star - t0);
    assert!(fit.iterations <= 6);
    assert!((fit.distance / u.l2_norm() - 0.01).abs() < 1e-3);
    let det_ref = PI / (2.0 * t0.powi(3));
    assert!((fit.det_a / det_ref - 1.0).abs() < 0.05, "{}", fit.det_a / det_ref);
    // Newton converges quadratically: each residual is well below the last.
    for w in fit.residual_history.windows(2) {
        assert!(w[1] < 0.5 * w[0]);
    }
}

#[test]
fn exact_member_has_vanishing_projections() {
    let p = FamilyParams::new(NU, 8.0, -1.1, -0.2).unwrap();
    let u = family_member_on_grid(M, &p).unwrap();
    let pr = projections(&u, -1.1, 8.0, NU, -0.2).unwrap();
    for v in pr {
        assert!(v.abs() < 1e-11, "{pr:?}");
    }
    let fit = fit_parameters(&u, -1.0, 8.5, NU, u.mean()).unwrap();
    assert!(fit.converged && (fit.x_star + 1.1).abs() < 1e-10 && (fit.t_star - 8.0).abs() < 1e-8);
    assert!(fit.distance < 1e-10 * u.l2_norm());
}

#[test]
fn fit_failure_modes() {
    let p = FamilyParams::new(NU, 10.0, 0.0, 0.0).unwrap();
    let w = family_member_on_grid(M, &p).unwrap();
    // Far from every member near the guess.
    let far = w.add_scaled(1.0, &GridFunction::from_fn(M, |x: f64| (5.0 * x).cos()).unwrap());
    assert!(matches!(fit_parameters(&far, 0.0, 10.0, NU, far.mean()), Err(Error::OutsideNeighbourhood(_))));
    let strict = FitOptions { singular: 1e3, ..FitOptions::default() };
    assert!(matches!(fit_parameters_with(&w, 0.0, 10.0, NU, 0.0, &strict), Err(Error::SingularJacobian(_))));
    let capped = FitOptions { max_iter: 0, ..FitOptions::default() };
    let u = manufactured(0.0, 10.0, 0.0, 0.01);
    assert!(matches!(fit_parameters_with(&u, 0.03, 10.5, NU, u.mean(), &capped), Err(Error::Divergence(_))));
    assert!(matches!(fit_parameters(&u, 0.0, -1.0, NU, 0.0), Err(Error::InvalidParameter(_))));
}

#[test]
fn decay_rate_of_exact_exponential() {
    let series: Vec<(f64, f64)> = (0..41).map(|i| {
        let tau = 0.1 * i as f64;
        (tau, 2.0 * (-0.3 * tau).exp())
    }).collect();
    let fit = fit_decay_rate(&series, (0.5, 3.5)).unwrap();
    assert!((fit.rate + 0.3).abs() < 1e-12);
    assert!((fit.r_squared - 1.0).abs() < 1e-12);
    assert_eq!(fit.points, 31);
    assert!(matches!(fit_decay_rate(&series, (0.5, 0.85)), Err(Error::DegenerateWindow(_))));
    let mut bad = series.clone();
    bad[10].1 = 1e-13;
    assert!(matches!(fit_decay_rate(&bad, (0.5, 3.5)), Err(Error::DegenerateWindow(_))));
    bad[10].1 = f64::NAN;
    assert!(matches!(fit_decay_rate(&bad, (0.5, 3.5)), Err(Error::DegenerateWindow(_))));
    assert_eq!(default_decay_window(10.0), (0.5, 2.5));
}

#[test]
fn perturbation_along_third_mode_decays_at_its_eigenvalue() {
    // The first-order stepper's own layer differs from the family by O(h);
    // the grid must make that floor small against the decaying mode.
    let t0 = 10.0;
    let m = 2048;
    let u0 = manufactured_on(m, 0.0, t0, 0.0, 0.02);
    let cfg = SimConfig { nu: NU, m, cfl_lambda: 0.5, t_end: 2.5, seed: 0, modes: 1, a0: 0.0 };
    let taus: Vec<f64> = (0..=25).map(|i| 0.1 * i as f64).collect();
    let snaps = simulate_from(u0, &cfg, &taus).unwrap();
    let track = track_distance(&snaps, NU, 0.0, t0);
    assert!(track.iter().all(|p| p.converged));
    // The fitted time advances with the flow.
    for p in &track {
        assert!((p.t_star - (t0 + p.tau)).abs() < 0.01 * t0, "τ={}: t*={}", p.tau, p.t_star);
    }
    let series: Vec<(f64, f64)> = track.iter().map(|p| (p.tau, p.distance)).collect();
    let fit = fit_decay_rate(&series, default_decay_window(t0)).unwrap();
    assert!((fit.rate * t0 / -3.0 - 1.0).abs() < 0.03, "rate {}", fit.rate);
    assert!(fit.r_squared > 0.99);
}

#[test]
fn track_distance_marks_failed_fits() {
    let p = FamilyParams::new(NU, 10.0, 0.0, 0.0).unwrap();
    let good = family_member_on_grid(M, &p).unwrap();
    let bad = GridFunction::from_fn(M, |x: f64| (7.0 * x).sin()).unwrap();
    let track = track_distance(&[(0.0, good.clone()), (0.1, bad), (0.2, good)], NU, 0.0, 10.0);
    assert!(track[0].converged && !track[1].converged && track[2].converged);
    assert!(track[1].distance.is_nan());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn fit_is_covariant_under_grid_shifts(k in 1usize..M) {
        let u = manufactured(0.2, 10.0, 0.05, 0.01);
        let v: Vec<f64> = (0..M).map(|j| u.values()[(j + M - k) % M]).collect();
        let shifted = GridFunction::new(v).unwrap();
        let s = 2.0 * PI * k as f64 / M as f64;
        let a = fit_parameters(&u, 0.21, 10.2, NU, u.mean()).unwrap();
        let b = fit_parameters(&shifted, 0.21 + s, 10.2, NU, shifted.mean()).unwrap();
        let dx = common::reduce(b.x_star - a.x_star - s);
        prop_assert!(dx.abs() < 1e-9, "{dx:e}");
        prop_assert!((b.t_star - a.t_star).abs() < 1e-7);
        prop_assert!((b.distance - a.distance).abs() < 1e-9 * a.distance);
    }
}
