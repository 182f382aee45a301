//! The five experiments.  Each computes everything first and writes its
//! files only at the end (each file atomically), so a failing run leaves no
//! partial output.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use burgers_metastab::grid::{node, reduce_angle};
use burgers_metastab::io::{
    columns_csv, decay_csv, eigenfunctions_csv, fit_csv, fmt_num, snapshot_file_name, track_csv, write_atomic,
};
use burgers_metastab::metastability::{
    family_member_on_grid, fit_decay_rate, fit_parameters, track_distance, FitResult,
};
use burgers_metastab::solver::{self, layer_position, primitive_argmax};
use burgers_metastab::spectrum::eigen::{adjoint_basis, eigenpairs};
use burgers_metastab::spectrum::{assemble, predicted_eigenvalues, DiscretizationKind, Which};
use burgers_metastab::{FamilyParams, GridFunction, SimConfig};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{DecayConfig, MatchConfig, Resolved, SimulateConfig, SpectrumConfig, TablesConfig};
use crate::{tables, CliError};

/// Files produced by a command, written together at the end.
struct Output {
    files: Vec<(String, String)>,
}

impl Output {
    fn new() -> Self {
        Self { files: Vec::new() }
    }

    fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    fn json(&mut self, name: &str, value: &serde_json::Value) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerics(e.to_string()))?;
        self.add(name, text + "\n");
        Ok(())
    }

    fn write(self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        let mut paths = Vec::with_capacity(self.files.len());
        for (name, contents) in self.files {
            let path = dir.join(name);
            write_atomic(&path, &contents)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            paths.push(path);
        }
        Ok(paths)
    }
}

/// Runs the resolved command and returns the written paths.
pub fn run(resolved: &Resolved) -> Result<Vec<PathBuf>, CliError> {
    let out = match resolved {
        Resolved::Simulate(c) => simulate(c)?,
        Resolved::Spectrum(c) => spectrum(c)?,
        Resolved::Match(c) => fit_state(c)?,
        Resolved::Decay(c) => decay(c)?,
        Resolved::Tables(c) => tables_report(c)?,
    };
    out.write(resolved.out())
}

/// JSON view of a fit.
#[derive(Serialize)]
struct FitSummary {
    converged: bool,
    x_star: f64,
    t_star: f64,
    distance: f64,
    relative_distance: f64,
    det_a: f64,
    det_reference: f64,
    iterations: usize,
    residual_projections: [f64; 3],
    a_matrix: [[f64; 2]; 2],
    residual_history: Vec<f64>,
}

fn fit_summary(fit: &FitResult, u: &GridFunction) -> FitSummary {
    FitSummary {
        converged: fit.converged,
        x_star: fit.x_star,
        t_star: fit.t_star,
        distance: fit.distance,
        relative_distance: fit.distance / u.l2_norm(),
        det_a: fit.det_a,
        det_reference: PI / (2.0 * fit.t_star.powi(3)),
        iterations: fit.iterations,
        residual_projections: fit.residual_projections,
        a_matrix: fit.a_matrix,
        residual_history: fit.residual_history.clone(),
    }
}

fn sim_config(nu: f64, grid: usize, cfl: f64, t_end: f64, seed: u64, modes: usize, mean: f64) -> SimConfig {
    SimConfig { nu, m: grid, cfl_lambda: cfl, t_end, seed, modes, a0: mean }
}

fn simulate(c: &SimulateConfig) -> Result<Output, CliError> {
    let cfg = sim_config(c.nu, c.grid, c.cfl, c.t_end, c.seed, c.modes, c.mean);
    cfg.validate()?;
    let u0 = solver::random_initial_data(&cfg)?;
    let y0 = primitive_argmax(&u0)?;
    let dx_estimate = reduce_angle(y0 + PI);
    let snaps = solver::simulate_from(u0, &cfg, &c.times)?;
    // Each snapshot is fitted independently from the Laplace estimate, so
    // the fits run in parallel and the result does not depend on `--jobs`.
    let fits: Vec<Option<FitResult>> = snaps
        .par_iter()
        .map(|(tau, u)| {
            if *tau > 0.0 {
                fit_parameters(u, dx_estimate, *tau, c.nu, u.mean()).ok().filter(|f| f.converged)
            } else {
                None
            }
        })
        .collect();
    let mut out = Output::new();
    let mut entries = Vec::with_capacity(snaps.len());
    for ((tau, u), fit) in snaps.iter().zip(&fits) {
        let name = snapshot_file_name(*tau);
        let csv = match fit {
            Some(f) => {
                let overlay = family_member_on_grid(c.grid, &FamilyParams::new(c.nu, f.t_star, f.x_star, u.mean())?)?;
                columns_csv(&["u", "w_fit"], &[u, &overlay])
            }
            None => {
                let mut s = String::from("x,u,w_fit\n");
                for (j, v) in u.values().iter().enumerate() {
                    s.push_str(&format!("{},{},NaN\n", fmt_num(u.x(j)), fmt_num(*v)));
                }
                s
            }
        };
        out.add(name.clone(), csv);
        entries.push(json!({
            "t": tau,
            "file": name,
            "mean": u.mean(),
            "l2_norm": u.l2_norm(),
            "layer_position": layer_position(u),
            "fit": fit.as_ref().map(|f| fit_summary(f, u)),
        }));
    }
    out.json(
        "summary.json",
        &json!({
            "command": "simulate",
            "config": c,
            "y0": y0,
            "dx_estimate": dx_estimate,
            "snapshots": entries,
        }),
    )?;
    Ok(out)
}

fn spectrum(c: &SpectrumConfig) -> Result<Output, CliError> {
    let kind = DiscretizationKind::from_name(&c.kind)
        .ok_or_else(|| CliError::Config(format!("unknown kind `{}`", c.kind)))?;
    let which = if c.operator == "l" { Which::L } else { Which::LTilde };
    let points: Vec<(f64, f64)> = match &c.eps {
        Some(eps) => eps.iter().map(|e| (e * e / (2.0 * c.t), c.t)).collect(),
        None => vec![(c.nu, c.t)],
    };
    let results = points
        .par_iter()
        .map(|&(nu, t)| {
            let p = FamilyParams::centered(nu, t)?;
            let pairs = eigenpairs(&assemble(kind, c.grid, &p, which)?, c.count)?;
            let pred = predicted_eigenvalues(p.epsilon(), t)?;
            Ok((p, pairs, pred))
        })
        .collect::<Result<Vec<_>, burgers_metastab::Error>>()?;
    let mut out = Output::new();
    let mut table = String::from("nu,t,epsilon,n,lambda,lambda_t,predicted,correction_bar,residual,zero_count\n");
    let mut entries = Vec::new();
    for (i, (p, pairs, pred)) in results.iter().enumerate() {
        let zc = pairs.zero_counts();
        for (n, (&l, &r)) in pairs.eigenvalues.iter().zip(&pairs.residuals).enumerate() {
            let bar = pred.get(n).map(|q| fmt_num(q.correction)).unwrap_or_default();
            let z = zc[n].as_ref().map(|z| z.to_string()).unwrap_or_default();
            table.push_str(&format!(
                "{},{},{},{n},{},{},{},{bar},{},{z}\n",
                fmt_num(p.nu),
                fmt_num(p.t),
                fmt_num(p.epsilon()),
                fmt_num(l),
                fmt_num(l * p.t),
                fmt_num(-(n as f64) / p.t + 0.0),
                fmt_num(r),
            ));
        }
        let name = if results.len() == 1 { "eigenfunctions.csv".to_owned() } else { format!("eigenfunctions_{i}.csv") };
        out.add(name.clone(), eigenfunctions_csv(pairs));
        entries.push(json!({
            "nu": p.nu,
            "t": p.t,
            "epsilon": p.epsilon(),
            "eigenvalues": pairs.eigenvalues,
            "lambda_t": pairs.eigenvalues.iter().map(|l| l * p.t).collect::<Vec<_>>(),
            "residuals": pairs.residuals,
            "zero_counts": zc.iter().map(|z| z.as_ref().ok().copied()).collect::<Vec<_>>(),
            "scale": pairs.scale,
            "eigenfunctions": name,
        }));
    }
    out.add("spectrum.csv", table);
    out.json("summary.json", &json!({ "command": "spectrum", "config": c, "points": entries }))?;
    Ok(out)
}

/// Reads a grid CSV with a header; uses the `u` column (or the second
/// column) and checks that `x` (first column) holds the standard nodes.
pub fn read_grid_csv(path: &Path) -> Result<GridFunction, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read input {}: {e}", path.display())))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').map(str::trim).collect();
    let col = header.iter().position(|h| *h == "u").unwrap_or(1);
    if header.len() < 2 {
        return Err(CliError::Config(format!("{}: expected columns `x,u`", path.display())));
    }
    let mut xs = Vec::new();
    let mut us = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parse = |k: usize| -> Result<f64, CliError> {
            fields
                .get(k)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| CliError::Config(format!("{}: bad number on data line {}", path.display(), i + 1)))
        };
        xs.push(parse(0)?);
        us.push(parse(col)?);
    }
    let m = us.len();
    burgers_metastab::grid::validate_grid_size(m)?;
    let h = 2.0 * PI / m as f64;
    if let Some(j) = (0..m).find(|&j| (xs[j] - node::<f64>(m, j)).abs() > 1e-9 * h.max(1.0)) {
        return Err(CliError::Config(format!(
            "{}: x column is not the uniform grid on [-pi, pi) (row {})",
            path.display(),
            j + 1
        )));
    }
    Ok(GridFunction::new(us)?)
}

fn fit_state(c: &MatchConfig) -> Result<Output, CliError> {
    let (u, time, guess) = match &c.input {
        Some(path) => {
            let u = read_grid_csv(path)?;
            let guess = c.x0.unwrap_or_else(|| reduce_angle(layer_position(&u) - u.mean() * c.t));
            (u, c.t, guess)
        }
        None => {
            let cfg = sim_config(c.nu, c.grid, c.cfl, c.t, c.seed, c.modes, c.mean);
            cfg.validate()?;
            let u0 = solver::random_initial_data(&cfg)?;
            let y0 = primitive_argmax(&u0)?;
            let snaps = solver::simulate_from(u0, &cfg, &[c.t])?;
            let (time, u) = snaps.last().cloned().expect("simulation records the initial state");
            (u, time, c.x0.unwrap_or_else(|| reduce_angle(y0 + PI)))
        }
    };
    let fit = fit_parameters(&u, guess, time, c.nu, u.mean())?;
    let mut out = Output::new();
    out.add("fit.csv", fit_csv(&fit));
    out.json(
        "summary.json",
        &json!({
            "command": "match",
            "config": c,
            "state_time": time,
            "initial_guess": { "x0": guess, "t0": time },
            "fit": fit_summary(&fit, &u),
        }),
    )?;
    Ok(out)
}

fn decay(c: &DecayConfig) -> Result<Output, CliError> {
    let taus: Vec<f64> = (0..c.samples).map(|i| c.t_end * i as f64 / (c.samples - 1) as f64).collect();
    let (snaps, x_init) = if c.random {
        let cfg = sim_config(c.nu, c.grid, c.cfl, c.t + c.t_end, c.seed, c.modes, c.mean);
        cfg.validate()?;
        let u0 = solver::random_initial_data(&cfg)?;
        let y0 = primitive_argmax(&u0)?;
        let times: Vec<f64> = taus.iter().map(|tau| c.t + tau).collect();
        let snaps = solver::simulate_from(u0, &cfg, &times)?;
        // Drop the initial state and measure τ from the start time t.
        let snaps: Vec<(f64, GridFunction)> = snaps.into_iter().skip(1).map(|(s, u)| (s - c.t, u)).collect();
        (snaps, reduce_angle(y0 + PI))
    } else {
        let cfg = sim_config(c.nu, c.grid, c.cfl, c.t_end, c.seed, c.modes.max(1), 0.0);
        cfg.validate()?;
        let p = FamilyParams::new(c.nu, c.t, 0.0, c.mean)?;
        let basis = adjoint_basis(&p, c.grid, c.mode.max(2))?;
        let phi = &basis.phi[c.mode];
        let phi = phi.scale(1.0 / phi.l2_norm());
        let u0 = family_member_on_grid(c.grid, &p)?.add_scaled(c.amplitude, &phi);
        (solver::simulate_from(u0, &cfg, &taus)?, 0.0)
    };
    let track = track_distance(&snaps, c.nu, x_init, c.t);
    let series: Vec<(f64, f64)> = track.iter().filter(|p| p.converged).map(|p| (p.tau, p.distance)).collect();
    let fit = fit_decay_rate(&series, (c.window[0], c.window[1]))?;
    let mut out = Output::new();
    out.add("track.csv", track_csv(&track));
    out.add("decay.csv", decay_csv(&fit));
    out.json(
        "summary.json",
        &json!({
            "command": "decay",
            "config": c,
            "rate": fit.rate,
            "r_squared": fit.r_squared,
            "points": fit.points,
            "predicted_rate": if c.random { None } else { Some(-(c.mode as f64) / c.t) },
            "family_rate": 1.0 / c.t,
            "rate_over_family_rate": fit.rate.abs() * c.t,
            "fitted_snapshots": series.len(),
            "total_snapshots": track.len(),
        }),
    )?;
    Ok(out)
}

fn tables_report(c: &TablesConfig) -> Result<Output, CliError> {
    let report = tables::verify(c.xi, c.z)?;
    let mut csv = String::from("table,row,argument,expansion,oracle,residual,omitted,ratio,rel_err,status\n");
    for r in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.table,
            r.row,
            fmt_num(r.argument),
            fmt_num(r.expansion),
            fmt_num(r.oracle),
            fmt_num(r.residual),
            fmt_num(r.omitted),
            fmt_num(r.ratio),
            fmt_num(r.rel_err),
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    let mut out = Output::new();
    out.add("tables.csv", csv);
    out.json(
        "summary.json",
        &json!({
            "command": "tables",
            "config": c,
            "all_pass": report.all_pass(),
            "rows": report.rows,
            "digamma_minus_five_halves": report.digamma,
        }),
    )?;
    if !report.all_pass() {
        let failed: Vec<String> =
            report.rows.iter().filter(|r| !r.pass).map(|r| format!("{}:{}", r.table, r.row)).collect();
        // Keep the report for inspection, then signal the numerical failure.
        out.write(&c.out)?;
        return Err(CliError::Numerics(format!("table rows failed: {}", failed.join(", "))));
    }
    Ok(out)
}
