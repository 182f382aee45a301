//! Deterministic CSV export.
//!
//! Numbers are written in the shortest decimal form that round-trips to the
//! same `f64`, so files are byte-identical across platforms for identical
//! inputs.  Files are written to a temporary sibling and renamed into place,
//! so readers never observe partial output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::grid::GridFunction;
use crate::metastability::{DecayFit, FitResult, TrackPoint};
use crate::spectrum::eigen::SpectralResult;

/// Shortest round-trip representation (`NaN`, `inf`, `-inf` for
/// non-finite values).
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        let s = format!("{x:?}");
        s.strip_suffix(".0").map(str::to_owned).unwrap_or(s)
    }
}

/// `x` with `digits` significant digits, trailing zeros removed (like C's
/// `%g`, without exponent for moderate magnitudes).
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return fmt_num(x);
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..(digits as i32)).contains(&exp) {
        let s = format!("{:.*e}", digits.saturating_sub(1), x);
        let (mant, e) = s.split_once('e').unwrap_or((&s, "0"));
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        return format!("{mant}e{e}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

/// Writes `contents` to `path` atomically (temporary file plus rename).
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// File name `snap_t<time>.csv` with the time to 6 significant digits.
pub fn snapshot_file_name(time: f64) -> String {
    format!("snap_t{}.csv", fmt_sig(time, 6))
}

/// Snapshot CSV with header `x,u`.
pub fn snapshot_csv(u: &GridFunction) -> String {
    let mut s = String::from("x,u\n");
    for (j, v) in u.values().iter().enumerate() {
        let _ = writeln!(s, "{},{}", fmt_num(u.x(j)), fmt_num(*v));
    }
    s
}

/// Grid CSV with columns `x` and one column per named series.
pub fn columns_csv(names: &[&str], columns: &[&GridFunction]) -> String {
    let mut s = String::from("x");
    for n in names {
        s.push(',');
        s.push_str(n);
    }
    s.push('\n');
    if let Some(first) = columns.first() {
        for j in 0..first.len() {
            s.push_str(&fmt_num(first.x(j)));
            for c in columns {
                s.push(',');
                s.push_str(&fmt_num(c.values()[j]));
            }
            s.push('\n');
        }
    }
    s
}

/// Spectrum CSV `n,lambda,residual,zero_count` (empty count if zeros could
/// not be counted).
pub fn spectrum_csv(spec: &SpectralResult) -> String {
    let mut s = String::from("n,lambda,residual,zero_count\n");
    let zc = spec.zero_counts();
    for (n, (l, r)) in spec.eigenvalues.iter().zip(&spec.residuals).enumerate() {
        let z = zc[n].as_ref().map(|z| z.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{n},{},{},{z}", fmt_num(*l), fmt_num(*r));
    }
    s
}

/// Eigenfunction CSV `x,phi0,…,phik`.
pub fn eigenfunctions_csv(spec: &SpectralResult) -> String {
    let names: Vec<String> = (0..spec.eigenfunctions.len()).map(|n| format!("phi{n}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let cols: Vec<&GridFunction> = spec.eigenfunctions.iter().collect();
    columns_csv(&names, &cols)
}

/// Fit CSV `tau,distance,x_star,t_star,det_A,converged`.
pub fn track_csv(points: &[TrackPoint]) -> String {
    let mut s = String::from("tau,distance,x_star,t_star,det_A,converged\n");
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            fmt_num(p.tau),
            fmt_num(p.distance),
            fmt_num(p.x_star),
            fmt_num(p.t_star),
            fmt_num(p.det_a),
            p.converged
        );
    }
    s
}

/// Single-fit CSV in the fit format (with `tau = 0`).
pub fn fit_csv(fit: &FitResult) -> String {
    track_csv(&[TrackPoint {
        tau: 0.0,
        distance: fit.distance,
        x_star: fit.x_star,
        t_star: fit.t_star,
        det_a: fit.det_a,
        converged: fit.converged,
    }])
}

/// Decay-fit CSV `tau_a,tau_b,rate,r_squared,points`.
pub fn decay_csv(fit: &DecayFit) -> String {
    format!(
        "tau_a,tau_b,rate,r_squared,points\n{},{},{},{},{}\n",
        fmt_num(fit.window.0),
        fmt_num(fit.window.1),
        fmt_num(fit.rate),
        fmt_num(fit.r_squared),
        fit.points
    )
}
