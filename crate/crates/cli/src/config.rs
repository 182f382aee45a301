//! Command-line and configuration-file parameters.
//!
//! Every parameter is resolved with the precedence
//! `command-line flag > JSON configuration file > built-in default`.
//! The output directory additionally honours the `BURGERS_METASTAB_OUT`
//! environment variable, which replaces the built-in default.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "BURGERS_METASTAB_OUT";

/// Output directory used when neither a flag, a file nor the environment
/// names one.
pub const DEFAULT_OUT: &str = "burgers-metastab-out";

/// Snapshot times of `simulate` as fractions of `t_end`.  With `t_end = 121`
/// they reproduce the classic nine-panel time series
/// `0, 0.48, 1.21, 2.42, 5.65, 9.68, 24.2, 56.5, 121`.
pub const SNAPSHOT_FRACTIONS: [f64; 9] = [0.0, 0.004, 0.01, 0.02, 7.0 / 150.0, 0.08, 0.2, 7.0 / 15.0, 1.0];

/// Metastable dynamics of the periodic viscous Burgers equation.
#[derive(Parser, Debug)]
#[command(name = "burgers-metastab", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Flags shared by all subcommands (not every subcommand uses every flag;
/// passing an unused one is a configuration error).
#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// Viscosity ν.
    #[arg(long, global = true)]
    pub nu: Option<f64>,
    /// Family time t (spectrum, match, decay).
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// Number of grid points M.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Number of random Fourier modes m.
    #[arg(long, global = true)]
    pub modes: Option<usize>,
    /// Mean a₀ of the random initial data.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mean: Option<f64>,
    /// Seed of the random initial data.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Final simulation time.
    #[arg(long = "t-end", global = true)]
    pub t_end: Option<f64>,
    /// Worker threads (0 = all available cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long = "show-config", global = true)]
    pub show_config: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Godunov run from random Fourier data with per-snapshot family fits.
    Simulate(SimulateArgs),
    /// Leading eigenpairs of the frozen-time linearisation, optionally over
    /// a sweep of ε.
    Spectrum(SpectrumArgs),
    /// Projection fit of one state onto the metastable family.
    Match(MatchArgs),
    /// Decay of the distance to the family along a trajectory.
    Decay(DecayArgs),
    /// Verification of the asymptotic expansion tables against quadrature.
    Tables(TablesArgs),
}

#[derive(Args, Debug, Default, Clone)]
pub struct SimulateArgs {
    /// CFL constant λ.
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Snapshot times (comma separated; default: fixed fractions of t-end).
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct SpectrumArgs {
    /// Number of eigenpairs (at most 10).
    #[arg(long)]
    pub count: Option<usize>,
    /// Discretisation: ground-state, fourier or fd4.
    #[arg(long)]
    pub kind: Option<String>,
    /// Operator: l or l-tilde.
    #[arg(long)]
    pub operator: Option<String>,
    /// Sweep of ε values at fixed t (ν = ε²/2t); replaces --nu.
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct MatchArgs {
    /// Snapshot CSV (`x,u,…`) to fit; without it the state is simulated.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Initial guess for the shift Δx (default: from the layer position).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// CFL constant λ for the simulated state.
    #[arg(long)]
    pub cfl: Option<f64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct DecayArgs {
    /// Amplitude of the eigenfunction seed.
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Index n of the seeded eigenfunction φ_n.
    #[arg(long)]
    pub mode: Option<usize>,
    /// Fit window τ_a,τ_b (default 0.05·t, 0.25·t).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub window: Option<Vec<f64>>,
    /// Number of equally spaced samples on [0, t-end].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Start from random data evolved to time t instead of a seeded family member.
    #[arg(long)]
    pub random: bool,
    /// CFL constant λ.
    #[arg(long)]
    pub cfl: Option<f64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct TablesArgs {
    /// Argument ξ of the slow-scale rows.
    #[arg(long)]
    pub xi: Option<f64>,
    /// Argument z of the large-z fast-scale rows.
    #[arg(long)]
    pub z: Option<f64>,
}

/// Contents of a `--config` file; every key is optional.
#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub nu: Option<f64>,
    pub t: Option<f64>,
    pub grid: Option<usize>,
    pub modes: Option<usize>,
    pub mean: Option<f64>,
    pub seed: Option<u64>,
    pub t_end: Option<f64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub cfl: Option<f64>,
    pub times: Option<Vec<f64>>,
    pub count: Option<usize>,
    pub kind: Option<String>,
    pub operator: Option<String>,
    pub eps: Option<Vec<f64>>,
    pub input: Option<PathBuf>,
    pub x0: Option<f64>,
    pub amplitude: Option<f64>,
    pub mode: Option<usize>,
    pub window: Option<Vec<f64>>,
    pub samples: Option<usize>,
    pub random: Option<bool>,
    pub xi: Option<f64>,
    pub z: Option<f64>,
}

impl FileConfig {
    /// Reads and parses a configuration file.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }
}

/// Resolved `simulate` parameters.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct SimulateConfig {
    pub nu: f64,
    pub grid: usize,
    pub modes: usize,
    pub mean: f64,
    pub seed: u64,
    pub t_end: f64,
    pub cfl: f64,
    pub times: Vec<f64>,
    pub jobs: usize,
    pub out: PathBuf,
}

/// Resolved `spectrum` parameters.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct SpectrumConfig {
    pub nu: f64,
    pub t: f64,
    pub grid: usize,
    pub count: usize,
    pub kind: String,
    pub operator: String,
    pub eps: Option<Vec<f64>>,
    pub jobs: usize,
    pub out: PathBuf,
}

/// Resolved `match` parameters.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct MatchConfig {
    pub nu: f64,
    pub t: f64,
    pub grid: usize,
    pub modes: usize,
    pub mean: f64,
    pub seed: u64,
    pub cfl: f64,
    pub input: Option<PathBuf>,
    pub x0: Option<f64>,
    pub out: PathBuf,
}

/// Resolved `decay` parameters.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct DecayConfig {
    pub nu: f64,
    pub t: f64,
    pub grid: usize,
    pub t_end: f64,
    pub amplitude: f64,
    pub mode: usize,
    pub window: [f64; 2],
    pub samples: usize,
    pub random: bool,
    pub modes: usize,
    pub mean: f64,
    pub seed: u64,
    pub cfl: f64,
    pub out: PathBuf,
}

/// Resolved `tables` parameters.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct TablesConfig {
    pub xi: f64,
    pub z: f64,
    pub jobs: usize,
    pub out: PathBuf,
}

/// A fully resolved configuration for one subcommand.
#[derive(Serialize, Debug, Clone, PartialEq)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Resolved {
    Simulate(SimulateConfig),
    Spectrum(SpectrumConfig),
    Match(MatchConfig),
    Decay(DecayConfig),
    Tables(TablesConfig),
}

impl Resolved {
    /// Output directory of the command.
    pub fn out(&self) -> &Path {
        match self {
            Resolved::Simulate(c) => &c.out,
            Resolved::Spectrum(c) => &c.out,
            Resolved::Match(c) => &c.out,
            Resolved::Decay(c) => &c.out,
            Resolved::Tables(c) => &c.out,
        }
    }

    /// Worker threads requested (0 = default pool).
    pub fn jobs(&self) -> usize {
        match self {
            Resolved::Simulate(c) => c.jobs,
            Resolved::Spectrum(c) => c.jobs,
            Resolved::Tables(c) => c.jobs,
            Resolved::Match(_) | Resolved::Decay(_) => 0,
        }
    }
}

fn pick<T: Clone>(flag: &Option<T>, file: &Option<T>, default: T) -> T {
    flag.clone().or_else(|| file.clone()).unwrap_or(default)
}

fn out_dir(flag: &Option<PathBuf>, file: &Option<PathBuf>, env: Option<PathBuf>) -> PathBuf {
    flag.clone().or_else(|| file.clone()).or(env).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

/// Rejects common flags that the subcommand does not use.
fn reject_unused(common: &CommonArgs, command: &str, used: &[&str]) -> Result<(), CliError> {
    let given = [
        ("nu", common.nu.is_some()),
        ("t", common.t.is_some()),
        ("grid", common.grid.is_some()),
        ("modes", common.modes.is_some()),
        ("mean", common.mean.is_some()),
        ("seed", common.seed.is_some()),
        ("t-end", common.t_end.is_some()),
        ("jobs", common.jobs.is_some()),
    ];
    match given.iter().find(|(name, set)| *set && !used.contains(name)) {
        Some((name, _)) => Err(CliError::Config(format!("flag --{name} is not used by `{command}`"))),
        None => Ok(()),
    }
}

fn positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive and finite, got {x}")))
    }
}

fn finite(name: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be finite, got {x}")))
    }
}

/// Resolves the parameters of `command` from flags, the configuration file
/// and the environment (`env_out` is the value of [`OUT_ENV`], if set).
///
/// Only ranges that can be checked without running the numerics are
/// validated here; the library validates the rest before any computation.
pub fn resolve(
    command: &Command,
    common: &CommonArgs,
    file: &FileConfig,
    env_out: Option<PathBuf>,
) -> Result<Resolved, CliError> {
    let out = out_dir(&common.out, &file.out, env_out);
    let jobs = pick(&common.jobs, &file.jobs, 0);
    match command {
        Command::Simulate(a) => {
            reject_unused(common, "simulate", &["nu", "grid", "modes", "mean", "seed", "t-end", "jobs"])?;
            let t_end = pick(&common.t_end, &file.t_end, 121.0);
            finite("t-end", t_end)?;
            if t_end < 0.0 {
                return Err(CliError::Config(format!("t-end must be non-negative, got {t_end}")));
            }
            let mut times = match a.times.clone().or_else(|| file.times.clone()) {
                Some(t) => t,
                None => SNAPSHOT_FRACTIONS.iter().map(|f| f * t_end).collect(),
            };
            times.iter().try_for_each(|&t| finite("snapshot time", t))?;
            times.sort_by(f64::total_cmp);
            times.dedup();
            if let Some(&bad) = times.iter().find(|&&t| t < 0.0 || t > t_end) {
                return Err(CliError::Config(format!("snapshot time {bad} outside [0, t-end = {t_end}]")));
            }
            let c = SimulateConfig {
                nu: pick(&common.nu, &file.nu, 0.008),
                grid: pick(&common.grid, &file.grid, 350),
                modes: pick(&common.modes, &file.modes, 20),
                mean: pick(&common.mean, &file.mean, 0.0),
                seed: pick(&common.seed, &file.seed, 42),
                t_end,
                cfl: pick(&a.cfl, &file.cfl, 0.5),
                times,
                jobs,
                out,
            };
            positive("nu", c.nu)?;
            finite("mean", c.mean)?;
            Ok(Resolved::Simulate(c))
        }
        Command::Spectrum(a) => {
            reject_unused(common, "spectrum", &["nu", "t", "grid", "jobs"])?;
            let c = SpectrumConfig {
                nu: pick(&common.nu, &file.nu, 0.001),
                t: pick(&common.t, &file.t, 5.0),
                grid: pick(&common.grid, &file.grid, 1024),
                count: pick(&a.count, &file.count, 5),
                kind: pick(&a.kind, &file.kind, "ground-state".to_owned()),
                operator: pick(&a.operator, &file.operator, "l".to_owned()),
                eps: a.eps.clone().or_else(|| file.eps.clone()),
                jobs,
                out,
            };
            positive("nu", c.nu)?;
            positive("t", c.t)?;
            if let Some(eps) = &c.eps {
                if eps.is_empty() {
                    return Err(CliError::Config("eps sweep is empty".into()));
                }
                eps.iter().try_for_each(|&e| positive("eps", e))?;
            }
            if burgers_metastab::spectrum::DiscretizationKind::from_name(&c.kind).is_none() {
                return Err(CliError::Config(format!(
                    "unknown kind `{}` (expected ground-state, fourier or fd4)",
                    c.kind
                )));
            }
            if !matches!(c.operator.as_str(), "l" | "l-tilde") {
                return Err(CliError::Config(format!("unknown operator `{}` (expected l or l-tilde)", c.operator)));
            }
            if c.count == 0 || c.count > burgers_metastab::spectrum::eigen::MAX_EIGENPAIRS {
                return Err(CliError::Config(format!("count must be in 1..=10, got {}", c.count)));
            }
            Ok(Resolved::Spectrum(c))
        }
        Command::Match(a) => {
            reject_unused(common, "match", &["nu", "t", "grid", "modes", "mean", "seed"])?;
            let c = MatchConfig {
                nu: pick(&common.nu, &file.nu, 0.008),
                t: pick(&common.t, &file.t, 24.0),
                grid: pick(&common.grid, &file.grid, 350),
                modes: pick(&common.modes, &file.modes, 20),
                mean: pick(&common.mean, &file.mean, 0.0),
                seed: pick(&common.seed, &file.seed, 42),
                cfl: pick(&a.cfl, &file.cfl, 0.5),
                input: a.input.clone().or_else(|| file.input.clone()),
                x0: a.x0.or(file.x0),
                out,
            };
            positive("nu", c.nu)?;
            positive("t", c.t)?;
            finite("mean", c.mean)?;
            if let Some(x0) = c.x0 {
                finite("x0", x0)?;
            }
            Ok(Resolved::Match(c))
        }
        Command::Decay(a) => {
            reject_unused(common, "decay", &["nu", "t", "grid", "modes", "mean", "seed", "t-end"])?;
            let t = pick(&common.t, &file.t, 10.0);
            positive("t", t)?;
            let window = match a.window.clone().or_else(|| file.window.clone()) {
                None => {
                    let w = burgers_metastab::metastability::default_decay_window(t);
                    [w.0, w.1]
                }
                Some(w) if w.len() == 2 && w[0] < w[1] && w.iter().all(|x| x.is_finite()) => [w[0], w[1]],
                Some(w) => return Err(CliError::Config(format!("window must be two increasing values, got {w:?}"))),
            };
            let c = DecayConfig {
                nu: pick(&common.nu, &file.nu, 0.005),
                t,
                grid: pick(&common.grid, &file.grid, 2048),
                t_end: pick(&common.t_end, &file.t_end, window[1]),
                amplitude: pick(&a.amplitude, &file.amplitude, 0.01),
                mode: pick(&a.mode, &file.mode, 3),
                window,
                samples: pick(&a.samples, &file.samples, 26),
                random: a.random || file.random.unwrap_or(false),
                modes: pick(&common.modes, &file.modes, 20),
                mean: pick(&common.mean, &file.mean, 0.0),
                seed: pick(&common.seed, &file.seed, 42),
                cfl: pick(&a.cfl, &file.cfl, 0.5),
                out,
            };
            positive("nu", c.nu)?;
            positive("t-end", c.t_end)?;
            finite("amplitude", c.amplitude)?;
            finite("mean", c.mean)?;
            if c.samples < 2 {
                return Err(CliError::Config(format!("samples must be at least 2, got {}", c.samples)));
            }
            if c.mode > 4 {
                return Err(CliError::Config(format!("mode must be in 0..=4, got {}", c.mode)));
            }
            Ok(Resolved::Decay(c))
        }
        Command::Tables(a) => {
            reject_unused(common, "tables", &["jobs"])?;
            let c = TablesConfig {
                xi: pick(&a.xi, &file.xi, 10.0),
                z: pick(&a.z, &file.z, 8.0),
                jobs,
                out,
            };
            if !(c.xi >= 5.0 && c.xi <= 25.0) {
                return Err(CliError::Config(format!("xi must lie in [5, 25], got {}", c.xi)));
            }
            if !(c.z >= 1.0 && c.z <= 50.0) {
                return Err(CliError::Config(format!("z must lie in [1, 50], got {}", c.z)));
            }
            Ok(Resolved::Tables(c))
        }
    }
}
