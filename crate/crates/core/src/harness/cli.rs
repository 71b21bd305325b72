//! Command-line front end of the `mh` binary.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Deserialize;

use super::experiment::{
    default_methods, run_convergence, run_observables, ExperimentSpec, DEFAULT_H_LIST,
};
use super::output::{write_convergence, write_observables};
use super::presets::Preset;
use crate::error::{Error, Result};
use crate::stepper::Method;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Error at T against a reference, over a list of step sizes.
    Convergence,
    /// Norm, momentum and energy after every step.
    Observables,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OnOff {
    On,
    Off,
}

/// Magnus-Hermite integrators for cubic NLS / Gross-Pitaevskii.
///
/// Without an explicit mode, runs a convergence study when `--h-list` is
/// given and tracks observables otherwise.
#[derive(Clone, Debug, Default, Parser)]
#[command(name = "mh", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub mode: Option<Mode>,
    /// gp-defocusing-driven, gp-defocusing, gp-focusing, nls-defocusing,
    /// matrix-driven or matrix-static.
    #[arg(long)]
    pub preset: Option<String>,
    /// Comma-separated list of strang, bm, mhbm, mhc, mhk, dense.
    #[arg(long)]
    pub backend: Option<String>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long = "h-list", value_delimiter = ',')]
    pub h_list: Option<Vec<f64>>,
    /// Number of steps; takes precedence over `--h`.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Final time.
    #[arg(long = "T")]
    pub t_end: Option<f64>,
    /// Iterations per step.
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Early-exit threshold on the iterate update.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Seed of the random matrix presets.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid points or matrix dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long = "strang-first", value_enum)]
    pub strang_first: Option<OnOff>,
    /// JSON file with the same keys as the long flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub mode: Option<String>,
    pub preset: Option<String>,
    pub backend: Option<String>,
    pub h: Option<f64>,
    pub h_list: Option<Vec<f64>>,
    pub steps: Option<usize>,
    #[serde(rename = "T")]
    pub t_end: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub delta: Option<f64>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub out: Option<PathBuf>,
    pub strang_first: Option<OnOff>,
}

impl ConfigFile {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

fn parse_methods(list: &str) -> Result<Vec<Method>> {
    list.split(',').map(|s| s.trim().parse()).collect()
}

/// Merges flags over the optional config file into a mode and spec.
pub fn resolve(cli: &Cli) -> Result<(Mode, ExperimentSpec)> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let preset_name = cli
        .preset
        .clone()
        .or(cfg.preset)
        .ok_or_else(|| Error::Config("--preset is required".into()))?;
    let preset: Preset = preset_name.parse()?;
    let mut spec = ExperimentSpec::new(preset);

    let h_list = cli.h_list.clone().or(cfg.h_list);
    let h = cli.h.or(cfg.h);
    let mode = match (cli.mode, cfg.mode.as_deref()) {
        (Some(m), _) => m,
        (None, Some(m)) => Mode::from_str(m, true)
            .map_err(|_| Error::Config(format!("unknown mode '{m}'")))?,
        (None, None) if h_list.is_some() => Mode::Convergence,
        (None, None) => Mode::Observables,
    };

    if let Some(b) = cli.backend.clone().or(cfg.backend) {
        spec.methods = parse_methods(&b)?;
    } else if mode == Mode::Observables {
        spec.methods.truncate(1);
        if !preset.is_matrix() {
            spec.methods = vec![Method::MagnusHermite(crate::expo::ExpBackend::ChinChen)];
        }
    }
    spec.h_list = match (h_list, h, mode) {
        (Some(list), _, _) => list,
        (None, Some(h), _) => vec![h],
        (None, None, Mode::Convergence) => DEFAULT_H_LIST.to_vec(),
        (None, None, Mode::Observables) => vec![0.001],
    };
    spec.steps = cli.steps.or(cfg.steps);
    if let Some(t) = cli.t_end.or(cfg.t_end) {
        spec.t_end = t;
    }
    if let Some(k) = cli.k.or(cfg.k) {
        spec.k = k;
    }
    spec.delta = cli.delta.or(cfg.delta);
    if let Some(s) = cli.seed.or(cfg.seed) {
        spec.seed = s;
    }
    spec.n = cli.n.or(cfg.n);
    if let Some(o) = cli.out.clone().or(cfg.out) {
        spec.output_dir = o;
    }
    if let Some(sf) = cli.strang_first.or(cfg.strang_first) {
        spec.strang_first = sf == OnOff::On;
    }
    if spec.methods.is_empty() {
        spec.methods = default_methods(preset);
    }
    spec.validate()?;
    Ok((mode, spec))
}

/// Runs the resolved experiment and writes its outputs. Returns a short
/// human-readable summary.
pub fn execute(cli: &Cli) -> Result<String> {
    let (mode, spec) = resolve(cli)?;
    match mode {
        Mode::Convergence => {
            let report = run_convergence(&spec)?;
            write_convergence(&spec, &report)?;
            let mut summary = String::new();
            for row in &report.rows {
                summary.push_str(&format!("{:6} h={:.6e} error={:.6e}\n", row.method, row.h, row.error));
            }
            for s in &report.slopes {
                let f = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.3}"));
                summary.push_str(&format!(
                    "{:6} slope {} (h <= 0.01: {})\n",
                    s.method,
                    f(s.all),
                    f(s.asymptotic)
                ));
            }
            Ok(summary)
        }
        Mode::Observables => {
            let records = run_observables(&spec)?;
            write_observables(&spec, &records)?;
            let (first, last) = (records[0], records[records.len() - 1]);
            Ok(format!(
                "{} steps, norm drift {:.3e}, energy drift {:.3e}\n",
                records.len() - 1,
                last.norm - first.norm,
                last.energy - first.energy
            ))
        }
    }
}
