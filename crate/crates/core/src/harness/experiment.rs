//! Convergence studies and observable tracking.

use std::path::PathBuf;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use super::presets::{build, Preset, Problem};
use crate::error::{Error, Result};
use crate::observables::ObservableRecord;
use crate::stepper::{
    evolve, reference_solution, reference_steps, EvolveOptions, Method, StepConfig,
};

/// Default step sizes of a convergence sweep, roughly a decade apart.
pub const DEFAULT_H_LIST: [f64; 5] = [0.1, 0.03125, 0.01, 0.0031546, 0.001];

/// Slopes are also fitted over the rows with `h` at or below this, where
/// the iterated methods are inside their convergence region.
pub const ASYMPTOTIC_MAX_H: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub preset: Preset,
    pub methods: Vec<Method>,
    pub h_list: Vec<f64>,
    /// Overrides `h_list` with a single run of this many steps.
    pub steps: Option<usize>,
    pub t_end: f64,
    pub k: usize,
    pub delta: Option<f64>,
    pub seed: u64,
    pub n: Option<usize>,
    pub strang_first: bool,
    pub output_dir: PathBuf,
}

impl ExperimentSpec {
    pub fn new(preset: Preset) -> Self {
        Self {
            preset,
            methods: default_methods(preset),
            h_list: DEFAULT_H_LIST.to_vec(),
            steps: None,
            t_end: 1.0,
            k: 3,
            delta: None,
            seed: 0,
            n: None,
            strang_first: true,
            output_dir: PathBuf::from("out"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::Config(format!("T must be positive, got {}", self.t_end)));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no backend selected".into()));
        }
        if self.steps == Some(0) {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        if self.steps.is_none() {
            if self.h_list.is_empty() {
                return Err(Error::Config("empty h list".into()));
            }
            if let Some(h) = self.h_list.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
                return Err(Error::Config(format!("step sizes must be positive, got {h}")));
            }
            if self.h_list.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::Config("h list must be strictly decreasing".into()));
            }
        }
        self.template(self.methods[0]).with_k(self.k).validate()
    }

    pub fn template(&self, method: Method) -> StepConfig {
        StepConfig::new(self.t_end, method)
            .with_k(self.k)
            .with_delta(self.delta)
            .with_strang_first(self.strang_first)
    }

    /// Step counts of the sweep, `round(T / h)` for each `h`.
    pub fn step_counts(&self) -> Vec<usize> {
        match self.steps {
            Some(n) => vec![n],
            None => self
                .h_list
                .iter()
                .map(|h| ((self.t_end / h).round() as usize).max(1))
                .collect(),
        }
    }

    pub fn problem(&self) -> Result<Problem> {
        build(self.preset, self.n, self.seed)
    }
}

pub fn default_methods(preset: Preset) -> Vec<Method> {
    let names: &[&str] =
        if preset.is_matrix() { &["mhk"] } else { &["strang", "bm", "mhc", "mhbm"] };
    names.iter().map(|n| n.parse().expect("known method")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub method: String,
    /// Realised step `T / N`.
    pub h: f64,
    /// NaN when the run failed or produced non-finite values.
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub method: String,
    /// Least-squares slope over all finite rows.
    pub all: Option<f64>,
    /// Same, restricted to `h <= ASYMPTOTIC_MAX_H`.
    pub asymptotic: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub slopes: Vec<SlopeFit>,
    pub reference_steps: usize,
}

/// Least-squares slope of `log error` against `log h`, skipping
/// non-finite or non-positive errors. Needs two usable points.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(h, e)| e.is_finite() && *e > 0.0 && *h > 0.0)
        .map(|(h, e)| (h.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn slopes_for(rows: &[ConvergenceRow], methods: &[Method]) -> Vec<SlopeFit> {
    methods
        .iter()
        .map(|m| {
            let pts: Vec<(f64, f64)> =
                rows.iter().filter(|r| r.method == m.name()).map(|r| (r.h, r.error)).collect();
            let fine: Vec<(f64, f64)> =
                pts.iter().copied().filter(|(h, _)| *h <= ASYMPTOTIC_MAX_H * (1.0 + 1e-9)).collect();
            SlopeFit { method: m.name().into(), all: fit_slope(&pts), asymptotic: fit_slope(&fine) }
        })
        .collect()
}

fn distance(problem: &Problem, a: &[C64], b: &[C64]) -> f64 {
    let d: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    problem.model.norm(&d)
}

/// Errors at `T` against a tight reference for every method and step.
pub fn run_convergence(spec: &ExperimentSpec) -> Result<ConvergenceReport> {
    spec.validate()?;
    let problem = spec.problem()?;
    let counts = spec.step_counts();
    let h_min = spec.t_end / *counts.iter().max().expect("non-empty") as f64;
    let ref_steps = reference_steps(spec.t_end, h_min);
    let reference = reference_solution(&problem.model, &problem.u0, spec.t_end, ref_steps)?;

    let jobs: Vec<(Method, usize)> =
        spec.methods.iter().flat_map(|m| counts.iter().map(move |n| (*m, *n))).collect();
    let rows: Vec<ConvergenceRow> = jobs
        .par_iter()
        .map(|&(method, n)| {
            let run = evolve(
                &problem.u0,
                spec.t_end,
                n,
                method,
                &spec.template(method),
                &problem.model,
                EvolveOptions::default(),
            );
            let error = match run {
                Ok(tr) => distance(&problem, &tr.final_state, &reference),
                Err(_) => f64::NAN,
            };
            let error = if error.is_finite() { error } else { f64::NAN };
            ConvergenceRow { method: method.name().into(), h: spec.t_end / n as f64, error }
        })
        .collect();
    let slopes = slopes_for(&rows, &spec.methods);
    Ok(ConvergenceReport { rows, slopes, reference_steps: ref_steps })
}

/// Per-step observables for the first method and the first step size.
pub fn run_observables(spec: &ExperimentSpec) -> Result<Vec<ObservableRecord>> {
    spec.validate()?;
    let problem = spec.problem()?;
    let method = spec.methods[0];
    let n = spec.step_counts()[0];
    let tr = evolve(
        &problem.u0,
        spec.t_end,
        n,
        method,
        &spec.template(method),
        &problem.model,
        EvolveOptions { record_observables: true, store_states: false },
    )?;
    Ok(tr.observables)
}
