//! CSV and manifest writers.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::experiment::{ConvergenceReport, ConvergenceRow, ExperimentSpec};
use crate::error::Result;
use crate::observables::ObservableRecord;

pub const CONVERGENCE_HEADER: &str = "method,h,error";
pub const OBSERVABLES_HEADER: &str = "t,norm,momentum,energy,energy_linear";

/// 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from(CONVERGENCE_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.method, fmt_float(r.h), fmt_float(r.error)));
    }
    out
}

/// Matrix models have no momentum; the field is left empty.
pub fn observables_csv(records: &[ObservableRecord]) -> String {
    let mut out = String::from(OBSERVABLES_HEADER);
    out.push('\n');
    for r in records {
        let momentum = r.momentum.map(fmt_float).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_float(r.t),
            fmt_float(r.norm),
            momentum,
            fmt_float(r.energy),
            fmt_float(r.energy_linear)
        ));
    }
    out
}

/// Every record minus the first one.
pub fn observable_deltas(records: &[ObservableRecord]) -> Vec<ObservableRecord> {
    match records.first() {
        None => Vec::new(),
        Some(base) => records.iter().map(|r| r.delta(base)).collect(),
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    mode: &'a str,
    package: &'static str,
    version: &'static str,
    spec: &'a ExperimentSpec,
    step_counts: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    convergence: Option<&'a ConvergenceReport>,
    files: Vec<&'a str>,
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let mut f = fs::File::create(dir.join(name))?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}

fn write_manifest(
    dir: &Path,
    mode: &str,
    spec: &ExperimentSpec,
    convergence: Option<&ConvergenceReport>,
    files: Vec<&str>,
) -> Result<()> {
    let manifest = Manifest {
        mode,
        package: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        spec,
        step_counts: spec.step_counts(),
        convergence,
        files,
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    write_file(dir, "manifest.json", &json)
}

/// Writes `convergence.csv` and `manifest.json` into the spec's output
/// directory.
pub fn write_convergence(spec: &ExperimentSpec, report: &ConvergenceReport) -> Result<()> {
    let dir = &spec.output_dir;
    fs::create_dir_all(dir)?;
    write_file(dir, "convergence.csv", &convergence_csv(&report.rows))?;
    write_manifest(dir, "convergence", spec, Some(report), vec!["convergence.csv"])
}

/// Writes `observables.csv`, `observables_delta.csv` and `manifest.json`.
pub fn write_observables(spec: &ExperimentSpec, records: &[ObservableRecord]) -> Result<()> {
    let dir = &spec.output_dir;
    fs::create_dir_all(dir)?;
    write_file(dir, "observables.csv", &observables_csv(records))?;
    write_file(dir, "observables_delta.csv", &observables_csv(&observable_deltas(records)))?;
    write_manifest(
        dir,
        "observables",
        spec,
        None,
        vec!["observables.csv", "observables_delta.csv"],
    )
}
