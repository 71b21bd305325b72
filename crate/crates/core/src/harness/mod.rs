//! Experiment harness: presets, convergence and observable runs, output.

pub mod cli;
pub mod experiment;
pub mod output;
pub mod presets;

pub use experiment::{
    fit_slope, run_convergence, run_observables, ConvergenceReport, ConvergenceRow,
    ExperimentSpec, SlopeFit,
};
pub use presets::{build, Preset, Problem};
