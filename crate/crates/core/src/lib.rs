//! Iterated Magnus-Hermite integrators for the cubic nonlinear
//! Schrodinger and Gross-Pitaevskii equations.

pub mod error;
pub mod expo;
pub mod hamiltonian;
pub mod harness;
pub mod magnus;
pub mod observables;
pub mod quadrature;
pub mod spectral;
pub mod stepper;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
