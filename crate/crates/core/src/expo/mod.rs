//! Exponential backends: dense, Krylov and kinetic/potential splittings.

pub mod coefficients;
pub mod dense;
pub mod lanczos;
pub mod splitting;

pub use dense::{exp_dense, exp_hermitian, DENSE_LIMIT};
pub use lanczos::{exp_lanczos, expm_hermitian_lanczos, KrylovOutcome};
pub use splitting::{blanes_moan_step, chin_chen_step, strang_step, SplitMode};

/// How the exponential inside a step is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExpBackend {
    DenseExact,
    Lanczos { tol: f64, m_max: usize },
    Strang,
    BlanesMoan,
    ChinChen,
}
