//! Iterated-linearisation time stepping.
//!
//! Each step freezes the nonlinear potential along the previous iterate,
//! integrates it with Hermite endpoint quadrature, and propagates `u_n`
//! with the resulting fourth-order Magnus exponent. With `strang_first`
//! the first iterate is a nonlinear Strang step and counts as one of the
//! `k` iterations; otherwise iteration starts from `u_n` itself.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{check_len, Error, Result};
use crate::expo::coefficients::{BLANES_MOAN_RKN, BLANES_MOAN_S6, STRANG};
use crate::expo::dense::exp_hermitian;
use crate::expo::lanczos::expm_hermitian_lanczos;
use crate::expo::splitting::{chin_chen_step, compose, SplitMode};
use crate::expo::ExpBackend;
use crate::hamiltonian::{HamiltonianModel, MatrixModel};
use crate::magnus::{assemble_theta2, eliminate_commutator, Theta2Operator};
use crate::observables::{observe, ObservableRecord};
use crate::quadrature::{
    combine_terms, gauss_moments, gauss_moments_scalar, hermite_terms, EndpointData, MagnusTerms,
};

/// Lanczos tolerance used by the `mhk` method.
pub const KRYLOV_TOL: f64 = 1e-8;
pub const KRYLOV_M_MAX: usize = 200;

/// A complete time integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Nonlinear Strang splitting, no linearisation.
    Strang,
    /// Nonlinear fourth-order Blanes-Moan splitting.
    BlanesMoan,
    /// Iterated Magnus-Hermite with the given exponential.
    MagnusHermite(ExpBackend),
}

impl Method {
    pub const NAMES: [&'static str; 6] = ["strang", "bm", "mhbm", "mhc", "mhk", "dense"];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Strang => "strang",
            Method::BlanesMoan => "bm",
            Method::MagnusHermite(ExpBackend::BlanesMoan) => "mhbm",
            Method::MagnusHermite(ExpBackend::ChinChen) => "mhc",
            Method::MagnusHermite(ExpBackend::Lanczos { .. }) => "mhk",
            Method::MagnusHermite(ExpBackend::DenseExact) => "dense",
            Method::MagnusHermite(ExpBackend::Strang) => "mhs",
        }
    }

    pub fn krylov(tol: f64) -> Self {
        Method::MagnusHermite(ExpBackend::Lanczos { tol, m_max: KRYLOV_M_MAX })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl serde::Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "strang" => Method::Strang,
            "bm" => Method::BlanesMoan,
            "mhbm" => Method::MagnusHermite(ExpBackend::BlanesMoan),
            "mhc" => Method::MagnusHermite(ExpBackend::ChinChen),
            "mhk" => Method::krylov(KRYLOV_TOL),
            "dense" => Method::MagnusHermite(ExpBackend::DenseExact),
            "mhs" => Method::MagnusHermite(ExpBackend::Strang),
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown backend '{other}', expected one of: {}",
                    Method::NAMES.join(", ")
                )))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepConfig {
    pub h: f64,
    pub k: usize,
    /// Stop iterating once successive iterates differ by less than this.
    pub delta: Option<f64>,
    pub method: Method,
    pub strang_first: bool,
}

impl StepConfig {
    pub fn new(h: f64, method: Method) -> Self {
        Self { h, k: 3, delta: None, method, strang_first: true }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_delta(mut self, delta: Option<f64>) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_strang_first(mut self, on: bool) -> Self {
        self.strang_first = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::InvalidArgument(format!("step must be positive, got {}", self.h)));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("iteration count must be at least 1".into()));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0) {
                return Err(Error::InvalidArgument(format!("delta must be positive, got {d}")));
            }
        }
        if let Method::MagnusHermite(ExpBackend::Lanczos { tol, m_max }) = self.method {
            if !(tol > 0.0) || m_max < 2 {
                return Err(Error::InvalidArgument("Lanczos needs tol > 0 and m_max >= 2".into()));
            }
        }
        Ok(())
    }
}

/// Result of one step with the norms of successive iterate updates.
#[derive(Clone, Debug)]
pub struct StepReport {
    pub state: Vec<C64>,
    pub updates: Vec<f64>,
}

fn diff_norm(model: &HamiltonianModel, a: &[C64], b: &[C64]) -> f64 {
    let d: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    model.norm(&d)
}

/// Linear Strang for matrix models: half steps with `L` frozen at their
/// midpoints around the exact nonlinear phase.
fn matrix_strang(
    u: &[C64],
    t: f64,
    h: f64,
    m: &MatrixModel,
    backend: ExpBackend,
) -> Result<Vec<C64>> {
    let half = |v: &[C64], tm: f64| -> Result<Vec<C64>> {
        let c = m.coefficient(tm);
        match backend {
            ExpBackend::Lanczos { tol, m_max } => expm_hermitian_lanczos(
                |x| {
                    m.apply_with_potential(x, tm, &vec![0.0; x.len()])
                        .into_iter()
                        .map(|z| z * (h / 2.0))
                        .collect()
                },
                v,
                tol,
                m_max,
            )
            .map(|o| o.result),
            _ => {
                let l = m.l0() + m.l1() * C64::new(c, 0.0);
                exp_hermitian(&l, v, h / 2.0)
            }
        }
    };
    let mut v = half(u, t + 0.25 * h)?;
    let lam = m.lambda();
    v.iter_mut().for_each(|z| *z *= C64::from_polar(1.0, -h * lam * z.norm_sqr()));
    half(&v, t + 0.75 * h)
}

/// One nonlinear Strang step in either representation.
pub fn nonlinear_strang(
    model: &HamiltonianModel,
    u: &[C64],
    t: f64,
    h: f64,
    backend: ExpBackend,
) -> Result<Vec<C64>> {
    match model {
        HamiltonianModel::Spectral(m) => Ok(compose(u, t, h, m, SplitMode::Nonlinear, &STRANG)),
        HamiltonianModel::Matrix(m) => matrix_strang(u, t, h, m, backend),
    }
}

/// Integrals of the known external part over `[t_n, t_n + h]`.
pub fn external_terms(model: &HamiltonianModel, t_n: f64, h: f64) -> MagnusTerms {
    match model {
        HamiltonianModel::Spectral(m) => match m.external() {
            None => MagnusTerms::zeros(model.dim()),
            Some(ext) => {
                let (mu00, mu11) = gauss_moments(|t| ext.sample(m.grid(), t), t_n, h);
                MagnusTerms::pointwise(mu00, mu11)
            }
        },
        HamiltonianModel::Matrix(m) => {
            let mut terms = MagnusTerms::zeros(model.dim());
            if m.is_driven() {
                let (c00, c11) = gauss_moments_scalar(|t| m.coefficient(t), t_n, h);
                terms.coupling00 = c00;
                terms.coupling11 = c11;
            }
            terms
        }
    }
}

/// `exp(Theta_2) v` with the chosen exponential.
pub fn exponentiate(op: &Theta2Operator<'_>, v: &[C64], backend: ExpBackend) -> Result<Vec<C64>> {
    match backend {
        ExpBackend::DenseExact => op.exp_dense(v),
        ExpBackend::Lanczos { tol, m_max } => op.exp_lanczos(v, tol, m_max),
        ExpBackend::Strang | ExpBackend::BlanesMoan | ExpBackend::ChinChen => {
            let HamiltonianModel::Spectral(m) = op.model() else {
                return Err(Error::Unsupported {
                    backend: "splitting",
                    model: "matrix",
                });
            };
            let s = eliminate_commutator(op)?;
            let h = op.h();
            Ok(s.apply(v, |x| match backend {
                ExpBackend::Strang => {
                    compose(x, 0.0, h, m, SplitMode::Frozen(&s.core_potential), &STRANG)
                }
                ExpBackend::BlanesMoan => {
                    compose(x, 0.0, h, m, SplitMode::Frozen(&s.core_potential), &BLANES_MOAN_RKN)
                }
                _ => chin_chen_step(x, h, m.grid(), &s.core_potential, &s.core_gradient),
            }))
        }
    }
}

/// One Magnus-Hermite step from `(t_n, u_n)`.
pub fn mh_step(
    u_n: &[C64],
    t_n: f64,
    cfg: &StepConfig,
    model: &HamiltonianModel,
) -> Result<StepReport> {
    let Method::MagnusHermite(backend) = cfg.method else {
        return Err(Error::InvalidArgument(format!("{} is not a Magnus-Hermite method", cfg.method)));
    };
    check_len(model.dim(), u_n.len())?;
    let h = cfg.h;
    let (p0, d0) = model.nonlinear_endpoint(u_n, t_n)?;
    let ext = external_terms(model, t_n, h);

    let (mut iterate, iterations) = if cfg.strang_first {
        (nonlinear_strang(model, u_n, t_n, h, backend)?, cfg.k - 1)
    } else {
        (u_n.to_vec(), cfg.k)
    };
    let mut updates = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        let (p1, d1) = model.nonlinear_endpoint(&iterate, t_n + h)?;
        let ends = EndpointData::new(p0.clone(), p1, d0.clone(), d1, h)?;
        let terms = combine_terms(&hermite_terms(&ends), &ext)?;
        let op = assemble_theta2(model, terms, h)?;
        let next = exponentiate(&op, u_n, backend)?;
        let update = diff_norm(model, &next, &iterate);
        updates.push(update);
        iterate = next;
        if cfg.delta.is_some_and(|d| update < d) {
            break;
        }
    }
    Ok(StepReport { state: iterate, updates })
}

/// One step of any method.
pub fn step(u_n: &[C64], t_n: f64, cfg: &StepConfig, model: &HamiltonianModel) -> Result<StepReport> {
    let direct = |stages| match model {
        HamiltonianModel::Spectral(m) => Ok(StepReport {
            state: compose(u_n, t_n, cfg.h, m, SplitMode::Nonlinear, stages),
            updates: Vec::new(),
        }),
        HamiltonianModel::Matrix(_) => {
            Err(Error::Unsupported { backend: cfg.method.name(), model: "matrix" })
        }
    };
    match cfg.method {
        Method::Strang => match model {
            HamiltonianModel::Matrix(m) => Ok(StepReport {
                state: matrix_strang(u_n, t_n, cfg.h, m, ExpBackend::DenseExact)?,
                updates: Vec::new(),
            }),
            HamiltonianModel::Spectral(_) => direct(&STRANG[..]),
        },
        Method::BlanesMoan => direct(&BLANES_MOAN_S6[..]),
        Method::MagnusHermite(_) => mh_step(u_n, t_n, cfg, model),
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EvolveOptions {
    pub record_observables: bool,
    pub store_states: bool,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Option<Vec<Vec<C64>>>,
    pub observables: Vec<ObservableRecord>,
    pub final_state: Vec<C64>,
    /// Largest iterate update seen in each step.
    pub max_updates: Vec<f64>,
}

/// `steps` uniform steps of size `t_end / steps` starting at `t = 0`.
pub fn evolve(
    u0: &[C64],
    t_end: f64,
    steps: usize,
    method: Method,
    cfg_template: &StepConfig,
    model: &HamiltonianModel,
    opts: EvolveOptions,
) -> Result<Trajectory> {
    if steps == 0 || !(t_end > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need steps >= 1 and t_end > 0, got {steps} and {t_end}"
        )));
    }
    check_len(model.dim(), u0.len())?;
    let h = t_end / steps as f64;
    let cfg = StepConfig { h, method, ..*cfg_template };
    cfg.validate()?;

    let mut u = u0.to_vec();
    let mut times = Vec::with_capacity(steps + 1);
    let mut observables = Vec::new();
    let mut states = opts.store_states.then(Vec::new);
    let mut max_updates = Vec::with_capacity(steps);
    times.push(0.0);
    if opts.record_observables {
        observables.push(observe(model, &u, 0.0));
    }
    if let Some(s) = states.as_mut() {
        s.push(u.clone());
    }
    for n in 0..steps {
        let t = n as f64 * h;
        let report = step(&u, t, &cfg, model).map_err(|e| Error::Step { t, source: Box::new(e) })?;
        if report.state.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Step { t, source: Box::new(Error::NonFinite) });
        }
        u = report.state;
        max_updates.push(report.updates.iter().copied().fold(0.0, f64::max));
        let t1 = (n + 1) as f64 * h;
        times.push(t1);
        if opts.record_observables {
            observables.push(observe(model, &u, t1));
        }
        if let Some(s) = states.as_mut() {
            s.push(u.clone());
        }
    }
    Ok(Trajectory { times, states, observables, final_state: u, max_updates })
}

pub const REFERENCE_K: usize = 5;
pub const REFERENCE_TOL: f64 = 1e-13;

/// Step count used for reference solutions: at least ten times finer than
/// the finest step under study.
pub fn reference_steps(t_end: f64, h_min: f64) -> usize {
    (10.0 * t_end / h_min).ceil() as usize
}

/// Tight Magnus-Hermite Krylov solution at `t_end`.
pub fn reference_solution(
    model: &HamiltonianModel,
    u0: &[C64],
    t_end: f64,
    steps: usize,
) -> Result<Vec<C64>> {
    let method = Method::MagnusHermite(ExpBackend::Lanczos { tol: REFERENCE_TOL, m_max: 400 });
    let cfg = StepConfig::new(t_end / steps as f64, method).with_k(REFERENCE_K);
    evolve(u0, t_end, steps, method, &cfg, model, EvolveOptions::default()).map(|t| t.final_state)
}
