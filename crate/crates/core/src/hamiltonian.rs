//! Hamiltonians `H(u, t) = L0 + L1(t) + lambda |u|^2` in spectral-grid and
//! dense-matrix form.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_len, Error, Result};
use crate::spectral::{Grid, WaveField};

type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Real external potential `V^e(x, t)`.
#[derive(Clone)]
pub struct ExternalField {
    eval: SpaceTimeFn,
    dt_eval: Option<SpaceTimeFn>,
}

impl fmt::Debug for ExternalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExternalField")
            .field("has_dt", &self.dt_eval.is_some())
            .finish()
    }
}

impl ExternalField {
    pub fn new(eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(eval), dt_eval: None }
    }

    pub fn with_time_derivative(
        mut self,
        dt: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.dt_eval = Some(Arc::new(dt));
        self
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        (self.eval)(x, t)
    }

    pub fn eval_dt(&self, x: f64, t: f64) -> Option<f64> {
        self.dt_eval.as_ref().map(|d| d(x, t))
    }

    pub fn sample(&self, grid: &Grid, t: f64) -> Vec<f64> {
        grid.sample(|x| self.eval(x, t))
    }
}

/// `-d^2/dx^2 + V0(x) + V^e(x, t) + lambda |u|^2` on a periodic grid.
#[derive(Clone, Debug)]
pub struct SpectralModel {
    grid: Arc<Grid>,
    v0: Vec<f64>,
    v0_gradient: Option<Vec<f64>>,
    external: Option<ExternalField>,
    lambda: f64,
}

impl SpectralModel {
    pub fn new(grid: Arc<Grid>, v0: Vec<f64>, lambda: f64) -> Result<Self> {
        check_len(grid.len(), v0.len())?;
        if v0.iter().any(|v| !v.is_finite()) || !lambda.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, v0, v0_gradient: None, external: None, lambda })
    }

    /// Free NLS: no linear potential at all.
    pub fn free(grid: Arc<Grid>, lambda: f64) -> Self {
        let n = grid.len();
        Self { grid, v0: vec![0.0; n], v0_gradient: Some(vec![0.0; n]), external: None, lambda }
    }

    pub fn with_external(mut self, field: ExternalField) -> Self {
        self.external = Some(field);
        self
    }

    /// Supplies `dV0/dx` on the grid. Without it the gradient is taken
    /// spectrally, which rings if `V0` is not smooth across the periodic
    /// boundary.
    pub fn with_v0_gradient(mut self, gradient: Vec<f64>) -> Result<Self> {
        check_len(self.grid.len(), gradient.len())?;
        self.v0_gradient = Some(gradient);
        Ok(self)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn v0(&self) -> &[f64] {
        &self.v0
    }

    pub fn v0_gradient(&self) -> Vec<f64> {
        match &self.v0_gradient {
            Some(g) => g.clone(),
            None => self.grid.derivative_real(&self.v0),
        }
    }

    pub fn external(&self) -> Option<&ExternalField> {
        self.external.as_ref()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `V0 + V^e(., t)` on the grid.
    pub fn linear_potential(&self, t: f64) -> Vec<f64> {
        match &self.external {
            None => self.v0.clone(),
            Some(ext) => {
                let g = &self.grid;
                self.v0.iter().enumerate().map(|(j, v)| v + ext.eval(g.x(j), t)).collect()
            }
        }
    }

    /// `(-Delta + V) u` for a given real potential `V`.
    pub fn apply_with_potential(&self, u: &[C64], potential: &[f64]) -> Vec<C64> {
        let mut out = self.grid.laplacian(u);
        for ((o, z), v) in out.iter_mut().zip(u).zip(potential) {
            *o = -*o + z * v;
        }
        out
    }
}

/// `L0 + c(t) L1 + lambda diag(|u|^2)` with Hermitian `L0`, `L1`.
#[derive(Clone)]
pub struct MatrixModel {
    l0: DMatrix<C64>,
    l1: DMatrix<C64>,
    coeff: Option<TimeFn>,
    lambda: f64,
}

impl fmt::Debug for MatrixModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixModel")
            .field("n", &self.l0.nrows())
            .field("driven", &self.coeff.is_some())
            .field("lambda", &self.lambda)
            .finish()
    }
}

fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    (m - m.adjoint()).norm()
}

impl MatrixModel {
    pub fn new(l0: DMatrix<C64>, l1: DMatrix<C64>, lambda: f64) -> Result<Self> {
        let n = l0.nrows();
        if l0.ncols() != n {
            return Err(Error::InvalidArgument("L0 must be square".into()));
        }
        check_len(n, l1.nrows())?;
        check_len(n, l1.ncols())?;
        for (name, m) in [("L0", &l0), ("L1", &l1)] {
            if hermitian_defect(m) > 1e-12 * m.norm().max(1.0) {
                return Err(Error::InvalidArgument(format!("{name} is not Hermitian")));
            }
        }
        Ok(Self { l0, l1, coeff: None, lambda })
    }

    /// Scalar time profile `c(t)` multiplying `L1`.
    pub fn with_coefficient(mut self, c: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.coeff = Some(Arc::new(c));
        self
    }

    pub fn dim(&self) -> usize {
        self.l0.nrows()
    }

    pub fn l0(&self) -> &DMatrix<C64> {
        &self.l0
    }

    pub fn l1(&self) -> &DMatrix<C64> {
        &self.l1
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_driven(&self) -> bool {
        self.coeff.is_some()
    }

    pub fn coefficient(&self, t: f64) -> f64 {
        self.coeff.as_ref().map_or(0.0, |c| c(t))
    }

    pub fn matvec(m: &DMatrix<C64>, v: &[C64]) -> Vec<C64> {
        let x = DVector::from_column_slice(v);
        (m * x).as_slice().to_vec()
    }

    /// `(L0 + c(t) L1 + diag(potential)) u`.
    pub fn apply_with_potential(&self, u: &[C64], t: f64, potential: &[f64]) -> Vec<C64> {
        let mut out = Self::matvec(&self.l0, u);
        let c = self.coefficient(t);
        if c != 0.0 {
            for (o, w) in out.iter_mut().zip(Self::matvec(&self.l1, u)) {
                *o += w * c;
            }
        }
        for ((o, z), p) in out.iter_mut().zip(u).zip(potential) {
            *o += z * p;
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum HamiltonianModel {
    Spectral(SpectralModel),
    Matrix(MatrixModel),
}

impl From<SpectralModel> for HamiltonianModel {
    fn from(m: SpectralModel) -> Self {
        Self::Spectral(m)
    }
}

impl From<MatrixModel> for HamiltonianModel {
    fn from(m: MatrixModel) -> Self {
        Self::Matrix(m)
    }
}

impl HamiltonianModel {
    pub fn dim(&self) -> usize {
        match self {
            Self::Spectral(m) => m.grid.len(),
            Self::Matrix(m) => m.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Spectral(_) => "spectral",
            Self::Matrix(_) => "matrix",
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            Self::Spectral(m) => m.lambda,
            Self::Matrix(m) => m.lambda,
        }
    }

    /// Inner product of the state space: `dx`-weighted on grids, plain
    /// Euclidean for matrices.
    pub fn inner(&self, u: &[C64], v: &[C64]) -> C64 {
        match self {
            Self::Spectral(m) => m.grid.inner(u, v),
            Self::Matrix(_) => u.iter().zip(v).map(|(a, b)| a.conj() * b).sum(),
        }
    }

    pub fn norm(&self, u: &[C64]) -> f64 {
        self.inner(u, u).re.max(0.0).sqrt()
    }

    pub fn nonlinear_potential(&self, u: &[C64]) -> Vec<f64> {
        nonlinear_potential(u, self.lambda())
    }

    /// `H(u, t) u` given a precomputed nonlinear potential.
    fn apply_parts(&self, u: &[C64], t: f64, nonlinear: &[f64]) -> Vec<C64> {
        match self {
            Self::Spectral(m) => {
                let mut v = m.linear_potential(t);
                v.iter_mut().zip(nonlinear).for_each(|(a, b)| *a += b);
                m.apply_with_potential(u, &v)
            }
            Self::Matrix(m) => m.apply_with_potential(u, t, nonlinear),
        }
    }

    /// `H(u, t) u`.
    pub fn apply(&self, u: &[C64], t: f64) -> Result<Vec<C64>> {
        check_len(self.dim(), u.len())?;
        Ok(self.apply_parts(u, t, &self.nonlinear_potential(u)))
    }

    /// Linear part only, `L(t) u`.
    pub fn apply_linear(&self, u: &[C64], t: f64) -> Vec<C64> {
        self.apply_parts(u, t, &vec![0.0; u.len()])
    }

    /// Pointwise `d/dt (lambda |u|^2)` along `i u_t = H(u, t) u`, which is
    /// `2 lambda Im(conj(u) (H u))`.
    pub fn nonlinear_potential_rate(&self, u: &[C64], t: f64) -> Result<Vec<f64>> {
        let hu = self.apply(u, t)?;
        let lam = self.lambda();
        Ok(u.iter().zip(&hu).map(|(z, w)| 2.0 * lam * (z.conj() * w).im).collect())
    }

    /// `(lambda |u|^2, d/dt lambda |u|^2)` from a single Hamiltonian
    /// application.
    pub fn nonlinear_endpoint(&self, u: &[C64], t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        check_len(self.dim(), u.len())?;
        let p = self.nonlinear_potential(u);
        let hu = self.apply_parts(u, t, &p);
        let lam = self.lambda();
        let d = u.iter().zip(&hu).map(|(z, w)| 2.0 * lam * (z.conj() * w).im).collect();
        Ok((p, d))
    }
}

/// `lambda |u_j|^2`.
pub fn nonlinear_potential(u: &[C64], lambda: f64) -> Vec<f64> {
    u.iter().map(|z| lambda * z.norm_sqr()).collect()
}

/// Grid-level convenience wrapper around [`HamiltonianModel::apply`].
pub fn apply_hamiltonian(model: &SpectralModel, u: &WaveField, t: f64) -> Result<WaveField> {
    if **u.grid() != *model.grid {
        return Err(Error::GridMismatch);
    }
    let out = HamiltonianModel::Spectral(model.clone()).apply(u.values(), t)?;
    WaveField::new(Arc::clone(u.grid()), out)
}

/// Double-well confinement `x^4 - 10 x^2`.
pub fn preset_static_potential(x: f64) -> f64 {
    x.powi(4) - 10.0 * x * x
}

pub fn preset_static_potential_gradient(x: f64) -> f64 {
    4.0 * x.powi(3) - 20.0 * x
}

/// Driving field `5 sin(5 pi t) sin(pi x)`.
pub fn preset_external_field(x: f64, t: f64) -> f64 {
    5.0 * (5.0 * PI * t).sin() * (PI * x).sin()
}

pub fn preset_external_field_dt(x: f64, t: f64) -> f64 {
    25.0 * PI * (5.0 * PI * t).cos() * (PI * x).sin()
}

pub const PACKET_CENTRE: f64 = -2.0;
pub const PACKET_VARIANCE: f64 = 0.25;

/// Normalised Gaussian packet centred at `x0 = -2` with `sigma^2 = 0.25`.
pub fn preset_initial_condition(grid: &Arc<Grid>) -> WaveField {
    let u = WaveField::from_fn(Arc::clone(grid), |x| {
        let d = x - PACKET_CENTRE;
        C64::new((-d * d / (2.0 * PACKET_VARIANCE)).exp(), 0.0)
    });
    u.normalized()
}

/// Seeded random Hermitian matrix `(A + A^dagger) / 2` with standard
/// complex Gaussian `A`, rescaled to spectral radius 10.
pub fn make_random_hermitian(n: usize, seed: u64) -> Result<DMatrix<C64>> {
    if n < 1 {
        return Err(Error::InvalidArgument("matrix dimension must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let a = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re * s, im * s)
    });
    let mut h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
    let radius = SymmetricEigen::new(h.clone())
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if radius > 0.0 {
        h *= C64::new(10.0 / radius, 0.0);
    }
    Ok(h)
}

/// Seeded standard complex Gaussian vector normalised to unit length.
pub fn random_unit_vector(n: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<C64> = (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= nrm);
    v
}
