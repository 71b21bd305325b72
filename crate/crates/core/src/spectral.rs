//! Periodic 1D grids and Fourier-spectral differential operators.
//!
//! Conventions: the forward FFT is unnormalised and the inverse divides by
//! `n`. Wavenumbers are stored in FFT order, `kappa[0] = 0`, with the
//! Nyquist mode (even `n`) at index `n / 2` carrying `-pi n / (b - a)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_len, Error, Result};

/// Uniform periodic mesh on `[a, b)`.
#[derive(Clone)]
pub struct Grid {
    a: f64,
    b: f64,
    n: usize,
    dx: f64,
    kappa: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("n", &self.n)
            .field("dx", &self.dx)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.n == other.n
    }
}

impl Grid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(Error::InvalidGrid(format!("need a < b, got [{a}, {b}]")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need n >= 2, got {n}")));
        }
        let len = b - a;
        let kappa = (0..n)
            .map(|j| {
                let m = if j <= (n - 1) / 2 { j as f64 } else { j as f64 - n as f64 };
                2.0 * PI * m / len
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            a,
            b,
            n,
            dx: len / n as f64,
            kappa,
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn period(&self) -> f64 {
        self.b - self.a
    }

    /// Angular wavenumbers in FFT order.
    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn x(&self, j: usize) -> f64 {
        self.a + j as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    fn nyquist(&self) -> Option<usize> {
        (self.n % 2 == 0).then_some(self.n / 2)
    }

    pub fn forward(&self, u: &mut [C64]) {
        self.fft.process(u);
    }

    pub fn inverse(&self, u: &mut [C64]) {
        self.ifft.process(u);
        let scale = 1.0 / self.n as f64;
        u.iter_mut().for_each(|z| *z *= scale);
    }

    /// Applies the Fourier multiplier `symbol(kappa)` to `u`.
    pub fn apply_multiplier(&self, u: &[C64], symbol: impl Fn(usize, f64) -> C64) -> Vec<C64> {
        debug_assert_eq!(u.len(), self.n);
        let mut w = u.to_vec();
        self.forward(&mut w);
        for (j, (z, &k)) in w.iter_mut().zip(&self.kappa).enumerate() {
            *z *= symbol(j, k);
        }
        self.inverse(&mut w);
        w
    }

    /// Spectral second derivative.
    pub fn laplacian(&self, u: &[C64]) -> Vec<C64> {
        self.apply_multiplier(u, |_, k| C64::new(-k * k, 0.0))
    }

    /// Spectral first derivative; the Nyquist coefficient is dropped.
    pub fn derivative(&self, u: &[C64]) -> Vec<C64> {
        let nyq = self.nyquist();
        self.apply_multiplier(u, |j, k| {
            if Some(j) == nyq {
                C64::new(0.0, 0.0)
            } else {
                C64::new(0.0, k)
            }
        })
    }

    pub fn derivative_real(&self, f: &[f64]) -> Vec<f64> {
        let u: Vec<C64> = f.iter().map(|&v| C64::new(v, 0.0)).collect();
        self.derivative(&u).into_iter().map(|z| z.re).collect()
    }

    /// Exact flow of the free Schrödinger equation `i u_t = -u_xx` over
    /// time `tau`.
    pub fn kinetic_flow(&self, u: &mut [C64], tau: f64) {
        self.forward(u);
        for (z, &k) in u.iter_mut().zip(&self.kappa) {
            *z *= C64::from_polar(1.0, -tau * k * k);
        }
        self.inverse(u);
    }

    /// `dx * sum(conj(u) v)`.
    pub fn inner(&self, u: &[C64], v: &[C64]) -> C64 {
        debug_assert_eq!(u.len(), v.len());
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<C64>() * self.dx
    }

    pub fn norm(&self, u: &[C64]) -> f64 {
        (u.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx).sqrt()
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.n).map(|j| f(self.x(j))).collect()
    }
}

/// Checks `make_grid` preconditions and returns a shareable grid.
pub fn make_grid(a: f64, b: f64, n: usize) -> Result<Arc<Grid>> {
    Grid::new(a, b, n).map(Arc::new)
}

/// Complex field sampled on a [`Grid`].
#[derive(Clone, Debug)]
pub struct WaveField {
    grid: Arc<Grid>,
    values: Vec<C64>,
}

impl WaveField {
    pub fn new(grid: Arc<Grid>, values: Vec<C64>) -> Result<Self> {
        check_len(grid.len(), values.len())?;
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> C64) -> Self {
        let values = (0..grid.len()).map(|j| f(grid.x(j))).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let values = vec![C64::new(0.0, 0.0); grid.len()];
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    fn same_grid(&self, other: &WaveField) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn with_values(&self, values: Vec<C64>) -> Self {
        Self { grid: Arc::clone(&self.grid), values }
    }

    pub fn scaled(&self, s: C64) -> Self {
        self.with_values(self.values.iter().map(|z| z * s).collect())
    }

    pub fn normalized(&self) -> Self {
        let nrm = l2_norm(self);
        self.scaled(C64::new(1.0 / nrm, 0.0))
    }
}

/// Spectral `u_xx` (callers apply the sign of the kinetic operator).
pub fn apply_laplacian(u: &WaveField) -> WaveField {
    u.with_values(u.grid.laplacian(&u.values))
}

pub fn spectral_derivative(u: &WaveField) -> WaveField {
    u.with_values(u.grid.derivative(&u.values))
}

pub fn inner_product(u: &WaveField, v: &WaveField) -> Result<C64> {
    u.same_grid(v)?;
    Ok(u.grid.inner(&u.values, &v.values))
}

pub fn l2_norm(u: &WaveField) -> f64 {
    u.grid.norm(&u.values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane_wave(grid: &Arc<Grid>, mode: i64) -> (f64, WaveField) {
        let k = 2.0 * PI * mode as f64 / grid.period();
        let a = grid.a();
        (k, WaveField::from_fn(Arc::clone(grid), |x| C64::from_polar(1.0, k * (x - a))))
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        assert!(Grid::new(1.0, 1.0, 8).is_err());
        assert!(Grid::new(2.0, 1.0, 8).is_err());
    }

    #[test]
    fn grid_spacing_and_wavenumbers() {
        let g = Grid::new(-10.0, 10.0, 1000).unwrap();
        assert!((g.dx() - 0.02).abs() < 1e-15);
        assert!((g.dx() * g.len() as f64 - 20.0).abs() < 1e-12);

        let g = Grid::new(0.0, 2.0 * PI, 4).unwrap();
        let k = g.kappa();
        assert_eq!(k[0], 0.0);
        assert!((k[1] - 1.0).abs() < 1e-15);
        assert!((k[2].abs() - 2.0).abs() < 1e-15);
        assert!((k[3] + 1.0).abs() < 1e-15);

        let g = Grid::new(0.0, 1.0, 8).unwrap();
        let kmax = g.kappa().iter().fold(0.0f64, |m, k| m.max(k.abs()));
        assert!((kmax - 2.0 * PI * 4.0).abs() < 1e-12);
    }

    #[test]
    fn laplacian_of_constant_and_plane_wave() {
        let g = make_grid(0.0, 3.0, 32).unwrap();
        let one = WaveField::from_fn(Arc::clone(&g), |_| C64::new(1.0, 0.0));
        assert!(apply_laplacian(&one).values().iter().all(|z| z.norm() < 1e-12));

        for mode in [1, 3, -5, 15] {
            let (k, u) = plane_wave(&g, mode);
            let lu = apply_laplacian(&u);
            let du = spectral_derivative(&u);
            for j in 0..g.len() {
                assert!((lu.values()[j] + k * k * u.values()[j]).norm() < 1e-9);
                assert!((du.values()[j] - C64::new(0.0, k) * u.values()[j]).norm() < 1e-10);
            }
        }
        let c = WaveField::from_fn(Arc::clone(&g), |_| C64::new(2.0, -1.0));
        assert!(spectral_derivative(&c).values().iter().all(|z| z.norm() < 1e-12));
    }

    // Fourth-order central differences on a well-resolved Gaussian.
    fn fd4(f: impl Fn(f64) -> f64, x: f64, order: u8) -> f64 {
        let e: f64 = 1e-3;
        match order {
            1 => (-f(x + 2.0 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2.0 * e)) / (12.0 * e),
            _ => {
                (-f(x + 2.0 * e) + 16.0 * f(x + e) - 30.0 * f(x) + 16.0 * f(x - e)
                    - f(x - 2.0 * e))
                    / (12.0 * e * e)
            }
        }
    }

    #[test]
    fn gaussian_derivatives_match_finite_differences() {
        let g = make_grid(-10.0, 10.0, 1000).unwrap();
        let gauss = |x: f64| (-(x + 2.0) * (x + 2.0) / 0.5).exp();
        let u = WaveField::from_fn(Arc::clone(&g), |x| C64::new(gauss(x), 0.0));
        let lu = apply_laplacian(&u);
        let du = spectral_derivative(&u);
        let d2: Vec<f64> = g.points().iter().map(|&x| fd4(gauss, x, 2)).collect();
        let d1: Vec<f64> = g.points().iter().map(|&x| fd4(gauss, x, 1)).collect();
        let err2 = lu.values().iter().zip(&d2).map(|(a, b)| (a.re - b).powi(2)).sum::<f64>();
        let err1 = du.values().iter().zip(&d1).map(|(a, b)| (a.re - b).powi(2)).sum::<f64>();
        let n2 = d2.iter().map(|v| v * v).sum::<f64>();
        let n1 = d1.iter().map(|v| v * v).sum::<f64>();
        assert!((err2 / n2).sqrt() <= 1e-6, "laplacian rel err {}", (err2 / n2).sqrt());
        assert!((err1 / n1).sqrt() <= 1e-6, "derivative rel err {}", (err1 / n1).sqrt());
    }

    #[test]
    fn inner_product_basics() {
        let g = make_grid(0.0, 2.0 * PI, 64).unwrap();
        let (_, u) = plane_wave(&g, 2);
        let (_, v) = plane_wave(&g, 5);
        let u = u.normalized();
        assert!((inner_product(&u, &u).unwrap() - 1.0).norm() < 1e-13);
        assert!(inner_product(&u, &v).unwrap().norm() < 1e-12);
        let w = WaveField::from_fn(Arc::clone(&g), |x| C64::new(x.sin(), x.cos() * 0.3));
        let uv = inner_product(&u, &w).unwrap();
        let vu = inner_product(&w, &u).unwrap();
        assert!((uv - vu.conj()).norm() < 1e-13);

        assert_eq!(l2_norm(&WaveField::zeros(Arc::clone(&g))), 0.0);
        let doubled = w.scaled(C64::new(2.0, 0.0));
        assert!((l2_norm(&doubled) - 2.0 * l2_norm(&w)).abs() < 1e-13);

        let other = make_grid(0.0, 1.0, 64).unwrap();
        assert!(inner_product(&u, &WaveField::zeros(other)).is_err());
    }

    #[test]
    fn norm_matches_direct_sum() {
        let g = make_grid(-3.0, 5.0, 37).unwrap();
        let u = WaveField::from_fn(Arc::clone(&g), |x| C64::new((3.0 * x).sin(), x * 0.1));
        let direct: f64 = g
            .points()
            .iter()
            .map(|&x| (3.0 * x).sin().powi(2) + (x * 0.1).powi(2))
            .sum::<f64>()
            * (8.0 / 37.0);
        assert!((l2_norm(&u) - direct.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn wavefield_validates() {
        let g = make_grid(0.0, 1.0, 4).unwrap();
        assert!(WaveField::new(Arc::clone(&g), vec![C64::new(0.0, 0.0); 3]).is_err());
        let bad = vec![C64::new(f64::NAN, 0.0); 4];
        assert!(WaveField::new(g, bad).is_err());
    }
}
