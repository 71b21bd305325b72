//! Bernoulli-weighted line integrals over one step,
//!
//! ```text
//! mu00 = int_0^h P(t_n + s) ds,    mu11 = int_0^h (s - h/2) P(t_n + s) ds,
//! ```
//!
//! from Hermite endpoint data (values and time derivatives at both ends)
//! or from two-point Gauss-Legendre sampling of a known field.

use crate::error::{check_len, Error, Result};

/// Values and time derivatives of a potential at both ends of a step.
#[derive(Clone, Debug)]
pub struct EndpointData {
    pub p0: Vec<f64>,
    pub p1: Vec<f64>,
    pub d0: Vec<f64>,
    pub d1: Vec<f64>,
    pub h: f64,
}

impl EndpointData {
    pub fn new(p0: Vec<f64>, p1: Vec<f64>, d0: Vec<f64>, d1: Vec<f64>, h: f64) -> Result<Self> {
        let n = p0.len();
        check_len(n, p1.len())?;
        check_len(n, d0.len())?;
        check_len(n, d1.len())?;
        if !(h > 0.0) {
            return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
        }
        Ok(Self { p0, p1, d0, d1, h })
    }

    pub fn len(&self) -> usize {
        self.p0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p0.is_empty()
    }
}

/// `mu00` and `mu11` of one step. The pointwise parts multiply the state;
/// `coupling00`/`coupling11` weight the `L1` matrix of a matrix model and
/// stay zero for spectral models.
#[derive(Clone, Debug, PartialEq)]
pub struct MagnusTerms {
    pub mu00: Vec<f64>,
    pub mu11: Vec<f64>,
    pub coupling00: f64,
    pub coupling11: f64,
}

impl MagnusTerms {
    pub fn pointwise(mu00: Vec<f64>, mu11: Vec<f64>) -> Self {
        Self { mu00, mu11, coupling00: 0.0, coupling11: 0.0 }
    }

    pub fn zeros(n: usize) -> Self {
        Self::pointwise(vec![0.0; n], vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.mu00.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu00.is_empty()
    }

    pub fn has_coupling(&self) -> bool {
        self.coupling00 != 0.0 || self.coupling11 != 0.0
    }
}

/// Integral of the cubic Hermite interpolant: exact for cubics.
pub fn hermite_mu00(e: &EndpointData) -> Vec<f64> {
    let h = e.h;
    let (a, b) = (h / 2.0, h * h / 12.0);
    (0..e.len())
        .map(|j| a * (e.p0[j] + e.p1[j]) + b * (e.d0[j] - e.d1[j]))
        .collect()
}

/// First moment of the cubic Hermite interpolant against `s - h/2`.
///
/// Integrating the interpolant exactly gives the weights `h^2/10` and
/// `h^3/120`; a leading weight of `h^2/2` is not exact even for linear
/// potentials.
pub fn hermite_mu11(e: &EndpointData) -> Vec<f64> {
    let h = e.h;
    let (a, b) = (h * h / 10.0, h * h * h / 120.0);
    (0..e.len())
        .map(|j| a * (e.p1[j] - e.p0[j]) - b * (e.d0[j] + e.d1[j]))
        .collect()
}

pub fn hermite_terms(e: &EndpointData) -> MagnusTerms {
    MagnusTerms::pointwise(hermite_mu00(e), hermite_mu11(e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Moment {
    Mu00,
    Mu11,
}

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // sqrt(3) / 6

/// Two-point Gauss-Legendre estimate of `mu00` or `mu11` for a field
/// known at every time.
pub fn gauss_mu<F>(field: F, t_n: f64, h: f64, which: Moment) -> Vec<f64>
where
    F: Fn(f64) -> Vec<f64>,
{
    let (m00, m11) = gauss_moments(field, t_n, h);
    match which {
        Moment::Mu00 => m00,
        Moment::Mu11 => m11,
    }
}

/// Both Gauss-Legendre moments from the same two field samples.
pub fn gauss_moments<F>(field: F, t_n: f64, h: f64) -> (Vec<f64>, Vec<f64>)
where
    F: Fn(f64) -> Vec<f64>,
{
    let lo = field(t_n + (0.5 - GAUSS_OFFSET) * h);
    let hi = field(t_n + (0.5 + GAUSS_OFFSET) * h);
    let w11 = GAUSS_OFFSET * h * h / 2.0;
    let m00 = lo.iter().zip(&hi).map(|(a, b)| 0.5 * h * (a + b)).collect();
    let m11 = lo.iter().zip(&hi).map(|(a, b)| w11 * (b - a)).collect();
    (m00, m11)
}

/// Scalar variant of [`gauss_moments`], used for the time profile of a
/// matrix model's `L1` coupling.
pub fn gauss_moments_scalar<F: Fn(f64) -> f64>(f: F, t_n: f64, h: f64) -> (f64, f64) {
    let lo = f(t_n + (0.5 - GAUSS_OFFSET) * h);
    let hi = f(t_n + (0.5 + GAUSS_OFFSET) * h);
    (0.5 * h * (lo + hi), GAUSS_OFFSET * h * h / 2.0 * (hi - lo))
}

pub fn combine_terms(nl: &MagnusTerms, ext: &MagnusTerms) -> Result<MagnusTerms> {
    check_len(nl.len(), ext.len())?;
    let add = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
    Ok(MagnusTerms {
        mu00: add(&nl.mu00, &ext.mu00),
        mu11: add(&nl.mu11, &ext.mu11),
        coupling00: nl.coupling00 + ext.coupling00,
        coupling11: nl.coupling11 + ext.coupling11,
    })
}
