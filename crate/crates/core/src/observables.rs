//! Conserved-quantity diagnostics.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::hamiltonian::{HamiltonianModel, MatrixModel, SpectralModel};
use crate::spectral::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub norm: f64,
    /// Absent for matrix models, which carry no notion of position.
    pub momentum: Option<f64>,
    pub energy: f64,
    /// `<u, L0 u>`: `L0 = -Lap + V0` on grids.
    pub energy_linear: f64,
}

impl ObservableRecord {
    /// Componentwise change relative to `base`, keeping this record's time.
    pub fn delta(&self, base: &ObservableRecord) -> ObservableRecord {
        ObservableRecord {
            t: self.t,
            norm: self.norm - base.norm,
            momentum: self.momentum.zip(base.momentum).map(|(a, b)| a - b),
            energy: self.energy - base.energy,
            energy_linear: self.energy_linear - base.energy_linear,
        }
    }
}

/// `I(u) = i int (conj(u_x) u - conj(u) u_x) dx = -2 Im <u_x, u>`.
pub fn momentum(grid: &Grid, u: &[C64]) -> f64 {
    let ux = grid.derivative(u);
    -2.0 * grid.inner(&ux, u).im
}

fn quartic(u: &[C64]) -> f64 {
    u.iter().map(|z| z.norm_sqr() * z.norm_sqr()).sum()
}

/// `<-Lap u, u> + (lambda/2) int |u|^4 + int (V0 + V^e(t)) |u|^2`.
pub fn hamiltonian_energy(model: &SpectralModel, u: &[C64], t: f64) -> f64 {
    let g = model.grid();
    let linear = model.apply_with_potential(u, &model.linear_potential(t));
    g.inner(u, &linear).re + 0.5 * model.lambda() * quartic(u) * g.dx()
}

/// `Re <u, L0 u>`.
pub fn matrix_energy(u: &[C64], l0: &DMatrix<C64>) -> f64 {
    MatrixModel::matvec(l0, u).iter().zip(u).map(|(a, b)| b.conj() * a).sum::<C64>().re
}

pub fn observe(model: &HamiltonianModel, u: &[C64], t: f64) -> ObservableRecord {
    let norm = model.norm(u);
    match model {
        HamiltonianModel::Spectral(m) => ObservableRecord {
            t,
            norm,
            momentum: Some(momentum(m.grid(), u)),
            energy: hamiltonian_energy(m, u, t),
            energy_linear: m.grid().inner(u, &m.apply_with_potential(u, m.v0())).re,
        },
        HamiltonianModel::Matrix(m) => {
            let lu = m.apply_with_potential(u, t, &vec![0.0; u.len()]);
            let lin: C64 = lu.iter().zip(u).map(|(a, b)| b.conj() * a).sum();
            ObservableRecord {
                t,
                norm,
                momentum: None,
                energy: lin.re + 0.5 * m.lambda() * quartic(u),
                energy_linear: matrix_energy(u, m.l0()),
            }
        }
    }
}
