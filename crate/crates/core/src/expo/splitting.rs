//! Kinetic/potential splittings on a periodic grid.
//!
//! In nonlinear mode the potential stage applies the exact flow of
//! `i u_t = (V0 + V^e(t) + lambda |u|^2) u`, which keeps `|u|` fixed and is
//! therefore a pointwise phase rotation; the clock advances with the
//! kinetic stages. In frozen mode the potential is a fixed real array.

use num_complex::Complex64 as C64;

use super::coefficients::{
    Stage, BLANES_MOAN_RKN, BLANES_MOAN_S6, CHIN_CHEN_GRADIENT, CHIN_CHEN_KINETIC, CHIN_CHEN_MIDDLE,
    CHIN_CHEN_OUTER, STRANG,
};
use crate::hamiltonian::SpectralModel;
use crate::spectral::Grid;

#[derive(Clone, Copy, Debug)]
pub enum SplitMode<'a> {
    /// Full nonlinear, possibly driven, Gross-Pitaevskii potential.
    Nonlinear,
    /// Linear problem `-d^2/dx^2 + W` with `W` given.
    Frozen(&'a [f64]),
}

fn potential_phase(u: &mut [C64], potential: &[f64], tau: f64) {
    for (z, v) in u.iter_mut().zip(potential) {
        *z *= C64::from_polar(1.0, -tau * v);
    }
}

/// Runs a kinetic/potential composition over one step of size `h`.
pub fn compose(
    state: &[C64],
    t: f64,
    h: f64,
    model: &SpectralModel,
    mode: SplitMode<'_>,
    stages: &[Stage],
) -> Vec<C64> {
    let grid = model.grid();
    let mut u = state.to_vec();
    let mut clock = t;
    for stage in stages {
        match *stage {
            Stage::Kinetic(a) => {
                grid.kinetic_flow(&mut u, a * h);
                clock += a * h;
            }
            Stage::Potential(b) => match mode {
                SplitMode::Frozen(w) => potential_phase(&mut u, w, b * h),
                SplitMode::Nonlinear => {
                    let mut v = model.linear_potential(clock);
                    let lam = model.lambda();
                    v.iter_mut().zip(&u).for_each(|(p, z)| *p += lam * z.norm_sqr());
                    potential_phase(&mut u, &v, b * h);
                }
            },
        }
    }
    u
}

/// Half kinetic, full potential (at `t + h/2` when nonlinear), half kinetic.
pub fn strang_step(
    state: &[C64],
    t: f64,
    h: f64,
    model: &SpectralModel,
    mode: SplitMode<'_>,
) -> Vec<C64> {
    compose(state, t, h, model, mode, &STRANG)
}

/// Fourth-order Blanes-Moan composition: the general `S_6` scheme for the
/// nonlinear flow, the Runge-Kutta-Nystrom `SRKN_6^b` scheme for a frozen
/// linear potential.
pub fn blanes_moan_step(
    state: &[C64],
    t: f64,
    h: f64,
    model: &SpectralModel,
    mode: SplitMode<'_>,
) -> Vec<C64> {
    let stages = match mode {
        SplitMode::Nonlinear => &BLANES_MOAN_S6,
        SplitMode::Frozen(_) => &BLANES_MOAN_RKN,
    };
    compose(state, t, h, model, mode, stages)
}

/// Chin-Chen compact fourth-order splitting of `exp(-i h (T + W))`,
/// `T = -d^2/dx^2`, with `w_grad = dW/dx` feeding the middle correction.
pub fn chin_chen_step(state: &[C64], h: f64, grid: &Grid, w: &[f64], w_grad: &[f64]) -> Vec<C64> {
    let mut u = state.to_vec();
    let corrected: Vec<f64> = w
        .iter()
        .zip(w_grad)
        .map(|(v, g)| v + CHIN_CHEN_GRADIENT * h * h * g * g)
        .collect();
    potential_phase(&mut u, w, CHIN_CHEN_OUTER * h);
    grid.kinetic_flow(&mut u, CHIN_CHEN_KINETIC * h);
    potential_phase(&mut u, &corrected, CHIN_CHEN_MIDDLE * h);
    grid.kinetic_flow(&mut u, CHIN_CHEN_KINETIC * h);
    potential_phase(&mut u, w, CHIN_CHEN_OUTER * h);
    u
}
