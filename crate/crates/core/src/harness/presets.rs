//! Named problem setups.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonian::{
    make_random_hermitian, preset_external_field, preset_external_field_dt,
    preset_initial_condition, preset_static_potential, preset_static_potential_gradient,
    random_unit_vector, ExternalField, HamiltonianModel, MatrixModel, SpectralModel,
};
use crate::spectral::make_grid;

pub const DOMAIN: (f64, f64) = (-10.0, 10.0);
pub const SPECTRAL_POINTS: usize = 1000;
pub const MATRIX_DIM: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    GpDefocusingDriven,
    GpDefocusing,
    GpFocusing,
    NlsDefocusing,
    MatrixDriven,
    MatrixStatic,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::GpDefocusingDriven,
        Preset::GpDefocusing,
        Preset::GpFocusing,
        Preset::NlsDefocusing,
        Preset::MatrixDriven,
        Preset::MatrixStatic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::GpDefocusingDriven => "gp-defocusing-driven",
            Preset::GpDefocusing => "gp-defocusing",
            Preset::GpFocusing => "gp-focusing",
            Preset::NlsDefocusing => "nls-defocusing",
            Preset::MatrixDriven => "matrix-driven",
            Preset::MatrixStatic => "matrix-static",
        }
    }

    pub fn is_matrix(self) -> bool {
        matches!(self, Preset::MatrixDriven | Preset::MatrixStatic)
    }

    pub fn default_dim(self) -> usize {
        if self.is_matrix() {
            MATRIX_DIM
        } else {
            SPECTRAL_POINTS
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl serde::Serialize for Preset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
            Error::InvalidArgument(format!(
                "unknown preset '{s}', expected one of: {}",
                names.join(", ")
            ))
        })
    }
}

/// A model together with its initial state.
#[derive(Clone, Debug)]
pub struct Problem {
    pub preset: Preset,
    pub model: HamiltonianModel,
    pub u0: Vec<C64>,
}

/// Builds a preset with `n` grid points or matrix dimension; `seed` only
/// affects the matrix presets.
pub fn build(preset: Preset, n: Option<usize>, seed: u64) -> Result<Problem> {
    let n = n.unwrap_or(preset.default_dim());
    let (a, b) = DOMAIN;
    let spectral = |lambda: f64, with_v0: bool, driven: bool| -> Result<Problem> {
        let grid = make_grid(a, b, n)?;
        let u0 = preset_initial_condition(&grid).into_values();
        let mut model = if with_v0 {
            let v0 = grid.sample(preset_static_potential);
            let grad = grid.sample(preset_static_potential_gradient);
            SpectralModel::new(Arc::clone(&grid), v0, lambda)?.with_v0_gradient(grad)?
        } else {
            SpectralModel::free(Arc::clone(&grid), lambda)
        };
        if driven {
            model = model.with_external(ExternalField::new(preset_external_field)
                .with_time_derivative(preset_external_field_dt));
        }
        Ok(Problem { preset, model: model.into(), u0 })
    };
    let matrix = |driven: bool| -> Result<Problem> {
        let l0 = make_random_hermitian(n, seed)?;
        let l1 = make_random_hermitian(n, seed.wrapping_add(1))?;
        let mut model = MatrixModel::new(l0, l1, 1.0)?;
        if driven {
            model = model.with_coefficient(|t| (5.0 * std::f64::consts::PI * t).sin());
        }
        let u0 = random_unit_vector(n, seed.wrapping_add(2));
        Ok(Problem { preset, model: model.into(), u0 })
    };
    match preset {
        Preset::GpDefocusingDriven => spectral(10.0, true, true),
        Preset::GpDefocusing => spectral(10.0, true, false),
        Preset::GpFocusing => spectral(-10.0, true, false),
        Preset::NlsDefocusing => spectral(10.0, false, false),
        Preset::MatrixDriven => matrix(true),
        Preset::MatrixStatic => matrix(false),
    }
}
