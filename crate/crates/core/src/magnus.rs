//! Fourth-order Magnus exponent of the linearised equation and its
//! commutator-free rewrite.
//!
//! Over one step the linearised problem is `i u_t = (L(t) + P(t)) u` with
//! `P` the combined external and frozen nonlinear potential. With
//! `m0 = int A`, `m1 = int (s - h/2) A` and `A = -i H` the exponent is
//! `Theta = m0 - (1/h) [m0, m1]`. On a grid `P` is a multiplication
//! operator, so `[mu00, mu11] = 0` and this reduces to
//!
//! ```text
//! Theta = i h Lap - i h V0 - i mu00 - [Lap, mu11].
//! ```
//!
//! For matrix models the `L1` coupling does not commute with the diagonal
//! nonlinear terms and the `(1/h) [mu00, mu11]` part is kept.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{check_len, Error, Result};
use crate::expo::dense::{exp_hermitian, DENSE_LIMIT};
use crate::expo::lanczos::expm_hermitian_lanczos;
use crate::hamiltonian::{HamiltonianModel, MatrixModel};
use crate::quadrature::MagnusTerms;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `Theta_2` for one step and one iterate. It is applied through the
/// Hermitian generator `M = i Theta`, so `exp(Theta) = exp(-i M)`.
#[derive(Clone, Debug)]
pub struct Theta2Operator<'a> {
    model: &'a HamiltonianModel,
    terms: MagnusTerms,
    h: f64,
}

pub fn assemble_theta2<'a>(
    model: &'a HamiltonianModel,
    terms: MagnusTerms,
    h: f64,
) -> Result<Theta2Operator<'a>> {
    check_len(model.dim(), terms.len())?;
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    if terms.has_coupling() && matches!(model, HamiltonianModel::Spectral(_)) {
        return Err(Error::InvalidArgument("L1 coupling on a spectral model".into()));
    }
    Ok(Theta2Operator { model, terms, h })
}

fn scale_pointwise(d: &[f64], v: &[C64]) -> Vec<C64> {
    d.iter().zip(v).map(|(a, b)| b * a).collect()
}

impl<'a> Theta2Operator<'a> {
    pub fn model(&self) -> &'a HamiltonianModel {
        self.model
    }

    pub fn terms(&self) -> &MagnusTerms {
        &self.terms
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    /// `M v` with `M = i Theta` Hermitian.
    pub fn apply_generator(&self, v: &[C64]) -> Vec<C64> {
        let h = self.h;
        let MagnusTerms { mu00, mu11, coupling00: c00, coupling11: c11 } = &self.terms;
        match self.model {
            HamiltonianModel::Spectral(m) => {
                let grid = m.grid();
                let lap_v = grid.laplacian(v);
                let lap_mv = grid.laplacian(&scale_pointwise(mu11, v));
                (0..v.len())
                    .map(|j| {
                        let comm = lap_mv[j] - mu11[j] * lap_v[j];
                        -h * lap_v[j] + (h * m.v0()[j] + mu00[j]) * v[j] - I * comm
                    })
                    .collect()
            }
            HamiltonianModel::Matrix(m) => {
                let l1v = MatrixModel::matvec(m.l1(), v);
                // m11 v and m00 v, both without the -i factor
                let m11 = |x: &[C64], l1x: &[C64]| -> Vec<C64> {
                    (0..x.len()).map(|j| *c11 * l1x[j] + mu11[j] * x[j]).collect()
                };
                let m00 = |x: &[C64], l1x: &[C64]| -> Vec<C64> {
                    (0..x.len()).map(|j| *c00 * l1x[j] + mu00[j] * x[j]).collect()
                };
                let l0v = MatrixModel::matvec(m.l0(), v);
                let m11v = m11(v, &l1v);
                let m00v = m00(v, &l1v);
                let l0_m11v = MatrixModel::matvec(m.l0(), &m11v);
                let m11_l0v = m11(&l0v, &MatrixModel::matvec(m.l1(), &l0v));
                let mut out: Vec<C64> = (0..v.len())
                    .map(|j| h * l0v[j] + m00v[j] + I * (l0_m11v[j] - m11_l0v[j]))
                    .collect();
                if *c00 != 0.0 || *c11 != 0.0 {
                    let m00_m11v = m00(&m11v, &MatrixModel::matvec(m.l1(), &m11v));
                    let m11_m00v = m11(&m00v, &MatrixModel::matvec(m.l1(), &m00v));
                    for j in 0..v.len() {
                        out[j] += I / h * (m00_m11v[j] - m11_m00v[j]);
                    }
                }
                out
            }
        }
    }

    /// `Theta v`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.apply_generator(v).into_iter().map(|z| -I * z).collect()
    }

    /// Dense `M`, column by column.
    pub fn to_dense_generator(&self) -> Result<DMatrix<C64>> {
        let n = self.dim();
        if n > DENSE_LIMIT {
            return Err(Error::TooLarge { n, limit: DENSE_LIMIT });
        }
        let mut out = DMatrix::zeros(n, n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for k in 0..n {
            e[k] = C64::new(1.0, 0.0);
            let col = self.apply_generator(&e);
            out.column_mut(k).copy_from_slice(&col);
            e[k] = C64::new(0.0, 0.0);
        }
        Ok(out)
    }

    /// `exp(Theta) v` through the dense eigendecomposition.
    pub fn exp_dense(&self, v: &[C64]) -> Result<Vec<C64>> {
        exp_hermitian(&self.to_dense_generator()?, v, 1.0)
    }

    /// `exp(Theta) v` by Lanczos on the generator.
    pub fn exp_lanczos(&self, v: &[C64], tol: f64, m_max: usize) -> Result<Vec<C64>> {
        expm_hermitian_lanczos(|x| self.apply_generator(x), v, tol, m_max).map(|o| o.result)
    }
}

/// Commutator-free form `exp(Theta) = e^{-i phase} exp(-i h (T + W)) e^{i phase}`
/// up to `O(h^5)`, with `T = -Lap`, `W = V0 + mu00 / h` and
/// `phase = mu11 / h`. The conjugating exponent is `sigma = i phase`.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichFactors {
    pub phase: Vec<f64>,
    pub core_potential: Vec<f64>,
    /// `dW/dx`, for gradient-corrected splittings.
    pub core_gradient: Vec<f64>,
}

impl SandwichFactors {
    /// Applies the sandwich with `central` standing in for
    /// `exp(-i h (T + W))`.
    pub fn apply<F>(&self, v: &[C64], central: F) -> Vec<C64>
    where
        F: FnOnce(&[C64]) -> Vec<C64>,
    {
        let inner: Vec<C64> =
            v.iter().zip(&self.phase).map(|(z, p)| z * C64::from_polar(1.0, *p)).collect();
        let mut out = central(&inner);
        out.iter_mut().zip(&self.phase).for_each(|(z, p)| *z *= C64::from_polar(1.0, -*p));
        out
    }
}

pub fn eliminate_commutator(op: &Theta2Operator<'_>) -> Result<SandwichFactors> {
    let m = match op.model {
        HamiltonianModel::Spectral(m) => m,
        HamiltonianModel::Matrix(_) => return Err(Error::NotPointwise),
    };
    let h = op.h;
    let phase = op.terms.mu11.iter().map(|x| x / h).collect();
    let core_potential = m.v0().iter().zip(&op.terms.mu00).map(|(v, a)| v + a / h).collect();
    let dmu = m.grid().derivative_real(&op.terms.mu00);
    let core_gradient = m.v0_gradient().iter().zip(&dmu).map(|(g, d)| g + d / h).collect();
    Ok(SandwichFactors { phase, core_potential, core_gradient })
}
