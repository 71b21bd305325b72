//! Reference matrix exponentials for small problems.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{check_len, Error, Result};

/// Largest dimension accepted by the dense routines.
pub const DENSE_LIMIT: usize = 256;

fn guard(m: &DMatrix<C64>, v: &[C64]) -> Result<()> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge { n, limit: DENSE_LIMIT });
    }
    check_len(n, v.len())
}

/// `exp(-i s M) v` for Hermitian `M`, through its eigendecomposition so the
/// propagator is unitary to roundoff.
pub fn exp_hermitian(m: &DMatrix<C64>, v: &[C64], s: f64) -> Result<Vec<C64>> {
    guard(m, v)?;
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let q = &eig.eigenvectors;
    let mut c = q.adjoint() * DVector::from_column_slice(v);
    for (cj, &lam) in c.iter_mut().zip(eig.eigenvalues.iter()) {
        *cj *= C64::from_polar(1.0, -s * lam);
    }
    Ok((q * c).as_slice().to_vec())
}

/// `exp(A) v`. Skew-Hermitian `A = -i M` goes through the Hermitian
/// eigendecomposition; anything else through scaling and squaring.
pub fn exp_dense(a: &DMatrix<C64>, v: &[C64]) -> Result<Vec<C64>> {
    guard(a, v)?;
    let scale = a.norm();
    let skew_defect = (a + a.adjoint()).norm();
    if skew_defect <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        let m = a * C64::new(0.0, 1.0);
        return exp_hermitian(&m, v, 1.0);
    }
    let e = a.exp();
    Ok((e * DVector::from_column_slice(v)).as_slice().to_vec())
}
