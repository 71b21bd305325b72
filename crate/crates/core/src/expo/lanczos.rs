//! Lanczos approximation of `exp(-i M) v` for Hermitian `M` given only
//! through its action.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Result of a Krylov exponential together with diagnostics.
#[derive(Clone, Debug)]
pub struct KrylovOutcome {
    pub result: Vec<C64>,
    /// Krylov dimension used.
    pub dimension: usize,
    /// Final error estimate, relative to `|v|`.
    pub estimate: f64,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [C64], alpha: C64, x: &[C64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// First column of `exp(-i T)` for the symmetric tridiagonal `T`.
fn tridiagonal_exp_e1(alpha: &[f64], beta: &[f64]) -> Vec<C64> {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let s = &eig.eigenvectors;
    (0..m)
        .map(|k| {
            (0..m)
                .map(|i| C64::from_polar(s[(k, i)] * s[(0, i)], -eig.eigenvalues[i]))
                .sum()
        })
        .collect()
}

/// `exp(-i M) v` by Lanczos. Iterates until successive Krylov
/// approximations differ by at most `tol * |v|` (and the residual term
/// `beta_m |y_m|` is below it too), or the recurrence breaks down on an
/// invariant subspace.
pub fn expm_hermitian_lanczos<F>(
    mut apply_m: F,
    v: &[C64],
    tol: f64,
    m_max: usize,
) -> Result<KrylovOutcome>
where
    F: FnMut(&[C64]) -> Vec<C64>,
{
    if !(tol > 0.0) || m_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "Lanczos needs tol > 0 and m_max >= 2, got tol = {tol}, m_max = {m_max}"
        )));
    }
    let beta0 = norm(v);
    if beta0 == 0.0 {
        return Ok(KrylovOutcome { result: v.to_vec(), dimension: 0, estimate: 0.0 });
    }
    let n = v.len();
    let mut basis: Vec<Vec<C64>> = vec![v.iter().map(|z| z / beta0).collect()];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut prev: Vec<C64> = Vec::new();
    let mut estimate = f64::INFINITY;
    let breakdown_tol = 1e-13;

    for j in 0..m_max.min(n.max(1)) {
        let mut w = apply_m(&basis[j]);
        let a = dot(&basis[j], &w).re;
        axpy(&mut w, C64::new(-a, 0.0), &basis[j]);
        if j > 0 {
            axpy(&mut w, C64::new(-beta[j - 1], 0.0), &basis[j - 1]);
        }
        alpha.push(a);
        let mut b = norm(&w);
        // one extra Gram-Schmidt pass once orthogonality to q_0 degrades
        if j > 0 && b > 0.0 && dot(&basis[0], &w).norm() > 1e-8 * b {
            for q in &basis {
                let c = dot(q, &w);
                axpy(&mut w, -c, q);
            }
            b = norm(&w);
        }

        let y = tridiagonal_exp_e1(&alpha, &beta);
        let scale = a.abs() + beta.last().copied().unwrap_or(0.0) + 1.0;
        let broke_down = b <= breakdown_tol * scale;
        if j > 0 {
            let diff: f64 = y
                .iter()
                .enumerate()
                .map(|(k, yk)| (yk - prev.get(k).copied().unwrap_or_default()).norm_sqr())
                .sum::<f64>()
                .sqrt();
            // the correction that the next basis vector would add guards
            // against a coincidentally small difference
            estimate = diff.max(b * y[j].norm());
        }
        if broke_down || estimate <= tol || j + 1 == n {
            let mut result = vec![C64::new(0.0, 0.0); n];
            for (q, yk) in basis.iter().zip(&y) {
                axpy(&mut result, yk * beta0, q);
            }
            let estimate = if broke_down || j + 1 == n { 0.0 } else { estimate };
            return Ok(KrylovOutcome { result, dimension: j + 1, estimate });
        }
        prev = y;
        beta.push(b);
        basis.push(w.iter().map(|z| z / b).collect());
    }
    Err(Error::LanczosNotConverged { m_max, estimate })
}

/// `exp(A) v` for skew-Hermitian `A = -i M`, given the action of `A`.
pub fn exp_lanczos<F>(mut apply_a: F, v: &[C64], tol: f64, m_max: usize) -> Result<Vec<C64>>
where
    F: FnMut(&[C64]) -> Vec<C64>,
{
    let i = C64::new(0.0, 1.0);
    expm_hermitian_lanczos(
        |x| apply_a(x).into_iter().map(|z| z * i).collect(),
        v,
        tol,
        m_max,
    )
    .map(|o| o.result)
}
