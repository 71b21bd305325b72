#![allow(dead_code)]

use std::f64::consts::PI;

use magnus_hermite::spectral::Grid;
use magnus_hermite::C64;
use nalgebra::DMatrix;

pub fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn l2(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Second-derivative matrix of trigonometric interpolation, built from
/// the explicit Fourier sum `D2[j,k] = (1/n) sum_m -k_m^2 e^{i k_m (x_j - x_k)}`
/// with symmetric mode numbers, independent of any FFT.
pub fn dense_second_derivative(grid: &Grid) -> DMatrix<C64> {
    let n = grid.len();
    let l = grid.period();
    let modes: Vec<f64> = (0..n)
        .map(|m| {
            let m = m as i64;
            let m = if m > n as i64 / 2 { m - n as i64 } else { m };
            2.0 * PI * m as f64 / l
        })
        .collect();
    DMatrix::from_fn(n, n, |j, k| {
        let dx = grid.x(j) - grid.x(k);
        modes
            .iter()
            .map(|km| C64::from_polar(-km * km, km * dx))
            .sum::<C64>()
            / n as f64
    })
}

pub fn diag(d: &[f64]) -> DMatrix<C64> {
    DMatrix::from_fn(d.len(), d.len(), |i, j| if i == j { C64::new(d[i], 0.0) } else { C64::new(0.0, 0.0) })
}

pub fn matvec(m: &DMatrix<C64>, v: &[C64]) -> Vec<C64> {
    (m * nalgebra::DVector::from_column_slice(v)).as_slice().to_vec()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Adaptive Dormand-Prince 5(4) for `y' = f(t, y)` on complex vectors.
pub fn dopri5<F>(f: F, y0: &[C64], t_end: f64, rtol: f64, atol: f64) -> Vec<C64>
where
    F: Fn(f64, &[C64]) -> Vec<C64>,
{
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = 0.0;
    let mut h = 1e-5;
    while t < t_end {
        if t + h > t_end {
            h = t_end - t;
        }
        let mut k: Vec<Vec<C64>> = Vec::with_capacity(7);
        for s in 0..7 {
            let mut ys = y.clone();
            for (r, kr) in k.iter().enumerate() {
                let a = A[s][r];
                if a != 0.0 {
                    ys.iter_mut().zip(kr).for_each(|(v, d)| *v += d * (h * a));
                }
            }
            k.push(f(t + C[s] * h, &ys));
        }
        let mut y5 = y.clone();
        let mut err = 0.0;
        for i in 0..n {
            let mut d5 = C64::new(0.0, 0.0);
            let mut d4 = C64::new(0.0, 0.0);
            for s in 0..7 {
                d5 += k[s][i] * B5[s];
                d4 += k[s][i] * B4[s];
            }
            y5[i] += d5 * h;
            let sc = atol + rtol * y[i].norm().max(y5[i].norm());
            err += ((d5 - d4) * h / sc).norm_sqr();
        }
        let err = (err / n as f64).sqrt();
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    y
}
