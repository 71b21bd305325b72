mod common;

use std::sync::Arc;

use magnus_hermite::hamiltonian::{
    apply_hamiltonian, make_random_hermitian, preset_external_field, preset_initial_condition,
    preset_static_potential, random_unit_vector, ExternalField, HamiltonianModel, MatrixModel,
    SpectralModel,
};
use magnus_hermite::harness::presets::{build, Preset};
use magnus_hermite::spectral::{make_grid, Grid, WaveField};
use magnus_hermite::C64;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn driven_model(grid: &Arc<Grid>, lambda: f64) -> SpectralModel {
    SpectralModel::new(Arc::clone(grid), grid.sample(preset_static_potential), lambda)
        .unwrap()
        .with_external(ExternalField::new(preset_external_field))
}

fn test_state(grid: &Arc<Grid>) -> Vec<C64> {
    (0..grid.len())
        .map(|j| {
            let x = grid.x(j);
            C64::new((-(x + 1.0).powi(2)).exp(), 0.5 * (-(x - 1.5).powi(2) / 2.0).exp() * (2.0 * x).sin())
        })
        .collect()
}

/// `-D2 + diag(V)` as an explicit Hermitian matrix.
fn dense_linear(grid: &Grid, v: &[f64]) -> DMatrix<C64> {
    let m = -common::dense_second_derivative(grid) + common::diag(v);
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

#[test]
fn spectral_apply_matches_dense_assembly() {
    let g = make_grid(-10.0, 10.0, 64).unwrap();
    let model = driven_model(&g, 10.0);
    let u = test_state(&g);
    let t = 0.1;
    let pot: Vec<f64> = (0..64)
        .map(|j| {
            let x = g.x(j);
            preset_static_potential(x) + preset_external_field(x, t) + 10.0 * u[j].norm_sqr()
        })
        .collect();
    let expect = common::matvec(&dense_linear(&g, &pot), &u);
    let got = HamiltonianModel::from(model.clone()).apply(&u, t).unwrap();
    assert!(common::dist(&got, &expect) <= 1e-10 * common::l2(&expect));

    let wf = WaveField::new(Arc::clone(&g), u).unwrap();
    assert_eq!(apply_hamiltonian(&model, &wf, t).unwrap().values(), got.as_slice());
}

#[test]
fn spectral_and_matrix_assemblies_agree() {
    for n in [32, 64, 128] {
        let g = make_grid(-10.0, 10.0, n).unwrap();
        let spectral: HamiltonianModel = driven_model(&g, 10.0).into();
        let l0 = dense_linear(&g, &g.sample(preset_static_potential));
        let l1 = common::diag(&g.sample(|x| (std::f64::consts::PI * x).sin()));
        let matrix: HamiltonianModel = MatrixModel::new(l0, l1, 10.0)
            .unwrap()
            .with_coefficient(|t| 5.0 * (5.0 * std::f64::consts::PI * t).sin())
            .into();
        let u = test_state(&g);
        for t in [0.0, 0.13, 0.5] {
            let a = spectral.apply(&u, t).unwrap();
            let b = matrix.apply(&u, t).unwrap();
            let rel = common::dist(&a, &b) / common::l2(&a);
            assert!(rel <= 1e-12, "n={n} t={t}: relative difference {rel:e}");
        }
    }
}

#[test]
fn potential_rate_matches_central_difference() {
    let g = make_grid(-10.0, 10.0, 64).unwrap();
    let lambda = -3.0;
    let model: HamiltonianModel = driven_model(&g, lambda).into();
    let u = test_state(&g);
    let t = 0.2;
    // u(t + tau) = u + tau w + O(tau^2) with w = -i H u from the dense matrix
    let pot: Vec<f64> = (0..64)
        .map(|j| {
            let x = g.x(j);
            preset_static_potential(x) + preset_external_field(x, t) + lambda * u[j].norm_sqr()
        })
        .collect();
    let w: Vec<C64> = common::matvec(&dense_linear(&g, &pot), &u).iter().map(|z| -C64::i() * z).collect();
    let tau = 1e-3;
    let shifted = |s: f64| -> Vec<f64> {
        u.iter().zip(&w).map(|(a, b)| lambda * (a + b * s).norm_sqr()).collect()
    };
    let (plus, minus) = (shifted(tau), shifted(-tau));
    let fd: Vec<f64> = plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * tau)).collect();
    let rate = model.nonlinear_potential_rate(&u, t).unwrap();
    let scale = fd.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (a, b) in rate.iter().zip(&fd) {
        assert!((a - b).abs() <= 1e-9 * scale, "{a} vs {b}");
    }
    let (p, d) = model.nonlinear_endpoint(&u, t).unwrap();
    assert_eq!(p, model.nonlinear_potential(&u));
    assert_eq!(d, rate);
}

#[test]
fn random_hermitian_has_real_spectrum_of_radius_ten() {
    for (n, seed) in [(1, 0), (7, 3), (128, 42)] {
        let m = make_random_hermitian(n, seed).unwrap();
        assert!((&m - m.adjoint()).norm() <= 1e-13 * m.norm());
        let eig = SymmetricEigen::new(m.clone());
        let radius = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!((radius - 10.0).abs() <= 1e-10);
        // the eigen-decomposition reproduces m, so the spectrum is real
        let lam = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| C64::new(v, 0.0)));
        let back = &eig.eigenvectors * lam * eig.eigenvectors.adjoint();
        assert!((back - &m).norm() <= 1e-10 * m.norm());
        assert_eq!(make_random_hermitian(n, seed).unwrap(), m);
    }
    assert_ne!(make_random_hermitian(8, 1).unwrap(), make_random_hermitian(8, 2).unwrap());
    assert!(make_random_hermitian(0, 1).is_err());
    let v = random_unit_vector(50, 9);
    assert!((common::l2(&v) - 1.0).abs() < 1e-14);
}

#[test]
fn matrix_model_rejects_bad_operators() {
    let mut l0 = make_random_hermitian(4, 1).unwrap();
    l0[(0, 1)] += C64::new(1.0, 0.0);
    assert!(MatrixModel::new(l0, DMatrix::zeros(4, 4), 1.0).is_err());
    let l0 = make_random_hermitian(4, 1).unwrap();
    assert!(MatrixModel::new(l0, DMatrix::zeros(3, 3), 1.0).is_err());
    let g = make_grid(0.0, 1.0, 8).unwrap();
    assert!(SpectralModel::new(g.clone(), vec![0.0; 7], 1.0).is_err());
    assert!(SpectralModel::new(g, vec![f64::NAN; 8], 1.0).is_err());
}

#[test]
fn preset_packet_is_normalised_and_centred() {
    let g = make_grid(-10.0, 10.0, 1000).unwrap();
    let u = preset_initial_condition(&g);
    assert!((g.norm(u.values()) - 1.0).abs() < 1e-13);
    let mean: f64 = (0..1000).map(|j| g.x(j) * u.values()[j].norm_sqr()).sum::<f64>() * g.dx();
    assert!((mean + 2.0).abs() < 1e-10);
}

fn quadratic_form_is_real(model: &HamiltonianModel, u: &[C64], t: f64) -> f64 {
    let hu = model.apply(u, t).unwrap();
    let q = model.inner(&hu, u);
    q.im.abs() / q.norm().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hamiltonian_quadratic_form_is_real(
        re in prop::collection::vec(-1.0f64..1.0, 64),
        im in prop::collection::vec(-1.0f64..1.0, 64),
        t in 0.0f64..1.0,
    ) {
        let u: Vec<C64> = re.iter().zip(&im).map(|(a, b)| C64::new(*a, *b)).collect();
        let spectral = build(Preset::GpDefocusingDriven, Some(64), 0).unwrap().model;
        let matrix = build(Preset::MatrixDriven, Some(64), 5).unwrap().model;
        prop_assert!(quadratic_form_is_real(&spectral, &u, t) <= 1e-12);
        prop_assert!(quadratic_form_is_real(&matrix, &u, t) <= 1e-12);
    }
}
