mod common;

use common::{c, dense_exp, dense_hermitian_fun, random_hermitian, random_vector, rel_err, rng};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use semiglobal::funmat::{arnoldi_decompose, arnoldi_eval, funmat_cheb, funmat_newton, ArnoldiEvaluator};
use semiglobal::funmat::{Axis, Expansion, FunMatBackend, SpectralDomain};
use semiglobal::{CVector, OperatorHandle};

fn spectrum_bounds(h: &DMatrix<Complex64>) -> (f64, f64) {
    let e = h.clone().symmetric_eigen().eigenvalues;
    (e.min(), e.max())
}

/// Random complex matrix scaled to spectral radius one.
fn random_unit_radius(n: usize, seed: u64) -> DMatrix<Complex64> {
    let mut r = rng(seed);
    let a = DMatrix::from_fn(n, n, |_, _| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
    let radius = a
        .clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur form has eigenvalues")
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    a / c(radius, 0.0)
}

#[test]
fn polynomial_backends_match_dense_hermitian_oracle() {
    for seed in 0..5 {
        let mut r = rng(seed);
        let h = random_hermitian(20, -3.0 + seed as f64, 4.0 + 2.0 * seed as f64, &mut r);
        let v = random_vector(20, &mut r);
        let f = |z: Complex64| (z * c(0.0, -0.1)).exp();
        let exact = dense_hermitian_fun(&h, &v, f);
        let (lo, hi) = spectrum_bounds(&h);
        let d = SpectralDomain::new(Axis::Real, lo, hi).unwrap();
        let op = OperatorHandle::from_matrix(&h);
        let un = funmat_newton(&op, &v, &f, d, 24).unwrap();
        let uc = funmat_cheb(&op, &v, &f, d, 24).unwrap();
        assert_eq!(op.application_count(), 46);
        assert!(rel_err(&un, &exact) < 1e-10, "newton {}", rel_err(&un, &exact));
        assert!(rel_err(&uc, &exact) < 1e-10, "cheb {}", rel_err(&uc, &exact));
        assert!(rel_err(&un, &uc) < 1e-10);
    }
}

#[test]
fn backends_agree_on_a_schrodinger_generator() {
    // G = −iH with the domain given on the imaginary axis.
    let mut r = rng(11);
    let h = random_hermitian(40, 0.0, 10.0, &mut r);
    let g = &h * c(0.0, -1.0);
    let v = random_vector(40, &mut r);
    let exact = dense_hermitian_fun(&h, &v, |e| (e * c(0.0, -0.5)).exp());
    let op = OperatorHandle::from_matrix(&g);
    let d = SpectralDomain::schrodinger(0.0, 10.0).unwrap();
    let f = |z: Complex64| (z * 0.5).exp();
    for backend in [FunMatBackend::NewtonCheb(d), FunMatBackend::ChebSeries(d), FunMatBackend::Arnoldi] {
        let before = op.application_count();
        let e = Expansion::prepare(&backend, &op, &v, 30).unwrap();
        assert_eq!((op.application_count() - before) as usize, backend.budget(30));
        let u = e.eval(&f).unwrap().u;
        assert!(rel_err(&u, &exact) < 1e-10, "{backend:?}: {}", rel_err(&u, &exact));
    }
}

#[test]
fn krylov_invariants_on_random_matrix() {
    let a = random_unit_radius(50, 3);
    let v = random_vector(50, &mut rng(4));
    let op = OperatorHandle::from_matrix(&a);
    let l = 12;
    let d = arnoldi_decompose(&op, &v, l).unwrap();
    assert_eq!(op.application_count(), (l + 1) as u64);
    assert!(!d.breakdown());
    let basis = d.basis();
    assert_eq!(basis.len(), l + 1);
    for i in 0..=l {
        for j in 0..=l {
            let ip = basis[i].dotc(&basis[j]);
            let delta = if i == j { 1.0 } else { 0.0 };
            assert!((ip - c(delta, 0.0)).norm() <= 1e-10);
        }
    }
    let gamma = d.hessenberg();
    for i in 0..=l {
        for j in 0..=l {
            if i > j + 1 {
                assert_eq!(gamma[(i, j)], c(0.0, 0.0));
            }
        }
    }
    let ups = DMatrix::from_columns(basis);
    let extra = d.extra().expect("no breakdown");
    let mut resid = &a * &ups - &ups * gamma;
    let mut last = resid.column_mut(l);
    last -= extra * c(d.gamma_next(), 0.0);
    let a_norm = a.norm();
    assert!(resid.norm() <= 1e-9 * a_norm, "residual {}", resid.norm());
    assert!((d.v_norm() - v.norm()).abs() < 1e-14 * v.norm());
}

#[test]
fn krylov_space_reproduces_polynomials() {
    let a = random_unit_radius(50, 8);
    let v = random_vector(50, &mut rng(9));
    let op = OperatorHandle::from_matrix(&a);
    let l = 10;
    let ev = ArnoldiEvaluator::new(arnoldi_decompose(&op, &v, l).unwrap()).unwrap();
    let mut r = rng(10);
    for degree in [0, 3, l] {
        let p: Vec<Complex64> = (0..=degree).map(|_| c(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
        let scalar = |z: Complex64| p.iter().rev().fold(c(0.0, 0.0), |acc, &b| acc * z + b);
        let mut exact = v.clone() * p[degree];
        for b in p[..degree].iter().rev() {
            exact = &a * exact + &v * *b;
        }
        let u = ev.eval(&scalar).unwrap().u;
        assert!(rel_err(&u, &exact) < 1e-10, "degree {degree}: {}", rel_err(&u, &exact));
        if let Some(ud) = ev.eval_diag(&scalar).unwrap() {
            assert!(rel_err(&ud, &exact) < 1e-10);
        }
    }
}

#[test]
fn arnoldi_multi_time_reuse() {
    let mut r = rng(21);
    let h = random_hermitian(30, -2.0, 2.0, &mut r);
    let a = &h * c(0.0, -1.0);
    let v = random_vector(30, &mut r);
    let op = OperatorHandle::from_matrix(&a);
    let d = arnoldi_decompose(&op, &v, 20).unwrap();
    let times = [0.0, 0.25, 0.5, 1.0];
    let out = arnoldi_eval(&d, &|z, t| (z * t).exp(), &times).unwrap();
    assert_eq!(op.application_count(), 21);
    for (t, val) in times.iter().zip(&out) {
        let exact = dense_exp(&a, *t, &v);
        assert!(rel_err(&val.u, &exact) < 1e-10, "t={t}: {}", rel_err(&val.u, &exact));
    }
}

#[test]
fn long_krylov_expansion_is_at_round_off() {
    let a = random_unit_radius(50, 1);
    let v = random_vector(50, &mut rng(2));
    let op = OperatorHandle::from_matrix(&a);
    let r = arnoldi_eval(&arnoldi_decompose(&op, &v, 30).unwrap(), &|z, t| (z * t).exp(), &[1.0]).unwrap();
    let err = rel_err(&r[0].u, &dense_exp(&a, 1.0, &v));
    // Both the estimate and the true error sit at round-off here.
    assert!(err <= (10.0 * r[0].error_rel).max(1e-13f64), "error {err:e}, estimate {:e}", r[0].error_rel);
}

#[test]
fn error_estimator_tracks_true_error() {
    let l = 12;
    let mut within = 0;
    let mut report = Vec::new();
    for seed in 0..100 {
        let a = random_unit_radius(50, 1000 + seed);
        let v = random_vector(50, &mut rng(5000 + seed));
        let op = OperatorHandle::from_matrix(&a);
        let val = &arnoldi_eval(&arnoldi_decompose(&op, &v, l).unwrap(), &|z, t| (z * t).exp(), &[1.0]).unwrap()[0];
        let err = rel_err(&val.u, &dense_exp(&a, 1.0, &v));
        let ratio = err / val.error_rel;
        if (0.01..=100.0).contains(&ratio) {
            within += 1;
        } else {
            report.push((seed, ratio));
        }
    }
    assert!(within >= 95, "{within}/100 within bounds; outliers {report:?}");
}

#[test]
fn zero_vector_gives_zero_expansion() {
    let a = DMatrix::<Complex64>::identity(3, 3);
    let op = OperatorHandle::from_matrix(&a);
    let e = Expansion::prepare(&FunMatBackend::Arnoldi, &op, &CVector::zeros(3), 5).unwrap();
    assert_eq!(op.application_count(), 0);
    let val = e.eval(&|z| z.exp()).unwrap();
    assert_eq!(val.u, CVector::zeros(3));
    assert_eq!(val.error, 0.0);
}

#[test]
fn operator_is_linear_on_random_probes() {
    let mut r = rng(31);
    let h = random_hermitian(25, -1.0, 1.0, &mut r);
    let op = OperatorHandle::from_matrix(&h);
    for _ in 0..10 {
        let (x, y) = (random_vector(25, &mut r), random_vector(25, &mut r));
        let (al, be) = (c(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)), c(r.gen_range(-2.0..2.0), 0.5));
        let lhs = op.apply(&(&x * al + &y * be));
        let (ax, ay) = (op.apply(&x), op.apply(&y));
        let rhs = &ax * al + &ay * be;
        assert!((lhs - rhs).norm() <= 1e-12 * (ax.norm() + ay.norm()));
    }
}
