#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semiglobal::CVector;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> CVector {
    CVector::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Random Hermitian matrix with spectrum rescaled into `[lo, hi]`.
pub fn random_hermitian(n: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let h = (&a + a.adjoint()) * c(0.5, 0.0);
    let eig = h.clone().symmetric_eigen();
    let (emin, emax) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &e| (a.min(e), b.max(e)));
    let s = (hi - lo) / (emax - emin);
    let shifted = eig.eigenvalues.map(|e| c(lo + (e - emin) * s, 0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&shifted) * eig.eigenvectors.adjoint()
}

/// `f(H)v` for Hermitian `H` through a dense eigendecomposition.
pub fn dense_hermitian_fun(h: &DMatrix<Complex64>, v: &CVector, f: impl Fn(Complex64) -> Complex64) -> CVector {
    let eig = h.clone().symmetric_eigen();
    let q = &eig.eigenvectors;
    let d = eig.eigenvalues.map(|e| f(c(e, 0.0)));
    let w = q.adjoint() * v;
    q * CVector::from_fn(w.len(), |i, _| d[i] * w[i])
}

/// `exp(A t) v` through the dense matrix exponential.
pub fn dense_exp(a: &DMatrix<Complex64>, t: f64, v: &CVector) -> CVector {
    (a * c(t, 0.0)).exp() * v
}

pub fn rel_err(a: &CVector, b: &CVector) -> f64 {
    (a - b).norm() / b.norm()
}

use semiglobal::propagator::Generator;

type SourceFn = Box<dyn Fn(f64) -> CVector + Send + Sync>;

/// Constant linear generator `G` with an optional source.
pub struct MatrixGen {
    pub g: DMatrix<Complex64>,
    pub source: Option<SourceFn>,
    pub hermitian: bool,
}

impl MatrixGen {
    pub fn new(g: DMatrix<Complex64>) -> Self {
        Self {
            g,
            source: None,
            hermitian: false,
        }
    }

    /// `G = −iH`
    pub fn schrodinger(h: &DMatrix<Complex64>) -> Self {
        Self {
            g: h * c(0.0, -1.0),
            source: None,
            hermitian: true,
        }
    }

    pub fn with_source(mut self, s: impl Fn(f64) -> CVector + Send + Sync + 'static) -> Self {
        self.source = Some(Box::new(s));
        self
    }
}

impl Generator for MatrixGen {
    fn dim(&self) -> usize {
        self.g.nrows()
    }

    fn apply(&self, _u: &CVector, _t: f64, w: &CVector) -> CVector {
        &self.g * w
    }

    fn source(&self, t: f64) -> Option<CVector> {
        self.source.as_ref().map(|s| s(t))
    }

    fn diag_difference(&self, _u1: &CVector, _t1: f64, _u2: &CVector, _t2: f64, w: &CVector) -> Option<CVector> {
        Some(CVector::zeros(w.len()))
    }

    fn is_hermitian_generator(&self) -> bool {
        self.hermitian
    }
}

/// `H(t) = σ_z + 0.2 cos(t) σ_x`, `G = −iH`.
pub struct TwoLevel {
    pub fast_difference: bool,
}

fn sigma_x(w: &CVector) -> CVector {
    CVector::from_vec(vec![w[1], w[0]])
}

impl Generator for TwoLevel {
    fn dim(&self) -> usize {
        2
    }

    fn apply(&self, _u: &CVector, t: f64, w: &CVector) -> CVector {
        let f = 0.2 * t.cos();
        let hw = CVector::from_vec(vec![w[0] + w[1] * f, -w[1] + w[0] * f]);
        hw * c(0.0, -1.0)
    }

    fn diag_difference(&self, _u1: &CVector, t1: f64, _u2: &CVector, t2: f64, w: &CVector) -> Option<CVector> {
        self.fast_difference
            .then(|| sigma_x(w) * c(0.0, -0.2 * (t1.cos() - t2.cos())))
    }

    fn is_hermitian_generator(&self) -> bool {
        true
    }
}
