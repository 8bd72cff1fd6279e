//! `u = f(A)v` for an operator available only through `w ↦ Aw`.
//!
//! Three backends share one calling convention: *prepare* an expansion for a
//! vector `v` (this is where all operator applications happen), then
//! *evaluate* it for as many scalar functions as needed. The propagator uses
//! the second stage once per time offset.

mod arnoldi;
mod polynomial;

pub use arnoldi::{arnoldi_decompose, arnoldi_eval, ArnoldiEvaluator, ArnoldiValue, KrylovDecomposition};
pub use polynomial::{funmat_cheb, funmat_newton, PolyBasis, PolynomialExpansion};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cheb::Interval;
use crate::error::Result;
use crate::operator::OperatorHandle;
use crate::sample::CVector;

/// Line in the complex plane on which the eigenvalues are assumed to lie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    Real,
    Imaginary,
}

/// Eigenvalue range estimate `{x·ι : x ∈ bounds}` with `ι = 1` or `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDomain {
    pub axis: Axis,
    pub bounds: Interval,
}

impl SpectralDomain {
    pub fn new(axis: Axis, min: f64, max: f64) -> Result<Self> {
        Ok(Self {
            axis,
            bounds: Interval::new(min, max)?,
        })
    }

    /// Domain of `−iH` for a Hermitian `H` with spectrum inside `[e_min, e_max]`.
    pub fn schrodinger(e_min: f64, e_max: f64) -> Result<Self> {
        Self::new(Axis::Imaginary, -e_max, -e_min)
    }

    pub fn unit(&self) -> Complex64 {
        match self.axis {
            Axis::Real => Complex64::new(1.0, 0.0),
            Axis::Imaginary => Complex64::new(0.0, 1.0),
        }
    }

    /// The complex point at coordinate `x` along the axis.
    pub fn point(&self, x: f64) -> Complex64 {
        self.unit() * x
    }
}

/// Backend selection for the propagator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FunMatBackend {
    NewtonCheb(SpectralDomain),
    ChebSeries(SpectralDomain),
    Arnoldi,
}

impl FunMatBackend {
    /// Operator applications needed to prepare an expansion with `k` terms.
    pub fn budget(&self, k: usize) -> usize {
        match self {
            FunMatBackend::NewtonCheb(_) | FunMatBackend::ChebSeries(_) => k.saturating_sub(1),
            FunMatBackend::Arnoldi => k,
        }
    }
}

/// Result of evaluating a prepared expansion for one function.
#[derive(Debug, Clone, PartialEq)]
pub struct FunMatValue {
    pub u: CVector,
    /// Absolute error estimate of `u`.
    pub error: f64,
}

impl FunMatValue {
    pub fn relative_error(&self) -> f64 {
        let n = self.u.norm();
        if n > 0.0 {
            self.error / n
        } else {
            self.error
        }
    }
}

/// A prepared expansion of `f(A)v` for any scalar `f`.
#[derive(Debug, Clone)]
pub enum Expansion {
    Polynomial(PolynomialExpansion),
    Krylov(Box<ArnoldiEvaluator>),
    /// `v = 0`: every `f(A)v` vanishes.
    Zero(usize),
}

impl Expansion {
    /// Build the expansion with `k` terms.
    pub fn prepare(backend: &FunMatBackend, op: &OperatorHandle<'_>, v: &CVector, k: usize) -> Result<Self> {
        if v.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return Ok(Expansion::Zero(v.len()));
        }
        Ok(match backend {
            FunMatBackend::NewtonCheb(d) => {
                Expansion::Polynomial(PolynomialExpansion::prepare(op, v, *d, k, PolyBasis::Newton)?)
            }
            FunMatBackend::ChebSeries(d) => {
                Expansion::Polynomial(PolynomialExpansion::prepare(op, v, *d, k, PolyBasis::Chebyshev)?)
            }
            FunMatBackend::Arnoldi => {
                let decomp = arnoldi_decompose(op, v, k.saturating_sub(1))?;
                Expansion::Krylov(Box::new(ArnoldiEvaluator::new(decomp)?))
            }
        })
    }

    pub fn eval(&self, f: &dyn Fn(Complex64) -> Complex64) -> Result<FunMatValue> {
        match self {
            Expansion::Polynomial(p) => p.eval(f),
            Expansion::Krylov(a) => {
                let r = a.eval(f)?;
                Ok(FunMatValue {
                    u: r.u,
                    error: r.error,
                })
            }
            Expansion::Zero(n) => Ok(FunMatValue {
                u: CVector::zeros(*n),
                error: 0.0,
            }),
        }
    }
}

/// Upper bound on the spectral radius by power iteration, inflated by 10%.
///
/// Useful for choosing a [`SpectralDomain`]; for non-normal operators it is
/// only an estimate.
pub fn power_bound(op: &OperatorHandle<'_>, start: &CVector, iterations: usize) -> f64 {
    let mut v = start.clone();
    let n = v.norm();
    if n == 0.0 {
        return 0.0;
    }
    v /= Complex64::new(n, 0.0);
    let mut est = 0.0;
    for _ in 0..iterations.max(1) {
        let w = op.apply(&v);
        est = w.norm();
        if est == 0.0 {
            return 0.0;
        }
        v = w / Complex64::new(est, 0.0);
    }
    1.1 * est
}
