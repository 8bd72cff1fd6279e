//! Newton-at-Chebyshev-points and Chebyshev-series expansions over a fixed
//! eigenvalue domain.

use num_complex::Complex64;

use super::{FunMatValue, SpectralDomain};
use crate::cheb::{cheb_coeffs, cheb_nodes, ChebGrid, ChebKind};
use crate::error::{contract, Error, Result};
use crate::newton::divided_differences_scaled;
use crate::operator::OperatorHandle;
use crate::sample::CVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyBasis {
    Newton,
    Chebyshev,
}

/// Basis vectors `R_n(A)v` or `T_n(Ā)v` for `n < K`, ready for any `f`.
#[derive(Debug, Clone)]
pub struct PolynomialExpansion {
    basis: PolyBasis,
    domain: SpectralDomain,
    grid: ChebGrid,
    vectors: Vec<CVector>,
    v_norm: f64,
}

fn checked(f: &dyn Fn(Complex64) -> Complex64, z: Complex64) -> Result<Complex64> {
    let w = f(z);
    if w.re.is_finite() && w.im.is_finite() {
        Ok(w)
    } else {
        Err(Error::FunctionDomain { re: z.re, im: z.im })
    }
}

impl PolynomialExpansion {
    /// Build `k` basis vectors at the cost of `k − 1` operator applications.
    pub fn prepare(
        op: &OperatorHandle<'_>,
        v: &CVector,
        domain: SpectralDomain,
        k: usize,
        basis: PolyBasis,
    ) -> Result<Self> {
        if k < 1 {
            return Err(contract("expansion needs at least one term"));
        }
        if v.len() != op.dim() {
            return Err(contract(format!("vector length {} ≠ operator dimension {}", v.len(), op.dim())));
        }
        let grid = cheb_nodes(ChebKind::Gauss, k, domain.bounds, false)?;
        let bounds = domain.bounds;
        let unit = domain.unit();
        let mut vectors = Vec::with_capacity(k);
        vectors.push(v.clone());
        match basis {
            PolyBasis::Newton => {
                let factor = Complex64::new(4.0 / bounds.length(), 0.0);
                for n in 0..k - 1 {
                    let zn = unit * grid.nodes()[n];
                    let w = &vectors[n];
                    let next = (op.apply(w) - w * zn) * factor;
                    vectors.push(next);
                }
            }
            PolyBasis::Chebyshev => {
                // Ā = (2A/ι − (min+max)) / Δx has its spectrum in [−1, 1].
                let two_over_unit = unit.inv() * 2.0;
                let shift = Complex64::new(bounds.min() + bounds.max(), 0.0);
                let scale = Complex64::new(1.0 / bounds.length(), 0.0);
                let shifted = |w: &CVector| (op.apply(w) * two_over_unit - w * shift) * scale;
                if k > 1 {
                    vectors.push(shifted(v));
                }
                for n in 1..k.saturating_sub(1) {
                    let next = shifted(&vectors[n]) * Complex64::new(2.0, 0.0) - &vectors[n - 1];
                    vectors.push(next);
                }
            }
        }
        Ok(Self {
            basis,
            domain,
            grid,
            vectors,
            v_norm: v.norm(),
        })
    }

    pub fn terms(&self) -> usize {
        self.vectors.len()
    }

    pub fn basis(&self) -> PolyBasis {
        self.basis
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    /// Scalar interpolant of `f` on the domain, returned as a closure over
    /// the axis coordinate together with the expansion coefficients.
    fn coefficients(&self, f: &dyn Fn(Complex64) -> Complex64) -> Result<(Vec<Complex64>, Box<dyn Fn(f64) -> Complex64 + '_>)> {
        let unit = self.domain.unit();
        let samples: Vec<Complex64> = self
            .grid
            .nodes()
            .iter()
            .map(|&x| checked(f, unit * x))
            .collect::<Result<_>>()?;
        match self.basis {
            PolyBasis::Newton => {
                let pts: Vec<Complex64> = self.grid.nodes().iter().map(|&x| unit * x).collect();
                let table = divided_differences_scaled(&pts, &samples, 4.0 / self.domain.bounds.length())?;
                let coeffs = table.coefficients().to_vec();
                Ok((coeffs, Box::new(move |x| table.eval(unit * x))))
            }
            PolyBasis::Chebyshev => {
                let series = cheb_coeffs(&samples, &self.grid)?;
                let coeffs = series.coeffs().to_vec();
                Ok((coeffs, Box::new(move |x| series.eval(x).value)))
            }
        }
    }

    /// `Σ a_n P_n(A) v` with an error estimate from off-node test points.
    pub fn eval(&self, f: &dyn Fn(Complex64) -> Complex64) -> Result<FunMatValue> {
        let (coeffs, interp) = self.coefficients(f)?;
        let mut u = CVector::zeros(self.vectors[0].len());
        for (a, w) in coeffs.iter().zip(&self.vectors) {
            u.axpy(*a, w, Complex64::new(1.0, 0.0));
        }
        // Test points: midpoints between adjacent nodes and the two domain ends.
        let nodes = self.grid.nodes();
        let b = self.domain.bounds;
        let mut tests: Vec<f64> = nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        tests.push(b.min());
        tests.push(b.max());
        let mut max_err: f64 = 0.0;
        for x in tests {
            let exact = checked(f, self.domain.point(x))?;
            max_err = max_err.max((interp(x) - exact).norm());
        }
        Ok(FunMatValue {
            u,
            error: max_err * self.v_norm,
        })
    }
}

fn run(
    op: &OperatorHandle<'_>,
    v: &CVector,
    f: &dyn Fn(Complex64) -> Complex64,
    domain: SpectralDomain,
    k: usize,
    basis: PolyBasis,
) -> Result<CVector> {
    Ok(PolynomialExpansion::prepare(op, v, domain, k, basis)?.eval(f)?.u)
}

/// `f(A)v` by Newton interpolation at `k` Chebyshev points of the domain.
pub fn funmat_newton(
    op: &OperatorHandle<'_>,
    v: &CVector,
    f: &dyn Fn(Complex64) -> Complex64,
    domain: SpectralDomain,
    k: usize,
) -> Result<CVector> {
    run(op, v, f, domain, k, PolyBasis::Newton)
}

/// `f(A)v` by a `k`-term Chebyshev series on the domain.
pub fn funmat_cheb(
    op: &OperatorHandle<'_>,
    v: &CVector,
    f: &dyn Fn(Complex64) -> Complex64,
    domain: SpectralDomain,
    k: usize,
) -> Result<CVector> {
    run(op, v, f, domain, k, PolyBasis::Chebyshev)
}
