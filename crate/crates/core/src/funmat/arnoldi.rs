//! Arnoldi reduction and evaluation of `f(A)v` in the Krylov space.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{contract, Error, Result};
use crate::newton::{capacity, divided_differences_scaled};
use crate::operator::OperatorHandle;
use crate::sample::CVector;

const BREAKDOWN_TOL: f64 = 1e-14;
const COLLISION_SHIFT: f64 = 1e-8;

/// `A Υ = Υ Γ + Γ_{L+1,L} υ_{L+1} e_{L+1}^T` for an orthonormal `Υ`.
#[derive(Debug, Clone)]
pub struct KrylovDecomposition {
    basis: Vec<CVector>,
    extra: Option<CVector>,
    gamma: DMatrix<Complex64>,
    gamma_next: f64,
    v_norm: f64,
    breakdown: bool,
    applications: usize,
}

/// Modified Gram–Schmidt Arnoldi with `L+1` operator applications.
///
/// A happy breakdown (the Krylov space is invariant) truncates the basis and
/// sets [`KrylovDecomposition::breakdown`].
pub fn arnoldi_decompose(op: &OperatorHandle<'_>, v: &CVector, l: usize) -> Result<KrylovDecomposition> {
    if v.len() != op.dim() {
        return Err(contract(format!("vector length {} ≠ operator dimension {}", v.len(), op.dim())));
    }
    let v_norm = v.norm();
    if v_norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let dim = l + 1;
    let mut gamma = DMatrix::<Complex64>::zeros(dim, dim);
    let mut basis: Vec<CVector> = Vec::with_capacity(dim);
    basis.push(v / Complex64::new(v_norm, 0.0));
    let mut gamma_max: f64 = 0.0;
    let mut applications = 0;
    for j in 0..dim {
        let mut w = op.apply(&basis[j]);
        applications += 1;
        for (i, b) in basis.iter().enumerate() {
            let h = b.dotc(&w);
            gamma[(i, j)] = h;
            gamma_max = gamma_max.max(h.norm());
            w.axpy(-h, b, Complex64::new(1.0, 0.0));
        }
        let h_next = w.norm();
        gamma_max = gamma_max.max(h_next);
        if h_next < BREAKDOWN_TOL * gamma_max || h_next == 0.0 {
            let size = j + 1;
            return Ok(KrylovDecomposition {
                basis,
                extra: None,
                gamma: gamma.view((0, 0), (size, size)).into_owned(),
                gamma_next: 0.0,
                v_norm,
                breakdown: true,
                applications,
            });
        }
        let next = w / Complex64::new(h_next, 0.0);
        if j + 1 < dim {
            gamma[(j + 1, j)] = Complex64::new(h_next, 0.0);
            basis.push(next);
        } else {
            return Ok(KrylovDecomposition {
                basis,
                extra: Some(next),
                gamma,
                gamma_next: h_next,
                v_norm,
                breakdown: false,
                applications,
            });
        }
    }
    unreachable!("loop returns on its last iteration")
}

impl KrylovDecomposition {
    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    pub fn extra(&self) -> Option<&CVector> {
        self.extra.as_ref()
    }

    pub fn hessenberg(&self) -> &DMatrix<Complex64> {
        &self.gamma
    }

    pub fn gamma_next(&self) -> f64 {
        self.gamma_next
    }

    pub fn v_norm(&self) -> f64 {
        self.v_norm
    }

    /// The Krylov space was found invariant before `L+1` vectors.
    pub fn breakdown(&self) -> bool {
        self.breakdown
    }

    pub fn applications(&self) -> usize {
        self.applications
    }

    /// Dimension of the reduced problem.
    pub fn size(&self) -> usize {
        self.gamma.nrows()
    }

    /// `ω = ‖v‖ e_1`
    pub fn omega(&self) -> DVector<Complex64> {
        let mut w = DVector::zeros(self.size());
        w[0] = Complex64::new(self.v_norm, 0.0);
        w
    }

    /// `Υ y`
    pub fn lift(&self, y: &DVector<Complex64>) -> CVector {
        let mut u = CVector::zeros(self.basis[0].len());
        for (b, c) in self.basis.iter().zip(y.iter()) {
            u.axpy(*c, b, Complex64::new(1.0, 0.0));
        }
        u
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArnoldiValue {
    pub u: CVector,
    /// `|a_{L+1}|·‖μ̄‖`
    pub error: f64,
    /// `error / ‖η‖`
    pub error_rel: f64,
}

/// Ritz values, capacity scaling and Newton basis of `Γ`, shared by all
/// functions evaluated on one decomposition.
#[derive(Debug, Clone)]
pub struct ArnoldiEvaluator {
    decomp: KrylovDecomposition,
    ritz: Vec<Complex64>,
    /// Ritz values followed by the extra point `z_{L+1}`.
    points: Vec<Complex64>,
    rho: f64,
    /// `R_n(Γ)ω` for `n = 0..=L` in `1/ρ`-scaled coordinates.
    newton_basis: Vec<DVector<Complex64>>,
    mu_bar_norm: f64,
    /// The extra point had to be moved off a Ritz value.
    pub collision: bool,
}

impl ArnoldiEvaluator {
    pub fn new(decomp: KrylovDecomposition) -> Result<Self> {
        let size = decomp.size();
        let ritz: Vec<Complex64> = decomp
            .gamma
            .clone()
            .schur()
            .eigenvalues()
            .ok_or_else(|| contract("Hessenberg eigenvalues unavailable"))?
            .iter()
            .copied()
            .collect();
        let mean = ritz.iter().sum::<Complex64>() / size as f64;
        let mut rho = if size >= 2 {
            capacity(&ritz, mean)?.rho
        } else {
            ritz[0].norm()
        };
        if !(rho > 0.0) || !rho.is_finite() {
            rho = 1.0;
        }
        let mut extra = mean;
        let mut collision = false;
        if ritz.iter().any(|z| (z - extra).norm() < COLLISION_SHIFT * rho) {
            extra += Complex64::new(COLLISION_SHIFT * rho, 0.0);
            collision = true;
        }
        let mut points = ritz.clone();
        points.push(extra);

        let scale = Complex64::new(1.0 / rho, 0.0);
        let mut newton_basis = Vec::with_capacity(size);
        newton_basis.push(decomp.omega());
        for n in 0..size - 1 {
            let r = &newton_basis[n];
            let next = (&decomp.gamma * r - r * ritz[n]) * scale;
            newton_basis.push(next);
        }
        // μ = R_L(Γ)ω and μ̄ = [(Γ − λ_L)μ ; Γ_{L+1,L} μ_L] / ρ represent
        // R_{L+1}(A)v exactly in the extended basis.
        let mu = &newton_basis[size - 1];
        let top = (&decomp.gamma * mu - mu * ritz[size - 1]) * scale;
        let bottom = mu[size - 1] * decomp.gamma_next / rho;
        let mu_bar_norm = (top.norm_squared() + bottom.norm_sqr()).sqrt();
        Ok(Self {
            decomp,
            ritz,
            points,
            rho,
            newton_basis,
            mu_bar_norm,
            collision,
        })
    }

    pub fn decomposition(&self) -> &KrylovDecomposition {
        &self.decomp
    }

    pub fn ritz_values(&self) -> &[Complex64] {
        &self.ritz
    }

    pub fn capacity(&self) -> f64 {
        self.rho
    }

    fn samples(&self, f: &dyn Fn(Complex64) -> Complex64, pts: &[Complex64]) -> Result<Vec<Complex64>> {
        pts.iter()
            .map(|&z| {
                let w = f(z);
                if w.re.is_finite() && w.im.is_finite() {
                    Ok(w)
                } else {
                    Err(Error::FunctionDomain { re: z.re, im: z.im })
                }
            })
            .collect()
    }

    /// `η = Σ a_n R_n(Γ)ω` by Newton interpolation at the Ritz values, with
    /// the next-term error estimate.
    pub fn eval(&self, f: &dyn Fn(Complex64) -> Complex64) -> Result<ArnoldiValue> {
        let size = self.decomp.size();
        let vals = self.samples(f, &self.points)?;
        let table = divided_differences_scaled(&self.points, &vals, 1.0 / self.rho)?;
        let a = table.coefficients();
        let mut eta = DVector::<Complex64>::zeros(size);
        for (an, r) in a.iter().zip(&self.newton_basis) {
            eta.axpy(*an, r, Complex64::new(1.0, 0.0));
        }
        let error = if self.decomp.breakdown {
            0.0
        } else {
            a[size].norm() * self.mu_bar_norm
        };
        let eta_norm = eta.norm();
        Ok(ArnoldiValue {
            u: self.decomp.lift(&eta),
            error,
            error_rel: if eta_norm > 0.0 { error / eta_norm } else { error },
        })
    }

    /// `Υ S f(D) S⁻¹ ω` from an eigendecomposition of `Γ`.
    ///
    /// Returns `Ok(None)` when `Γ` is numerically defective; the caller should
    /// then use [`ArnoldiEvaluator::eval`].
    pub fn eval_diag(&self, f: &dyn Fn(Complex64) -> Complex64) -> Result<Option<CVector>> {
        let n = self.decomp.size();
        let (q, t) = self.decomp.gamma.clone().schur().unpack();
        let t_norm = t.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(f64::MIN_POSITIVE);
        // Eigenvectors of the triangular factor, unit diagonal.
        let mut x = DMatrix::<Complex64>::identity(n, n);
        for k in 0..n {
            for i in (0..k).rev() {
                let denom = t[(i, i)] - t[(k, k)];
                if denom.norm() < 1e-12 * t_norm {
                    return Ok(None);
                }
                let mut s = Complex64::new(0.0, 0.0);
                for j in i + 1..=k {
                    s += t[(i, j)] * x[(j, k)];
                }
                x[(i, k)] = -s / denom;
            }
        }
        // y = X⁻¹ Q* ω by back substitution on the unit upper-triangular X.
        let mut y = q.adjoint() * self.decomp.omega();
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= x[(i, j)] * y[j];
            }
            y[i] = s;
        }
        let diag: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
        let fd = self.samples(f, &diag)?;
        for i in 0..n {
            y[i] *= fd[i];
        }
        let eta = q * (x * y);
        Ok(Some(self.decomp.lift(&eta)))
    }
}

/// Evaluate `f(·, t)` on one decomposition for every offset `t`.
pub fn arnoldi_eval(
    decomp: &KrylovDecomposition,
    f: &dyn Fn(Complex64, f64) -> Complex64,
    t_offsets: &[f64],
) -> Result<Vec<ArnoldiValue>> {
    let ev = ArnoldiEvaluator::new(decomp.clone())?;
    t_offsets.iter().map(|&t| ev.eval(&|z| f(z, t))).collect()
}
