use serde::{Deserialize, Serialize};

use crate::error::{AtomError, Result};
use crate::grid::FourierGrid1D;

/// `V_atom(x) = 1 − 1/√(x² + 1)`
pub fn atom_potential(x: f64) -> f64 {
    1.0 - 1.0 / (x * x + 1.0).sqrt()
}

pub fn atom_potential_derivative(x: f64) -> f64 {
    x / (x * x + 1.0).powf(1.5)
}

/// `Ω(x) = ½{tanh[α(x − a)] − tanh[α(x − b)]}`, close to 1 on `(a, b)` and
/// to 0 outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SoftRect {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
}

impl Default for SoftRect {
    fn default() -> Self {
        Self {
            a: -197.5,
            b: 197.5,
            alpha: 1.0,
        }
    }
}

impl SoftRect {
    pub fn value(&self, x: f64) -> f64 {
        0.5 * ((self.alpha * (x - self.a)).tanh() - (self.alpha * (x - self.b)).tanh())
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let sech2 = |y: f64| {
            let s = 1.0 / y.cosh();
            s * s
        };
        0.5 * self.alpha * (sech2(self.alpha * (x - self.a)) - sech2(self.alpha * (x - self.b)))
    }
}

/// Potentials flattened outside the soft rectangle: `V_mod(0) = V(0)` and
/// `V_mod' = V'·Ω`.
///
/// The dipole term `−x·ζ(t)` is modified the same way. Since the modification
/// is linear in the potential, it is stored as the profile `x_mod` and the
/// field-dependent part is `−x_mod·ζ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedPotential {
    pub v_atom: Vec<f64>,
    pub x_mod: Vec<f64>,
}

/// Absolute accuracy of each cumulative integral.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, target: f64) -> Result<f64> {
    let out = quadrature::double_exponential::integrate(f, a, b, target);
    if out.error_estimate <= target && out.integral.is_finite() {
        Ok(out.integral)
    } else {
        Err(AtomError::Quadrature {
            a,
            b,
            target,
            estimate: out.error_estimate,
        })
    }
}

/// `F(0) + ∫_0^x f` at every grid point, accumulated segment by segment.
fn cumulative(grid: &FourierGrid1D, f: impl Fn(f64) -> f64 + Copy, f0: f64) -> Result<Vec<f64>> {
    let xs = grid.points();
    let target = QUADRATURE_TOLERANCE / xs.len() as f64;
    let mut out = vec![f0; xs.len()];
    let split = xs.partition_point(|&x| x < 0.0);
    let (mut prev, mut acc) = (0.0, f0);
    for j in split..xs.len() {
        acc += integrate(f, prev, xs[j], target)?;
        out[j] = acc;
        prev = xs[j];
    }
    let (mut prev, mut acc) = (0.0, f0);
    for j in (0..split).rev() {
        acc -= integrate(f, xs[j], prev, target)?;
        out[j] = acc;
        prev = xs[j];
    }
    Ok(out)
}

impl ModifiedPotential {
    pub fn build(grid: &FourierGrid1D, rect: SoftRect) -> Result<Self> {
        let v_atom = cumulative(grid, |x| atom_potential_derivative(x) * rect.value(x), atom_potential(0.0))?;
        let x_mod = cumulative(grid, |x| rect.value(x), 0.0)?;
        Ok(Self { v_atom, x_mod })
    }
}
