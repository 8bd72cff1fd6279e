//! Newton-form interpolation with rescaled abscissae.
//!
//! Abscissae are stored multiplied by `scale` (4/Δx on an axis, 1/ρ in the
//! complex plane); function values are never scaled. The polynomial being
//! represented is the same for any scale, only the conditioning changes.

use num_complex::Complex64;

use crate::error::{contract, Error, Result};
use crate::sample::ComplexSample;

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonTable<T> {
    points: Vec<Complex64>,
    dd: Vec<T>,
    scale: f64,
}

/// Divided differences at unscaled abscissae.
pub fn divided_differences<T: ComplexSample>(
    points: &[Complex64],
    values: &[T],
) -> Result<NewtonTable<T>> {
    divided_differences_scaled(points, values, 1.0)
}

/// Divided differences with the abscissae multiplied by `scale` first.
pub fn divided_differences_scaled<T: ComplexSample>(
    points: &[Complex64],
    values: &[T],
    scale: f64,
) -> Result<NewtonTable<T>> {
    if points.len() != values.len() {
        return Err(contract(format!(
            "{} points but {} values",
            points.len(),
            values.len()
        )));
    }
    if points.is_empty() {
        return Err(contract("no sampling points"));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(contract(format!("invalid scale {scale}")));
    }
    let pts: Vec<Complex64> = points.iter().map(|z| z * scale).collect();
    for i in 1..pts.len() {
        if pts[..i].contains(&pts[i]) {
            return Err(Error::SingularNodes { index: i });
        }
    }
    // In-place triangular recursion: after pass k, dd[i] = f[x_{i-k}..x_i].
    let mut dd = values.to_vec();
    let n = pts.len();
    for k in 1..n {
        for i in (k..n).rev() {
            let denom = pts[i] - pts[i - k];
            let mut diff = dd[i].clone();
            diff.add_scaled_c(Complex64::new(-1.0, 0.0), &dd[i - 1]);
            diff.scale_c(denom.inv());
            dd[i] = diff;
        }
    }
    Ok(NewtonTable {
        points: pts,
        dd,
        scale,
    })
}

/// Convenience wrapper for real abscissae.
pub fn divided_differences_real<T: ComplexSample>(
    points: &[f64],
    values: &[T],
    scale: f64,
) -> Result<NewtonTable<T>> {
    let pts: Vec<Complex64> = points.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    divided_differences_scaled(&pts, values, scale)
}

impl<T: ComplexSample> NewtonTable<T> {
    /// Scaled abscissae.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn coefficients(&self) -> &[T] {
        &self.dd
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn len(&self) -> usize {
        self.dd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dd.is_empty()
    }

    /// Horner-like nested evaluation at an unscaled point.
    pub fn eval(&self, x: Complex64) -> T {
        let xs = x * self.scale;
        let n = self.dd.len();
        let mut acc = self.dd[n - 1].clone();
        for i in (0..n - 1).rev() {
            acc.scale_c(xs - self.points[i]);
            acc.add_scaled_c(Complex64::new(1.0, 0.0), &self.dd[i]);
        }
        acc
    }

    pub fn eval_real(&self, x: f64) -> T {
        self.eval(Complex64::new(x, 0.0))
    }
}

pub fn newton_eval<T: ComplexSample>(table: &NewtonTable<T>, x: Complex64) -> T {
    table.eval(x)
}

/// Newton basis values `R_0(x) .. R_{n-1}(x)` in scaled coordinates.
pub fn basis_values(scaled_points: &[Complex64], scale: f64, x: Complex64) -> Vec<Complex64> {
    let xs = x * scale;
    let mut out = Vec::with_capacity(scaled_points.len());
    let mut r = Complex64::new(1.0, 0.0);
    for p in scaled_points {
        out.push(r);
        r *= xs - p;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacity {
    pub rho: f64,
    /// The reference point coincided with a sampling point; its zero factor
    /// was left out of the product.
    pub degenerate: bool,
}

/// Geometric mean distance `(Π|z_p − z_n|)^{1/n}` of the points from `reference`.
pub fn capacity(points: &[Complex64], reference: Complex64) -> Result<Capacity> {
    if points.len() < 2 {
        return Err(contract("capacity needs at least two points"));
    }
    let mut log_sum = 0.0;
    let mut degenerate = false;
    for z in points {
        let d = (reference - z).norm();
        if d == 0.0 {
            degenerate = true;
        } else {
            log_sum += d.ln();
        }
    }
    Ok(Capacity {
        rho: (log_sum / points.len() as f64).exp(),
        degenerate,
    })
}
