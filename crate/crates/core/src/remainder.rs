//! Scaled exponential remainder functions
//!
//! `f̃_m(z,t) = m!/z^m · [e^{zt} − Σ_{j<m} (zt)^j/j!]`, with `f̃_m(0,t) = t^m`.
//!
//! For small `|zt|` the bracket cancels catastrophically, so the equivalent
//! tail series `m!·t^m·Σ_j (zt)^j/(j+m)!` is summed instead.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// `|zt|` above which the direct formula is used for order `m`.
///
/// Each branch loses roughly `e^x m!/x^m` ulps at `x = |zt|`, with the loss
/// of the tail growing above `m` and that of the direct formula below it.
pub fn branch_threshold(m: usize) -> f64 {
    (0.9 * m as f64).max(1.0)
}

/// Which formula [`tilde_f`] picks for the given arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Direct,
    TaylorTail,
}

pub fn branch_for(m: usize, z: Complex64, t: f64) -> Branch {
    if m == 0 || (z * t).norm() > branch_threshold(m) {
        Branch::Direct
    } else {
        Branch::TaylorTail
    }
}

pub fn tilde_f(m: usize, z: Complex64, t: f64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return Complex64::new(t.powi(m as i32), 0.0);
    }
    match branch_for(m, z, t) {
        Branch::Direct => tilde_f_direct(m, z, t),
        Branch::TaylorTail => tilde_f_taylor(m, z, t),
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Default)]
struct Compensated {
    sum: Complex64,
    carry: Complex64,
}

impl Compensated {
    fn add(&mut self, x: Complex64) {
        self.sum = Complex64::new(
            two_sum(self.sum.re, x.re, &mut self.carry.re),
            two_sum(self.sum.im, x.im, &mut self.carry.im),
        );
    }

    fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn two_sum(s: f64, x: f64, carry: &mut f64) -> f64 {
    let t = s + x;
    if s.abs() >= x.abs() {
        *carry += (s - t) + x;
    } else {
        *carry += (x - t) + s;
    }
    t
}

/// Direct formula with a compensated partial sum.
pub fn tilde_f_direct(m: usize, z: Complex64, t: f64) -> Complex64 {
    let zt = z * t;
    let mut acc = Compensated::default();
    acc.add(zt.exp());
    let mut term = Complex64::new(1.0, 0.0);
    for j in 0..m {
        acc.add(-term);
        term *= zt / (j + 1) as f64;
    }
    let mut r = acc.value();
    // m!/z^m as a running product avoids overflowing either factor.
    for k in 1..=m {
        r *= k as f64 / z;
    }
    r
}

/// Tail series `t^m Σ_j (zt)^j m!/(j+m)!`.
pub fn tilde_f_taylor(m: usize, z: Complex64, t: f64) -> Complex64 {
    let zt = z * t;
    let r = zt.norm();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut j = 0usize;
    loop {
        j += 1;
        term *= zt / (j + m) as f64;
        sum += term;
        if j as f64 > r && term.norm() <= f64::EPSILON * sum.norm() {
            break;
        }
        if j > 10_000 {
            break;
        }
    }
    sum * t.powi(m as i32)
}

/// Table `f̃_m(z_i, t_j)`; rows follow `z`, columns follow `t`.
pub fn tilde_f_batch(m: usize, z: &[Complex64], t: &[f64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(z.len(), t.len(), |i, j| tilde_f(m, z[i], t[j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_forms() {
        assert!((tilde_f(0, c(2.0, 0.0), 1.0) - c(2f64.exp(), 0.0)).norm() < 1e-15 * 8.0);
        assert_eq!(tilde_f(3, c(0.0, 0.0), 2.0), c(8.0, 0.0));
        let e1 = std::f64::consts::E - 1.0;
        assert!((tilde_f(1, c(1.0, 0.0), 1.0).re - e1).abs() < 1e-15);
    }

    #[test]
    fn batch_shapes() {
        let b = tilde_f_batch(1, &[c(0.0, 0.0)], &[1.0, 2.0]);
        assert_eq!(b[(0, 0)], c(1.0, 0.0));
        assert_eq!(b[(0, 1)], c(2.0, 0.0));
        for m in 1..6 {
            assert_eq!(tilde_f_batch(m, &[c(1.0, 0.0)], &[0.0])[(0, 0)], c(0.0, 0.0));
        }
    }
}
