//! Conversion of Newton or Chebyshev expansion coefficients into Taylor-like
//! monomial coefficients.
//!
//! Row `n` of a conversion matrix holds the monomial coefficients of the
//! `n`-th basis polynomial: `P_n(t) = Σ_m q_{n,m} t^m / m!` in the untilded
//! convention and `P_n(t) = Σ_m q̃_{n,m} t^m` in the tilde convention, so
//! `q_{n,m} = m!·q̃_{n,m}`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cheb::Interval;
use crate::error::{contract, Error, Result};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConversionKind {
    /// Newton basis with the length-4 factor `4/Δt` per node.
    NewtonLen4,
    /// Chebyshev polynomials of `(2t − t_min − t_max)/Δt`.
    ChebDomain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConversionMatrix {
    kind: ConversionKind,
    tilde: bool,
    q: DMatrix<f64>,
    /// `(t_min, t_max)` for Chebyshev, `(t_0, t_0 + Δt)` style metadata otherwise.
    span: (f64, f64),
    points: Vec<f64>,
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(contract("conversion order must be positive"));
    }
    Ok(())
}

pub fn newton_to_taylor_matrix(
    points: &[f64],
    dt: f64,
    order: usize,
    tilde: bool,
) -> Result<ConversionMatrix> {
    check_order(order)?;
    if points.len() < order {
        return Err(contract(format!(
            "order {order} needs at least {order} points, got {}",
            points.len()
        )));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(contract(format!("invalid Δt {dt}")));
    }
    let f = 4.0 / dt;
    let mut q = DMatrix::<f64>::zeros(order, order);
    q[(0, 0)] = 1.0;
    for n in 0..order - 1 {
        let tn = points[n];
        q[(n + 1, 0)] = -f * tn * q[(n, 0)];
        for m in 1..=n {
            let w = if tilde { 1.0 } else { m as f64 };
            q[(n + 1, m)] = f * (w * q[(n, m - 1)] - tn * q[(n, m)]);
        }
        let w = if tilde { 1.0 } else { (n + 1) as f64 };
        q[(n + 1, n + 1)] = f * w * q[(n, n)];
    }
    Ok(ConversionMatrix {
        kind: ConversionKind::NewtonLen4,
        tilde,
        q,
        span: (points[0], points[0] + dt),
        points: points[..order].to_vec(),
    })
}

pub fn cheb_to_taylor_matrix(
    t_min: f64,
    t_max: f64,
    order: usize,
    tilde: bool,
) -> Result<ConversionMatrix> {
    check_order(order)?;
    let domain = Interval::new(t_min, t_max)?;
    let dt = domain.length();
    let s = t_min + t_max;
    let mut q = DMatrix::<f64>::zeros(order, order);
    q[(0, 0)] = 1.0;
    if order > 1 {
        q[(1, 0)] = -s / dt;
        q[(1, 1)] = 2.0 / dt;
    }
    let a = 4.0 / dt;
    let b = 2.0 * s / dt;
    for n in 1..order.saturating_sub(1) {
        let w = |m: usize| if tilde { 1.0 } else { m as f64 };
        q[(n + 1, 0)] = -b * q[(n, 0)] - q[(n - 1, 0)];
        for m in 1..n {
            q[(n + 1, m)] = a * w(m) * q[(n, m - 1)] - b * q[(n, m)] - q[(n - 1, m)];
        }
        q[(n + 1, n)] = a * w(n) * q[(n, n - 1)] - b * q[(n, n)];
        q[(n + 1, n + 1)] = a * w(n + 1) * q[(n, n)];
    }
    Ok(ConversionMatrix {
        kind: ConversionKind::ChebDomain,
        tilde,
        q,
        span: (t_min, t_max),
        points: Vec::new(),
    })
}

impl ConversionMatrix {
    pub fn kind(&self) -> ConversionKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.q.nrows()
    }

    pub fn is_tilde(&self) -> bool {
        self.tilde
    }

    /// `q[(n, m)]`, basis index `n`, monomial power `m`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn span(&self) -> (f64, f64) {
        self.span
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// `s_m = Σ_{n≥m} q_{n,m} b_n`, componentwise for vector-valued `b_n`.
    pub fn apply<T: Sample>(&self, b: &[T]) -> Result<Vec<T>> {
        let order = self.order();
        if b.len() != order {
            return Err(contract(format!(
                "expected {order} expansion coefficients, got {}",
                b.len()
            )));
        }
        Ok((0..order)
            .map(|m| {
                let mut s = b[0].zero_like();
                for (n, bn) in b.iter().enumerate().skip(m) {
                    s.add_scaled(self.q[(n, m)], bn);
                }
                s
            })
            .collect())
    }
}

pub fn apply_conversion<T: Sample>(matrix: &ConversionMatrix, b: &[T]) -> Result<Vec<T>> {
    matrix.apply(b)
}

/// Per-run cache of Chebyshev conversion matrices keyed on order and domain.
#[derive(Debug, Default)]
pub struct ConversionCache {
    cheb: HashMap<(usize, u64, u64, bool), ConversionMatrix>,
}

impl ConversionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cheb(&mut self, t_min: f64, t_max: f64, order: usize, tilde: bool) -> Result<&ConversionMatrix> {
        let key = (order, t_min.to_bits(), t_max.to_bits(), tilde);
        if !self.cheb.contains_key(&key) {
            let m = cheb_to_taylor_matrix(t_min, t_max, order, tilde)?;
            self.cheb.insert(key, m);
        }
        self.cheb.get(&key).ok_or(Error::Contract("cache miss".into()))
    }

    pub fn len(&self) -> usize {
        self.cheb.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cheb.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(m: &ConversionMatrix, n: usize) -> Vec<f64> {
        (0..=n).map(|j| m.matrix()[(n, j)]).collect()
    }

    #[test]
    fn newton_first_rows() {
        let m = newton_to_taylor_matrix(&[0.0, 1.0, 2.0], 4.0, 3, true).unwrap();
        assert_eq!(row(&m, 0), vec![1.0]);
        assert_eq!(row(&m, 1), vec![0.0, 1.0]);
        let m = newton_to_taylor_matrix(&[1.0, 2.0, 3.0], 4.0, 3, true).unwrap();
        assert_eq!(row(&m, 1), vec![-1.0, 1.0]);
        assert!(newton_to_taylor_matrix(&[1.0], 4.0, 0, true).is_err());
    }

    #[test]
    fn cheb_first_rows() {
        let m = cheb_to_taylor_matrix(-1.0, 1.0, 3, true).unwrap();
        assert_eq!(row(&m, 1), vec![0.0, 1.0]);
        assert_eq!(row(&m, 2), vec![-1.0, 0.0, 2.0]);
        let m = cheb_to_taylor_matrix(0.0, 1.0, 2, true).unwrap();
        assert_eq!(row(&m, 1), vec![-1.0, 2.0]);
        assert!(cheb_to_taylor_matrix(1.0, 1.0, 2, true).is_err());
    }

    #[test]
    fn identity_like_and_linear() {
        let m = cheb_to_taylor_matrix(-1.0, 1.0, 3, true).unwrap();
        assert_eq!(m.apply(&[2.5, 0.0, 0.0]).unwrap(), vec![2.5, 0.0, 0.0]);
        assert_eq!(m.apply(&[0.0, 1.0, 0.0]).unwrap(), vec![0.0, 1.0, 0.0]);
        assert!(m.apply(&[1.0]).is_err());
    }

    #[test]
    fn triangular_structure() {
        let pts: Vec<f64> = (0..9).map(|i| 0.1 * i as f64).collect();
        for m in [
            newton_to_taylor_matrix(&pts, 0.8, 9, true).unwrap(),
            newton_to_taylor_matrix(&pts, 0.8, 9, false).unwrap(),
            cheb_to_taylor_matrix(0.3, 1.1, 9, true).unwrap(),
            cheb_to_taylor_matrix(0.3, 1.1, 9, false).unwrap(),
        ] {
            for n in 0..9 {
                for k in n + 1..9 {
                    assert_eq!(m.matrix()[(n, k)], 0.0);
                }
            }
            assert_eq!(m.matrix()[(0, 0)], 1.0);
        }
    }

    #[test]
    fn cache_reuses_matrices() {
        let mut c = ConversionCache::new();
        c.cheb(0.0, 0.5, 7, true).unwrap();
        c.cheb(0.0, 0.5, 7, true).unwrap();
        c.cheb(0.0, 0.25, 7, true).unwrap();
        assert_eq!(c.len(), 2);
    }
}
