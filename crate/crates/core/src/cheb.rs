//! Chebyshev nodes, coefficients and series evaluation on an arbitrary interval.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::sample::Sample;

/// A closed interval `[min, max]` with `min < max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    min: f64,
    max: f64,
}

impl Interval {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(Error::Domain { min, max });
        }
        Ok(Self { min, max })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn length(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }

    /// Map a reference point `y ∈ [-1,1]` into the interval.
    pub fn from_reference(&self, y: f64) -> f64 {
        (y * self.length() + self.min + self.max) / 2.0
    }

    /// Inverse of [`Interval::from_reference`].
    pub fn to_reference(&self, x: f64) -> f64 {
        (2.0 * x - self.min - self.max) / self.length()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChebKind {
    /// Roots of `T_{N+1}`; excludes the interval ends.
    Gauss,
    /// Extrema of `T_N`; includes both interval ends.
    Lobatto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChebGrid {
    kind: ChebKind,
    reversed: bool,
    domain: Interval,
    nodes: Vec<f64>,
}

/// Reference node `j` of `n` points, in the unreversed (decreasing) order.
///
/// `cos(θ)` is written as `sin(π/2 − θ)` so that symmetric pairs are exact
/// negatives and the middle Lobatto node is exactly zero.
fn reference_node(kind: ChebKind, n: usize, j: usize) -> f64 {
    match kind {
        ChebKind::Lobatto => {
            let big_n = (n - 1) as f64;
            (PI * (big_n - 2.0 * j as f64) / (2.0 * big_n)).sin()
        }
        ChebKind::Gauss => {
            let big_n = (n - 1) as f64;
            (PI * (big_n - 2.0 * j as f64) / (2.0 * (big_n + 1.0))).sin()
        }
    }
}

pub fn cheb_nodes(
    kind: ChebKind,
    n_points: usize,
    domain: Interval,
    reversed: bool,
) -> Result<ChebGrid> {
    let min_points = match kind {
        ChebKind::Lobatto => 2,
        ChebKind::Gauss => 1,
    };
    if n_points < min_points {
        return Err(contract(format!(
            "{kind:?} grid needs at least {min_points} points, got {n_points}"
        )));
    }
    let mut nodes: Vec<f64> = (0..n_points)
        .map(|j| {
            let y = reference_node(kind, n_points, j);
            domain.from_reference(if reversed { -y } else { y })
        })
        .collect();
    if kind == ChebKind::Lobatto {
        let (first, last) = if reversed {
            (domain.min, domain.max)
        } else {
            (domain.max, domain.min)
        };
        nodes[0] = first;
        nodes[n_points - 1] = last;
    }
    Ok(ChebGrid {
        kind,
        reversed,
        domain,
        nodes,
    })
}

impl ChebGrid {
    pub fn kind(&self) -> ChebKind {
        self.kind
    }

    pub fn reversed(&self) -> bool {
        self.reversed
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn n_points(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Reference nodes `y_j ∈ [-1,1]` in this grid's ordering.
    pub fn reference_nodes(&self) -> Vec<f64> {
        let n = self.n_points();
        (0..n)
            .map(|j| {
                let y = reference_node(self.kind, n, j);
                if self.reversed {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }
}

/// Chebyshev series `Σ c_n T_n(y(x))` over a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebCoeffs<T> {
    coeffs: Vec<T>,
    domain: Interval,
    kind: ChebKind,
    reversed: bool,
}

/// A series value together with an extrapolation marker.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated<T> {
    pub value: T,
    pub extrapolated: bool,
}

/// `cos(k·π/d)` with the argument reduced modulo `2d` before rounding.
fn cos_ratio(k: usize, d: usize) -> f64 {
    let r = k % (2 * d);
    (PI * r as f64 / d as f64).cos()
}

/// Coefficients of the interpolating series through `samples` taken at `grid`.
///
/// A reversed grid is the unreversed one read backwards, so its samples are
/// re-indexed and fed through the same sum; this is equivalent to the
/// `(−1)^n` sign flip per coefficient and reproduces the unreversed result
/// exactly.
pub fn cheb_coeffs<T: Sample>(samples: &[T], grid: &ChebGrid) -> Result<ChebCoeffs<T>> {
    let n = grid.n_points();
    if samples.len() != n {
        return Err(contract(format!(
            "expected {n} samples, got {}",
            samples.len()
        )));
    }
    let sample = |j: usize| -> &T {
        if grid.reversed {
            &samples[n - 1 - j]
        } else {
            &samples[j]
        }
    };
    let mut coeffs = Vec::with_capacity(n);
    match grid.kind {
        ChebKind::Lobatto => {
            let big_n = n - 1;
            for k in 0..n {
                let mut c = samples[0].zero_like();
                for j in 0..n {
                    let beta_j = if j == 0 || j == big_n { 2.0 } else { 1.0 };
                    c.add_scaled(cos_ratio(k * j, big_n) / beta_j, sample(j));
                }
                let beta_k = if k == 0 || k == big_n { 2.0 } else { 1.0 };
                c.scale(2.0 / (big_n as f64 * beta_k));
                coeffs.push(c);
            }
        }
        ChebKind::Gauss => {
            let d = 2 * n;
            for k in 0..n {
                let mut c = samples[0].zero_like();
                for j in 0..n {
                    c.add_scaled(cos_ratio(k * (2 * j + 1), d), sample(j));
                }
                let alpha_k = if k == 0 { 2.0 } else { 1.0 };
                c.scale(2.0 / (n as f64 * alpha_k));
                coeffs.push(c);
            }
        }
    }
    Ok(ChebCoeffs {
        coeffs,
        domain: grid.domain,
        kind: grid.kind,
        reversed: grid.reversed,
    })
}

impl<T: Sample> ChebCoeffs<T> {
    /// Build a series directly from coefficients.
    pub fn from_coeffs(coeffs: Vec<T>, domain: Interval) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(contract("empty coefficient vector"));
        }
        Ok(Self {
            coeffs,
            domain,
            kind: ChebKind::Lobatto,
            reversed: false,
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn kind(&self) -> ChebKind {
        self.kind
    }

    pub fn reversed(&self) -> bool {
        self.reversed
    }

    /// Evaluate with the forward three-term recurrence.
    pub fn eval(&self, x: f64) -> Evaluated<T> {
        let y = self.domain.to_reference(x);
        let mut value = self.coeffs[0].clone();
        let (mut t_prev, mut t_cur) = (1.0, y);
        for c in &self.coeffs[1..] {
            value.add_scaled(t_cur, c);
            let t_next = 2.0 * y * t_cur - t_prev;
            t_prev = t_cur;
            t_cur = t_next;
        }
        Evaluated {
            value,
            extrapolated: !self.domain.contains(x),
        }
    }
}

pub fn cheb_eval<T: Sample>(coeffs: &ChebCoeffs<T>, x: f64) -> Evaluated<T> {
    coeffs.eval(x)
}
