use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{AtomError, Result};

/// Periodic equidistant grid on `[x_min, x_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierGrid1D {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl FourierGrid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(AtomError::Grid(format!("bad domain [{x_min}, {x_max})")));
        }
        if n < 2 || n % 2 != 0 {
            return Err(AtomError::Grid(format!("point count {n} must be even and ≥ 2")));
        }
        Ok(Self { x_min, x_max, n })
    }

    /// 768 points on `[−240, 240)`.
    pub fn benchmark() -> Self {
        Self {
            x_min: -240.0,
            x_max: 240.0,
            n: 768,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Momenta in FFT order. The Nyquist mode `j = n/2` is given `+π/dx`.
    pub fn momenta(&self) -> Vec<f64> {
        let dp = 2.0 * PI / self.length();
        (0..self.n)
            .map(|j| {
                if j <= self.n / 2 {
                    j as f64 * dp
                } else {
                    (j as f64 - self.n as f64) * dp
                }
            })
            .collect()
    }

    pub fn p_max(&self) -> f64 {
        PI / self.dx()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_grid() {
        let g = FourierGrid1D::benchmark();
        assert_eq!(g.dx(), 0.625);
        assert_eq!(g.x(384), 0.0);
        assert_eq!(g.x(767), 239.375);
        let p = g.momenta();
        assert_eq!(p[384], g.p_max());
        assert!((p[1] + p[767]).abs() < 1e-15);
        assert!(FourierGrid1D::new(0.0, 1.0, 7).is_err());
    }
}
