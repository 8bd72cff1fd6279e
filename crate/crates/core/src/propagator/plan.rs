use serde::{Deserialize, Serialize};

use super::{DEFAULT_GROWTH_LIMIT, DEFAULT_MAX_ITERATIONS};
use crate::cheb::{cheb_nodes, ChebKind, Interval};
use crate::error::{contract, Result};
use crate::funmat::FunMatBackend;

/// One time step: length, number of time nodes `M` and expansion terms `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSpec {
    pub dt: f64,
    pub m: usize,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IterationMode {
    /// Iterate every step until the convergence metric reaches the tolerance.
    Converge,
    /// Converge the first step, then perform exactly one iteration per step.
    SingleAfterFirst,
}

/// Polynomial basis used to represent `s_ext` in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeBasis {
    Chebyshev,
    /// Newton interpolation at the same nodes; kept for cross-validation.
    Newton,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeStepPlan {
    pub t_start: f64,
    pub steps: Vec<StepSpec>,
    pub backend: FunMatBackend,
    pub tolerance: f64,
    pub mode: IterationMode,
    pub max_iterations: usize,
    /// Sorted times within `[t_start, t_end]`.
    pub output_times: Vec<f64>,
    pub time_basis: TimeBasis,
    pub growth_limit: f64,
    /// Compute the time-discretization estimate after each step. Without a
    /// diagonal fast path in the generator this costs two applications.
    pub estimate_errors: bool,
}

impl TimeStepPlan {
    /// `n_steps` equal steps covering `[t_start, t_end]`.
    pub fn equidistant(
        t_start: f64,
        t_end: f64,
        n_steps: usize,
        m: usize,
        k: usize,
        backend: FunMatBackend,
    ) -> Result<Self> {
        if n_steps == 0 {
            return Err(contract("at least one time step is required"));
        }
        Interval::new(t_start, t_end)?;
        let dt = (t_end - t_start) / n_steps as f64;
        Ok(Self {
            t_start,
            steps: vec![StepSpec { dt, m, k }; n_steps],
            backend,
            tolerance: 1e-10,
            mode: IterationMode::Converge,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            output_times: Vec::new(),
            time_basis: TimeBasis::Chebyshev,
            growth_limit: DEFAULT_GROWTH_LIMIT,
            estimate_errors: true,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_mode(mut self, mode: IterationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_output_times(mut self, times: Vec<f64>) -> Self {
        self.output_times = times;
        self
    }

    pub fn with_time_basis(mut self, basis: TimeBasis) -> Self {
        self.time_basis = basis;
        self
    }

    pub fn with_max_iterations(mut self, cap: usize) -> Self {
        self.max_iterations = cap;
        self
    }

    pub fn t_end(&self) -> f64 {
        self.boundaries().last().copied().unwrap_or(self.t_start)
    }

    /// Step boundaries `t_start = b_0 < b_1 < ... < b_n`, summed with
    /// compensation so that `b_n` stays within an ulp of the exact total.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.steps.len() + 1);
        b.push(self.t_start);
        let (mut sum, mut carry) = (self.t_start, 0.0);
        for s in &self.steps {
            let t = sum + s.dt;
            carry += if sum.abs() >= s.dt.abs() {
                (sum - t) + s.dt
            } else {
                (s.dt - t) + sum
            };
            sum = t;
            b.push(sum + carry);
        }
        b
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps.is_empty() {
            return Err(contract("plan has no steps"));
        }
        for (i, s) in self.steps.iter().enumerate() {
            if !(s.dt > 0.0) || !s.dt.is_finite() {
                return Err(contract(format!("step {i}: Δt = {} must be positive", s.dt)));
            }
            if !(2..=20).contains(&s.m) {
                return Err(contract(format!("step {i}: M = {} outside [2, 20]", s.m)));
            }
            if !(1..=40).contains(&s.k) {
                return Err(contract(format!("step {i}: K = {} outside [1, 40]", s.k)));
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(contract("tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(contract("iteration cap must be positive"));
        }
        let t_end = self.t_end();
        let slack = 1e-12 * (t_end.abs() + self.t_start.abs()).max(1.0);
        if self.output_times.windows(2).any(|w| w[0] > w[1]) {
            return Err(contract("output times must be sorted"));
        }
        if let (Some(&first), Some(&last)) = (self.output_times.first(), self.output_times.last()) {
            if first < self.t_start - slack || last > t_end + slack {
                return Err(contract(format!(
                    "output times must lie in [{}, {t_end}]",
                    self.t_start
                )));
            }
        }
        Ok(())
    }
}

/// Boundary-including Chebyshev nodes of every step, in increasing order.
/// Adjacent steps share their common boundary node exactly.
pub fn build_time_grid(plan: &TimeStepPlan) -> Result<Vec<Vec<f64>>> {
    plan.validate()?;
    let b = plan.boundaries();
    plan.steps
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let g = cheb_nodes(ChebKind::Lobatto, s.m, Interval::new(b[k], b[k + 1])?, true)?;
            Ok(g.nodes().to_vec())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(t0: f64, t1: f64, n: usize, m: usize) -> TimeStepPlan {
        TimeStepPlan::equidistant(t0, t1, n, m, 4, FunMatBackend::Arnoldi).unwrap()
    }

    #[test]
    fn single_step_three_nodes() {
        let g = build_time_grid(&plan(0.0, 1.0, 1, 3)).unwrap();
        assert_eq!(g, vec![vec![0.0, 0.5, 1.0]]);
    }

    #[test]
    fn shared_endpoints() {
        let g = build_time_grid(&plan(0.0, 2.0, 2, 2)).unwrap();
        assert_eq!(g, vec![vec![0.0, 1.0], vec![1.0, 2.0]]);
    }

    #[test]
    fn five_nodes() {
        let g = build_time_grid(&plan(0.0, 2.0, 1, 5)).unwrap();
        let s = (std::f64::consts::PI / 8.0).sin().powi(2);
        let expect = [0.0, 2.0 * s, 1.0, 2.0 - 2.0 * s, 2.0];
        for (a, b) in g[0].iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((g[0][1] - 0.29289).abs() < 1e-5);
    }

    #[test]
    fn long_plans_end_on_time() {
        let p = plan(400.0, 420.0, 600, 3);
        let b = p.boundaries();
        assert_eq!(*b.last().unwrap(), 420.0);
        assert!((b[300] - 410.0).abs() <= f64::EPSILON * 410.0);
    }

    #[test]
    fn rejects_bad_plans() {
        assert!(build_time_grid(&plan(0.0, 1.0, 1, 1)).is_err());
        let mut p = plan(0.0, 1.0, 2, 3);
        p.output_times = vec![0.5, 0.2];
        assert!(p.validate().is_err());
        p.output_times = vec![1.5];
        assert!(p.validate().is_err());
        p.output_times = vec![0.0, 1.0];
        assert!(p.validate().is_ok());
    }
}
