use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::BenchConfig;
use crate::error::Result;
use crate::fit::{fit_linear_region, plateau_dt, Fit};
use crate::problem::Problem;
use crate::reference::reference_state;
use crate::run::{run_method, RunStatus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub dt: f64,
    pub n_ops: u64,
    /// `‖u − u_ref‖/‖u_ref‖`; infinite for failed runs.
    pub rel_error: f64,
    #[serde(rename = "flags")]
    pub status: RunStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    /// In sweep order, that is decreasing `Δt`.
    pub rows: Vec<Row>,
    /// `None` when too few rows are usable.
    pub fit: Option<Fit>,
    pub fit_error: Option<String>,
    pub plateau_dt: Option<f64>,
}

impl DecayCurve {
    pub fn from_rows(rows: Vec<Row>, range: Option<[f64; 2]>) -> Self {
        let (fit, fit_error) = match fit_linear_region(&rows, range) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Self {
            plateau_dt: plateau_dt(&rows),
            rows,
            fit,
            fit_error,
        }
    }

    /// Smallest error of a successful run.
    pub fn min_error(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| !r.status.failed())
            .map(|r| r.rel_error)
            .min_by(f64::total_cmp)
    }

    /// Error at `n_ops` by log-log interpolation between neighbouring rows.
    pub fn error_at(&self, n_ops: f64) -> Option<f64> {
        let mut pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| !r.status.failed() && r.rel_error > 0.0)
            .map(|r| ((r.n_ops as f64).log10(), r.rel_error.log10()))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let x = n_ops.log10();
        pts.windows(2).find(|w| w[0].0 <= x && x <= w[1].0).map(|w| {
            let s = if w[1].0 > w[0].0 { (x - w[0].0) / (w[1].0 - w[0].0) } else { 0.0 };
            10f64.powf(w[0].1 + s * (w[1].1 - w[0].1))
        })
    }
}

/// Run every `Δt` of the configuration against the reference solution.
pub fn run_sweep(config: &BenchConfig) -> Result<DecayCurve> {
    config.validate()?;
    let problem = Problem::build(&config.problem)?;
    let reference = reference_state(&config.problem, &problem, &config.reference)?;
    let ref_norm = reference.norm();
    let rows = config
        .dt_list
        .par_iter()
        .map(|&dt| {
            let out = run_method(&problem, &config.method, dt, config.eps, config.single_iter)?;
            let rel_error = match &out.final_state {
                Some(u) => {
                    let e = (u - &reference).norm();
                    if ref_norm > 0.0 {
                        e / ref_norm
                    } else {
                        e
                    }
                }
                None => f64::INFINITY,
            };
            Ok(Row {
                dt,
                n_ops: out.applications,
                rel_error: if rel_error.is_nan() { f64::INFINITY } else { rel_error },
                status: out.status,
            })
        })
        .collect::<Result<Vec<Row>>>()?;
    Ok(DecayCurve::from_rows(rows, config.fit_range))
}
