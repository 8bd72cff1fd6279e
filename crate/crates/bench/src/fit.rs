use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::sweep::Row;

/// Least-squares line `log₁₀ error = slope·log₁₀ n_ops + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Smallest and largest `Δt` used.
    pub dt_range: [f64; 2],
    pub points: usize,
}

impl Fit {
    pub fn predict(&self, n_ops: f64) -> f64 {
        10f64.powf(self.intercept + self.slope * n_ops.log10())
    }
}

/// Automatic fits need at least this many points before the plateau.
pub const MIN_FIT_POINTS: usize = 4;
/// A point whose error exceeds the extrapolated fit by more than this factor
/// ends the linear region.
pub const PLATEAU_FACTOR: f64 = 10.0;

fn least_squares(pts: &[(f64, f64, f64)]) -> Fit {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.1, b + p.2));
    let (mx, my) = (sx / n, sy / n);
    let (sxx, sxy) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + (p.1 - mx).powi(2), b + (p.1 - mx) * (p.2 - my)));
    let slope = sxy / sxx;
    let dts = pts.iter().map(|p| p.0);
    Fit {
        slope,
        intercept: my - slope * mx,
        dt_range: [dts.clone().fold(f64::INFINITY, f64::min), dts.fold(0.0, f64::max)],
        points: pts.len(),
    }
}

/// Rows usable for fitting as `(Δt, log n_ops, log error)`, in increasing cost.
/// Failed runs and runs without a single correct digit are left out.
fn usable(rows: &[Row]) -> Vec<(f64, f64, f64)> {
    let mut pts: Vec<(f64, f64, f64)> = rows
        .iter()
        .filter(|r| !r.status.failed() && r.n_ops > 0 && r.rel_error > 0.0 && r.rel_error < 1.0)
        .map(|r| (r.dt, (r.n_ops as f64).log10(), r.rel_error.log10()))
        .collect();
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    pts
}

/// Fit the linear region of a decay curve.
///
/// With `range`, every usable row with `Δt` in the range is used. Otherwise
/// the fit starts from the cheapest [`MIN_FIT_POINTS`] rows and extends
/// while each next row stays within [`PLATEAU_FACTOR`] of the extrapolation.
pub fn fit_linear_region(rows: &[Row], range: Option<[f64; 2]>) -> Result<Fit> {
    let pts = usable(rows);
    if let Some([lo, hi]) = range {
        let slack = 1e-9;
        let chosen: Vec<_> = pts
            .into_iter()
            .filter(|p| p.0 >= lo * (1.0 - slack) && p.0 <= hi * (1.0 + slack))
            .collect();
        if chosen.len() < 2 {
            return Err(BenchError::Config(format!("fit range [{lo}, {hi}] holds fewer than 2 rows")));
        }
        return Ok(least_squares(&chosen));
    }
    if pts.len() < MIN_FIT_POINTS {
        return Err(BenchError::Config(format!(
            "{} usable rows; the fit needs at least {MIN_FIT_POINTS}",
            pts.len()
        )));
    }
    let mut end = MIN_FIT_POINTS;
    let mut fit = least_squares(&pts[..end]);
    while end < pts.len() {
        let (_, x, y) = pts[end];
        if y > fit.intercept + fit.slope * x + PLATEAU_FACTOR.log10() {
            break;
        }
        end += 1;
        fit = least_squares(&pts[..end]);
    }
    Ok(fit)
}

/// First `Δt` (in sweep order) whose error fails to drop below the previous
/// row's.
pub fn plateau_dt(rows: &[Row]) -> Option<f64> {
    let ok: Vec<&Row> = rows.iter().filter(|r| !r.status.failed()).collect();
    ok.windows(2).find(|w| w[1].rel_error >= w[0].rel_error).map(|w| w[1].dt)
}
