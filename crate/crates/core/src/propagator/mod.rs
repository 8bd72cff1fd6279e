//! The semi-global time-stepping engine.
//!
//! Each time step is covered by a boundary-including Chebyshev grid. The
//! inhomogeneous part (the true source plus the nonlinear and time-dependent
//! remainder of the generator, `s_ext`) is interpolated in time and the
//! equation with the frozen mid-step generator `G̃` is solved exactly for that
//! polynomial source. The resulting fixed-point iteration is repeated until the
//! solution at the step edge stops changing, or once per step in benchmark mode.

mod generator;
mod plan;
mod step;

pub use generator::{CountingGenerator, Generator};
pub use plan::{build_time_grid, IterationMode, StepSpec, TimeBasis, TimeStepPlan};
pub use step::StepErrors;
use step::estimate_step_errors;

use crate::error::{contract, Error, Result};
use crate::sample::CVector;
use crate::taylor::ConversionCache;
use step::StepWorkspace;

/// Guard against a runaway solution: abort once the norm exceeds this
/// multiple of its reference value.
pub const DEFAULT_GROWTH_LIMIT: f64 = 1e10;
/// Iteration cap used when iterating to convergence.
pub const DEFAULT_MAX_ITERATIONS: usize = 50;
/// Stability criterion on the function-of-matrix error relative to `‖f̃ṽ‖`.
pub const FM_STABILITY_LIMIT: f64 = 1e-5;
/// Below this metric, an iteration that fails to halve the previous metric
/// is taken to have reached the round-off floor.
const STAGNATION_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct StepDiagnostics {
    pub index: usize,
    pub t_start: f64,
    pub dt: f64,
    pub iterations: usize,
    /// `‖u_new(edge) − u_old(edge)‖ / ‖u_old(edge)‖` of the last iteration.
    pub convergence_error: f64,
    /// Time-discretization estimate; `None` when error estimation is off.
    pub e_int_rel: Option<f64>,
    /// Function-of-matrix estimate relative to `‖u(edge)‖`.
    pub e_fm_rel: f64,
    /// Function-of-matrix estimate relative to `‖f̃_M(G̃,Δt)ṽ_M‖`.
    pub fm_stability_ratio: f64,
    pub fm_unstable: bool,
    pub norm: f64,
    pub applications: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationReport {
    /// `(t, u(t))` for every requested output time.
    pub outputs: Vec<(f64, CVector)>,
    pub final_state: CVector,
    pub steps: Vec<StepDiagnostics>,
    pub applications: u64,
}

impl PropagationReport {
    /// Steps that violated the function-of-matrix stability criterion.
    pub fn unstable_steps(&self) -> Vec<usize> {
        self.steps.iter().filter(|s| s.fm_unstable).map(|s| s.index).collect()
    }

    pub fn is_flagged(&self) -> bool {
        self.steps.iter().any(|s| s.fm_unstable)
    }
}

fn finite(u: &CVector) -> bool {
    u.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Propagate `u0` over the plan.
pub fn propagate(u0: &CVector, generator: &dyn Generator, plan: &TimeStepPlan) -> Result<PropagationReport> {
    plan.validate()?;
    if u0.len() != generator.dim() {
        return Err(contract(format!(
            "initial state has length {}, generator dimension is {}",
            u0.len(),
            generator.dim()
        )));
    }
    if !finite(u0) {
        return Err(contract("initial state is not finite"));
    }
    let gen = CountingGenerator::new(generator);
    let grids = build_time_grid(plan)?;
    let mut cache = ConversionCache::new();

    let mut outputs = Vec::with_capacity(plan.output_times.len());
    let mut pending = plan.output_times.iter().copied().peekable();
    while let Some(&t) = pending.peek() {
        if t <= plan.t_start {
            outputs.push((t, u0.clone()));
            pending.next();
        } else {
            break;
        }
    }

    let mut norm_ref = (u0.norm() > 0.0).then(|| u0.norm());
    let mut guess = vec![u0.clone(); plan.steps[0].m];
    let mut steps = Vec::with_capacity(plan.steps.len());
    let mut final_state = u0.clone();

    for (k, nodes) in grids.iter().enumerate() {
        let spec = plan.steps[k];
        let apps_before = gen.count();
        let mut ws = StepWorkspace::new(nodes.clone(), std::mem::take(&mut guess), spec);
        let cap = match plan.mode {
            IterationMode::SingleAfterFirst if k > 0 => 1,
            _ => plan.max_iterations,
        };
        let mut prev_metric = f64::INFINITY;
        let mut iterations = 0;
        loop {
            iterations += 1;
            let metric = ws.iterate(&gen, plan, &mut cache)?;
            let edge = ws.edge();
            let edge_norm = edge.norm();
            if !finite(edge) || !metric.is_finite() {
                return Err(Error::Divergence {
                    step: k,
                    iteration: iterations,
                    reason: "non-finite state".into(),
                });
            }
            if let Some(r) = norm_ref {
                if edge_norm > plan.growth_limit * r {
                    return Err(Error::Divergence {
                        step: k,
                        iteration: iterations,
                        reason: format!("norm grew by {:.3e}", edge_norm / r),
                    });
                }
            }
            if iterations >= cap && cap == 1 {
                break;
            }
            if metric <= plan.tolerance {
                break;
            }
            if iterations >= 2 && metric < STAGNATION_FLOOR && metric > 0.5 * prev_metric {
                break;
            }
            if iterations >= cap {
                return Err(Error::NonConvergence {
                    step: k,
                    iterations,
                    metric,
                });
            }
            prev_metric = metric;
        }

        let errors = estimate_step_errors(&ws, &gen, plan.estimate_errors)?;
        let edge = ws.edge().clone();
        let edge_norm = edge.norm();
        if norm_ref.is_none() && edge_norm > 0.0 {
            norm_ref = Some(edge_norm);
        }

        let t0 = nodes[0];
        let t1 = *nodes.last().expect("grid has nodes");
        let last_step = k + 1 == grids.len();
        while let Some(&t) = pending.peek() {
            if t <= t1 || last_step {
                outputs.push((t, ws.solution_at(t - t0)?));
                pending.next();
            } else {
                break;
            }
        }

        steps.push(StepDiagnostics {
            index: k,
            t_start: t0,
            dt: spec.dt,
            iterations,
            convergence_error: ws.last_metric(),
            e_int_rel: errors.e_int_rel,
            e_fm_rel: errors.e_fm_rel,
            fm_stability_ratio: errors.fm_stability_ratio,
            fm_unstable: errors.fm_stability_ratio >= FM_STABILITY_LIMIT,
            norm: edge_norm,
            applications: gen.count() - apps_before,
        });

        if let Some(next) = grids.get(k + 1) {
            let mut g = Vec::with_capacity(next.len());
            g.push(edge.clone());
            for &t in &next[1..] {
                g.push(ws.solution_at(t - t0)?);
            }
            guess = g;
        }
        final_state = edge;
    }

    Ok(PropagationReport {
        outputs,
        final_state,
        steps,
        applications: gen.count(),
    })
}
