use semiglobal::funmat::{FunMatBackend, SpectralDomain};
use semiglobal::propagator::{propagate, CountingGenerator, IterationMode, TimeStepPlan};
use semiglobal::reference::{euler_propagate, rk4_propagate, FixedStepPlan};
use semiglobal::CVector;
use serde::{Deserialize, Serialize};

use crate::config::{BackendChoice, MethodSpec};
use crate::error::{BenchError, Result};
use crate::problem::Problem;

/// How a single propagation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Ok,
    /// Finished, but some step violated the function-of-matrix stability
    /// criterion.
    FmUnstable,
    /// Aborted on a non-finite state or runaway norm.
    Divergent,
    /// A step exhausted its iteration cap.
    NonConvergent,
}

impl RunStatus {
    pub fn failed(self) -> bool {
        matches!(self, RunStatus::Divergent | RunStatus::NonConvergent)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub final_state: Option<CVector>,
    /// Generator applications actually performed, including those of an
    /// aborted run.
    pub applications: u64,
    pub status: RunStatus,
}

pub(crate) fn backend(choice: BackendChoice, problem: &Problem) -> Result<FunMatBackend> {
    if choice == BackendChoice::Arnoldi {
        return Ok(FunMatBackend::Arnoldi);
    }
    let (lo, hi) = problem
        .energy_bounds
        .ok_or_else(|| BenchError::Config("this problem has no real energy range; use the Arnoldi backend".into()))?;
    let domain = SpectralDomain::schrodinger(lo, hi)?;
    Ok(match choice {
        BackendChoice::Newton => FunMatBackend::NewtonCheb(domain),
        _ => FunMatBackend::ChebSeries(domain),
    })
}

/// Equal steps as close to `dt` as the interval allows.
pub fn step_count(problem: &Problem, dt: f64) -> usize {
    (((problem.t_final - problem.t_start) / dt).round() as usize).max(1)
}

pub fn run_method(problem: &Problem, method: &MethodSpec, dt: f64, eps: f64, single_iter: bool) -> Result<RunOutcome> {
    let counted = CountingGenerator::new(problem.generator.as_ref());
    let n = step_count(problem, dt);
    let (t0, t1) = (problem.t_start, problem.t_final);
    let result = match method {
        MethodSpec::SemiGlobal { m, k, backend: choice } => {
            let mut plan = TimeStepPlan::equidistant(t0, t1, n, *m, *k, backend(*choice, problem)?)?
                .with_tolerance(eps)
                .with_mode(if single_iter {
                    IterationMode::SingleAfterFirst
                } else {
                    IterationMode::Converge
                });
            plan.estimate_errors = false;
            propagate(&problem.initial, &counted, &plan).map(|r| {
                let status = if r.is_flagged() { RunStatus::FmUnstable } else { RunStatus::Ok };
                (r.final_state, status)
            })
        }
        MethodSpec::Rk4 | MethodSpec::Euler => {
            let plan = FixedStepPlan::covering(t0, t1, n)?;
            let march = if *method == MethodSpec::Rk4 { rk4_propagate } else { euler_propagate };
            march(&problem.initial, &counted, &plan).map(|tr| (tr.final_state, RunStatus::Ok))
        }
    };
    let applications = counted.count();
    match result {
        Ok((state, status)) => Ok(RunOutcome {
            final_state: Some(state),
            applications,
            status,
        }),
        Err(semiglobal::Error::Divergence { .. }) => Ok(RunOutcome {
            final_state: None,
            applications,
            status: RunStatus::Divergent,
        }),
        Err(semiglobal::Error::NonConvergence { .. }) => Ok(RunOutcome {
            final_state: None,
            applications,
            status: RunStatus::NonConvergent,
        }),
        Err(e) => Err(e.into()),
    }
}
