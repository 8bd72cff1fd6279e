//! Fixed-step Euler and classical RK4 over the [`Generator`] trait.

use num_complex::Complex64;

use crate::error::{contract, Error, Result};
use crate::propagator::{CountingGenerator, Generator};
use crate::sample::CVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedStepPlan {
    pub t_start: f64,
    pub dt: f64,
    pub n_steps: usize,
    /// Record every `stride`-th state (0 records only the final state).
    pub stride: usize,
}

impl FixedStepPlan {
    /// `n_steps` steps of equal length covering `[t_start, t_end]`.
    pub fn covering(t_start: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if n_steps == 0 || !(t_end > t_start) {
            return Err(contract("fixed-step plan needs n_steps > 0 and t_end > t_start"));
        }
        Ok(Self {
            t_start,
            dt: (t_end - t_start) / n_steps as f64,
            n_steps,
            stride: 0,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVector>,
    pub final_state: CVector,
    pub applications: u64,
}

/// `g(u,t) = G(u,t)u + s(t)`
fn rhs(gen: &dyn Generator, u: &CVector, t: f64) -> CVector {
    let mut g = gen.apply(u, t, u);
    if let Some(s) = gen.source(t) {
        g += s;
    }
    g
}

pub fn euler_step(u: &CVector, t: f64, dt: f64, gen: &dyn Generator) -> CVector {
    u + rhs(gen, u, t) * Complex64::new(dt, 0.0)
}

pub fn rk4_step(u: &CVector, t: f64, dt: f64, gen: &dyn Generator) -> CVector {
    let h = Complex64::new(dt, 0.0);
    let half = Complex64::new(0.5, 0.0);
    let k1 = rhs(gen, u, t) * h;
    let k2 = rhs(gen, &(u + &k1 * half), t + dt / 2.0) * h;
    let k3 = rhs(gen, &(u + &k2 * half), t + dt / 2.0) * h;
    let k4 = rhs(gen, &(u + &k3), t + dt) * h;
    u + (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) / Complex64::new(6.0, 0.0)
}

type Stepper = fn(&CVector, f64, f64, &dyn Generator) -> CVector;

fn march(u0: &CVector, gen: &dyn Generator, plan: &FixedStepPlan, step: Stepper) -> Result<Trajectory> {
    if !(plan.dt > 0.0) {
        return Err(contract("Δt must be positive"));
    }
    let counted = CountingGenerator::new(gen);
    let mut u = u0.clone();
    let mut times = vec![plan.t_start];
    let mut states = vec![u0.clone()];
    for n in 0..plan.n_steps {
        let t = plan.t_start + n as f64 * plan.dt;
        u = step(&u, t, plan.dt, &counted);
        if !u.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Divergence {
                step: n,
                iteration: 0,
                reason: "non-finite state".into(),
            });
        }
        if plan.stride > 0 && (n + 1) % plan.stride == 0 {
            times.push(plan.t_start + (n + 1) as f64 * plan.dt);
            states.push(u.clone());
        }
    }
    Ok(Trajectory {
        times,
        states,
        final_state: u,
        applications: counted.count(),
    })
}

pub fn rk4_propagate(u0: &CVector, gen: &dyn Generator, plan: &FixedStepPlan) -> Result<Trajectory> {
    march(u0, gen, plan, rk4_step)
}

pub fn euler_propagate(u0: &CVector, gen: &dyn Generator, plan: &FixedStepPlan) -> Result<Trajectory> {
    march(u0, gen, plan, euler_step)
}
