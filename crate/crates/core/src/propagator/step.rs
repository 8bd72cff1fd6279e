use num_complex::Complex64;

use super::generator::Generator;
use super::plan::{StepSpec, TimeBasis, TimeStepPlan};
use crate::cheb::{cheb_coeffs, cheb_nodes, ChebCoeffs, ChebKind, Interval};
use crate::error::Result;
use crate::funmat::{Expansion, FunMatValue};
use crate::newton::{divided_differences_real, NewtonTable};
use crate::operator::OperatorHandle;
use crate::remainder::tilde_f;
use crate::sample::CVector;
use crate::taylor::{newton_to_taylor_matrix, ConversionCache};

enum TimeInterpolant {
    Cheb(ChebCoeffs<CVector>),
    Newton(NewtonTable<CVector>),
}

impl TimeInterpolant {
    fn eval(&self, tau: f64) -> CVector {
        match self {
            TimeInterpolant::Cheb(c) => c.eval(tau).value,
            TimeInterpolant::Newton(t) => t.eval_real(tau),
        }
    }
}

/// State of one time step across its iterations.
pub(crate) struct StepWorkspace {
    spec: StepSpec,
    /// Offsets of the nodes from the step start.
    tau: Vec<f64>,
    t0: f64,
    u: Vec<CVector>,
    v: Vec<CVector>,
    expansion: Option<Expansion>,
    interp: Option<TimeInterpolant>,
    u_mid: CVector,
    t_mid: f64,
    metric: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        a
    }
}

/// `s(t) + [G(u,t) − G(u_mid,t_mid)]u`, or exactly `s(t_mid)` at the midpoint.
fn s_ext(
    gen: &dyn Generator,
    u: &CVector,
    t: f64,
    u_mid: &CVector,
    t_mid: f64,
    is_mid: bool,
) -> CVector {
    let mut s = gen.source(t).unwrap_or_else(|| CVector::zeros(u.len()));
    if !is_mid {
        match gen.diag_difference(u, t, u_mid, t_mid, u) {
            Some(d) => s += d,
            None => {
                s += gen.apply(u, t, u);
                s -= gen.apply(u_mid, t_mid, u);
            }
        }
    }
    s
}

impl StepWorkspace {
    pub(crate) fn new(nodes: Vec<f64>, guess: Vec<CVector>, mut spec: StepSpec) -> Self {
        let t0 = nodes[0];
        let tau: Vec<f64> = nodes.iter().map(|t| t - t0).collect();
        // The grid's own length, which can differ from the nominal Δt by
        // the rounding of the boundaries.
        spec.dt = tau[tau.len() - 1];
        let mid = spec.m / 2;
        Self {
            spec,
            t0,
            u_mid: guess[mid].clone(),
            t_mid: nodes[mid],
            tau,
            v: Vec::new(),
            expansion: None,
            interp: None,
            u: guess,
            metric: f64::INFINITY,
        }
    }

    pub(crate) fn edge(&self) -> &CVector {
        self.u.last().expect("step has nodes")
    }

    pub(crate) fn last_metric(&self) -> f64 {
        self.metric
    }

    /// One fixed-point iteration; returns the convergence metric.
    pub(crate) fn iterate(
        &mut self,
        gen: &dyn Generator,
        plan: &TimeStepPlan,
        cache: &mut ConversionCache,
    ) -> Result<f64> {
        let m = self.spec.m;
        let dt = self.spec.dt;
        let mid = m / 2;
        self.u_mid = self.u[mid].clone();
        let t_mid = self.t_mid;

        let s: Vec<CVector> = (0..m)
            .map(|l| s_ext(gen, &self.u[l], self.t0 + self.tau[l], &self.u_mid, t_mid, l == mid))
            .collect();

        let s_tilde = match plan.time_basis {
            TimeBasis::Chebyshev => {
                let grid = cheb_nodes(ChebKind::Lobatto, m, Interval::new(0.0, dt)?, true)?;
                let c = cheb_coeffs(&s, &grid)?;
                let st = cache.cheb(0.0, dt, m, true)?.apply(c.coeffs())?;
                self.interp = Some(TimeInterpolant::Cheb(c));
                st
            }
            TimeBasis::Newton => {
                let table = divided_differences_real(&self.tau, &s, 4.0 / dt)?;
                let q = newton_to_taylor_matrix(&self.tau, dt, m, true)?;
                let st = q.apply(table.coefficients())?;
                self.interp = Some(TimeInterpolant::Newton(table));
                st
            }
        };

        let u_mid = &self.u_mid;
        let op = OperatorHandle::new(gen.dim(), move |w| gen.apply(u_mid, t_mid, w));
        let mut v = Vec::with_capacity(m + 1);
        v.push(self.u[0].clone());
        for j in 1..=m {
            let mut next = op.apply(&v[j - 1]);
            next += &s_tilde[j - 1];
            next /= Complex64::new(j as f64, 0.0);
            v.push(next);
        }
        let expansion = Expansion::prepare(&plan.backend, &op, &v[m], self.spec.k)?;
        drop(op);
        self.expansion = Some(expansion);
        self.v = v;

        let old_edge = self.u[m - 1].clone();
        for l in 1..m {
            self.u[l] = self.solution_at(self.tau[l])?;
        }
        let diff = (&self.u[m - 1] - &old_edge).norm();
        let scale = if old_edge.norm() > 0.0 {
            old_edge.norm()
        } else {
            self.u[m - 1].norm()
        };
        self.metric = rel(diff, scale);
        Ok(self.metric)
    }

    /// `f̃_M(G̃,τ)ṽ_M + Σ_{j<M} τ^j ṽ_j` together with the function-of-matrix part.
    fn solution_parts(&self, tau: f64) -> Result<(CVector, FunMatValue)> {
        let m = self.spec.m;
        let exp = self.expansion.as_ref().expect("iterate() runs before evaluation");
        let fm = exp.eval(&|z| tilde_f(m, z, tau))?;
        let mut acc = self.v[m - 1].clone();
        for j in (0..m - 1).rev() {
            acc *= Complex64::new(tau, 0.0);
            acc += &self.v[j];
        }
        Ok((acc + &fm.u, fm))
    }

    pub(crate) fn solution_at(&self, tau: f64) -> Result<CVector> {
        Ok(self.solution_parts(tau)?.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepErrors {
    pub e_conv: f64,
    pub e_int_rel: Option<f64>,
    pub e_fm_rel: f64,
    pub fm_stability_ratio: f64,
}

/// Error estimates of the step after its last iteration.
pub(crate) fn estimate_step_errors(
    ws: &StepWorkspace,
    gen: &dyn Generator,
    with_int: bool,
) -> Result<StepErrors> {
    let m = ws.spec.m;
    let edge_tau = ws.tau[m - 1];
    let (edge, fm) = ws.solution_parts(edge_tau)?;
    let edge_norm = edge.norm();
    let e_int_rel = if with_int {
        let mid = m / 2;
        let neighbour = if mid + 1 < m { mid + 1 } else { mid - 1 };
        let tau_max = 0.5 * (ws.tau[mid] + ws.tau[neighbour]);
        let u_max = ws.solution_at(tau_max)?;
        let exact = s_ext(gen, &u_max, ws.t0 + tau_max, &ws.u_mid, ws.t_mid, false);
        let interp = ws.interp.as_ref().expect("iterate() runs first").eval(tau_max);
        Some(rel((interp - exact).norm() * ws.spec.dt, edge_norm))
    } else {
        None
    };
    Ok(StepErrors {
        e_conv: ws.metric,
        e_int_rel,
        e_fm_rel: rel(fm.error, edge_norm),
        fm_stability_ratio: fm.relative_error(),
    })
}
