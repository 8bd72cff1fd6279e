use std::path::PathBuf;

use semiglobal_atom1d::AbsorberSource;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProblemSpec {
    /// The 768-point atom in the full laser pulse, starting from the
    /// field-free ground state.
    Atom1d { absorber: AbsorberSource },
    /// `H = σz + c·cos(t)·σx` from the upper state.
    TwoLevel { coupling: f64, t_final: f64 },
    /// `du/dt = λu + a·e^{iωt}`, `u(0) = 1`.
    ForcedScalar {
        lambda: [f64; 2],
        amplitude: f64,
        omega: f64,
        t_final: f64,
    },
    /// Time-independent dense system read from a JSON file.
    Custom { path: PathBuf },
}

impl ProblemSpec {
    pub fn atom1d() -> Self {
        ProblemSpec::Atom1d {
            absorber: AbsorberSource::default(),
        }
    }

    pub fn two_level() -> Self {
        ProblemSpec::TwoLevel {
            coupling: 0.2,
            t_final: 20.0,
        }
    }

    /// `du/dt = −iu` over `[0, 1]`.
    pub fn free_scalar() -> Self {
        ProblemSpec::ForcedScalar {
            lambda: [0.0, -1.0],
            amplitude: 0.0,
            omega: 0.0,
            t_final: 1.0,
        }
    }
}

/// Function-of-matrix backend of the semi-global method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BackendChoice {
    Arnoldi,
    Newton,
    Chebyshev,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MethodSpec {
    SemiGlobal {
        m: usize,
        k: usize,
        backend: BackendChoice,
    },
    Rk4,
    Euler,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceSpec {
    /// Closed form when the problem has one, otherwise a cached semi-global
    /// run with `M = 9`, `K = 13`, `Δt = 1/30`.
    Auto,
    /// Final state stored as JSON.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub problem: ProblemSpec,
    pub method: MethodSpec,
    /// Strictly decreasing.
    pub dt_list: Vec<f64>,
    /// Convergence tolerance of the semi-global iteration.
    pub eps: f64,
    /// Converge the first step only, then iterate once per step.
    pub single_iter: bool,
    pub reference: ReferenceSpec,
    /// Inclusive `Δt` range used for the slope fit.
    pub fit_range: Option<[f64; 2]>,
}

impl BenchConfig {
    pub fn new(problem: ProblemSpec, method: MethodSpec, dt_list: Vec<f64>) -> Self {
        Self {
            problem,
            method,
            dt_list,
            eps: 1e-10,
            single_iter: true,
            reference: ReferenceSpec::Auto,
            fit_range: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(BenchError::Config(m));
        if self.dt_list.is_empty() {
            return bad("the Δt list is empty".into());
        }
        if self.dt_list.iter().any(|dt| !(*dt > 0.0) || !dt.is_finite()) {
            return bad("every Δt must be positive and finite".into());
        }
        if self.dt_list.windows(2).any(|w| w[1] >= w[0]) {
            return bad("the Δt list must be strictly decreasing".into());
        }
        if !(self.eps > 0.0) {
            return bad(format!("ε = {} must be positive", self.eps));
        }
        if let MethodSpec::SemiGlobal { m, k, .. } = self.method {
            if !(2..=20).contains(&m) || !(1..=40).contains(&k) {
                return bad(format!("M = {m}, K = {k} outside M ∈ [2, 20], K ∈ [1, 40]"));
            }
        }
        if let Some([lo, hi]) = self.fit_range {
            if !(lo > 0.0 && lo <= hi) {
                return bad(format!("fit range [{lo}, {hi}] is empty"));
            }
        }
        match &self.problem {
            ProblemSpec::TwoLevel { t_final, .. } | ProblemSpec::ForcedScalar { t_final, .. } if !(*t_final > 0.0) => {
                bad(format!("final time {t_final} must be positive"))
            }
            _ => Ok(()),
        }
    }
}
