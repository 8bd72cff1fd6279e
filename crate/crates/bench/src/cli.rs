use std::path::PathBuf;

use clap::{ArgAction, Parser, ValueEnum};
use semiglobal_atom1d::AbsorberSource;

use crate::config::{BackendChoice, BenchConfig, MethodSpec, ProblemSpec, ReferenceSpec};
use crate::emit::{parse_config, Format};
use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemChoice {
    Atom1d,
    TwoLevel,
    ForcedScalar,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Sg,
    Rk4,
    Euler,
}

/// Error-decay sweeps for the semi-global propagator and fixed-step baselines.
#[derive(Debug, Parser)]
#[command(name = "semiglobal-bench", version)]
pub struct Cli {
    /// Start from a JSON configuration (or results document); other flags
    /// given explicitly override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "atom1d")]
    pub problem: ProblemChoice,
    /// Problem file for `--problem custom`.
    #[arg(long)]
    pub problem_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "sg")]
    pub method: MethodChoice,
    #[arg(long = "M", default_value_t = 7)]
    pub m: usize,
    #[arg(long = "K", default_value_t = 7)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "arnoldi")]
    pub backend: BackendChoice,
    /// Comma-separated, strictly decreasing time steps.
    #[arg(long, value_delimiter = ',')]
    pub dt_list: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-10)]
    pub eps: f64,
    /// Converge only the first step and iterate once per step afterwards.
    #[arg(long, action = ArgAction::Set, default_value_t = true)]
    pub single_iter: bool,
    /// `auto` or the path of a reference-solution JSON file.
    #[arg(long, default_value = "auto")]
    pub reference: String,
    /// `fallback`, `none`, or the path of a two-column absorber table.
    #[arg(long, default_value = "fallback")]
    pub absorber: String,
    /// Final time for the two-level and scalar problems.
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Fit only rows with Δt in `LO:HI`.
    #[arg(long)]
    pub fit_range: Option<String>,
}

fn parse_range(s: &str) -> Result<[f64; 2]> {
    let bad = || BenchError::Config(format!("fit range `{s}` is not of the form LO:HI"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Ok([lo.min(hi), lo.max(hi)])
}

fn absorber(s: &str) -> AbsorberSource {
    match s {
        "fallback" => AbsorberSource::default(),
        "none" => AbsorberSource::None,
        path => AbsorberSource::File(path.into()),
    }
}

/// Default sweep for each problem and method.
fn default_dt_list(problem: &ProblemSpec, method: &MethodSpec) -> Vec<f64> {
    match (problem, method) {
        (ProblemSpec::Atom1d { .. }, MethodSpec::SemiGlobal { .. }) => vec![0.2, 0.16, 0.125, 0.1, 0.08, 0.0625, 0.05, 0.04],
        (ProblemSpec::Atom1d { .. }, MethodSpec::Rk4) => vec![0.04, 0.03, 0.02, 0.015, 0.01, 0.007, 0.005],
        (ProblemSpec::Atom1d { .. }, _) => vec![0.002, 0.001, 0.0005, 0.00025],
        (_, MethodSpec::SemiGlobal { .. }) => vec![2.0, 1.0, 0.5, 0.25, 0.125],
        _ => vec![0.1, 0.05, 0.025, 0.0125, 0.00625],
    }
}

impl Cli {
    pub fn into_config(self, matches: &clap::ArgMatches) -> Result<BenchConfig> {
        let given = |id: &str| matches.value_source(id) == Some(clap::parser::ValueSource::CommandLine);
        let base = match &self.config {
            Some(p) => Some(parse_config(
                &std::fs::read_to_string(p).map_err(|e| BenchError::io(p, e))?,
            )?),
            None => None,
        };
        let problem = match (&base, given("problem") || given("absorber") || given("t_final") || given("problem_file")) {
            (Some(b), false) => b.problem.clone(),
            _ => match self.problem {
                ProblemChoice::Atom1d => ProblemSpec::Atom1d {
                    absorber: absorber(&self.absorber),
                },
                ProblemChoice::TwoLevel => match ProblemSpec::two_level() {
                    ProblemSpec::TwoLevel { coupling, t_final } => ProblemSpec::TwoLevel {
                        coupling,
                        t_final: self.t_final.unwrap_or(t_final),
                    },
                    _ => unreachable!(),
                },
                ProblemChoice::ForcedScalar => ProblemSpec::ForcedScalar {
                    lambda: [0.0, -1.0],
                    amplitude: 0.0,
                    omega: 0.0,
                    t_final: self.t_final.unwrap_or(1.0),
                },
                ProblemChoice::Custom => ProblemSpec::Custom {
                    path: self
                        .problem_file
                        .clone()
                        .ok_or_else(|| BenchError::Config("--problem custom needs --problem-file".into()))?,
                },
            },
        };
        let override_method = given("method") || given("m") || given("k") || given("backend");
        let method = match (&base, override_method) {
            (Some(b), false) => b.method.clone(),
            _ => match self.method {
                MethodChoice::Sg => MethodSpec::SemiGlobal {
                    m: self.m,
                    k: self.k,
                    backend: self.backend,
                },
                MethodChoice::Rk4 => MethodSpec::Rk4,
                MethodChoice::Euler => MethodSpec::Euler,
            },
        };
        let dt_list = match (self.dt_list, &base) {
            (Some(l), _) => l,
            (None, Some(b)) => b.dt_list.clone(),
            (None, None) => default_dt_list(&problem, &method),
        };
        let mut config = base.clone().unwrap_or_else(|| BenchConfig::new(problem.clone(), method.clone(), vec![]));
        config.problem = problem;
        config.method = method;
        config.dt_list = dt_list;
        if base.is_none() || given("eps") {
            config.eps = self.eps;
        }
        if base.is_none() || given("single_iter") {
            config.single_iter = self.single_iter;
        }
        if base.is_none() || given("reference") {
            config.reference = match self.reference.as_str() {
                "auto" => ReferenceSpec::Auto,
                path => ReferenceSpec::File(path.into()),
            };
        }
        if let Some(r) = &self.fit_range {
            config.fit_range = Some(parse_range(r)?);
        }
        config.validate()?;
        Ok(config)
    }
}
