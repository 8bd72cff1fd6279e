//! Error-decay benchmarks: sweep the time step of a propagation method,
//! measure the final-state error against a reference and fit the slope of
//! error against operator applications on a log-log scale.

pub mod cli;
pub mod config;
pub mod emit;
pub mod error;
pub mod fit;
pub mod problem;
pub mod reference;
pub mod run;
pub mod sweep;

pub use config::{BackendChoice, BenchConfig, MethodSpec, ProblemSpec, ReferenceSpec};
pub use emit::{emit_results, parse_config, Format};
pub use error::{BenchError, Result};
pub use fit::{fit_linear_region, Fit};
pub use problem::Problem;
pub use run::{run_method, RunOutcome, RunStatus};
pub use sweep::{run_sweep, DecayCurve, Row};
