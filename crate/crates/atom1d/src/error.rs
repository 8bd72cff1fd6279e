use thiserror::Error;

#[derive(Debug, Error)]
pub enum AtomError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("quadrature did not reach {target:e} on [{a}, {b}] (estimate {estimate:e})")]
    Quadrature { a: f64, b: f64, target: f64, estimate: f64 },
    #[error("absorbing potential: {0}")]
    Absorber(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, AtomError>;
