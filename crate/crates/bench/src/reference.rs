use std::path::{Path, PathBuf};

use num_complex::Complex64;
use semiglobal::CVector;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{BackendChoice, MethodSpec, ProblemSpec, ReferenceSpec};
use crate::error::{BenchError, Result};
use crate::problem::Problem;
use crate::run::{run_method, RunStatus};
use semiglobal_atom1d::AbsorberSource;

/// Environment variable naming the reference cache directory.
pub const CACHE_DIR_VAR: &str = "SEMIGLOBAL_CACHE_DIR";
/// Parameters of the numerical reference run.
pub const REFERENCE_M: usize = 9;
pub const REFERENCE_K: usize = 13;
pub const REFERENCE_DT: f64 = 1.0 / 30.0;
const REFERENCE_EPS: f64 = 1e-13;

/// On-disk layout of a reference solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceFile {
    pub key: String,
    pub state: Vec<[f64; 2]>,
}

impl ReferenceFile {
    fn from_state(key: String, state: &CVector) -> Self {
        Self {
            key,
            state: state.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    fn to_state(&self) -> CVector {
        CVector::from_iterator(self.state.len(), self.state.iter().map(|p| Complex64::new(p[0], p[1])))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| BenchError::Data {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).expect("reference serializes");
        // Write then rename, so concurrent readers never see a partial file.
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, text).map_err(|e| BenchError::io(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| BenchError::io(path, e))
    }
}

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("semiglobal-cache"))
}

/// Hash of everything the reference solution depends on, including the
/// contents of any files the problem reads.
pub fn problem_key(spec: &ProblemSpec) -> Result<String> {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION"));
    h.update(serde_json::to_vec(spec).expect("problem serializes"));
    h.update(format!("{REFERENCE_M}/{REFERENCE_K}/{REFERENCE_DT:e}/{REFERENCE_EPS:e}"));
    let file = match spec {
        ProblemSpec::Atom1d {
            absorber: AbsorberSource::File(p),
        } => Some(p),
        ProblemSpec::Custom { path } => Some(path),
        _ => None,
    };
    if let Some(p) = file {
        h.update(std::fs::read(p).map_err(|e| BenchError::io(p, e))?);
    }
    Ok(hex::encode(h.finalize()))
}

fn compute(problem: &Problem) -> Result<CVector> {
    let method = MethodSpec::SemiGlobal {
        m: REFERENCE_M,
        k: REFERENCE_K,
        backend: BackendChoice::Arnoldi,
    };
    let out = run_method(problem, &method, REFERENCE_DT, REFERENCE_EPS, false)?;
    match (out.status, out.final_state) {
        (RunStatus::Ok, Some(u)) => Ok(u),
        (status, _) => Err(BenchError::Divergence(format!("reference run ended as {status:?}"))),
    }
}

/// The reference final state for `spec`, reading or filling the cache.
pub fn reference_state(spec: &ProblemSpec, problem: &Problem, which: &ReferenceSpec) -> Result<CVector> {
    let state = match which {
        ReferenceSpec::File(path) => ReferenceFile::read(path)?.to_state(),
        ReferenceSpec::Auto => match &problem.exact {
            Some(u) => u.clone(),
            None => {
                let key = problem_key(spec)?;
                let dir = cache_dir();
                let path = dir.join(format!("{key}.json"));
                match ReferenceFile::read(&path) {
                    Ok(f) if f.key == key && f.state.len() == problem.initial.len() => f.to_state(),
                    _ => {
                        let u = compute(problem)?;
                        std::fs::create_dir_all(&dir).map_err(|e| BenchError::io(&dir, e))?;
                        ReferenceFile::from_state(key, &u).write(&path)?;
                        u
                    }
                }
            }
        },
    };
    if state.len() != problem.initial.len() {
        return Err(BenchError::Config(format!(
            "reference has length {}, the problem has dimension {}",
            state.len(),
            problem.initial.len()
        )));
    }
    Ok(state)
}
