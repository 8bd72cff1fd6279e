use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use semiglobal::propagator::Generator;
use semiglobal::CVector;
use semiglobal_atom1d::AtomModel;
use serde::Deserialize;

use crate::config::ProblemSpec;
use crate::error::{BenchError, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A concrete initial-value problem ready for propagation.
pub struct Problem {
    pub generator: Box<dyn Generator + Send>,
    pub initial: CVector,
    pub t_start: f64,
    pub t_final: f64,
    /// Exact final state, when known in closed form.
    pub exact: Option<CVector>,
    /// Real energy range of `H = iG` for the polynomial backends.
    pub energy_bounds: Option<(f64, f64)>,
}

/// `G = −i(σz + c·cos(t)·σx)`
pub struct TwoLevel {
    pub coupling: f64,
}

impl Generator for TwoLevel {
    fn dim(&self) -> usize {
        2
    }

    fn apply(&self, _u: &CVector, t: f64, w: &CVector) -> CVector {
        let x = self.coupling * t.cos();
        CVector::from_vec(vec![-I * (w[0] + w[1] * x), -I * (w[0] * x - w[1])])
    }

    fn diag_difference(&self, _u1: &CVector, t1: f64, _u2: &CVector, t2: f64, w: &CVector) -> Option<CVector> {
        let dx = self.coupling * (t1.cos() - t2.cos());
        Some(CVector::from_vec(vec![-I * w[1] * dx, -I * w[0] * dx]))
    }

    fn is_hermitian_generator(&self) -> bool {
        true
    }
}

/// `du/dt = λu + a·e^{iωt}`
pub struct ForcedScalar {
    pub lambda: Complex64,
    pub amplitude: f64,
    pub omega: f64,
}

impl ForcedScalar {
    /// `u(t)` from `u(0) = 1`.
    pub fn exact(&self, t: f64) -> Complex64 {
        let decay = (self.lambda * t).exp();
        let gap = I * self.omega - self.lambda;
        let forced = if gap.norm() < 1e-12 {
            decay * t
        } else {
            ((I * self.omega * t).exp() - decay) / gap
        };
        decay + forced * self.amplitude
    }
}

impl Generator for ForcedScalar {
    fn dim(&self) -> usize {
        1
    }

    fn apply(&self, _u: &CVector, _t: f64, w: &CVector) -> CVector {
        w * self.lambda
    }

    fn source(&self, t: f64) -> Option<CVector> {
        (self.amplitude != 0.0).then(|| CVector::from_element(1, (I * self.omega * t).exp() * self.amplitude))
    }

    fn diag_difference(&self, _u1: &CVector, _t1: f64, _u2: &CVector, _t2: f64, w: &CVector) -> Option<CVector> {
        Some(CVector::zeros(w.len()))
    }

    fn is_hermitian_generator(&self) -> bool {
        self.lambda.re == 0.0
    }
}

/// Constant dense generator.
pub struct DenseGenerator {
    pub matrix: DMatrix<Complex64>,
}

impl Generator for DenseGenerator {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply(&self, _u: &CVector, _t: f64, w: &CVector) -> CVector {
        &self.matrix * w
    }

    fn diag_difference(&self, _u1: &CVector, _t1: f64, _u2: &CVector, _t2: f64, w: &CVector) -> Option<CVector> {
        Some(CVector::zeros(w.len()))
    }
}

/// Layout of a custom problem file. Complex numbers are `[re, im]` pairs and
/// the generator is given row by row.
#[derive(Debug, Deserialize)]
struct CustomFile {
    generator: Vec<Vec<[f64; 2]>>,
    initial: Vec<[f64; 2]>,
    #[serde(default)]
    t_start: f64,
    t_final: f64,
}

fn load_custom(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    let data = |message: String| BenchError::Data {
        path: path.display().to_string(),
        message,
    };
    let file: CustomFile = serde_json::from_str(&text).map_err(|e| data(e.to_string()))?;
    let n = file.initial.len();
    if n == 0 || file.generator.len() != n || file.generator.iter().any(|r| r.len() != n) {
        return Err(data(format!("generator must be {n}×{n} to match the initial state")));
    }
    if !(file.t_final > file.t_start) {
        return Err(data("t_final must exceed t_start".into()));
    }
    let c = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
    let matrix = DMatrix::from_fn(n, n, |i, j| c(&file.generator[i][j]));
    let initial = CVector::from_iterator(n, file.initial.iter().map(c));
    let exact = (&matrix * Complex64::new(file.t_final - file.t_start, 0.0)).exp() * &initial;
    let h = &matrix * I;
    let energy_bounds = if (&h - h.adjoint()).norm() <= 1e-12 * h.norm().max(1.0) {
        let e = h.symmetric_eigen().eigenvalues;
        let (lo, hi) = (e.min(), e.max());
        let pad = 1e-3 * (hi - lo).max(1.0);
        Some((lo - pad, hi + pad))
    } else {
        None
    };
    Ok(Problem {
        generator: Box::new(DenseGenerator { matrix }),
        initial,
        t_start: file.t_start,
        t_final: file.t_final,
        exact: Some(exact),
        energy_bounds,
    })
}

impl Problem {
    pub fn build(spec: &ProblemSpec) -> Result<Self> {
        match spec {
            ProblemSpec::Atom1d { absorber } => {
                let model = AtomModel::benchmark(absorber)?;
                let initial = model.ground_state().state;
                Ok(Problem {
                    initial,
                    t_start: 0.0,
                    t_final: model.pulse().t_final,
                    exact: None,
                    energy_bounds: Some(model.energy_bounds()),
                    generator: Box::new(model),
                })
            }
            ProblemSpec::TwoLevel { coupling, t_final } => {
                let r = (1.0 + coupling * coupling).sqrt() * 1.01;
                Ok(Problem {
                    generator: Box::new(TwoLevel { coupling: *coupling }),
                    initial: CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
                    t_start: 0.0,
                    t_final: *t_final,
                    exact: None,
                    energy_bounds: Some((-r, r)),
                })
            }
            ProblemSpec::ForcedScalar {
                lambda,
                amplitude,
                omega,
                t_final,
            } => {
                let g = ForcedScalar {
                    lambda: Complex64::new(lambda[0], lambda[1]),
                    amplitude: *amplitude,
                    omega: *omega,
                };
                let h = -lambda[1];
                Ok(Problem {
                    exact: Some(CVector::from_element(1, g.exact(*t_final))),
                    generator: Box::new(g),
                    initial: CVector::from_element(1, Complex64::new(1.0, 0.0)),
                    t_start: 0.0,
                    t_final: *t_final,
                    energy_bounds: (lambda[0] == 0.0).then_some((h - 1.0, h + 1.0)),
                })
            }
            ProblemSpec::Custom { path } => load_custom(path),
        }
    }
}
