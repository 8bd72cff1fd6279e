use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{AtomError, Result};
use crate::grid::FourierGrid1D;

/// Distance from the origin where the absorbing layers begin.
pub const ABSORBER_START: f64 = 200.0;
/// Thickness of each absorbing layer.
pub const ABSORBER_LENGTH: f64 = 40.0;
/// Strength of the default quartic ramp, chosen with the wave-packet
/// scattering test in `tests/absorber.rs`.
pub const FALLBACK_ETA: f64 = 0.4;

/// Where the absorbing potential comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AbsorberSource {
    /// Text file with one `Re Im` line per boundary point of the right layer,
    /// ordered by distance from the layer start.
    File(PathBuf),
    /// `Re = Σ aₙ cos(n k₀ Δx)`, `Im = −(Σ bₙ cos(n k₀ Δx))²` with `k₀ = π/40`.
    Cosine { re: Vec<f64>, im: Vec<f64> },
    /// `−iη((|x| − 200)/40)⁴`
    Fallback { eta: f64 },
    None,
}

impl Default for AbsorberSource {
    fn default() -> Self {
        AbsorberSource::Fallback { eta: FALLBACK_ETA }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Profile {
    Table(Vec<Complex64>),
    Cosine { re: Vec<f64>, im: Vec<f64> },
    Quartic { eta: f64 },
    Zero,
}

/// Absorbing potential of the right layer as a function of `Δx = |x| − 200`.
/// The left layer is its mirror image.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorbingPotential {
    profile: Profile,
}

fn parse_table(text: &str, path: &Path) -> Result<Vec<Complex64>> {
    let bad = |line: usize, msg: &str| AtomError::Absorber(format!("{}:{line}: {msg}", path.display()));
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let mut it = l.split_whitespace().map(str::parse::<f64>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(re)), Some(Ok(im)), None) if re.is_finite() && im.is_finite() => Ok(Complex64::new(re, im)),
                _ => Err(bad(i + 1, "expected two finite numbers")),
            }
        })
        .collect()
}

impl AbsorbingPotential {
    pub fn load_or_build(source: &AbsorberSource) -> Result<Self> {
        let profile = match source {
            AbsorberSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| AtomError::Io {
                    path: path.display().to_string(),
                    source: e,
                })?;
                Profile::Table(parse_table(&text, path)?)
            }
            AbsorberSource::Cosine { re, im } => {
                if re.iter().chain(im).any(|c| !c.is_finite()) {
                    return Err(AtomError::Absorber("non-finite cosine coefficient".into()));
                }
                Profile::Cosine {
                    re: re.clone(),
                    im: im.clone(),
                }
            }
            AbsorberSource::Fallback { eta } => {
                if !(*eta >= 0.0) || !eta.is_finite() {
                    return Err(AtomError::Absorber(format!("fallback strength {eta} must be non-negative")));
                }
                Profile::Quartic { eta: *eta }
            }
            AbsorberSource::None => Profile::Zero,
        };
        let pot = Self { profile };
        if let Profile::Table(t) = &pot.profile {
            if let Some(k) = t.iter().position(|v| v.im > 0.0) {
                return Err(AtomError::Absorber(format!("point {k} has a positive imaginary part")));
            }
        }
        Ok(pot)
    }

    pub fn is_zero(&self) -> bool {
        match &self.profile {
            Profile::Zero => true,
            Profile::Quartic { eta } => *eta == 0.0,
            Profile::Cosine { re, im } => re.iter().chain(im).all(|&c| c == 0.0),
            Profile::Table(t) => t.iter().all(|v| *v == Complex64::new(0.0, 0.0)),
        }
    }

    /// Value at distance `d ≥ 0` into the layer; `k` is the grid index of that
    /// distance, used by tabulated potentials.
    fn value(&self, d: f64, k: usize) -> Complex64 {
        match &self.profile {
            Profile::Zero => Complex64::new(0.0, 0.0),
            Profile::Quartic { eta } => Complex64::new(0.0, -eta * (d / ABSORBER_LENGTH).powi(4)),
            Profile::Cosine { re, im } => {
                let k0 = PI / ABSORBER_LENGTH;
                let series = |c: &[f64]| -> f64 {
                    c.iter().enumerate().map(|(n, a)| a * (n as f64 * k0 * d).cos()).sum()
                };
                let s = series(im);
                Complex64::new(series(re), -s * s)
            }
            // The left layer has one point more than the right one (the grid
            // is half-open); it reuses the outermost tabulated value.
            Profile::Table(t) => t[k.min(t.len() - 1)],
        }
    }

    /// The potential on every grid point; zero for `|x| < 200`.
    pub fn on_grid(&self, grid: &FourierGrid1D) -> Result<Vec<Complex64>> {
        let dx = grid.dx();
        if let Profile::Table(t) = &self.profile {
            let expected = (ABSORBER_LENGTH / dx).round() as usize;
            if t.len() != expected {
                return Err(AtomError::Absorber(format!(
                    "table has {} points, the grid needs {expected}",
                    t.len()
                )));
            }
        }
        Ok(grid
            .points()
            .into_iter()
            .map(|x| {
                let d = x.abs() - ABSORBER_START;
                if d < -1e-9 * dx {
                    Complex64::new(0.0, 0.0)
                } else {
                    let d = d.max(0.0);
                    self.value(d, (d / dx).round() as usize)
                }
            })
            .collect())
    }
}
