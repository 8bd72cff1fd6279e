use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use semiglobal::propagator::Generator;
use semiglobal::CVector;

use crate::absorber::{AbsorberSource, AbsorbingPotential};
use crate::error::Result;
use crate::grid::FourierGrid1D;
use crate::potential::{ModifiedPotential, SoftRect};
use crate::pulse::PulseField;

/// `H(t) = p²/2 + V_atom,mod(x) + V_abs(x) − x_mod(x)·ζ(t)` on a Fourier grid,
/// exposed as the generator `G = −iH`.
#[derive(Clone)]
pub struct AtomModel {
    grid: FourierGrid1D,
    pulse: PulseField,
    kinetic: Vec<f64>,
    v_atom: Vec<f64>,
    v_abs: Vec<Complex64>,
    x_mod: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for AtomModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AtomModel")
            .field("grid", &self.grid)
            .field("pulse", &self.pulse)
            .field("absorbing", &self.is_absorbing())
            .finish()
    }
}

/// Lowest eigenpair of the field-free Hamiltonian without absorber.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energies: [f64; 2],
    pub state: CVector,
}

impl GroundState {
    pub fn gap(&self) -> f64 {
        self.energies[1] - self.energies[0]
    }
}

impl AtomModel {
    pub fn new(grid: FourierGrid1D, pulse: PulseField, rect: SoftRect, absorber: &AbsorberSource) -> Result<Self> {
        let modified = ModifiedPotential::build(&grid, rect)?;
        let v_abs = AbsorbingPotential::load_or_build(absorber)?.on_grid(&grid)?;
        let mut planner = FftPlanner::new();
        Ok(Self {
            kinetic: grid.momenta().iter().map(|p| 0.5 * p * p).collect(),
            v_atom: modified.v_atom,
            x_mod: modified.x_mod,
            v_abs,
            forward: planner.plan_fft_forward(grid.len()),
            inverse: planner.plan_fft_inverse(grid.len()),
            grid,
            pulse,
        })
    }

    /// The 768-point benchmark model with the given absorber.
    pub fn benchmark(absorber: &AbsorberSource) -> Result<Self> {
        Self::new(FourierGrid1D::benchmark(), PulseField::default(), SoftRect::default(), absorber)
    }

    pub fn grid(&self) -> &FourierGrid1D {
        &self.grid
    }

    pub fn pulse(&self) -> &PulseField {
        &self.pulse
    }

    pub fn x_mod(&self) -> &[f64] {
        &self.x_mod
    }

    pub fn v_atom(&self) -> &[f64] {
        &self.v_atom
    }

    pub fn v_abs(&self) -> &[Complex64] {
        &self.v_abs
    }

    pub fn is_absorbing(&self) -> bool {
        self.v_abs.iter().any(|v| *v != Complex64::new(0.0, 0.0))
    }

    /// `p²/2·w` through the FFT.
    pub fn kinetic_apply(&self, w: &CVector) -> CVector {
        let mut buf: Vec<Complex64> = w.iter().copied().collect();
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.forward.get_inplace_scratch_len()];
        self.forward.process_with_scratch(&mut buf, &mut scratch);
        let norm = 1.0 / self.grid.len() as f64;
        for (b, k) in buf.iter_mut().zip(&self.kinetic) {
            *b *= k * norm;
        }
        scratch.resize(self.inverse.get_inplace_scratch_len(), Complex64::new(0.0, 0.0));
        self.inverse.process_with_scratch(&mut buf, &mut scratch);
        CVector::from_vec(buf)
    }

    /// Diagonal of the potential at field strength `zeta`.
    pub fn potential(&self, zeta: f64) -> Vec<Complex64> {
        (0..self.grid.len())
            .map(|j| self.v_abs[j] + (self.v_atom[j] - self.x_mod[j] * zeta))
            .collect()
    }

    /// `H·w` at field strength `zeta`.
    pub fn hamiltonian_apply(&self, w: &CVector, zeta: f64) -> CVector {
        let mut hw = self.kinetic_apply(w);
        for (j, h) in hw.iter_mut().enumerate() {
            *h += (self.v_abs[j] + (self.v_atom[j] - self.x_mod[j] * zeta)) * w[j];
        }
        hw
    }

    /// Dense field-free Hamiltonian without the absorbing potential. It is
    /// real symmetric: the kinetic part depends on `x_j − x_k` only.
    pub fn field_free_matrix(&self) -> DMatrix<f64> {
        let n = self.grid.len();
        let p = self.grid.momenta();
        let dx = self.grid.dx();
        let row: Vec<f64> = (0..n)
            .map(|d| {
                p.iter()
                    .zip(&self.kinetic)
                    .map(|(pm, k)| k * (pm * d as f64 * dx).cos())
                    .sum::<f64>()
                    / n as f64
            })
            .collect();
        DMatrix::from_fn(n, n, |j, k| {
            let d = if j >= k { j - k } else { k - j };
            row[d] + if j == k { self.v_atom[j] } else { 0.0 }
        })
    }

    /// Ground state by dense diagonalization, normalized with a positive
    /// largest component.
    pub fn ground_state(&self) -> GroundState {
        let eig = SymmetricEigen::new(self.field_free_matrix());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let v = eig.eigenvectors.column(order[0]);
        let peak = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        let sign = peak.signum() / v.norm();
        GroundState {
            energies: [eig.eigenvalues[order[0]], eig.eigenvalues[order[1]]],
            state: CVector::from_iterator(v.len(), v.iter().map(|&x| Complex64::new(sign * x, 0.0))),
        }
    }

    /// Real energy range `[e_min, e_max]` covering `H(t)` for every `|ζ| ≤`
    /// the pulse amplitude, for the polynomial function-of-matrix backends.
    pub fn energy_bounds(&self) -> (f64, f64) {
        let field = self.pulse.amplitude.abs() * self.x_mod.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let (vmin, vmax) = self
            .v_atom
            .iter()
            .zip(&self.v_abs)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (v, a)| {
                (lo.min(v + a.re), hi.max(v + a.re))
            });
        let kmax = self.kinetic.iter().fold(0.0f64, |m, &k| m.max(k));
        (vmin - field, vmax + kmax + field)
    }
}

impl Generator for AtomModel {
    fn dim(&self) -> usize {
        self.grid.len()
    }

    fn apply(&self, _u: &CVector, t: f64, w: &CVector) -> CVector {
        self.hamiltonian_apply(w, self.pulse.value(t)) * Complex64::new(0.0, -1.0)
    }

    /// `[G(t₁) − G(t₂)]w = i·x_mod·(ζ(t₁) − ζ(t₂))·w`
    fn diag_difference(&self, _u1: &CVector, t1: f64, _u2: &CVector, t2: f64, w: &CVector) -> Option<CVector> {
        let dz = self.pulse.value(t1) - self.pulse.value(t2);
        Some(CVector::from_iterator(
            w.len(),
            w.iter().zip(&self.x_mod).map(|(wj, x)| wj * Complex64::new(0.0, x * dz)),
        ))
    }

    fn is_hermitian_generator(&self) -> bool {
        !self.is_absorbing()
    }
}
