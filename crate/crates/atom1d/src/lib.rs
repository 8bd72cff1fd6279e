//! One-dimensional truncated-Coulomb atom driven by an intense laser pulse,
//! discretized on a Fourier grid with complex absorbing boundaries.

pub mod absorber;
pub mod error;
pub mod grid;
pub mod hamiltonian;
pub mod potential;
pub mod pulse;

pub use absorber::{AbsorberSource, AbsorbingPotential};
pub use error::{AtomError, Result};
pub use grid::FourierGrid1D;
pub use hamiltonian::{AtomModel, GroundState};
pub use potential::{ModifiedPotential, SoftRect};
pub use pulse::PulseField;
