//! Semi-global propagation of `du/dt = G(u,t) u + s(t)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`cheb`], [`newton`]: interpolation in Chebyshev and Newton form.
//! * [`taylor`]: conversion of expansion coefficients into Taylor-like form.
//! * [`remainder`]: the scaled exponential remainder functions `f̃_m(z,t)`.
//! * [`funmat`]: `f(A)v` for an operator known only through its action.
//! * [`propagator`]: the time-stepping engine.
//! * [`reference`]: Euler and RK4 baselines over the same generator trait.

pub mod cheb;
pub mod error;
pub mod funmat;
pub mod newton;
pub mod operator;
pub mod propagator;
pub mod reference;
pub mod remainder;
pub mod sample;
pub mod taylor;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use operator::OperatorHandle;
pub use sample::{CVector, ComplexSample, Sample};
