//! Matrix-free linear operators with an application counter.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::sample::CVector;

/// A linear map known through its action, counting every application.
pub struct OperatorHandle<'a> {
    dim: usize,
    apply: Box<dyn Fn(&CVector) -> CVector + Send + Sync + 'a>,
    count: AtomicU64,
}

impl<'a> OperatorHandle<'a> {
    pub fn new(dim: usize, apply: impl Fn(&CVector) -> CVector + Send + Sync + 'a) -> Self {
        Self {
            dim,
            apply: Box::new(apply),
            count: AtomicU64::new(0),
        }
    }

    pub fn from_matrix(a: &'a DMatrix<Complex64>) -> Self {
        assert_eq!(a.nrows(), a.ncols(), "operator matrix must be square");
        Self::new(a.nrows(), move |w| a * w)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, w: &CVector) -> CVector {
        self.count.fetch_add(1, Ordering::Relaxed);
        (self.apply)(w)
    }

    pub fn application_count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

impl fmt::Debug for OperatorHandle<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorHandle")
            .field("dim", &self.dim)
            .field("applications", &self.application_count())
            .finish()
    }
}
