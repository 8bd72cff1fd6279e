use std::sync::atomic::{AtomicU64, Ordering};

use crate::sample::CVector;

/// The right-hand side `G(u,t) u + s(t)`, supplied through the action of
/// `G(u,t)` on arbitrary vectors.
///
/// Implementations must be reentrant: independent propagations may share one
/// generator across threads.
pub trait Generator: Sync {
    fn dim(&self) -> usize;

    /// `G(u,t)·w`
    fn apply(&self, u: &CVector, t: f64, w: &CVector) -> CVector;

    /// `s(t)`; `None` means identically zero.
    fn source(&self, _t: f64) -> Option<CVector> {
        None
    }

    /// `[G(u₁,t₁) − G(u₂,t₂)]·w` without two full applications, if the
    /// difference has a cheap form (for instance a diagonal potential).
    fn diag_difference(
        &self,
        _u1: &CVector,
        _t1: f64,
        _u2: &CVector,
        _t2: f64,
        _w: &CVector,
    ) -> Option<CVector> {
        None
    }

    /// `G = −iH` with `H` Hermitian.
    fn is_hermitian_generator(&self) -> bool {
        false
    }
}

/// Wraps a generator and counts every call to [`Generator::apply`].
pub struct CountingGenerator<'g> {
    inner: &'g dyn Generator,
    count: AtomicU64,
}

impl<'g> CountingGenerator<'g> {
    pub fn new(inner: &'g dyn Generator) -> Self {
        Self {
            inner,
            count: AtomicU64::new(0),
        }
    }

    pub fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

impl Generator for CountingGenerator<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, u: &CVector, t: f64, w: &CVector) -> CVector {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.apply(u, t, w)
    }

    fn source(&self, t: f64) -> Option<CVector> {
        self.inner.source(t)
    }

    fn diag_difference(&self, u1: &CVector, t1: f64, u2: &CVector, t2: f64, w: &CVector) -> Option<CVector> {
        self.inner.diag_difference(u1, t1, u2, t2, w)
    }

    fn is_hermitian_generator(&self) -> bool {
        self.inner.is_hermitian_generator()
    }
}
