//! Values that interpolation and conversion routines can combine linearly.
//!
//! Coefficients of the Chebyshev and Taylor conversions are real, so
//! [`Sample`] only needs real scaling. Newton divided differences at complex
//! abscissae need [`ComplexSample`].

use nalgebra::DVector;
use num_complex::Complex64;

pub type CVector = DVector<Complex64>;

pub trait Sample: Clone {
    /// A zero of the same shape.
    fn zero_like(&self) -> Self;
    /// `self += a * x`
    fn add_scaled(&mut self, a: f64, x: &Self);
    fn scale(&mut self, a: f64);
    /// Max-abs magnitude, used in relative tolerances.
    fn magnitude(&self) -> f64;
}

pub trait ComplexSample: Sample {
    fn add_scaled_c(&mut self, a: Complex64, x: &Self);
    fn scale_c(&mut self, a: Complex64);
}

impl Sample for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn add_scaled(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
    fn scale(&mut self, a: f64) {
        *self *= a;
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Sample for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add_scaled(&mut self, a: f64, x: &Self) {
        *self += x * a;
    }
    fn scale(&mut self, a: f64) {
        *self *= a;
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl ComplexSample for Complex64 {
    fn add_scaled_c(&mut self, a: Complex64, x: &Self) {
        *self += a * x;
    }
    fn scale_c(&mut self, a: Complex64) {
        *self *= a;
    }
}

impl Sample for CVector {
    fn zero_like(&self) -> Self {
        CVector::zeros(self.len())
    }
    fn add_scaled(&mut self, a: f64, x: &Self) {
        self.axpy(Complex64::new(a, 0.0), x, Complex64::new(1.0, 0.0));
    }
    fn scale(&mut self, a: f64) {
        *self *= Complex64::new(a, 0.0);
    }
    fn magnitude(&self) -> f64 {
        self.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

impl ComplexSample for CVector {
    fn add_scaled_c(&mut self, a: Complex64, x: &Self) {
        self.axpy(a, x, Complex64::new(1.0, 0.0));
    }
    fn scale_c(&mut self, a: Complex64) {
        *self *= a;
    }
}
