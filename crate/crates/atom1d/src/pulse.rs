use serde::{Deserialize, Serialize};

/// `ζ(t) = A·sech²((t − t_c)/τ)·cos(ω(t − t_c))`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseField {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
    pub carrier: f64,
    pub t_final: f64,
}

impl Default for PulseField {
    fn default() -> Self {
        Self {
            amplitude: 0.1,
            center: 500.0,
            width: 170.0,
            carrier: 0.06,
            t_final: 1000.0,
        }
    }
}

impl PulseField {
    /// A field that vanishes for all times.
    pub fn off() -> Self {
        Self {
            amplitude: 0.0,
            ..Self::default()
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let s = t - self.center;
        let sech = 1.0 / (s / self.width).cosh();
        self.amplitude * sech * sech * (self.carrier * s).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_and_zeros() {
        let p = PulseField::default();
        assert_eq!(p.value(500.0), 0.1);
        let zero = 500.0 + std::f64::consts::FRAC_PI_2 / 0.06;
        assert!(p.value(zero).abs() < 1e-14);
        let sech = 1.0 / (500.0f64 / 170.0).cosh();
        assert!((p.value(0.0) - 0.1 * sech * sech * 30f64.cos()).abs() < 1e-18);
        assert!((0.1 * sech * sech - 1.109e-3).abs() < 1e-6);
        assert_eq!(PulseField::off().value(500.0), 0.0);
    }
}
