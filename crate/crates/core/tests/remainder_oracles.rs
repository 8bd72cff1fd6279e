mod common;

use common::c;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use semiglobal::cheb::{cheb_nodes, ChebKind, Interval};
use semiglobal::remainder::{branch_threshold, tilde_f, tilde_f_batch, tilde_f_direct, tilde_f_taylor};

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[test]
fn small_argument_matches_exact_rational_series() {
    let z = BigRational::from_float(1e-7).unwrap();
    let mut sum = BigRational::zero();
    let mut power = BigRational::one();
    let mut fact = BigInt::from(2);
    for j in 0..40u32 {
        sum += &power / BigRational::from_integer(fact.clone());
        power *= &z;
        fact *= BigInt::from(j + 3);
    }
    let exact = (sum * BigRational::from_integer(BigInt::from(2))).to_f64().unwrap();
    let got = tilde_f(2, c(1e-7, 0.0), 1.0);
    assert!(((got.re - exact) / exact).abs() < 1e-14, "{got} vs {exact}");
    assert!(got.im.abs() < 1e-300);
}

#[test]
fn branches_agree_across_the_threshold_band() {
    let mut worst: f64 = 0.0;
    for m in 1..=20 {
        let theta = branch_threshold(m);
        for a in 0..24 {
            let angle = std::f64::consts::PI * a as f64 / 23.0;
            for i in 0..=48 {
                let r = 0.5 * theta * 4f64.powf(i as f64 / 48.0);
                for t in [1.0, 0.3] {
                    let z = Complex64::from_polar(r / t, angle);
                    let d = tilde_f_direct(m, z, t);
                    let s = tilde_f_taylor(m, z, t);
                    worst = worst.max((d - s).norm() / s.norm());
                }
            }
        }
    }
    assert!(worst < 5e-13, "worst disagreement {worst:e}");
}

#[test]
fn tail_branch_gives_zero_at_zero_time() {
    for m in 1..6 {
        assert_eq!(tilde_f(m, c(1.0, 0.0), 0.0), c(0.0, 0.0));
    }
}

#[test]
fn batch_matches_scalar_evaluation() {
    let grid = cheb_nodes(ChebKind::Gauss, 16, Interval::new(-1.0, 1.0).unwrap(), false).unwrap();
    let z: Vec<Complex64> = grid.nodes().iter().map(|&y| c(0.0, y)).collect();
    let table = tilde_f_batch(7, &z, &[0.5]);
    assert_eq!(table.shape(), (16, 1));
    for (i, &zi) in z.iter().enumerate() {
        assert_eq!(table[(i, 0)], tilde_f(7, zi, 0.5));
    }
    assert_eq!(tilde_f_batch(1, &[c(0.0, 0.0)], &[1.0, 2.0]).as_slice(), &[c(1.0, 0.0), c(2.0, 0.0)]);
}

proptest! {
    #[test]
    fn order_recurrence(m in 1usize..=12, log_r in -10.0f64..2.0, angle in 0.0f64..std::f64::consts::TAU, t in 0.1f64..3.0) {
        let z = Complex64::from_polar(10f64.powf(log_r) / t, angle);
        let lhs = tilde_f(m - 1, z, t) / factorial(m - 1);
        let a = z * tilde_f(m, z, t) / factorial(m);
        let b = t.powi(m as i32 - 1) / factorial(m - 1);
        let scale = lhs.norm().max(a.norm()).max(b.abs());
        prop_assert!((lhs - a - b).norm() <= 1e-12 * scale, "m={} zt={}", m, z * t);
    }

    #[test]
    fn damped_on_negative_axis(m in 0usize..=20, x in 1e-8f64..100.0, t in 1e-3f64..5.0) {
        let f = tilde_f(m, c(-x, 0.0), t);
        prop_assert!(f.re > 0.0);
        prop_assert!(f.re <= t.powi(m as i32) * (1.0 + 1e-14));
        prop_assert!(f.im.abs() <= 1e-14 * f.re);
    }
}
