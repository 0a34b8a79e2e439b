//! The `k = 0` case, through the factored integrand
//! `Φ(x, y) = |2e(y/2)cos 2πx + 1|^p + |2e(y/2)cos 2πx − 1|^p` on `x ∈ (−¼, ¼)`,
//! whose `y`-derivative is
//! `−2pπ sin(πy) cos(2πx) · (|z + 1|^{p−2} − |z − 1|^{p−2})`, `z = 2e(y/2)cos 2πx`.
//!
//! `f_p(y) = ∫_{−¼}^{¼} Φ(x, y) dx` decreases on `(0, ½)` when `p > 2` and
//! increases when `p < 2`; at `p = 2` it is constant.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::quadrature::pairwise_sum;

const F_NODES: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct K0Sample {
    pub p: f64,
    /// `−1` when `f_p` should decrease in `y`, `+1` when it should increase, 0 at `p = 2`.
    pub expected_sign: i8,
    pub grid_points: usize,
    pub sign_violations: usize,
    /// Largest `∂Φ/∂y` found when `expected_sign < 0`, smallest when `> 0`.
    pub extreme_derivative: f64,
    pub f_at_0: f64,
    pub f_at_half: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct K0Fact {
    pub density: usize,
    pub samples: Vec<K0Sample>,
    pub holds: bool,
}

fn z_abs(x: f64, y: f64) -> (f64, f64) {
    let c = 2.0 * (2.0 * PI * x).cos();
    let (re, im) = (c * (PI * y).cos(), c * (PI * y).sin());
    ((re + 1.0).hypot(im), (re - 1.0).hypot(im))
}

pub(crate) fn phi(p: f64, x: f64, y: f64) -> f64 {
    let (plus, minus) = z_abs(x, y);
    plus.powf(p) + minus.powf(p)
}

pub(crate) fn phi_y(p: f64, x: f64, y: f64) -> f64 {
    let (plus, minus) = z_abs(x, y);
    -2.0 * p * PI * (PI * y).sin() * (2.0 * PI * x).cos() * (plus.powf(p - 2.0) - minus.powf(p - 2.0))
}

/// Midpoint value of `∫_{−¼}^{¼} Φ(x, y) dx`.
pub fn f_p(p: f64, y: f64) -> f64 {
    let h = 0.5 / F_NODES as f64;
    let v: Vec<f64> = (0..F_NODES).map(|i| phi(p, -0.25 + (i as f64 + 0.5) * h, y)).collect();
    pairwise_sum(&v) * h
}

pub fn verify_k0(p_samples: &[f64], density: usize) -> K0Fact {
    assert!(density >= 64, "grid density must be at least 64");
    let samples: Vec<K0Sample> = p_samples.iter().map(|&p| sample(p, density)).collect();
    let holds = !samples.is_empty() && samples.iter().all(|s| s.holds);
    K0Fact { density, samples, holds }
}

fn sample(p: f64, density: usize) -> K0Sample {
    assert!(p > 0.0, "p must be positive");
    let expected_sign: i8 = if p > 2.0 {
        -1
    } else if p < 2.0 {
        1
    } else {
        0
    };
    let mut violations = 0;
    let mut extreme = if expected_sign < 0 { f64::NEG_INFINITY } else { f64::INFINITY };
    let mut grid_points = 0;
    if expected_sign != 0 {
        // open grid: cell midpoints of (−¼, ¼) × (0, ½)
        for a in 0..density {
            let x = -0.25 + (a as f64 + 0.5) * 0.5 / density as f64;
            for b in 0..density {
                let y = (b as f64 + 0.5) * 0.5 / density as f64;
                let d = phi_y(p, x, y);
                grid_points += 1;
                if expected_sign < 0 {
                    extreme = extreme.max(d);
                    if d >= 0.0 {
                        violations += 1;
                    }
                } else {
                    extreme = extreme.min(d);
                    if d <= 0.0 {
                        violations += 1;
                    }
                }
            }
        }
    } else {
        extreme = 0.0;
    }
    let (f0, fh) = (f_p(p, 0.0), f_p(p, 0.5));
    let ordered = match expected_sign {
        -1 => f0 > fh,
        1 => fh > f0,
        _ => (f0 - fh).abs() < 1e-9,
    };
    K0Sample {
        p,
        expected_sign,
        grid_points,
        sign_violations: violations,
        extreme_derivative: extreme,
        f_at_0: f0,
        f_at_half: fh,
        holds: violations == 0 && ordered,
    }
}
