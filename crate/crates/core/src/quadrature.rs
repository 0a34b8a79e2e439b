//! Midpoint Riemann sums on `[0, 1/2]` and their a priori error bounds.
//!
//! `|∫₀^½ f − (1/2N) Σ f((n−½)/(2N))| ≤ min(‖f″‖∞/(192N²), ‖f′‖∞/(16N))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const INTERVAL: (f64, f64) = (0.0, 0.5);

/// Node counts at or above this evaluate in parallel.
const PARALLEL_THRESHOLD: usize = 4096;
const PAIRWISE_BLOCK: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    SecondDerivative,
    FirstDerivative,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiemannPlan {
    pub n: usize,
    pub error_bound: f64,
    pub bound_source: BoundSource,
}

impl RiemannPlan {
    pub fn interval(&self) -> (f64, f64) {
        INTERVAL
    }

    pub fn step(&self) -> f64 {
        0.5 / self.n as f64
    }
}

pub fn node(i: usize, n: usize) -> f64 {
    (i as f64 + 0.5) / (2 * n) as f64
}

/// Sum in a fixed binary tree so the result does not depend on scheduling.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= PAIRWISE_BLOCK {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn midpoint_sum<F>(f: F, n: usize) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    assert!(n >= 1, "midpoint_sum needs at least one node");
    let values: Vec<f64> = if n >= PARALLEL_THRESHOLD {
        (0..n).into_par_iter().map(|i| f(node(i, n))).collect()
    } else {
        (0..n).map(|i| f(node(i, n))).collect()
    };
    pairwise_sum(&values) / (2 * n) as f64
}

pub fn error_bound(sup_f2: f64, sup_f1: Option<f64>, n: usize) -> f64 {
    let n = n as f64;
    let second = sup_f2 / (192.0 * n * n);
    let first = sup_f1.map_or(f64::INFINITY, |s| s / (16.0 * n));
    second.min(first)
}

fn second_bound(sup_f2: f64, n: usize) -> f64 {
    sup_f2 / (192.0 * (n as f64).powi(2))
}

/// Smallest `N` with `sup_f2 / (192 N²) < eta`.
pub fn plan_steps(sup_f2: f64, eta: f64) -> RiemannPlan {
    assert!(sup_f2 >= 0.0 && eta > 0.0, "plan_steps needs sup_f2 >= 0 and eta > 0");
    let mut n = ((sup_f2 / (192.0 * eta)).sqrt().floor() as usize).max(1);
    while n > 1 && second_bound(sup_f2, n - 1) < eta {
        n -= 1;
    }
    while second_bound(sup_f2, n) >= eta {
        n += 1;
    }
    RiemannPlan { n, error_bound: second_bound(sup_f2, n), bound_source: BoundSource::SecondDerivative }
}

/// Bound for a given `N`, reporting which branch of the minimum is active.
pub fn plan_for(sup_f2: f64, sup_f1: Option<f64>, n: usize) -> RiemannPlan {
    let second = second_bound(sup_f2, n);
    let first = sup_f1.map_or(f64::INFINITY, |s| s / (16.0 * n as f64));
    if first < second {
        RiemannPlan { n, error_bound: first, bound_source: BoundSource::FirstDerivative }
    } else {
        RiemannPlan { n, error_bound: second, bound_source: BoundSource::SecondDerivative }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigpoly::{build_g, CaseId};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_and_cosines() {
        assert_eq!(midpoint_sum(|_| 3.0, 7), 1.5);
        assert!(midpoint_sum(|x| (4.0 * PI * x).cos(), 4).abs() < 1e-15);
        let g = build_g(CaseId::plus(1));
        assert!((midpoint_sum(|x| g.eval(x), 8) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn exactness_ladder() {
        for n in [1usize, 3, 8, 50] {
            for m in 1..2 * n {
                let s = midpoint_sum(|x| (2.0 * PI * m as f64 * x).cos(), n);
                assert!(s.abs() <= 1e-13, "m={m} n={n} s={s}");
            }
        }
    }

    #[test]
    fn error_bound_examples() {
        assert!((error_bound(4900.0, None, 24) - 0.0443).abs() < 1e-4);
        assert!(error_bound(4900.0, None, 24) < 0.045);
        assert!(error_bound(99800.0, None, 175) < 0.017);
        assert!(error_bound(260000.0, None, 145) < 0.065);
        assert_eq!(error_bound(192.0, Some(16.0), 1), 1.0);
        assert_eq!(error_bound(1920.0, Some(16.0), 1), 1.0);
    }

    #[test]
    fn plan_examples() {
        assert_eq!(plan_steps(195745.0, 0.025).n, 202);
        assert_eq!(plan_steps(194242755.0, 64.512).n, 126);
        assert_eq!(plan_steps(192.0, 1.0).n, 2);
        assert_eq!(plan_steps(4900.0, 0.045).n, 24);
        assert_eq!(plan_steps(99800.0, 0.017).n, 175);
        assert_eq!(plan_steps(260000.0, 0.065).n, 145);
    }

    #[test]
    fn plan_reports_active_branch() {
        let p = plan_for(1e6, Some(10.0), 10);
        assert_eq!(p.bound_source, BoundSource::FirstDerivative);
        assert_eq!(plan_for(1.0, None, 10).bound_source, BoundSource::SecondDerivative);
    }

    #[test]
    fn parallel_and_serial_agree() {
        let f = |x: f64| (x * 13.0).sin().exp();
        let n = PARALLEL_THRESHOLD * 2 + 3;
        let serial: Vec<f64> = (0..n).map(|i| f(node(i, n))).collect();
        assert_eq!(midpoint_sum(f, n), pairwise_sum(&serial) / (2 * n) as f64);
    }

    proptest! {
        #[test]
        fn plan_is_minimal(sup in 1.0f64..1e9, eta in 1e-3f64..100.0) {
            let p = plan_steps(sup, eta);
            prop_assert!(second_bound(sup, p.n) < eta);
            prop_assert!(p.n == 1 || second_bound(sup, p.n - 1) >= eta);
            prop_assert_eq!(p.error_bound, second_bound(sup, p.n));
        }
    }
}
