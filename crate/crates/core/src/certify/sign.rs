//! Negativity of `p = P_n + δ` on `[c − ½, c + ½]`.
//!
//! If `p⁽ⁱ⁾(left) < 0` for `i = 0..n−3` and the quadratic `p⁽ⁿ⁻²⁾` has a
//! negative leading coefficient and a negative discriminant, then
//! `p⁽ⁿ⁻²⁾ < 0` everywhere, and going down one order at a time each
//! `p⁽ⁱ⁾` is decreasing and negative on `[left, ∞)`.

use serde::{Deserialize, Serialize};

use super::taylor::{factorial, TaylorCertificate};
use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignVerdict {
    NegativeOnInterval,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignCertificate {
    pub center: f64,
    pub left: f64,
    pub delta: f64,
    /// Coefficients of `p` in ascending powers of `(t − center)`.
    pub shifted_poly: Vec<f64>,
    /// `p⁽ⁱ⁾(left)` and a rigorous upper bound for it.
    pub endpoint_derivs: Vec<f64>,
    pub endpoint_uppers: Vec<f64>,
    /// Order of the quadratic tail, `n − 2`.
    pub tail_order: usize,
    /// Leading coefficient and discriminant of the tail, with upper bounds.
    pub quad_leading: f64,
    pub quad_discriminant: f64,
    pub quad_leading_upper: f64,
    pub quad_discriminant_upper: f64,
    pub verdict: SignVerdict,
    /// Derivative order of the first failed check.
    pub first_failure: Option<usize>,
}

impl SignCertificate {
    /// `p(t)` in plain floating point.
    pub fn eval(&self, t: f64) -> f64 {
        let s = t - self.center;
        self.shifted_poly.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }
}

pub fn certify_negative(cert: &TaylorCertificate) -> SignCertificate {
    let delta = cert.total_delta;
    let mut coeffs = cert.taylor_coeffs();
    coeffs[0] += delta;
    // keep the offset exact in the enclosures
    let exact: Vec<Interval> = cert
        .taylor_coeffs()
        .iter()
        .enumerate()
        .map(|(j, &c)| if j == 0 { Interval::point(c) + Interval::point(delta) } else { Interval::point(c) })
        .collect();
    sign_chain(cert.center, delta, coeffs, &exact)
}

fn sign_chain(center: f64, delta: f64, coeffs: Vec<f64>, exact: &[Interval]) -> SignCertificate {
    let n = coeffs.len() - 1;
    let left = center - 0.5;
    let s = -0.5;
    let mids: Vec<f64> = exact.iter().map(Interval::mid).collect();
    let enclose = |i: usize, s: f64| -> Interval {
        let mut sum = Interval::ZERO;
        for (j, c) in exact.iter().enumerate().skip(i) {
            let falling = Interval::point(factorial(j as u32)) / Interval::point(factorial((j - i) as u32));
            sum = sum + *c * falling * Interval::point(s).powi((j - i) as u32);
        }
        sum
    };

    let mut endpoint_derivs = Vec::new();
    let mut endpoint_uppers = Vec::new();
    let mut first_failure = None;
    let chain_len = n.saturating_sub(2);
    let checks = if n >= 2 { chain_len } else { 1 };
    for i in 0..checks {
        let e = enclose(i, s);
        endpoint_derivs.push(point_deriv(&mids, i, s));
        endpoint_uppers.push(e.hi);
        if e.hi >= 0.0 && first_failure.is_none() {
            first_failure = Some(i);
        }
    }

    let (tail_order, lead, disc, lead_hi, disc_hi);
    if n >= 2 {
        let t = n - 2;
        // p⁽ⁿ⁻²⁾(c + s) = q0 + q1 s + q2 s²
        let q = |r: usize| -> Interval {
            let j = t + r;
            exact[j] * Interval::point(factorial(j as u32)) / Interval::point(factorial(r as u32))
        };
        let (q0, q1, q2) = (q(0), q(1), q(2));
        let d = q1.sqr() - Interval::point(4.0) * q2 * q0;
        tail_order = t;
        lead = q2.mid();
        disc = d.mid();
        lead_hi = q2.hi;
        disc_hi = d.hi;
        if first_failure.is_none() && (lead_hi >= 0.0 || disc_hi >= 0.0) {
            first_failure = Some(t);
        }
    } else {
        // no quadratic tail; a linear or constant p is checked at both ends above and here
        tail_order = 0;
        lead = 0.0;
        disc = 0.0;
        lead_hi = 0.0;
        disc_hi = 0.0;
        if first_failure.is_none() && enclose(0, 0.5).hi >= 0.0 {
            first_failure = Some(0);
        }
    }

    SignCertificate {
        center,
        left,
        delta,
        shifted_poly: coeffs,
        endpoint_derivs,
        endpoint_uppers,
        tail_order,
        quad_leading: lead,
        quad_discriminant: disc,
        quad_leading_upper: lead_hi,
        quad_discriminant_upper: disc_hi,
        verdict: if first_failure.is_none() { SignVerdict::NegativeOnInterval } else { SignVerdict::Failed },
        first_failure,
    }
}

fn point_deriv(coeffs: &[f64], i: usize, s: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(i)
        .map(|(j, c)| c * factorial(j as u32) / factorial((j - i) as u32) * s.powi((j - i) as i32))
        .sum()
}

/// Sign chain for explicit coefficients `a_j` of `p(t) = Σ a_j (t − center)^j`.
pub fn certify_coeffs(center: f64, coeffs: &[f64]) -> SignCertificate {
    let exact: Vec<Interval> = coeffs.iter().map(|&c| Interval::point(c)).collect();
    sign_chain(center, 0.0, coeffs.to_vec(), &exact)
}
