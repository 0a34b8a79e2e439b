//! Taylor certificates for `d⁽ᵐ⁾` on `[c − ½, c + ½]`.
//!
//! `P_n(t) = Σ_{j≤n} d̄_j (t−c)^j / j!` where `d̄_j` estimates `d⁽ᵐ⁺ʲ⁾(c)`.
//! Row `j` may be off by `2η_j` (two integrals), which moves `P_n` by at most
//! `2η_j / (j! 2^j) = δ_j` on the interval. The Lagrange remainder is at most
//! `sup_ξ |d⁽ᵐ⁺ⁿ⁺¹⁾(ξ)| / ((n+1)! 2^{n+1})`, and `|d⁽ᴹ⁾(ξ)|` is bounded either
//! by `sup |H_{ξ,M}|` over both signs or by the sum of their `L¹` norms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ledger::{fp_error_ledger, FpLedger};
use super::{CaseBounds, CertifyError};
use crate::interval::Interval;
use crate::kernels::{bound_h_l1_using, bound_h_xx_using, d_deriv_estimate, envelope_sup, HxxBound, KernelSpec};
use crate::quadrature::{plan_steps, RiemannPlan};

/// Cells of the upper Riemann sum behind the `L¹` remainder route.
pub const L1_CELLS: usize = 1 << 15;

/// Row deltas `δ_0..δ_n` and the allotment for the remainder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorBudget {
    pub deltas: Vec<f64>,
    pub remainder: f64,
}

impl TaylorBudget {
    pub fn new(deltas: Vec<f64>, remainder: f64) -> Self {
        TaylorBudget { deltas, remainder }
    }

    /// `d‴` around 3/2, total 0.231.
    pub fn k1() -> Self {
        Self::new(vec![0.05, 0.0604, 0.044, 0.02, 0.008, 0.002, 0.0004, 0.0002], 0.046)
    }

    /// `d⁗` around 5/2, total 0.75.
    pub fn k2() -> Self {
        Self::k2_with_remainder(0.30)
    }

    /// The `k = 2` row deltas with another remainder allotment. With 0.34 the
    /// total is 0.79, which is more than `|P_7(2)|` and so cannot certify.
    pub fn k2_with_remainder(remainder: f64) -> Self {
        Self::new(vec![0.13, 0.15, 0.1, 0.05, 0.015, 0.004, 0.0008, 0.0002], remainder)
    }

    /// Another row split for `k = 1` with the same row total. Larger `δ_0` means
    /// fewer nodes for the cheap rows and more for the expensive ones.
    pub fn k1_alternate() -> Self {
        Self::new(vec![0.12, 0.040, 0.015, 0.004, 0.003, 0.001, 0.001, 0.001], 0.046)
    }

    pub fn k2_alternate() -> Self {
        Self::new(vec![0.3, 0.08, 0.03, 0.01, 0.01, 0.01, 0.005, 0.005], 0.30)
    }

    pub fn row_total(&self) -> f64 {
        self.deltas.iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.row_total() + self.remainder
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `η_j = δ_j · j! · 2^j / 2`.
pub fn eta_for(j: u32, delta: f64) -> f64 {
    delta * factorial(j) * 2f64.powi(j as i32) / 2.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudgetRow {
    pub j: u32,
    pub delta_j: f64,
    pub eta_j: f64,
    pub n_j: usize,
    /// Estimate of `d⁽ᵐ⁺ʲ⁾(center)`.
    pub dbar_j: f64,
    pub h_xx_plus: HxxBound,
    pub h_xx_minus: HxxBound,
    pub plan: RiemannPlan,
    pub ledger: FpLedger,
}

impl ErrorBudgetRow {
    pub fn h_xx_bound(&self) -> f64 {
        self.h_xx_plus.value.max(self.h_xx_minus.value)
    }

    pub fn holds(&self) -> bool {
        self.h_xx_plus.certified && self.h_xx_minus.certified && self.plan.error_bound < self.eta_j && self.ledger.holds
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemainderBound {
    /// Derivative order `M = m + n + 1` of the remainder.
    pub order: u32,
    pub xi_lo: f64,
    pub xi_hi: f64,
    /// `(n+1)! · 2^{n+1}`.
    pub denominator: f64,
    /// `max_ξ ‖H_{ξ,M}‖∞` over both signs.
    pub sup_h: f64,
    pub sup_route: f64,
    pub l1_plus: f64,
    pub l1_minus: f64,
    pub l1_cells: usize,
    pub l1_route: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorCertificate {
    pub k: u32,
    pub m: u32,
    pub center: f64,
    pub n: usize,
    pub rows: Vec<ErrorBudgetRow>,
    pub remainder: RemainderBound,
    /// Allotted to the remainder; at least `remainder.bound`.
    pub remainder_delta: f64,
    pub total_delta: f64,
    /// Every bound the rows and the remainder rest on.
    pub inputs: CaseBounds,
}

impl TaylorCertificate {
    pub fn interval(&self) -> (f64, f64) {
        (self.center - 0.5, self.center + 0.5)
    }

    /// `d̄_j / j!`, ascending in `(t − center)`.
    pub fn taylor_coeffs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.dbar_j / factorial(r.j)).collect()
    }

    pub fn poly_value(&self, t: f64) -> f64 {
        let s = t - self.center;
        self.taylor_coeffs().iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn row_delta_sum(&self) -> f64 {
        self.rows.iter().map(|r| r.delta_j).sum()
    }

    pub fn holds(&self) -> bool {
        self.rows.iter().all(ErrorBudgetRow::holds) && self.remainder.bound <= self.remainder_delta
    }
}

pub fn build_taylor_certificate(
    k: u32,
    m: u32,
    center: f64,
    n: usize,
    budget: &TaylorBudget,
) -> Result<TaylorCertificate, CertifyError> {
    build_taylor_certificate_using(&CaseBounds::certify(k)?, m, center, n, budget)
}

pub fn build_taylor_certificate_using(
    cb: &CaseBounds,
    m: u32,
    center: f64,
    n: usize,
    budget: &TaylorBudget,
) -> Result<TaylorCertificate, CertifyError> {
    if budget.deltas.len() != n + 1 {
        return Err(CertifyError::BudgetLength { n, got: budget.deltas.len() });
    }
    let k = cb.k;
    let g_range = cb.g_range();
    let rows = budget
        .deltas
        .par_iter()
        .enumerate()
        .map(|(j, &delta)| build_row(cb, m, center, j as u32, delta, g_range))
        .collect::<Result<Vec<_>, CertifyError>>()?;

    let remainder = remainder_bound(cb, m + n as u32 + 1, center, n as u32)?;
    if remainder.bound > budget.remainder {
        return Err(CertifyError::RemainderExceedsAllotment { bound: remainder.bound, allotted: budget.remainder });
    }
    let total_delta = rows.iter().map(|r| r.delta_j).sum::<f64>() + budget.remainder;
    Ok(TaylorCertificate {
        k,
        m,
        center,
        n,
        rows,
        remainder,
        remainder_delta: budget.remainder,
        total_delta,
        inputs: cb.clone(),
    })
}

fn build_row(cb: &CaseBounds, m: u32, center: f64, j: u32, delta: f64, g_range: Interval) -> Result<ErrorBudgetRow, CertifyError> {
    let order = m + j;
    let h_xx_plus = bound_h_xx_using(&KernelSpec::new(cb.plus.case, center, order), &cb.plus)?;
    let h_xx_minus = bound_h_xx_using(&KernelSpec::new(cb.minus.case, center, order), &cb.minus)?;
    let eta_j = eta_for(j, delta);
    let plan = plan_steps(h_xx_plus.value.max(h_xx_minus.value), eta_j);
    let dbar_j = d_deriv_estimate(order, center, cb.k, plan.n);
    let ledger = fp_error_ledger(order, center, eta_j, g_range);
    Ok(ErrorBudgetRow { j, delta_j: delta, eta_j, n_j: plan.n, dbar_j, h_xx_plus, h_xx_minus, plan, ledger })
}

fn remainder_bound(cb: &CaseBounds, order: u32, center: f64, n: u32) -> Result<RemainderBound, CertifyError> {
    let (a, b) = (center - 0.5, center + 0.5);
    let denominator = factorial(n + 1) * 2f64.powi(n as i32 + 1);
    let den = Interval::point(denominator);
    let sup_h = envelope_sup(cb.g_range(), a, b, order)?;
    // |d⁽ᴹ⁾| ≤ ∫₀^½ (|H₋| + |H₊|) ≤ sup_h
    let sup_route = Interval::point(sup_h).checked_div(den).expect("positive").hi;
    let (l1_plus, l1_minus) = rayon::join(
        || bound_h_l1_using(&cb.plus, a, b, order, L1_CELLS),
        || bound_h_l1_using(&cb.minus, a, b, order, L1_CELLS),
    );
    let (l1_plus, l1_minus) = (l1_plus?, l1_minus?);
    let l1_route = (Interval::point(l1_plus) + Interval::point(l1_minus)).checked_div(den).expect("positive").hi;
    Ok(RemainderBound {
        order,
        xi_lo: a,
        xi_hi: b,
        denominator,
        sup_h,
        sup_route,
        l1_plus,
        l1_minus,
        l1_cells: L1_CELLS,
        l1_route,
        bound: sup_route.min(l1_route),
    })
}
