use serde::{Deserialize, Serialize};

use super::ledger::{fp_error_ledger, FpLedger};
use super::{CaseBounds, CertifyError};
use crate::kernels::{bound_h_xx_using, d_deriv_estimate, HxxBound, KernelSpec};
use crate::quadrature::{plan_steps, RiemannPlan};

/// `d⁽ʲ⁰⁾(t₀) > 0`, from a midpoint estimate whose two-integral error stays
/// below `threshold`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EndpointFact {
    pub k: u32,
    pub j0: u32,
    pub t0: f64,
    pub threshold: f64,
    pub h_xx_plus: HxxBound,
    pub h_xx_minus: HxxBound,
    /// Per-integral target, half of `threshold`.
    pub eta: f64,
    pub plan: RiemannPlan,
    pub estimate: f64,
    /// Bound on the error of the difference of the two sums.
    pub total_error: f64,
    pub ledger: FpLedger,
    pub holds: bool,
}

impl EndpointFact {
    /// Larger of the two signs' `‖H″‖∞` bounds.
    pub fn h_xx_bound(&self) -> f64 {
        self.h_xx_plus.value.max(self.h_xx_minus.value)
    }

    pub fn margin(&self) -> f64 {
        self.estimate - self.threshold
    }
}

pub fn endpoint_positivity(k: u32, j0: u32, t0: f64, threshold: f64) -> Result<EndpointFact, CertifyError> {
    endpoint_positivity_using(&CaseBounds::certify(k)?, j0, t0, threshold)
}

pub fn endpoint_positivity_using(
    cb: &CaseBounds,
    j0: u32,
    t0: f64,
    threshold: f64,
) -> Result<EndpointFact, CertifyError> {
    assert!(threshold > 0.0, "threshold must be positive");
    let k = cb.k;
    let h_xx_plus = bound_h_xx_using(&KernelSpec::new(cb.plus.case, t0, j0), &cb.plus)?;
    let h_xx_minus = bound_h_xx_using(&KernelSpec::new(cb.minus.case, t0, j0), &cb.minus)?;
    let eta = threshold / 2.0;
    let plan = plan_steps(h_xx_plus.value.max(h_xx_minus.value), eta);
    let estimate = d_deriv_estimate(j0, t0, k, plan.n);
    let total_error = 2.0 * plan.error_bound;
    let ledger = fp_error_ledger(j0, t0, eta, cb.g_range());
    let holds = h_xx_plus.certified
        && h_xx_minus.certified
        && total_error < threshold
        && estimate - threshold > 0.0
        && ledger.holds;
    Ok(EndpointFact {
        k,
        j0,
        t0,
        threshold,
        h_xx_plus,
        h_xx_minus,
        eta,
        plan,
        estimate,
        total_error,
        ledger,
        holds,
    })
}
