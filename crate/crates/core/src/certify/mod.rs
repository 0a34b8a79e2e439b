//! Proof skeletons for `k = 0, 1, 2`: endpoint signs, Taylor certificates
//! with their error budgets, polynomial negativity, the `k = 0` monotonicity
//! check, and report assembly.

mod endpoint;
mod k0;
pub mod ledger;
mod report;
mod sign;
mod taylor;

pub use endpoint::{endpoint_positivity, endpoint_positivity_using, EndpointFact};
pub use k0::{f_p, verify_k0, K0Fact, K0Sample};
pub use ledger::{default_g_range, fp_error_ledger, FpLedger};
pub use report::{
    parseval_fact, prove_case, Fact, FactRecord, ParsevalFact, ProofReport, Provenance, Verdict, SCHEMA_VERSION,
};
pub use sign::{certify_coeffs, certify_negative, SignCertificate, SignVerdict};
pub use taylor::{
    build_taylor_certificate, build_taylor_certificate_using, eta_for, ErrorBudgetRow, RemainderBound, TaylorBudget,
    TaylorCertificate, L1_CELLS,
};

use serde::{Deserialize, Serialize};

use crate::kernels::{KernelBounds, KernelError};
use crate::trigpoly::CaseId;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("k={k} has no proof skeleton (only k = 0, 1, 2); use `tabulate --k {k}` for exploration")]
    Unsupported { k: u32 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("budget has {got} row deltas, expansion of order {n} needs {}", n + 1)]
    BudgetLength { n: usize, got: usize },
    #[error("remainder bound {bound} exceeds its allotment {allotted}")]
    RemainderExceedsAllotment { bound: f64, allotted: f64 },
}

/// Certified bounds for both signs of one `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseBounds {
    pub k: u32,
    pub plus: KernelBounds,
    pub minus: KernelBounds,
}

impl CaseBounds {
    pub fn certify(k: u32) -> Result<Self, KernelError> {
        let (plus, minus) =
            rayon::join(|| KernelBounds::certify(CaseId::plus(k)), || KernelBounds::certify(CaseId::minus(k)));
        Ok(CaseBounds { k, plus: plus?, minus: minus? })
    }

    pub fn both(&self) -> [&KernelBounds; 2] {
        [&self.plus, &self.minus]
    }

    /// Hull of the two ranges of `G`.
    pub fn g_range(&self) -> crate::Interval {
        self.plus.g_range().hull(&self.minus.g_range())
    }
}
