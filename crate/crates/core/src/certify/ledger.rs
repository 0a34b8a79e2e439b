//! Model of the rounding error committed when one integrand value
//! `G^t ln^j G` is computed in 15-significant-digit arithmetic.
//!
//! This is arithmetic on stated bounds, not a measurement of the host.
//! Three forms are reported:
//!
//! * `fine = (2j+10)·10⁻¹⁴·3^j·sup_G^t`
//! * `coarse = 32·10⁻¹⁴·3^{6+j}` (valid for `t ≤ 3`, `G ≤ 9`, `j ≤ 11`)
//! * `parametric`, rebuilt from the certified range of `G`:
//!   `|G* − G| ≤ 3·10⁻¹⁵`, `e_log = 3·10⁻¹⁵/min_G + 0.5·10⁻¹⁴`,
//!   `|e^u − 1| ≤ 1.8|u|` for `|u| < 1/2`, `|ln G| ≤ 3`, giving
//!   `sup_G^t·(1.8·t·e_log·3^j + j·e_log·3^{j−1})`.
//!
//! `delta_c` is the larger of `coarse` and `parametric`, and the ledger holds
//! when `delta_c < 10⁻⁴·target`.

use serde::{Deserialize, Serialize};

use crate::interval::Interval;

pub const RELATIVE_RULE: f64 = 1e-4;
pub const G_ABS_ERROR: f64 = 3e-15;
pub const LOG_ROUNDING: f64 = 0.5e-14;
pub const LOG_CAP: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FpLedger {
    pub j: u32,
    pub t: f64,
    pub target: f64,
    pub min_g: f64,
    pub sup_g: f64,
    pub fine: f64,
    pub coarse: f64,
    /// `None` when `|ln G| ≤ 3` or `t·e_log < ½` fails.
    pub parametric: Option<f64>,
    pub delta_c: f64,
    pub limit: f64,
    /// `delta_c / target`.
    pub margin_factor: f64,
    pub holds: bool,
}

/// A range holding every `G` of the certified cases (the smallest minimum
/// is 0.0586, for `G₋` at `k = 2`).
pub fn default_g_range() -> Interval {
    Interval::new(1.0 / 20.0, 9.0)
}

pub fn fp_error_ledger(j: u32, t: f64, target: f64, g_range: Interval) -> FpLedger {
    let jf = j as f64;
    let three_j = 3f64.powi(j as i32);
    let sup_t = g_range.hi.powf(t);
    let fine = (2.0 * jf + 10.0) * 1e-14 * three_j * sup_t;
    let coarse = 32e-14 * 3f64.powi(6 + j as i32);

    let e_log = G_ABS_ERROR / g_range.lo + LOG_ROUNDING;
    let log_ok = g_range.lo.ln().abs() <= LOG_CAP && g_range.hi.ln().abs() <= LOG_CAP;
    let exp_ok = t * e_log < 0.5;
    let parametric = (log_ok && exp_ok).then(|| {
        let pow_part = 1.8 * t * e_log * three_j;
        let log_part = if j == 0 { 0.0 } else { jf * e_log * 3f64.powi(j as i32 - 1) };
        sup_t * (pow_part + log_part)
    });
    // a few ulps of slack on the model arithmetic itself
    let delta_c = coarse.max(parametric.unwrap_or(0.0)) * (1.0 + 1e-12);
    let limit = RELATIVE_RULE * target;
    FpLedger {
        j,
        t,
        target,
        min_g: g_range.lo,
        sup_g: g_range.hi,
        fine,
        coarse,
        parametric,
        delta_c,
        limit,
        margin_factor: delta_c / target,
        holds: parametric.is_some() && delta_c < limit,
    }
}
