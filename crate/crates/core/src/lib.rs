//! Certified numerics for the three-term idempotents `1 + e(x) ± e((k+2)x)`
//! in the Hardy–Littlewood majorant problem.
//!
//! With `G± = |1 + e(x) ± e((k+2)x)|²` and `d(t) = ∫₀^½ (G₋^t − G₊^t) dx`,
//! the crate certifies `d > 0` on `(k, k+1)` for `k = 0, 1, 2` and tabulates
//! `d` for larger `k`.

// `!(a <= b)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod explore;
pub mod expr;
pub mod extrema;
pub mod interval;
pub mod kernels;
pub mod quadrature;
pub mod trigpoly;

pub use expr::UExpr;
pub use extrema::{certified_max, certified_min, comparison_constant, BoundResult, Tol};
pub use interval::Interval;
pub use trigpoly::{build_g, CaseId, Sign, TrigPoly, UPoly};
