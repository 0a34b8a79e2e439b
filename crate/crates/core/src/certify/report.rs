//! Per-`k` orchestration and the self-contained report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::endpoint::{endpoint_positivity_using, EndpointFact};
use super::k0::{verify_k0, K0Fact};
use super::ledger::{fp_error_ledger, RELATIVE_RULE};
use super::sign::{certify_negative, SignCertificate, SignVerdict};
use super::taylor::{build_taylor_certificate_using, eta_for, TaylorBudget, TaylorCertificate, L1_CELLS};
use super::{CaseBounds, CertifyError};
use crate::extrema::{DEFAULT_MAX_ITERATIONS, MAX_DEPTH};
use crate::interval::Interval;
use crate::kernels::BOUND_TOL;
use crate::quadrature::plan_steps;
use crate::trigpoly::{build_g, CaseId};

pub const SCHEMA_VERSION: u32 = 1;

const K0_P_SAMPLES: [f64; 9] = [0.5, 1.0, 1.5, 1.9, 2.0, 2.1, 3.0, 4.0, 6.0];
const K0_DENSITY: usize = 128;

/// `mean(G₊^t) = mean(G₋^t) = expected`, exact in coefficient arithmetic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsevalFact {
    pub k: u32,
    pub power: u32,
    pub mean_plus: f64,
    pub mean_minus: f64,
    pub expected: f64,
    pub holds: bool,
}

pub fn parseval_fact(k: u32, power: u32, expected: f64) -> ParsevalFact {
    let mean_plus = build_g(CaseId::plus(k)).power(power).mean();
    let mean_minus = build_g(CaseId::minus(k)).power(power).mean();
    ParsevalFact { k, power, mean_plus, mean_minus, expected, holds: mean_plus == expected && mean_minus == expected }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fact {
    ParsevalMean(ParsevalFact),
    EndpointPositivity(EndpointFact),
    TaylorCertificate(TaylorCertificate),
    SignCertificate(SignCertificate),
    K0Monotonicity(K0Fact),
    /// A logical consequence of earlier facts; nothing is computed.
    DerivedStep { depends_on: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactRecord {
    pub id: usize,
    pub statement: String,
    pub holds: bool,
    pub evidence: Fact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Proven,
    NotProven,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub crate_name: String,
    pub crate_version: String,
    pub bound_tolerance: String,
    pub max_depth: u32,
    pub max_iterations: usize,
    pub l1_cells: usize,
    pub fp_relative_rule: f64,
    /// Left empty so that two runs give identical reports.
    pub timings: BTreeMap<String, f64>,
}

impl Provenance {
    fn current() -> Self {
        Provenance {
            crate_name: env!("CARGO_PKG_NAME").to_string(),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            bound_tolerance: format!("{BOUND_TOL:?}"),
            max_depth: MAX_DEPTH,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            l1_cells: L1_CELLS,
            fp_relative_rule: RELATIVE_RULE,
            timings: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub schema_version: u32,
    pub k: u32,
    pub facts: Vec<FactRecord>,
    pub verdict: Verdict,
    pub provenance: Provenance,
    pub notes: Vec<String>,
}

struct Builder {
    facts: Vec<FactRecord>,
}

impl Builder {
    fn push(&mut self, statement: String, holds: bool, evidence: Fact) -> usize {
        let id = self.facts.len();
        self.facts.push(FactRecord { id, statement, holds, evidence });
        id
    }

    fn parseval(&mut self, k: u32, power: u32, expected: f64) -> usize {
        let f = parseval_fact(k, power, expected);
        self.push(format!("mean(G±^{power}) = {expected} for k={k}"), f.holds, Fact::ParsevalMean(f))
    }

    fn endpoint(&mut self, cb: &CaseBounds, j0: u32, t0: f64, threshold: f64) -> Result<usize, CertifyError> {
        let f = endpoint_positivity_using(cb, j0, t0, threshold)?;
        let s = format!("d^({j0})({t0}) > 0, estimate {:.6} with error below {threshold}", f.estimate);
        Ok(self.push(s, f.holds, Fact::EndpointPositivity(f)))
    }

    fn taylor_and_sign(&mut self, cb: &CaseBounds, m: u32, center: f64, budget: &TaylorBudget) -> Result<usize, CertifyError> {
        let cert = build_taylor_certificate_using(cb, m, center, budget.deltas.len() - 1, budget)?;
        let sign = certify_negative(&cert);
        let (a, b) = cert.interval();
        let n = cert.n;
        let s = format!("|d^({m}) - P_{n}| <= {:.4} on [{a}, {b}]", cert.total_delta);
        self.push(s, cert.holds(), Fact::TaylorCertificate(cert));
        let ok = sign.verdict == SignVerdict::NegativeOnInterval;
        Ok(self.push(format!("P_{n} + delta < 0 on [{a}, {b}], hence d^({m}) < 0 there"), ok, Fact::SignCertificate(sign)))
    }

    fn derived(&mut self, statement: &str, depends_on: Vec<usize>) -> usize {
        let holds = depends_on.iter().all(|&i| self.facts[i].holds);
        self.push(statement.to_string(), holds, Fact::DerivedStep { depends_on })
    }
}

pub fn prove_case(k: u32) -> Result<ProofReport, CertifyError> {
    let mut b = Builder { facts: Vec::new() };
    let mut notes = Vec::new();
    match k {
        0 => {
            let f = verify_k0(&K0_P_SAMPLES, K0_DENSITY);
            let id = b.push(
                "f_p(y) is monotone on (0, 1/2): decreasing for p > 2, increasing for p < 2".into(),
                f.holds,
                Fact::K0Monotonicity(f),
            );
            b.derived("1 + e(x) - e(2x) has the larger p-norm exactly when 0 < p < 2", vec![id]);
            notes.push("k=0 is checked on a grid of (x, y) for the sampled exponents; p = 2 is the constant case".into());
        }
        1 => {
            let cb = CaseBounds::certify(1)?;
            let p1 = b.parseval(1, 1, 3.0);
            let p2 = b.parseval(1, 2, 15.0);
            let e = b.endpoint(&cb, 1, 1.0, 0.09)?;
            let s = b.taylor_and_sign(&cb, 3, 1.5, &TaylorBudget::k1())?;
            b.derived(
                "d(1) = d(2) = 0, d'(1) > 0 and d''' < 0 on [1, 2]: d' is concave with a single zero, so d > 0 on (1, 2)",
                vec![p1, p2, e, s],
            );
            notes.push(delta_note(&TaylorBudget::k1(), &TaylorBudget::k1_alternate()));
        }
        2 => {
            let cb = CaseBounds::certify(2)?;
            let p2 = b.parseval(2, 2, 15.0);
            let p3 = b.parseval(2, 3, 93.0);
            let e1 = b.endpoint(&cb, 1, 2.0, 0.034)?;
            let e2 = b.endpoint(&cb, 2, 2.0, 0.13)?;
            let s = b.taylor_and_sign(&cb, 4, 2.5, &TaylorBudget::k2())?;
            b.derived(
                "d(2) = d(3) = 0, d'(2) > 0, d''(2) > 0 and d'''' < 0 on [2, 3]: d'' is concave, so d' and then d have one sign change, and d > 0 on (2, 3)",
                vec![p2, p3, e1, e2, s],
            );
            notes.push(delta_note(&TaylorBudget::k2(), &TaylorBudget::k2_alternate()));
            notes.push(
                "the remainder allotment is 0.30; with 0.34 the total band 0.79 exceeds |P_7(2)| and the sign chain fails".into(),
            );
        }
        _ => return Err(CertifyError::Unsupported { k }),
    }
    let verdict = if b.facts.iter().all(|f| f.holds) { Verdict::Proven } else { Verdict::NotProven };
    Ok(ProofReport { schema_version: SCHEMA_VERSION, k, facts: b.facts, verdict, provenance: Provenance::current(), notes })
}

fn delta_note(used: &TaylorBudget, other: &TaylorBudget) -> String {
    format!(
        "row deltas {:?} are used; the split {:?} has the same row total {} and is not used",
        used.deltas,
        other.deltas,
        used.row_total()
    )
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

impl ProofReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn failing_facts(&self) -> Vec<&FactRecord> {
        self.facts.iter().filter(|f| !f.holds).collect()
    }

    /// Re-derives every check from the numbers in the report alone. Returns
    /// the list of disagreements; empty means the report is consistent.
    pub fn revalidate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            issues.push(format!("schema version {} is not {}", self.schema_version, SCHEMA_VERSION));
        }
        let mut last_taylor: Option<&TaylorCertificate> = None;
        for (pos, rec) in self.facts.iter().enumerate() {
            let mut bad = |msg: String| issues.push(format!("fact {}: {msg}", rec.id));
            if rec.id != pos {
                bad(format!("id out of order at position {pos}"));
            }
            let holds = match &rec.evidence {
                Fact::ParsevalMean(p) => p.mean_plus == p.expected && p.mean_minus == p.expected,
                Fact::EndpointPositivity(e) => check_endpoint(e, &mut bad),
                Fact::TaylorCertificate(c) => {
                    last_taylor = Some(c);
                    check_taylor(c, &mut bad)
                }
                Fact::SignCertificate(s) => match last_taylor {
                    Some(c) => {
                        let again = certify_negative(c);
                        if &again != s {
                            bad("sign certificate differs from the one rebuilt from its Taylor certificate".into());
                        }
                        again.verdict == SignVerdict::NegativeOnInterval
                    }
                    None => {
                        bad("sign certificate without a preceding Taylor certificate".into());
                        false
                    }
                },
                Fact::K0Monotonicity(f) => {
                    !f.samples.is_empty()
                        && f.samples.iter().all(|s| {
                            let ordered = match s.expected_sign {
                                -1 => s.f_at_0 > s.f_at_half,
                                1 => s.f_at_half > s.f_at_0,
                                _ => (s.f_at_0 - s.f_at_half).abs() < 1e-9,
                            };
                            ordered && s.sign_violations == 0 && s.holds
                        })
                }
                Fact::DerivedStep { depends_on } => {
                    depends_on.iter().all(|&i| i < pos && self.facts[i].holds)
                }
            };
            if holds != rec.holds {
                bad(format!("recorded holds={} but the embedded numbers give {holds}", rec.holds));
            }
        }
        let all = self.facts.iter().all(|f| f.holds);
        let expect = if all { Verdict::Proven } else { Verdict::NotProven };
        if self.verdict != expect {
            issues.push(format!("verdict {:?} does not follow from the facts", self.verdict));
        }
        issues
    }
}

fn check_endpoint(e: &EndpointFact, bad: &mut impl FnMut(String)) -> bool {
    let sup = e.h_xx_bound();
    let plan = plan_steps(sup, e.threshold / 2.0);
    if plan.n != e.plan.n || !close(plan.error_bound, e.plan.error_bound) {
        bad(format!("planned N {} but the embedded bound gives {}", e.plan.n, plan.n));
    }
    if !close(e.total_error, 2.0 * e.plan.error_bound) {
        bad("total error is not twice the per-integral bound".into());
    }
    let ledger = fp_error_ledger(e.j0, e.t0, e.eta, Interval::new(e.ledger.min_g, e.ledger.sup_g));
    if ledger != e.ledger {
        bad("floating-point ledger does not recompute".into());
    }
    e.h_xx_plus.certified
        && e.h_xx_minus.certified
        && e.total_error < e.threshold
        && e.estimate - e.threshold > 0.0
        && ledger.holds
}

fn check_taylor(c: &TaylorCertificate, bad: &mut impl FnMut(String)) -> bool {
    let mut ok = true;
    let g_range = c.inputs.g_range();
    for r in &c.rows {
        if r.eta_j != eta_for(r.j, r.delta_j) {
            bad(format!("row {}: eta does not follow from delta", r.j));
        }
        let plan = plan_steps(r.h_xx_bound(), r.eta_j);
        if plan.n != r.n_j || r.plan.n != r.n_j {
            bad(format!("row {}: N {} but the embedded bound gives {}", r.j, r.n_j, plan.n));
        }
        if fp_error_ledger(c.m + r.j, c.center, r.eta_j, g_range) != r.ledger {
            bad(format!("row {}: floating-point ledger does not recompute", r.j));
        }
        ok &= r.holds();
    }
    let rem = &c.remainder;
    let den = Interval::point(rem.denominator);
    let sup_route = Interval::point(rem.sup_h).checked_div(den).map(|v| v.hi).unwrap_or(f64::NAN);
    let l1_route = (Interval::point(rem.l1_plus) + Interval::point(rem.l1_minus)).checked_div(den).map(|v| v.hi).unwrap_or(f64::NAN);
    if sup_route != rem.sup_route || l1_route != rem.l1_route || rem.bound != sup_route.min(l1_route) {
        bad("remainder routes do not recompute".into());
    }
    if !close(c.total_delta, c.row_delta_sum() + c.remainder_delta) {
        bad("total delta is not the row sum plus the remainder allotment".into());
    }
    ok && rem.bound <= c.remainder_delta
}
