//! Certified extrema of univariate expressions by interval branch-and-bound.
//!
//! The search keeps a max-heap of subintervals keyed by their interval upper
//! bound. The best point value seen so far (a rigorous lower bound, taken at
//! subinterval midpoints) prunes the heap. The result is the maximum of the
//! upper bounds over a set of leaves covering the query interval, so it is an
//! upper bound for the supremum whatever the stopping point.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::expr::UExpr;
use crate::interval::{DomainIssue, Interval};

pub const MAX_DEPTH: u32 = 60;
pub const DEFAULT_MAX_ITERATIONS: usize = 2_000_000;

/// Stopping tolerance on `certified_bound - witness_value`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Tol {
    Abs(f64),
    /// `r * max(1, |best|)`.
    Rel(f64),
}

impl Tol {
    pub fn threshold(self, best: f64) -> f64 {
        match self {
            Tol::Abs(t) => t,
            Tol::Rel(r) => r * best.abs().max(1.0),
        }
    }

    pub fn halved(self) -> Tol {
        match self {
            Tol::Abs(t) => Tol::Abs(t / 2.0),
            Tol::Rel(r) => Tol::Rel(r / 2.0),
        }
    }
}

impl Default for Tol {
    fn default() -> Self {
        Tol::Rel(1e-6)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    /// Upper bound for max queries, lower bound for min queries.
    pub certified_bound: f64,
    pub witness_point: f64,
    pub witness_value: f64,
    pub subdivisions: usize,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ExtremaError {
    #[error("expression is not defined on [{lo}, {hi}]")]
    Domain { lo: f64, hi: f64 },
    #[error("subdivision budget exhausted: bound {bound}, witness {witness} at {point}")]
    BudgetExhausted { bound: f64, witness: f64, point: f64 },
    #[error("empty or invalid query interval [{lo}, {hi}]")]
    BadInterval { lo: f64, hi: f64 },
    #[error("denominator is not certified positive on [{lo}, {hi}]: lower bound {bound}")]
    NonPositiveDenominator { lo: f64, hi: f64, bound: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct Search {
    pub tol: Tol,
    pub max_iterations: usize,
}

impl Default for Search {
    fn default() -> Self {
        Search { tol: Tol::default(), max_iterations: DEFAULT_MAX_ITERATIONS }
    }
}

impl Search {
    pub fn with_tol(tol: Tol) -> Self {
        Search { tol, ..Search::default() }
    }
}

struct Cell {
    x: Interval,
    upper: f64,
    depth: u32,
    seq: u64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger upper first, then earlier cells
        self.upper.total_cmp(&other.upper).then_with(|| other.seq.cmp(&self.seq))
    }
}

fn upper_of(e: &UExpr, x: Interval) -> Result<f64, ExtremaError> {
    match e.eval_interval(x) {
        Ok(r) => Ok(r.hi),
        Err(DomainIssue::Possible) => Ok(f64::INFINITY),
        Err(DomainIssue::Definite) => Err(ExtremaError::Domain { lo: x.lo, hi: x.hi }),
    }
}

/// Rigorous lower bound of `e` at the point `x`, if defined.
fn point_lower(e: &UExpr, x: f64) -> Option<f64> {
    e.eval_interval(Interval::point(x)).ok().map(|r| r.lo).filter(|v| !v.is_nan())
}

pub fn certified_max(e: &UExpr, a: f64, b: f64, tol: Tol) -> Result<BoundResult, ExtremaError> {
    certified_max_with(e, a, b, Search::with_tol(tol))
}

pub fn certified_min(e: &UExpr, a: f64, b: f64, tol: Tol) -> Result<BoundResult, ExtremaError> {
    certified_min_with(e, a, b, Search::with_tol(tol))
}

pub fn certified_min_with(e: &UExpr, a: f64, b: f64, search: Search) -> Result<BoundResult, ExtremaError> {
    let neg = -e.clone();
    match certified_max_with(&neg, a, b, search) {
        Ok(r) => Ok(BoundResult {
            certified_bound: -r.certified_bound,
            witness_point: r.witness_point,
            witness_value: -r.witness_value,
            subdivisions: r.subdivisions,
        }),
        Err(ExtremaError::BudgetExhausted { bound, witness, point }) => {
            Err(ExtremaError::BudgetExhausted { bound: -bound, witness: -witness, point })
        }
        Err(err) => Err(err),
    }
}

pub fn certified_max_with(e: &UExpr, a: f64, b: f64, search: Search) -> Result<BoundResult, ExtremaError> {
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(ExtremaError::BadInterval { lo: a, hi: b });
    }
    let root = Interval::new(a, b);
    let mut best = f64::NEG_INFINITY;
    let mut best_x = root.mid();
    let consider = |x: f64, best: &mut f64, best_x: &mut f64| {
        if let Some(v) = point_lower(e, x) {
            if v > *best || (v == *best && x < *best_x) {
                *best = v;
                *best_x = x;
            }
        }
    };
    consider(root.mid(), &mut best, &mut best_x);

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Cell { x: root, upper: upper_of(e, root)?, depth: 0, seq });
    // leaves that left the heap: pruned, or too deep to split
    let mut retired = f64::NEG_INFINITY;
    let mut subdivisions = 0usize;

    while let Some(top) = heap.peek() {
        if top.upper - best <= search.tol.threshold(best) {
            break;
        }
        let cell = heap.pop().expect("peeked");
        if cell.depth >= MAX_DEPTH || cell.x.width() == 0.0 {
            if cell.upper == f64::INFINITY {
                return Err(ExtremaError::Domain { lo: cell.x.lo, hi: cell.x.hi });
            }
            retired = retired.max(cell.upper);
            continue;
        }
        if subdivisions >= search.max_iterations {
            heap.push(cell);
            break;
        }
        subdivisions += 1;
        let m = cell.x.mid();
        for child in [Interval::new(cell.x.lo, m), Interval::new(m, cell.x.hi)] {
            consider(child.mid(), &mut best, &mut best_x);
            // cap by the parent so refinement never raises the bound
            let upper = upper_of(e, child)?.min(cell.upper);
            seq += 1;
            if upper <= best {
                retired = retired.max(upper);
            } else {
                heap.push(Cell { x: child, upper, depth: cell.depth + 1, seq });
            }
        }
    }

    let bound = heap.peek().map_or(f64::NEG_INFINITY, |c| c.upper).max(retired);
    if best == f64::NEG_INFINITY {
        return Err(ExtremaError::Domain { lo: a, hi: b });
    }
    if bound - best > search.tol.threshold(best) || !bound.is_finite() {
        return Err(ExtremaError::BudgetExhausted { bound, witness: best, point: best_x });
    }
    Ok(BoundResult {
        certified_bound: bound,
        witness_point: best_x,
        witness_value: best,
        subdivisions,
    })
}

/// Certified constant `C` with `numerator <= C * denominator` on `[a, b]`,
/// rounded up to a multiple of `granularity` when one is given.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonConstant {
    pub certified: f64,
    pub rounded: f64,
    pub denominator_min: f64,
    pub witness_point: f64,
}

pub fn comparison_constant(
    numerator: &UExpr,
    denominator: &UExpr,
    a: f64,
    b: f64,
    tol: Tol,
    granularity: Option<f64>,
) -> Result<ComparisonConstant, ExtremaError> {
    let den_min = certified_min(denominator, a, b, tol)?;
    if den_min.certified_bound <= 0.0 {
        return Err(ExtremaError::NonPositiveDenominator { lo: a, hi: b, bound: den_min.certified_bound });
    }
    let q = numerator.clone() / denominator.clone();
    let r = certified_max(&q, a, b, tol)?;
    let rounded = match granularity {
        Some(g) if g > 0.0 => (r.certified_bound / g).ceil() * g,
        _ => r.certified_bound,
    };
    Ok(ComparisonConstant {
        certified: r.certified_bound,
        rounded,
        denominator_min: den_min.certified_bound,
        witness_point: r.witness_point,
    })
}

/// Brute-force grid extrema, used as an oracle and by exploratory fallbacks.
pub fn grid_extrema(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> (f64, f64) {
    let n = points.max(2);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let x = a + (b - a) * i as f64 / (n - 1) as f64;
        let v = f(x);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}
