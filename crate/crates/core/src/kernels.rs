//! The integrands `H_{t,j,±}(x) = G±(x)^t · ln^j G±(x)`, their x-derivatives,
//! certified bounds on `‖H″‖∞` and `‖H‖`, and midpoint estimates of
//! `d⁽ʲ⁾(t) = ∫₀^½ (H_{t,j,−} − H_{t,j,+}) dx`.
//!
//! Writing `L = ln G`,
//!
//! ```text
//! H″ = G″ G^{t−1} A(L) + G′² G^{t−2} B(L)
//! A(L) = t L^j + j L^{j−1}
//! B(L) = t(t−1) L^j + j(2t−1) L^{j−1} + j(j−1) L^{j−2}
//! ```
//!
//! Terms with a negative power of `L` carry a zero coefficient and are dropped,
//! so `j = 0` gives `H″ = t G″ G^{t−1} + t(t−1) G′² G^{t−2}` and `j = 1` gives
//! `H″ = G″ G^{t−1} (tL + 1) + G′² G^{t−2} (t(t−1)L + 2t − 1)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::expr::UExpr;
use crate::extrema::{self, certified_max, certified_min, comparison_constant, ExtremaError, Tol};
use crate::interval::Interval;
use crate::quadrature::{self, midpoint_sum};
use crate::trigpoly::{build_g, CaseId, TrigPoly, UPoly};

pub const BOUND_TOL: Tol = Tol::Rel(1e-6);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub case: CaseId,
    pub t: f64,
    pub j: u32,
}

impl KernelSpec {
    pub fn new(case: CaseId, t: f64, j: u32) -> Self {
        KernelSpec { case, t, j }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("no certified H'' bound for k={k}, t={t}, j={j}; supported: the k=1 (t=3/2, j=3..10) and k=2 (t=5/2, j=4..11) families, t in {{1,2}} with j in {{1,2}}, and j=0")]
    Unsupported { k: u32, t: f64, j: u32 },
    #[error("min of {case} is not certified positive (lower bound {bound})")]
    NonPositiveG { case: CaseId, bound: f64 },
    #[error(transparent)]
    Extrema(#[from] ExtremaError),
}

/// `G`, `G′`, `G″` of one case, ready for pointwise evaluation.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub case: CaseId,
    pub g: TrigPoly,
    pub g1: TrigPoly,
    pub g2: TrigPoly,
}

fn lpow(c: f64, l: f64, p: i64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * l.powi(p as i32)
    }
}

/// Coefficients of `A` in ascending powers of `L`.
pub fn a_poly(t: f64, j: u32) -> UPoly {
    let j = j as usize;
    let mut c = vec![0.0; j + 1];
    c[j] += t;
    if j >= 1 {
        c[j - 1] += j as f64;
    }
    UPoly::from_coeffs(c)
}

pub fn b_poly(t: f64, j: u32) -> UPoly {
    let jf = j as f64;
    let j = j as usize;
    let mut c = vec![0.0; j + 1];
    c[j] += t * (t - 1.0);
    if j >= 1 {
        c[j - 1] += jf * (2.0 * t - 1.0);
    }
    if j >= 2 {
        c[j - 2] += jf * (jf - 1.0);
    }
    UPoly::from_coeffs(c)
}

impl Kernel {
    pub fn new(case: CaseId) -> Self {
        let g = build_g(case);
        let g1 = g.differentiate(1);
        let g2 = g.differentiate(2);
        Kernel { case, g, g1, g2 }
    }

    pub fn h(&self, t: f64, j: u32, x: f64) -> f64 {
        h_of_g(self.g.eval(x), t, j)
    }

    pub fn h_x(&self, t: f64, j: u32, x: f64) -> f64 {
        let g = self.g.eval(x);
        let l = g.ln();
        let jf = j as f64;
        let brace = lpow(t, l, j as i64) + lpow(jf, l, j as i64 - 1);
        g.powf(t - 1.0) * self.g1.eval(x) * brace
    }

    pub fn h_xx(&self, t: f64, j: u32, x: f64) -> f64 {
        let g = self.g.eval(x);
        let d1 = self.g1.eval(x);
        let d2 = self.g2.eval(x);
        let l = g.ln();
        let (jf, ji) = (j as f64, j as i64);
        let a = lpow(t, l, ji) + lpow(jf, l, ji - 1);
        let b = lpow(t * (t - 1.0), l, ji) + lpow(jf * (2.0 * t - 1.0), l, ji - 1) + lpow(jf * (jf - 1.0), l, ji - 2);
        let first = if a == 0.0 { 0.0 } else { d2 * g.powf(t - 1.0) * a };
        let second = if b == 0.0 { 0.0 } else { d1 * d1 * g.powf(t - 2.0) * b };
        first + second
    }
}

pub fn h_of_g(g: f64, t: f64, j: u32) -> f64 {
    if j == 0 {
        g.powf(t)
    } else {
        g.powf(t) * g.ln().powi(j as i32)
    }
}

pub fn h_eval(spec: &KernelSpec, x: f64) -> f64 {
    Kernel::new(spec.case).h(spec.t, spec.j, x)
}

pub fn h_xx(spec: &KernelSpec, x: f64) -> f64 {
    Kernel::new(spec.case).h_xx(spec.t, spec.j, x)
}

/// Certified facts about one `G±`, all one-sided.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelBounds {
    pub case: CaseId,
    /// Lower bound for `min G` and the approximate minimum.
    pub min_g: f64,
    pub min_g_witness: f64,
    /// Upper bound for `max G`.
    pub sup_g: f64,
    /// Upper bound for `max G′²`.
    pub sup_g1_sq: f64,
    /// Upper bound for `max |G″|`.
    pub sup_g2: f64,
    /// `G′² ≤ c1·G` and `|G″| ≤ c2·G`.
    pub c1: f64,
    pub c2: f64,
    /// Lower and upper bound of `G″·G`.
    pub g2g_min: f64,
    pub g2g_max: f64,
    /// Coefficient-sum bounds for `G`, `G′`, `G″`.
    pub norm_g: f64,
    pub norm_g1: f64,
    pub norm_g2: f64,
}

fn upoly_of(p: &TrigPoly) -> UPoly {
    p.to_upoly().expect("even polynomial")
}

impl KernelBounds {
    pub fn certify(case: CaseId) -> Result<Self, KernelError> {
        let kernel = Kernel::new(case);
        let g = UExpr::poly(upoly_of(&kernel.g));
        let g1_sq = UExpr::poly(upoly_of(&kernel.g1.multiply(&kernel.g1)));
        let g2 = UExpr::poly(upoly_of(&kernel.g2));
        let g2g = UExpr::poly(upoly_of(&kernel.g2.multiply(&kernel.g)));

        let min = certified_min(&g, -1.0, 1.0, BOUND_TOL)?;
        if min.certified_bound <= 0.0 {
            return Err(KernelError::NonPositiveG { case, bound: min.certified_bound });
        }
        let sup_g = certified_max(&g, -1.0, 1.0, BOUND_TOL)?.certified_bound;
        let sup_g1_sq = certified_max(&g1_sq, -1.0, 1.0, BOUND_TOL)?.certified_bound;
        let sup_g2 = certified_max(&g2.clone().abs(), -1.0, 1.0, BOUND_TOL)?.certified_bound;
        let c1 = comparison_constant(&g1_sq, &g, -1.0, 1.0, BOUND_TOL, None)?.certified;
        let c2 = comparison_constant(&g2.abs(), &g, -1.0, 1.0, BOUND_TOL, None)?.certified;
        let g2g_min = certified_min(&g2g, -1.0, 1.0, BOUND_TOL)?.certified_bound;
        let g2g_max = certified_max(&g2g, -1.0, 1.0, BOUND_TOL)?.certified_bound;
        Ok(KernelBounds {
            case,
            min_g: min.certified_bound,
            min_g_witness: min.witness_value,
            sup_g,
            sup_g1_sq,
            sup_g2,
            c1,
            c2,
            g2g_min,
            g2g_max,
            norm_g: kernel.g.coeff_norm(),
            norm_g1: kernel.g1.coeff_norm(),
            norm_g2: kernel.g2.coeff_norm(),
        })
    }

    /// Certified enclosure of `ln G` over the whole period.
    pub fn log_range(&self) -> Interval {
        let lo = Interval::point(self.min_g).ln().expect("min_g > 0").lo;
        let hi = Interval::point(self.sup_g).ln().expect("sup_g > 0").hi;
        Interval::new(lo, hi)
    }

    pub fn g_range(&self) -> Interval {
        Interval::new(self.min_g, self.sup_g)
    }
}

/// Certified `max |G′|` from the square bound.
pub fn sup_g1(bounds: &KernelBounds) -> f64 {
    Interval::point(bounds.sup_g1_sq).sqrt().expect("nonnegative").hi
}

/// `G′² ≤ 4G·|F′|² ≤ 16π²(k+3)²·G`, valid for every `k`, zeros of `G` included.
pub fn c1_analytic(k: u32) -> f64 {
    let s = Interval::pi() * Interval::point(4.0 * (k as f64 + 3.0));
    s.sqr().hi
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HxxRoute {
    /// `‖G″‖·G^{t−1}|A|` plus `Q`, split at `G = 1`.
    Split,
    /// `‖G″‖·G^{t−1}|A| + C1·G^{t−1}|B|`.
    Comparison,
    /// Separate bounds on `{G ≥ 1, G″ > 0}`, `{G ≥ 1, G″ ≤ 0}` and `{G < 1}`.
    ThreeBranch,
    /// Grid maximum times 1.1. Not certified.
    Exploratory,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HxxBound {
    pub value: f64,
    pub route: HxxRoute,
    pub certified: bool,
}

/// `max e^{cL}·|p(L)|` over `[lo, hi]`, certified from above. Empty ranges give 0.
pub fn envelope_max(c: f64, p: &UPoly, lo: f64, hi: f64) -> Result<f64, KernelError> {
    if !(lo <= hi) {
        return Ok(0.0);
    }
    let poly = UExpr::poly(p.clone()).abs();
    let e = if c == 0.0 { poly } else { (UExpr::var() * c).exp() * poly };
    Ok(certified_max(&e, lo, hi, BOUND_TOL)?.certified_bound)
}

pub fn is_table_family(spec: &KernelSpec) -> bool {
    match spec.case.k {
        1 => spec.t == 1.5 && (3..=10).contains(&spec.j),
        2 => spec.t == 2.5 && (4..=11).contains(&spec.j),
        _ => false,
    }
}

/// Route used for a spec, or `None` when the spec goes through the `j = 0`
/// power route or has no certified bound.
pub fn default_route(spec: &KernelSpec) -> Option<HxxRoute> {
    if is_table_family(spec) {
        Some(HxxRoute::Split)
    } else if spec.t == 2.0 && (1..=2).contains(&spec.j) {
        Some(HxxRoute::ThreeBranch)
    } else if spec.t == 1.0 && (1..=2).contains(&spec.j) {
        Some(HxxRoute::Comparison)
    } else {
        None
    }
}

pub fn bound_h_xx(spec: &KernelSpec) -> Result<HxxBound, KernelError> {
    match default_route(spec) {
        Some(route) => bound_h_xx_with(spec, &KernelBounds::certify(spec.case)?, route),
        None => bound_h_xx_power_or_reject(spec),
    }
}

/// Same as [`bound_h_xx`] with the case's bounds already certified.
pub fn bound_h_xx_using(spec: &KernelSpec, kb: &KernelBounds) -> Result<HxxBound, KernelError> {
    assert_eq!(spec.case, kb.case, "bounds belong to another case");
    match default_route(spec) {
        Some(route) => bound_h_xx_with(spec, kb, route),
        None => bound_h_xx_power_or_reject(spec),
    }
}

fn bound_h_xx_power_or_reject(spec: &KernelSpec) -> Result<HxxBound, KernelError> {
    if spec.j == 0 && spec.t >= 1.0 {
        bound_h_xx_power(spec.case, spec.t)
    } else {
        Err(KernelError::Unsupported { k: spec.case.k, t: spec.t, j: spec.j })
    }
}

/// The chosen route evaluated with precomputed bounds.
pub fn bound_h_xx_with(spec: &KernelSpec, kb: &KernelBounds, route: HxxRoute) -> Result<HxxBound, KernelError> {
    let (t, j) = (spec.t, spec.j);
    let lr = kb.log_range();
    let (a, b) = (a_poly(t, j), b_poly(t, j));
    let value = match route {
        HxxRoute::Split => {
            let first = kb.sup_g2 * envelope_max(t - 1.0, &a, lr.lo, lr.hi)?;
            let qa = kb.c1 * envelope_max(t - 1.0, &b, lr.lo, lr.hi.min(0.0))?;
            let qb = kb.sup_g1_sq * envelope_max(t - 2.0, &b, lr.lo.max(0.0), lr.hi)?;
            first + qa.max(qb)
        }
        HxxRoute::Comparison => {
            kb.sup_g2 * envelope_max(t - 1.0, &a, lr.lo, lr.hi)? + kb.c1 * envelope_max(t - 1.0, &b, lr.lo, lr.hi)?
        }
        HxxRoute::ThreeBranch => three_branch(kb, t, &a, &b, lr)?,
        HxxRoute::Exploratory => return Ok(bound_h_xx_grid(spec)),
    };
    Ok(HxxBound { value, route, certified: true })
}

fn three_branch(kb: &KernelBounds, t: f64, a: &UPoly, b: &UPoly, lr: Interval) -> Result<f64, KernelError> {
    let mut best: f64 = 0.0;
    if lr.hi >= 0.0 {
        let lo = lr.lo.max(0.0);
        // G″G^{t−1}A = (G″G)·G^{t−2}A
        let a_max = envelope_max(t - 2.0, a, lo, lr.hi)?;
        let b_max = envelope_max(t - 2.0, b, lo, lr.hi)?;
        // G ≥ 1 and G″ > 0: every factor is bounded above termwise.
        let b1 = kb.g2g_max.max(0.0) * a_max + kb.sup_g1_sq * b_max;
        // G ≥ 1 and G″ ≤ 0: the two terms have opposite signs when A, B ≥ 0.
        let a_nonneg = certified_min(&UExpr::poly(a.clone()), lo, lr.hi, BOUND_TOL)?.certified_bound >= 0.0;
        let b_nonneg = certified_min(&UExpr::poly(b.clone()), lo, lr.hi, BOUND_TOL)?.certified_bound >= 0.0;
        let neg = (-kb.g2g_min).max(0.0) * a_max;
        let pos = kb.sup_g1_sq * b_max;
        let b2 = if a_nonneg && b_nonneg { neg.max(pos) } else { neg + pos };
        best = best.max(b1).max(b2);
    }
    if lr.lo < 0.0 {
        let hi = lr.hi.min(0.0);
        // G < 1: |G″|·G^{t−1}|A| + C1·G^{t−1}|B|
        let b3 = kb.sup_g2 * envelope_max(t - 1.0, a, lr.lo, hi)? + kb.c1 * envelope_max(t - 1.0, b, lr.lo, hi)?;
        best = best.max(b3);
    }
    Ok(best)
}

/// Inputs of the `(G^t)″` bound: `sup G`, `sup |G″|` and `C1` with `G′² ≤ C1·G`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerBound {
    pub case: CaseId,
    pub sup_g: f64,
    pub sup_g2: f64,
    pub c1: f64,
}

impl PowerBound {
    /// Needs no lower bound on `G`; when `G` touches zero the comparison
    /// constant falls back to the analytic `16π²(k+3)²`.
    pub fn certify(case: CaseId) -> Result<Self, KernelError> {
        let kernel = Kernel::new(case);
        let g = UExpr::poly(upoly_of(&kernel.g));
        let g1_sq = UExpr::poly(upoly_of(&kernel.g1.multiply(&kernel.g1)));
        let g2 = UExpr::poly(upoly_of(&kernel.g2));
        let sup_g = certified_max(&g, -1.0, 1.0, BOUND_TOL)?.certified_bound;
        let sup_g2 = certified_max(&g2.abs(), -1.0, 1.0, BOUND_TOL)?.certified_bound;
        let c1 = match comparison_constant(&g1_sq, &g, -1.0, 1.0, BOUND_TOL, None) {
            Ok(c) => c.certified.min(c1_analytic(case.k)),
            Err(_) => c1_analytic(case.k),
        };
        Ok(PowerBound { case, sup_g, sup_g2, c1 })
    }

    /// `‖(G^t)″‖∞ ≤ (t·sup|G″| + t(t−1)·C1)·sup G^{t−1}` for `t ≥ 1`.
    pub fn value(&self, t: f64) -> f64 {
        assert!(t >= 1.0, "power route needs t >= 1");
        let g_pow = (Interval::point(self.sup_g).ln().expect("sup_g > 0") * Interval::point(t - 1.0)).exp().hi;
        let lin = Interval::point(self.sup_g2) * Interval::point(t);
        let quad = Interval::point(self.c1) * Interval::point(t) * Interval::point(t - 1.0);
        ((lin + quad) * Interval::point(g_pow)).hi
    }
}

/// Certified bound for `(G^t)″`, `t ≥ 1`, any `k`.
pub fn bound_h_xx_power(case: CaseId, t: f64) -> Result<HxxBound, KernelError> {
    let value = PowerBound::certify(case)?.value(t);
    Ok(HxxBound { value, route: HxxRoute::Comparison, certified: true })
}

/// Grid maximum of `|H″|` over `[0, 1/2]` with a 10% margin. Not a proof.
pub fn bound_h_xx_grid(spec: &KernelSpec) -> HxxBound {
    let kernel = Kernel::new(spec.case);
    let (_, hi) = extrema::grid_extrema(|x| kernel.h_xx(spec.t, spec.j, x).abs(), 0.0, 0.5, 20_001);
    HxxBound { value: 1.1 * hi, route: HxxRoute::Exploratory, certified: false }
}

/// Certified route when one exists, otherwise the grid fallback.
pub fn bound_h_xx_exploratory(spec: &KernelSpec) -> HxxBound {
    bound_h_xx(spec).unwrap_or_else(|_| bound_h_xx_grid(spec))
}

/// Hull of the certified ranges of `G₊` and `G₋`.
pub fn g_range_hull(k: u32) -> Result<Interval, KernelError> {
    let p = KernelBounds::certify(CaseId::plus(k))?;
    let m = KernelBounds::certify(CaseId::minus(k))?;
    Ok(p.g_range().hull(&m.g_range()))
}

/// `max_{ξ∈[a,b]} max_{G∈range} G^ξ |ln G|^m`, certified from above.
pub fn envelope_sup(range: Interval, a: f64, b: f64, m: u32) -> Result<f64, KernelError> {
    assert!(range.lo > 0.0 && a <= b);
    let lr = Interval::new(
        Interval::point(range.lo).ln().expect("positive").lo,
        Interval::point(range.hi).ln().expect("positive").hi,
    );
    let mut lm = vec![0.0; m as usize + 1];
    lm[m as usize] = 1.0;
    let lm = UPoly::from_coeffs(lm);
    // e^{ξL} is largest at ξ = a for L < 0 and at ξ = b for L > 0
    let below = envelope_max(a, &lm, lr.lo, lr.hi.min(0.0))?;
    let above = envelope_max(b, &lm, lr.lo.max(0.0), lr.hi)?;
    Ok(below.max(above))
}

/// Bound for `‖H_{ξ,m,±}‖∞` uniformly in `ξ ∈ [a,b]` and in the sign.
pub fn bound_h_sup(k: u32, a: f64, b: f64, m: u32) -> Result<f64, KernelError> {
    envelope_sup(g_range_hull(k)?, a, b, m)
}

/// Rigorous upper Riemann sum of `max_{ξ∈[a,b]} |H_{ξ,m}|` over `[0, 1/2]`.
pub fn bound_h_l1(case: CaseId, a: f64, b: f64, m: u32, cells: usize) -> Result<f64, KernelError> {
    bound_h_l1_using(&KernelBounds::certify(case)?, a, b, m, cells)
}

pub fn bound_h_l1_using(kb: &KernelBounds, a: f64, b: f64, m: u32, cells: usize) -> Result<f64, KernelError> {
    let case = kb.case;
    let g = upoly_of(&build_g(case));
    let clamp = |x: f64| Interval::new((x - 4e-16).max(-1.0), (x + 4e-16).min(1.0));
    let width = Interval::point(0.5).checked_div(Interval::point(cells as f64)).expect("cells > 0");
    let mut total = Interval::ZERO;
    for i in 0..cells {
        let x0 = 0.5 * i as f64 / cells as f64;
        let x1 = 0.5 * (i + 1) as f64 / cells as f64;
        let c1 = clamp((2.0 * PI * x1).cos());
        let c0 = clamp((2.0 * PI * x0).cos());
        let u = c1.hull(&c0);
        let gr = g
            .eval_interval(u)
            .intersect(&kb.g_range())
            .unwrap_or_else(|| kb.g_range());
        let l = gr.ln().map_err(|_| KernelError::NonPositiveG { case, bound: gr.lo })?;
        let ea = (Interval::point(a) * l).exp();
        let eb = (Interval::point(b) * l).exp();
        let env = Interval::new(0.0, ea.hi.max(eb.hi)) * l.abs().powi(m);
        total = total + width * Interval::new(0.0, env.hi);
    }
    Ok(total.hi)
}

/// Midpoint estimate of `d⁽ʲ⁾(t)` with `N` nodes per integral.
pub fn d_deriv_estimate(j: u32, t: f64, k: u32, n: usize) -> f64 {
    let (m, p) = rayon::join(
        || {
            let km = Kernel::new(CaseId::minus(k));
            midpoint_sum(|x| km.h(t, j, x), n)
        },
        || {
            let kp = Kernel::new(CaseId::plus(k));
            midpoint_sum(|x| kp.h(t, j, x), n)
        },
    );
    m - p
}

/// `G` and `ln G` at the `N` midpoint nodes, reused across many `(t, j)`.
#[derive(Clone, Debug)]
pub struct GSamples {
    pub n: usize,
    pub g: Vec<f64>,
    pub ln_g: Vec<f64>,
}

impl GSamples {
    pub fn new(case: CaseId, n: usize) -> Self {
        use rayon::prelude::*;
        let kernel = Kernel::new(case);
        let g: Vec<f64> = (0..n).into_par_iter().map(|i| kernel.g.eval(quadrature::node(i, n))).collect();
        let ln_g = g.iter().map(|v| v.ln()).collect();
        GSamples { n, g, ln_g }
    }

    pub fn integral(&self, t: f64, j: u32) -> f64 {
        use rayon::prelude::*;
        let vals: Vec<f64> = self
            .g
            .par_iter()
            .zip(self.ln_g.par_iter())
            .map(|(g, l)| if j == 0 { g.powf(t) } else { g.powf(t) * l.powi(j as i32) })
            .collect();
        quadrature::pairwise_sum(&vals) / (2 * self.n) as f64
    }
}

/// `d⁽ʲ⁾(t)` from cached samples of both signs.
pub fn d_from_samples(minus: &GSamples, plus: &GSamples, t: f64, j: u32) -> f64 {
    minus.integral(t, j) - plus.integral(t, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigpoly::Sign;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn h_eval_examples() {
        let spec = KernelSpec::new(CaseId::plus(1), 1.0, 0);
        assert!((h_eval(&spec, 0.1) - build_g(CaseId::plus(1)).eval(0.1)).abs() < 1e-14);
        let spec = KernelSpec::new(CaseId::plus(1), 1.5, 3);
        let expected = 27.0 * 9f64.ln().powi(3);
        assert!(rel(h_eval(&spec, 0.0), expected) < 1e-13);
        assert!((expected - 286.4).abs() < 0.1);
        // G₋(k=1) at x=0 equals 1
        let spec = KernelSpec::new(CaseId::minus(1), 2.5, 4);
        assert_eq!(h_eval(&spec, 0.0), 0.0);
    }

    #[test]
    fn h_xx_special_cases() {
        let k = Kernel::new(CaseId::minus(1));
        for i in 0..16 {
            let x = (i as f64 + 0.3) / 32.0;
            let g = k.g.eval(x);
            let d1 = k.g1.eval(x);
            let d2 = k.g2.eval(x);
            let expect = d2 * (g.ln() + 1.0) + d1 * d1 / g;
            assert!(rel(k.h_xx(1.0, 1, x), expect) < 1e-12 || (k.h_xx(1.0, 1, x) - expect).abs() < 1e-9);
            assert_eq!(k.h_xx(1.0, 0, x), d2);
        }
    }

    #[test]
    fn h_xx_matches_finite_differences() {
        let h = 1e-4;
        for k in [1u32, 2] {
            for sign in Sign::BOTH {
                let kernel = Kernel::new(CaseId::new(k, sign));
                for &(t, j) in &[(1.0, 0), (1.0, 1), (1.0, 2), (1.5, 3), (2.0, 1), (2.0, 2), (2.5, 4), (2.5, 11), (1.5, 10)] {
                    for i in 0..32 {
                        let x = (i as f64 + 0.5) / 64.0;
                        let fd = second_difference(|y| kernel.h(t, j, y), x, h);
                        let exact = kernel.h_xx(t, j, x);
                        let scale = exact.abs().max(1e-3 * bound_scale(&kernel, t, j));
                        assert!((fd - exact).abs() <= 1e-4 * scale, "k={k} {sign:?} t={t} j={j} x={x}: {fd} vs {exact}");
                    }
                }
            }
        }
    }

    // Richardson-extrapolated central second difference, O(h⁴)
    fn second_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        let d = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (4.0 * d(h) - d(2.0 * h)) / 3.0
    }

    // floor for points where H″ crosses zero
    fn bound_scale(kernel: &Kernel, t: f64, j: u32) -> f64 {
        (0..200).map(|i| kernel.h_xx(t, j, i as f64 / 400.0).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn h_x_matches_finite_differences() {
        let kernel = Kernel::new(CaseId::plus(2));
        let h = 1e-6;
        for i in 0..20 {
            let x = (i as f64 + 0.5) / 40.0;
            let fd = (kernel.h(2.5, 3, x + h) - kernel.h(2.5, 3, x - h)) / (2.0 * h);
            assert!((fd - kernel.h_x(2.5, 3, x)).abs() < 1e-5 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn a_b_polys() {
        assert_eq!(a_poly(2.0, 1).raw_coeffs(), &[1.0, 2.0]);
        assert_eq!(b_poly(2.0, 1).raw_coeffs(), &[3.0, 2.0]);
        assert_eq!(a_poly(2.0, 2).raw_coeffs(), &[0.0, 2.0, 2.0]);
        assert_eq!(b_poly(2.0, 2).raw_coeffs(), &[2.0, 6.0, 2.0]);
        assert_eq!(b_poly(1.0, 0).raw_coeffs(), &[0.0]);
    }

    #[test]
    fn kernel_bounds_k1() {
        let p = KernelBounds::certify(CaseId::plus(1)).unwrap();
        assert!(p.min_g > (-1.0f64).exp() && p.min_g <= 0.3692);
        assert!(p.c1 < 1300.0 && p.c2 < 2200.0);
        assert_eq!(p.norm_g, 9.0);
        assert!((p.norm_g1 - 24.0 * PI).abs() < 1e-12);
        let m = KernelBounds::certify(CaseId::minus(1)).unwrap();
        assert!(m.min_g > 1.0 / 9.0 && m.min_g <= 0.125);
        assert!(m.c1 < 1100.0 && m.c2 < 4000.0);
    }

    #[test]
    fn endpoint_bound_k1() {
        let b = bound_h_xx(&KernelSpec::new(CaseId::plus(1), 1.0, 1)).unwrap();
        assert!(b.value < 4900.0);
        assert_eq!(b.route, HxxRoute::Comparison);
    }

    #[test]
    fn endpoint_bounds_k2() {
        for (j, cap) in [(1, 99_800.0), (2, 260_000.0)] {
            for case in [CaseId::plus(2), CaseId::minus(2)] {
                let spec = KernelSpec::new(case, 2.0, j);
                let b = bound_h_xx(&spec).unwrap();
                assert_eq!(b.route, HxxRoute::ThreeBranch);
                let grid = bound_h_xx_grid(&spec).value / 1.1;
                assert!(grid <= b.value && b.value < cap, "{case} j={j}: grid {grid} bound {}", b.value);
            }
        }
    }

    #[test]
    fn unsupported_specs_are_rejected() {
        let r = bound_h_xx(&KernelSpec::new(CaseId::plus(3), 3.5, 4));
        assert!(matches!(r, Err(KernelError::Unsupported { k: 3, .. })));
        let e = bound_h_xx_exploratory(&KernelSpec::new(CaseId::plus(3), 3.5, 4));
        assert!(!e.certified && e.route == HxxRoute::Exploratory);
    }

    #[test]
    fn power_route_handles_vanishing_g() {
        // G₊ vanishes at x = 1/3 when k ≡ 0 mod 3
        let b = bound_h_xx(&KernelSpec::new(CaseId::plus(3), 3.5, 0)).unwrap();
        let k = Kernel::new(CaseId::plus(3));
        let (_, hi) = extrema::grid_extrema(|x| k.h_xx(3.5, 0, x).abs(), 0.0, 0.5, 100_001);
        assert!(b.certified && b.value >= hi);
    }

    #[test]
    fn sup_envelope_examples() {
        let r = bound_h_sup(1, 1.0, 2.0, 11).unwrap();
        let remainder = 2.0 * r / (40320.0 * 512.0);
        assert!((remainder - 0.04522).abs() < 1e-4);
        let m0 = bound_h_sup(1, 1.0, 2.0, 0).unwrap();
        assert!(rel(m0, 81.0) < 1e-5);
        let mut prev = 0.0;
        for m in 1..=14 {
            let v = bound_h_sup(2, 2.0, 3.0, m).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn l1_envelope_below_sup_envelope() {
        let case = CaseId::minus(2);
        let l1 = bound_h_l1(case, 2.0, 3.0, 12, 4096).unwrap();
        let sup = bound_h_sup(2, 2.0, 3.0, 12).unwrap();
        assert!(l1 <= 0.5 * sup);
        // the integral of the envelope at the ends of the ξ-range is a lower bound
        let k = Kernel::new(case);
        let approx = midpoint_sum(|x| k.h(3.0, 12, x).abs().max(k.h(2.0, 12, x).abs()), 4096);
        assert!(l1 >= approx);
    }

    #[test]
    fn parseval_zeros() {
        assert!(d_deriv_estimate(0, 1.0, 1, 1 << 12).abs() < 1e-12);
        assert!(d_deriv_estimate(0, 2.0, 1, 1 << 12).abs() < 1e-12);
        assert!(d_deriv_estimate(0, 3.0, 2, 1 << 12).abs() < 1e-12);
    }

    #[test]
    fn endpoint_estimates() {
        assert!((d_deriv_estimate(1, 1.0, 1, 24) - 0.0948).abs() < 2e-3);
        assert!((d_deriv_estimate(1, 2.0, 2, 175) - 0.03411).abs() < 5e-4);
        assert!((d_deriv_estimate(2, 2.0, 2, 145) - 0.13757).abs() < 2e-3);
    }

    #[test]
    fn samples_agree_with_direct_sums() {
        let m = GSamples::new(CaseId::minus(1), 300);
        let p = GSamples::new(CaseId::plus(1), 300);
        let a = d_from_samples(&m, &p, 1.5, 3);
        let b = d_deriv_estimate(3, 1.5, 1, 300);
        assert!((a - b).abs() < 1e-12);
    }
}
