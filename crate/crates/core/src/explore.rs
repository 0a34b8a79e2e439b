//! Tabulation of `d(t)` beyond the certified cases, normalized shapes, SVG
//! plots, and an inventory of certified constants against their targets.
//!
//! A quadrature step `h` on `[0, ½]` means `N = round(1/(2h))` midpoint nodes,
//! so `h = 0.001` is `N = 500`. Each tabulated value carries the bound
//! `2·max± ‖(G±^t)″‖∞ / (192N²)`; when that exceeds `|d(t)|` the sign of the
//! value is not evidence of anything and the row is flagged.

use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};

use crate::certify::CaseBounds;
use crate::extrema::{certified_max, certified_min};
use crate::expr::UExpr;
use crate::kernels::{
    bound_h_xx_grid, bound_h_xx_using, d_from_samples, sup_g1, GSamples, KernelError, KernelSpec, PowerBound, BOUND_TOL,
};
use crate::trigpoly::{build_g, CaseId};

#[derive(Debug, thiserror::Error)]
pub enum ExploreError {
    #[error("invalid range: {0}")]
    BadRange(String),
    #[error("no certified inventory for k={k}; pass --exploratory for uncertified values")]
    Unsupported { k: u32 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Midpoint nodes on `[0, ½]` for a node spacing `step`.
pub fn nodes_for_step(step: f64) -> usize {
    ((1.0 / (2.0 * step)).round() as usize).max(1)
}

/// `t_min, t_min + density, …` up to `t_max`, stepped by integer count.
pub fn t_grid(t_min: f64, t_max: f64, density: f64) -> Result<Vec<f64>, ExploreError> {
    if !(density > 0.0) || !(t_max >= t_min) || !t_min.is_finite() || !t_max.is_finite() {
        return Err(ExploreError::BadRange(format!("t in [{t_min}, {t_max}] with density {density}")));
    }
    let count = ((t_max - t_min) / density + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| t_min + i as f64 * density).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TabRow {
    pub t: f64,
    pub d: f64,
    pub error_bound: f64,
    /// The error bound is not certified (grid estimate of `H″`).
    pub exploratory: bool,
    pub unreliable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TabulateConfig {
    pub k: u32,
    pub t_min: f64,
    pub t_max: f64,
    pub step: f64,
    pub density: f64,
    /// Use the grid estimate of `‖H″‖∞` instead of the certified power bound.
    pub exploratory: bool,
}

impl TabulateConfig {
    /// Whole interval `[k, k+1]` at step 0.001 and density 0.01.
    pub fn unit(k: u32) -> Self {
        TabulateConfig { k, t_min: k as f64, t_max: k as f64 + 1.0, step: 0.001, density: 0.01, exploratory: false }
    }
}

pub fn tabulate(cfg: &TabulateConfig) -> Result<Vec<TabRow>, ExploreError> {
    if !(cfg.step > 0.0) || cfg.step > 0.5 {
        return Err(ExploreError::BadRange(format!("step {} must lie in (0, 0.5]", cfg.step)));
    }
    if cfg.t_min < 1.0 {
        return Err(ExploreError::BadRange("error bounds need t >= 1".into()));
    }
    let ts = t_grid(cfg.t_min, cfg.t_max, cfg.density)?;
    let n = nodes_for_step(cfg.step);
    let (plus, minus) = (CaseId::plus(cfg.k), CaseId::minus(cfg.k));
    let (sp, sm) = rayon::join(|| GSamples::new(plus, n), || GSamples::new(minus, n));
    let bounds = if cfg.exploratory { None } else { Some((PowerBound::certify(plus)?, PowerBound::certify(minus)?)) };
    let n2 = (n as f64).powi(2);
    Ok(ts
        .into_iter()
        .map(|t| {
            let d = d_from_samples(&sm, &sp, t, 0);
            let sup = match &bounds {
                Some((bp, bm)) => bp.value(t).max(bm.value(t)),
                None => {
                    let g = |c| bound_h_xx_grid(&KernelSpec::new(c, t, 0)).value;
                    g(plus).max(g(minus))
                }
            };
            let error_bound = 2.0 * sup / (192.0 * n2);
            TabRow { t, d, error_bound, exploratory: cfg.exploratory, unreliable: error_bound > d.abs() }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeCurve {
    pub k: u32,
    pub s: Vec<f64>,
    /// `d(k+s) / max d`.
    pub f: Vec<f64>,
    pub max_d: f64,
    pub argmax_s: f64,
}

/// `f_k(s) = d(k+s) / max_{[k,k+1]} d` on the tabulation grid.
pub fn shape(k: u32, step: f64, density: f64) -> Result<ShapeCurve, ExploreError> {
    if k == 0 {
        return Err(ExploreError::BadRange("shapes start at k = 1".into()));
    }
    if !(step > 0.0) || step > 0.5 {
        return Err(ExploreError::BadRange(format!("step {step} must lie in (0, 0.5]")));
    }
    let s: Vec<f64> = t_grid(0.0, 1.0, density)?;
    let ts: Vec<f64> = s.iter().map(|s| k as f64 + s).collect();
    let n = nodes_for_step(step);
    let (sp, sm) = rayon::join(|| GSamples::new(CaseId::plus(k), n), || GSamples::new(CaseId::minus(k), n));
    let d: Vec<f64> = ts.iter().map(|&t| d_from_samples(&sm, &sp, t, 0)).collect();
    // first index wins ties
    let (imax, max_d) = d.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    Ok(ShapeCurve { k, f: d.iter().map(|v| v / max_d).collect(), argmax_s: s[imax], s, max_d })
}

pub fn write_tab_csv<W: io::Write>(rows: &[TabRow], out: W) -> Result<(), ExploreError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_tab_csv<R: io::Read>(input: R) -> Result<Vec<TabRow>, ExploreError> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}

/// Long format: one row per `(k, s)`.
pub fn write_shape_csv<W: io::Write>(curves: &[ShapeCurve], out: W) -> Result<(), ExploreError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "s", "f", "argmax_s"])?;
    for c in curves {
        for (s, f) in c.s.iter().zip(&c.f) {
            w.write_record([c.k.to_string(), s.to_string(), f.to_string(), c.argmax_s.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 400.0;
const SVG_PAD: f64 = 40.0;

/// Static SVG with one polyline per series through exactly the given points.
pub fn svg_plot(series: &[(String, Vec<(f64, f64)>)]) -> String {
    let pts = series.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| SVG_PAD + (x - x0) / (x1 - x0) * (SVG_W - 2.0 * SVG_PAD);
    let sy = |y: f64| SVG_H - SVG_PAD - (y - y0) / (y1 - y0) * (SVG_H - 2.0 * SVG_PAD);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#);
    let _ = writeln!(
        s,
        r#"<rect x="{SVG_PAD}" y="{SVG_PAD}" width="{}" height="{}" fill="none" stroke="gray"/>"#,
        SVG_W - 2.0 * SVG_PAD,
        SVG_H - 2.0 * SVG_PAD
    );
    let _ = writeln!(s, r#"<text x="{SVG_PAD}" y="{}" font-size="11">{x0}</text>"#, SVG_H - 12.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{x1}</text>"#, SVG_W - SVG_PAD, SVG_H - 12.0);
    let _ = writeln!(s, r#"<text x="4" y="{}" font-size="11">{y1:.4e}</text>"#, SVG_PAD - 6.0);
    let _ = writeln!(s, r#"<text x="4" y="{}" font-size="11">{y0:.4e}</text>"#, SVG_H - SVG_PAD + 14.0);
    let colors = ["steelblue", "firebrick", "seagreen", "rebeccapurple", "darkorange", "sienna"];
    for (i, (name, p)) in series.iter().enumerate() {
        let coords: Vec<String> = p.iter().map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline data-series="{name}" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            colors[i % colors.len()],
            coords.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn tab_svg(k: u32, rows: &[TabRow]) -> String {
    svg_plot(&[(format!("d_{k}"), rows.iter().map(|r| (r.t, r.d)).collect())])
}

pub fn shape_svg(curves: &[ShapeCurve]) -> String {
    let series: Vec<_> =
        curves.iter().map(|c| (format!("f_{}", c.k), c.s.iter().copied().zip(c.f.iter().copied()).collect())).collect();
    svg_plot(&series)
}

/// One certified constant and the value it is checked against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub name: String,
    pub value: f64,
    /// Open lower end of the target range.
    pub target_above: Option<f64>,
    /// Closed upper end of the target range.
    pub target_at_most: Option<f64>,
    pub certified: bool,
    pub within: Option<bool>,
}

impl BoundRow {
    fn new(name: impl Into<String>, value: f64, above: Option<f64>, at_most: Option<f64>, certified: bool) -> Self {
        let within = (above.is_some() || at_most.is_some())
            .then(|| above.is_none_or(|a| value > a) && at_most.is_none_or(|b| value <= b));
        BoundRow { name: name.into(), value, target_above: above, target_at_most: at_most, certified, within }
    }
}

struct Targets {
    min_g: [(f64, f64); 2],
    c1: [f64; 2],
    c2: Option<[f64; 2]>,
    g2g: Option<[(f64, f64); 2]>,
    g1: Option<f64>,
    t: f64,
    j0: u32,
    table: [f64; 8],
}

fn targets(k: u32) -> Option<Targets> {
    use std::f64::consts::{E, PI};
    match k {
        1 => Some(Targets {
            min_g: [(1.0 / E, 0.3692), (1.0 / 9.0, 0.1250)],
            c1: [1300.0, 1100.0],
            c2: Some([2200.0, 4000.0]),
            g2g: None,
            g1: None,
            t: 1.5,
            j0: 3,
            table: [195745.0, 560366.0, 1577686.0, 4228176.0, 11254403.0, 29470592.0, 76110084.0, 194242755.0],
        }),
        2 => Some(Targets {
            min_g: [(0.25, 0.2705), (1.0 / 16.0, 0.0635)],
            c1: [2300.0, 2600.0],
            c2: None,
            g2g: Some([(-18500.0, 2820.0), (-14800.0, 2710.0)]),
            g1: Some(29.12 * PI),
            t: 2.5,
            j0: 4,
            table: [16e6, 40e6, 104e6, 267e6, 680e6, 1705e6, 4255e6, 10600e6],
        }),
        _ => None,
    }
}

/// Every certified constant for `k ∈ {1, 2}` next to its target. With
/// `exploratory`, other `k` get `G` extremes and grid `H″` estimates.
pub fn bounds_inventory(k: u32, exploratory: bool) -> Result<Vec<BoundRow>, ExploreError> {
    let Some(tg) = targets(k) else {
        return if exploratory { exploratory_inventory(k) } else { Err(ExploreError::Unsupported { k }) };
    };
    let cb = CaseBounds::certify(k)?;
    let mut rows = Vec::new();
    for (i, kb) in cb.both().into_iter().enumerate() {
        let c = kb.case;
        let (lo, hi) = tg.min_g[i];
        rows.push(BoundRow::new(format!("min {c}"), kb.min_g, Some(lo), Some(hi), true));
        rows.push(BoundRow::new(format!("max {c}"), kb.sup_g, None, Some(9.0), true));
        rows.push(BoundRow::new(format!("C1 {c} (G'^2 <= C1 G)"), kb.c1, None, Some(tg.c1[i]), true));
        let c2_target = tg.c2.map(|v| v[i]);
        rows.push(BoundRow::new(format!("C2 {c} (|G''| <= C2 G)"), kb.c2, None, c2_target, true));
        match tg.g2g {
            Some(r) => {
                rows.push(BoundRow::new(format!("min G''G {c}"), kb.g2g_min, Some(r[i].0), None, true));
                rows.push(BoundRow::new(format!("max G''G {c}"), kb.g2g_max, None, Some(r[i].1), true));
            }
            None => {
                rows.push(BoundRow::new(format!("min G''G {c}"), kb.g2g_min, None, None, true));
                rows.push(BoundRow::new(format!("max G''G {c}"), kb.g2g_max, None, None, true));
            }
        }
        rows.push(BoundRow::new(format!("max |G'| {c}"), sup_g1(kb), None, tg.g1, true));
        rows.push(BoundRow::new(format!("max |G''| {c}"), kb.sup_g2, None, None, true));
    }
    for (i, target) in tg.table.iter().enumerate() {
        let j = tg.j0 + i as u32;
        let bp = bound_h_xx_using(&KernelSpec::new(cb.plus.case, tg.t, j), &cb.plus)?;
        let bm = bound_h_xx_using(&KernelSpec::new(cb.minus.case, tg.t, j), &cb.minus)?;
        let value = bp.value.max(bm.value);
        rows.push(BoundRow::new(format!("H'' t={} j={j}", tg.t), value, None, Some(*target), bp.certified && bm.certified));
    }
    Ok(rows)
}

fn exploratory_inventory(k: u32) -> Result<Vec<BoundRow>, ExploreError> {
    let t = k as f64 + 0.5;
    let mut rows = Vec::new();
    for c in [CaseId::plus(k), CaseId::minus(k)] {
        let g = UExpr::poly(build_g(c).to_upoly().expect("G is even"));
        let lo = certified_min(&g, -1.0, 1.0, BOUND_TOL).map_err(KernelError::from)?;
        let pb = PowerBound::certify(c)?;
        rows.push(BoundRow::new(format!("min {c}"), lo.certified_bound, None, None, true));
        rows.push(BoundRow::new(format!("max {c}"), certified_max(&g, -1.0, 1.0, BOUND_TOL).map_err(KernelError::from)?.certified_bound, None, None, true));
        rows.push(BoundRow::new(format!("H'' t={t} j=0 {c}"), pb.value(t), None, None, true));
        rows.push(BoundRow::new(format!("H'' t={t} j=0 {c} grid"), bound_h_xx_grid(&KernelSpec::new(c, t, 0)).value, None, None, false));
    }
    Ok(rows)
}

pub fn write_bounds_csv<W: io::Write>(rows: &[BoundRow], out: W) -> Result<(), ExploreError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn step_maps_to_nodes() {
        assert_eq!(nodes_for_step(0.001), 500);
        assert_eq!(nodes_for_step(0.5), 1);
    }

    #[test]
    fn grid_is_inclusive() {
        let g = t_grid(10.0, 11.0, 0.01).unwrap();
        assert_eq!(g.len(), 101);
        assert!((g[100] - 11.0).abs() < 1e-12);
        assert!(t_grid(1.0, 0.0, 0.1).is_err());
        assert!(t_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn parseval_zeros_are_below_the_bound() {
        let cfg = TabulateConfig { density: 1.0, ..TabulateConfig::unit(1) };
        let rows = tabulate(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        for r in rows {
            assert!(r.d.abs() < r.error_bound && r.unreliable, "{r:?}");
        }
    }

    #[test]
    fn csv_round_trip() {
        let rows = tabulate(&TabulateConfig { density: 0.25, ..TabulateConfig::unit(2) }).unwrap();
        let mut buf = Vec::new();
        write_tab_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("t,d,error_bound,exploratory,unreliable\n"));
        assert_eq!(read_tab_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn svg_has_exactly_the_points() {
        let rows: Vec<TabRow> = (0..7)
            .map(|i| TabRow { t: i as f64, d: (i * i) as f64, error_bound: 0.0, exploratory: false, unreliable: false })
            .collect();
        let svg = tab_svg(3, &rows);
        let points = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(points.split(' ').count(), 7);
    }

    #[test]
    fn unknown_k_needs_the_flag() {
        assert!(matches!(bounds_inventory(4, false), Err(ExploreError::Unsupported { k: 4 })));
    }

    proptest! {
        #[test]
        fn grid_spacing(t0 in 1.0f64..20.0, len in 0.0f64..2.0, density in 0.005f64..0.5) {
            let g = t_grid(t0, t0 + len, density).unwrap();
            prop_assert!(g[0] == t0);
            prop_assert!(*g.last().unwrap() <= t0 + len + 1e-9);
            prop_assert!(*g.last().unwrap() + density > t0 + len - 1e-9);
        }
    }
}
