//! Interval branch-and-bound on expressions in u: the minimum of G, a
//! comparison constant, and a square-root form of |G'|.

use majorant::extrema::{comparison_constant, grid_extrema};
use majorant::{build_g, certified_max, certified_min, CaseId, Tol, UExpr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tol::Rel(1e-6);
    let g = build_g(CaseId::minus(1));
    let gu = UExpr::poly(g.to_upoly()?);
    let min = certified_min(&gu, -1.0, 1.0, tol)?;
    println!(
        "min G-(k=1) >= {} (witness {} at u={}, {} cells)",
        min.certified_bound, min.witness_value, min.witness_point, min.subdivisions
    );

    let g1 = g.differentiate(1);
    let num = UExpr::poly(g1.multiply(&g1).to_upoly()?);
    let c = comparison_constant(&num, &gu, -1.0, 1.0, tol, Some(100.0))?;
    println!("G'^2 <= {} G (rounded up: {})", c.certified, c.rounded);

    // 8π·√w(|5−6w| + 8√(1−w)|1−2w|) on [0, 1]
    let w = UExpr::var();
    let e = 8.0 * UExpr::pi()
        * w.clone().sqrt()
        * ((5.0 - 6.0 * w.clone()).abs() + 8.0 * (1.0 - w.clone()).sqrt() * (1.0 - 2.0 * w.clone()).abs());
    let r = certified_max(&e, 0.0, 1.0, tol)?;
    println!("max = {} pi (certified <= {} pi)", r.witness_value / std::f64::consts::PI, r.certified_bound / std::f64::consts::PI);
    let (_, hi) = grid_extrema(|x| e.eval(x), 0.0, 1.0, 100_001);
    println!("grid max {}", hi / std::f64::consts::PI);
    Ok(())
}
