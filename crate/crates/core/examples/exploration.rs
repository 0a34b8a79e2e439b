//! d(t) on [k, k+1] for larger k, with the reliability flag, and the
//! normalized shapes written as SVG.

use majorant::explore::{shape, shape_svg, tabulate, TabulateConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in [3, 7, 10, 13] {
        let rows = tabulate(&TabulateConfig { density: 0.1, ..TabulateConfig::unit(k) })?;
        let mid = &rows[5];
        let flagged = rows.iter().filter(|r| r.unreliable).count();
        println!("k={k:>2}: d({}) = {:.6e}, error bound {:.3e}, {flagged}/{} rows flagged", mid.t, mid.d, mid.error_bound, rows.len());
    }
    let curves = (1..=10).map(|k| shape(k, 0.001, 0.01)).collect::<Result<Vec<_>, _>>()?;
    for c in &curves {
        println!("f_{} peaks at s = {}", c.k, c.argmax_s);
    }
    let path = std::env::temp_dir().join("shapes.svg");
    std::fs::write(&path, shape_svg(&curves))?;
    println!("wrote {}", path.display());
    Ok(())
}
