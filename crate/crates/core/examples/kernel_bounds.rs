//! Certified facts about G± and the H″ bound for a few (t, j).

use majorant::kernels::{bound_h_xx, bound_h_xx_grid, KernelBounds, KernelSpec};
use majorant::CaseId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k: u32 = std::env::args().nth(1).map_or(Ok(2), |s| s.parse())?;
    for case in [CaseId::plus(k), CaseId::minus(k)] {
        let kb = KernelBounds::certify(case)?;
        println!("{case}: G in [{:.6}, {:.6}], C1 {:.2}, C2 {:.2}, G''G in [{:.2}, {:.2}]",
            kb.min_g, kb.sup_g, kb.c1, kb.c2, kb.g2g_min, kb.g2g_max);
        let t = k as f64 + 0.5;
        for j in [0, k + 2, k + 9] {
            let spec = KernelSpec::new(case, t, j);
            let grid = bound_h_xx_grid(&spec).value / 1.1;
            match bound_h_xx(&spec) {
                Ok(b) => println!("  t={t} j={j:>2}: |H''| <= {:>16.1} ({:?}), grid max {:>16.1}", b.value, b.route, grid),
                Err(e) => println!("  t={t} j={j:>2}: {e}"),
            }
        }
    }
    Ok(())
}
