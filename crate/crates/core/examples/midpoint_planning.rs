//! Node counts from a bound on ‖f″‖∞, and the midpoint sum of G^{3/2}.

use majorant::kernels::{bound_h_xx, d_deriv_estimate, KernelSpec};
use majorant::quadrature::{error_bound, plan_steps};
use majorant::CaseId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (sup, eta) in [(195745.0, 0.025), (194242755.0, 64.512), (4900.0, 0.045)] {
        let p = plan_steps(sup, eta);
        println!("sup {sup:>12} eta {eta:<7} -> N = {:>4}, error {:.6}", p.n, p.error_bound);
    }
    let spec = KernelSpec::new(CaseId::plus(1), 1.0, 1);
    let b = bound_h_xx(&spec)?;
    println!("|H''| for {:?} <= {:.1} via {:?}", spec, b.value, b.route);
    for n in [24, 100, 1000] {
        println!("N = {n:>4}: d(1.5) ~ {:.9} +- {:.2e}", d_deriv_estimate(0, 1.5, 1, n), error_bound(b.value, None, n));
    }
    Ok(())
}
