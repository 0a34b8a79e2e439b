//! d′(1) > 0 for k=1 and d′(2), d″(2) > 0 for k=2.

use majorant::certify::endpoint_positivity;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (k, j0, t0, threshold) in [(1, 1, 1.0, 0.09), (2, 1, 2.0, 0.034), (2, 2, 2.0, 0.13)] {
        let f = endpoint_positivity(k, j0, t0, threshold)?;
        println!(
            "k={k} d^({j0})({t0}): |H''| <= {:.0}, N = {}, estimate {:.8}, error < {:.6}, fp {:.2e}, holds: {}",
            f.h_xx_bound(),
            f.plan.n,
            f.estimate,
            f.total_error,
            f.ledger.delta_c,
            f.holds
        );
    }
    Ok(())
}
