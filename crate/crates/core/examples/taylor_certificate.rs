//! Builds the Taylor certificate for d''' around 3/2 (k=1) or d'''' around
//! 5/2 (k=2) and runs the sign chain on it.
//!
//! cargo run --release --example taylor_certificate -- 2

use majorant::certify::{build_taylor_certificate, certify_negative, TaylorBudget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k: u32 = std::env::args().nth(1).map_or(Ok(1), |s| s.parse())?;
    let (m, center, budget) = match k {
        1 => (3, 1.5, TaylorBudget::k1()),
        2 => (4, 2.5, TaylorBudget::k2()),
        _ => return Err("k must be 1 or 2".into()),
    };
    let cert = build_taylor_certificate(k, m, center, 7, &budget)?;
    println!(" j   delta     eta        H'' bound          N    dbar_j");
    for r in &cert.rows {
        println!(
            "{:>2}  {:<8} {:<9} {:>16.1} {:>6}  {:.9}",
            r.j,
            r.delta_j,
            r.eta_j,
            r.h_xx_bound(),
            r.n_j,
            r.dbar_j
        );
    }
    let rem = &cert.remainder;
    println!("remainder: sup route {:.6}, L1 route {:.6}, allotted {}", rem.sup_route, rem.l1_route, cert.remainder_delta);
    println!("total band {}", cert.total_delta);

    let sign = certify_negative(&cert);
    let left = cert.interval().0;
    println!("P_7({left}) = {:.8}", cert.poly_value(left));
    for (i, v) in sign.endpoint_derivs.iter().enumerate() {
        println!("p^({i})({left}) = {v:.9}");
    }
    println!("tail p^({}): leading {:.6}, discriminant {:.3}", sign.tail_order, sign.quad_leading, sign.quad_discriminant);
    println!("verdict: {:?}", sign.verdict);
    Ok(())
}
