//! G± as a cosine polynomial and as a polynomial in u = cos 2πx, with the
//! exact Parseval means.

use majorant::{build_g, CaseId};

fn main() {
    for k in [1, 2] {
        for case in [CaseId::plus(k), CaseId::minus(k)] {
            let g = build_g(case);
            let u = g.to_upoly().expect("G is even");
            let g1 = g.differentiate(1);
            let g2sq = g1.multiply(&g1).to_upoly().expect("G'^2 is even");
            println!("{case}");
            println!("  cos coefficients {:?}", g.cos_coeffs());
            println!("  in u             {:?}", u.coeffs());
            println!("  G'^2 / pi^{}     {:?}", g2sq.pi_power(), g2sq.raw_coeffs());
            let x = 0.137;
            println!("  G({x}) = {} = {}", g.eval(x), u.eval((2.0 * std::f64::consts::PI * x).cos()));
            let means: Vec<f64> = (1..=3).map(|m| g.power(m).mean()).collect();
            println!("  mean G, G^2, G^3 = {means:?}");
        }
    }
}
