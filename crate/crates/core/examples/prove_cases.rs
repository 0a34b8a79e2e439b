//! Runs every proof skeleton and prints the fact list.

use majorant::certify::{prove_case, Verdict};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for k in 0..=3 {
        match prove_case(k) {
            Ok(r) => {
                println!("k={k}: {:?}", r.verdict);
                for f in &r.facts {
                    println!("  [{}] {}", if f.holds { "ok" } else { "FAILED" }, f.statement);
                }
                assert_eq!(r.verdict, Verdict::Proven);
            }
            Err(e) => println!("k={k}: {e}"),
        }
    }
    Ok(())
}
