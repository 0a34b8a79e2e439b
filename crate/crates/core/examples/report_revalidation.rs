//! Serializes a report, reads it back, re-checks it from its own numbers,
//! then shows that an edited number is caught.

use majorant::certify::{prove_case, Fact, ProofReport};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = prove_case(1)?;
    let json = report.to_json();
    println!("report: {} bytes, {} facts", json.len(), report.facts.len());

    let back = ProofReport::from_json(&json)?;
    println!("round trip identical: {}", back == report);
    println!("issues: {:?}", back.revalidate());

    let mut edited = back.clone();
    for f in &mut edited.facts {
        if let Fact::TaylorCertificate(c) = &mut f.evidence {
            c.rows[3].n_j -= 1;
        }
    }
    for issue in edited.revalidate() {
        println!("edited report: {issue}");
    }
    Ok(())
}
