//! Runs the skeleton detector and the brute-force oracle over a synthetic
//! corpus and reports how often they agree.
//!
//! ```text
//! cargo run --release --example oracle_agreement -- [pairs] [seed] [--benign-everywhere]
//! ```
//!
//! With `--benign-everywhere`, thin and thicken errors are also placed on
//! Voronoi walls, where skeleton spurs can make the detector flag them.

use std::time::Instant;

use skea_topo::oracle::{compare_with_detector, AgreementReport, FAR_FROM_BOUNDARY};
use skea_topo::synth::corpus;

fn main() -> skea_topo::Result<()> {
    let benign_everywhere = std::env::args().any(|a| a == "--benign-everywhere");
    let mut args = std::env::args().skip(1).filter(|a| !a.starts_with("--"));
    let pairs: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(200);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);

    let start = Instant::now();
    let cases = corpus(pairs, seed, benign_everywhere)?;
    let generated = start.elapsed();

    let mut report = AgreementReport { components: Vec::new() };
    for (spec, case) in &cases {
        let r = compare_with_detector(&case.gt, &case.pred)?;
        for c in r.components.iter().filter(|c| !c.agrees()) {
            println!(
                "disagree: seed {} {:?} {}x{} {:?} at {:?} area {} oracle {} detector {} distance {:.2}",
                spec.seed, spec.kind, spec.width, spec.height, c.class, c.anchor, c.area, c.oracle, c.detector, c.boundary_distance
            );
        }
        report.merge(r);
    }
    println!(
        "{} pairs, {} components, agreement {:.4}, disallowed disagreements {} (allowance > {FAR_FROM_BOUNDARY} px)",
        cases.len(),
        report.total(),
        report.agreement_rate(),
        report.disallowed().count()
    );
    println!("generation {:.2?}, total {:.2?}", generated, start.elapsed());
    Ok(())
}
