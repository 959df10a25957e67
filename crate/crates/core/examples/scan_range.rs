//! Scanning a λ2 range with a λ1 rule and writing a JSONL report.
//!
//! cargo run --release --example scan_range

use std::io::stdout;

use binsum::certifier::{scan_range, Lambda1Rule, ScanOptions};
use binsum::numerics::ratio;

fn main() -> binsum::error::Result<()> {
    let opts = ScanOptions::default();
    let report = scan_range(1..=2000, &Lambda1Rule::Ratio(ratio(5, 2)), &opts)?;
    for (kind, n) in report.counts() {
        eprintln!("{kind}: {n}");
    }
    assert!(!report.has_unresolved());

    let near = scan_range(
        500_000..=500_004,
        &Lambda1Rule::Difference(900),
        &ScanOptions {
            certify: binsum::certifier::CertifyOptions {
                budget: 0,
                ..Default::default()
            },
            ..ScanOptions::default()
        },
    )?;
    near.write_jsonl(stdout().lock()).expect("stdout");
    Ok(())
}
