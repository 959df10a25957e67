//! The certification cascade on a handful of pairs.
//!
//! cargo run --release --example certify_pairs

use binsum::certifier::{certify, CertifyOptions};
use binsum::exact::PartitionPair;

fn main() -> binsum::error::Result<()> {
    let exact = CertifyOptions::default();
    // With no exact budget only the analytic certificates remain.
    let analytic = CertifyOptions {
        budget: 0,
        ..CertifyOptions::default()
    };
    let pairs = [
        (10, 3),
        (7, 2),
        (2000, 40),
        (6000, 1000),
        (2400, 1200),
        (1_000_900, 1_000_000),
        (9, 9),
    ];
    for (l1, l2) in pairs {
        let pair = PartitionPair::new(l1, l2)?;
        println!("({l1}, {l2})");
        println!("  budgeted: {}", certify(&pair, &exact));
        println!("  analytic: {}", certify(&pair, &analytic));
    }
    Ok(())
}
