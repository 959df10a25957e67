//! Near-diagonal windows of λ1 - λ2 where C is certified nonzero.
//!
//! cargo run --release --example thr1_intervals [λ2]

use binsum::certifier::{certify_interval_thr1, thr1_membership};
use binsum::exact::PartitionPair;

fn main() -> binsum::error::Result<()> {
    let l2: u64 = std::env::args()
        .nth(1)
        .map_or(1_000_000, |s| s.parse().expect("λ2 must be an integer"));
    for iv in certify_interval_thr1(l2, 128) {
        println!(
            "{:<16} d in [{:>5}, {:>5}]  {:?}",
            iv.clause.to_string(),
            iv.d_lo,
            iv.d_hi,
            iv.basis
        );
    }
    let probe = PartitionPair::new(l2 + 1001, l2)?;
    match thr1_membership(&probe, 128) {
        Some(iv) => println!("d = 1001 lies in {}", iv.clause),
        None => println!("d = 1001 is not covered"),
    }
    Ok(())
}
