//! Asymptotic predictions against exact values in each regime.
//!
//! cargo run --release --example predict_regimes

use binsum::asymptotics::predict;
use binsum::exact::{eval, signed_i, PartitionPair};

fn main() -> binsum::error::Result<()> {
    let p = 128;
    // Two supercritical ratios, then subcritical ones drifting toward r = 1.
    for (l1, l2) in [
        (800, 100),
        (240, 30),
        (1200, 600),
        (3000, 2500),
        (20800, 20000),
    ] {
        let pair = PartitionPair::new(l1, l2)?;
        let pr = predict(&pair, p)?;
        let i = signed_i(&pair, &eval(&pair).value);
        let got = pr.normalize(&i);
        println!(
            "({l1:>5}, {l2:>5}) {:<13} main {:>12}  exact {:>12}  |res| {:>10}  bound {:>10}  valid {}",
            pr.method.to_string(),
            pr.normalized_main.to_sci(6),
            got.to_sci(6),
            pr.residual(&i).abs().to_sci(3),
            pr.error_bound.to_sci(3),
            pr.valid
        );
    }
    Ok(())
}
