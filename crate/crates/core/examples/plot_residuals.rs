//! Normalized residuals against their error bounds along λ1 = 3λ2, as CSV.
//!
//! cargo run --release --example plot_residuals > residuals.csv

use binsum::asymptotics::predict;
use binsum::exact::{eval, signed_i, PartitionPair};

fn main() -> binsum::error::Result<()> {
    println!("lambda2,residual,bound,valid");
    for l2 in (10..=400).step_by(10) {
        let pair = PartitionPair::new(3 * l2, l2)?;
        let pr = predict(&pair, 96)?;
        let i = signed_i(&pair, &eval(&pair).value);
        println!(
            "{l2},{:.6e},{:.6e},{}",
            pr.residual(&i).abs().to_f64(),
            pr.error_bound.to_f64(),
            pr.valid
        );
    }
    Ok(())
}
