//! Grid checks of the analytic inequalities behind the error bounds.
//!
//! cargo run --release --example validate_lemmas

use binsum::asymptotics::{ratio_grid, unit_grid, validate_inequality, LemmaId, ThetaGrid};
use binsum::numerics::parse_rational;

fn main() -> binsum::error::Result<()> {
    for lemma in LemmaId::ALL {
        let (lo, hi) = lemma.default_ratio_range();
        let rs = ratio_grid(&parse_rational(lo)?, &parse_rational(hi)?, 30);
        let rep = validate_inequality(lemma, &rs, &ThetaGrid::Unit(unit_grid(30)), 96)?;
        println!(
            "{:<18} {:>5} points  {} violations  max margin {:.3e}",
            lemma.name(),
            rep.points,
            rep.violations,
            rep.max_margin
        );
    }
    Ok(())
}
