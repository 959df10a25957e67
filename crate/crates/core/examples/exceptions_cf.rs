//! Exception counts along λ1 = rλ2 and the continued fraction of rγ1 + γ2.
//!
//! cargo run --release --example exceptions_cf

use binsum::asymptotics::saddle_data;
use binsum::certifier::{continued_fraction, exception_bound, ExceptionBound};
use binsum::numerics::{ratio, rq, slack, HpReal};

fn main() -> binsum::error::Result<()> {
    let p = 160;
    let x = HpReal::parse("1e6", p)?;
    for r in [ratio(2, 1), ratio(5, 2), ratio(3, 1), ratio(7, 1)] {
        match exception_bound(&r, &x, p)? {
            ExceptionBound::Constant => println!("r = {r}: finitely many exceptions"),
            ExceptionBound::Subcritical {
                coefficient,
                main_term,
                ..
            } => {
                let sd = saddle_data(&r, p)?;
                let angle = rq(&r, p) * sd.gamma1.unwrap() + sd.gamma2.unwrap();
                let cf = continued_fraction(&angle, 12)?;
                println!(
                    "r = {r}: coefficient {}, bound at 1e6 {}",
                    coefficient.to_sci(7),
                    main_term.to_sci(5)
                );
                println!(
                    "  rγ1 + γ2 = {}  cf {}  legendre {}",
                    angle.to_sci(10),
                    cf.partial_quotients
                        .iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                    cf.legendre_quality(&slack(100))
                );
            }
        }
    }
    Ok(())
}
