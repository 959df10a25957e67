//! Exact values of C(λ1, λ2) through each evaluation route.
//!
//! cargo run --release --example eval_routes

use binsum::exact::{choose_route, estimated_cost, eval_with, PartitionPair, Route};

fn main() -> binsum::error::Result<()> {
    for (l1, l2) in [(6, 1), (10, 3), (40, 17), (300, 120)] {
        let pair = PartitionPair::new(l1, l2)?;
        let direct = eval_with(&pair, Route::Direct)?;
        let reduced = eval_with(&pair, Route::Reduced)?;
        assert_eq!(direct.value, reduced.value);
        println!(
            "C({l1}, {l2}) = {} [{} bits, preferred route {}, cost {}]",
            direct.value,
            direct.bits(),
            choose_route(&pair).name(),
            estimated_cost(&pair)
        );
    }

    // The diagonal has a closed form; it vanishes for odd λ.
    for l in 1..=8 {
        let pair = PartitionPair::new(l, l)?;
        let v = eval_with(&pair, Route::Diagonal)?;
        println!("C({l}, {l}) = {}", v.value);
    }
    Ok(())
}
