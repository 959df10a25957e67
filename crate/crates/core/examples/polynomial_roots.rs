//! C(X, λ2) and the tilde family as integer polynomials, and their integer roots.
//!
//! cargo run --release --example polynomial_roots

use binsum::polynomials::{c_poly, factor_linear, integer_roots, tilde_poly};
use num_bigint::BigInt;

fn main() -> binsum::error::Result<()> {
    for l2 in 1..=6 {
        let p = c_poly(l2);
        let roots = integer_roots(&p, 1 << 20)?;
        println!("C(X, {l2}) = ({p})  roots {roots:?}");
    }

    // Odd λ2 always has the diagonal root X = λ2; divide it out.
    let p = c_poly(5);
    let q = factor_linear(&p, &BigInt::from(5))?;
    println!("C(X, 5) / (X - 5) = {q}");

    for (l, e1, e2) in [(4, 0, 0), (4, 1, 0), (5, 0, 1), (5, 1, 1)] {
        let t = tilde_poly(l, e1, e2)?;
        let roots = integer_roots(&t, 1 << 20)?;
        println!(
            "tilde({l}, {e1}, {e2}): degree {:?}, roots {roots:?}",
            t.degree()
        );
    }
    Ok(())
}
