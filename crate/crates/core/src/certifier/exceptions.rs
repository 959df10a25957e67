use num_rational::BigRational;

use crate::asymptotics::{classify, discriminant_neg, regime_error, Regime};
use crate::error::{arg, Result};
use crate::numerics::{ri, rq, HpReal};

/// Upper bound on the number of `λ2 ≤ x` with `λ1 = rλ2` and `C` possibly zero.
#[derive(Debug, Clone)]
pub enum ExceptionBound {
    /// Supercritical ratio: finitely many, with an unspecified constant.
    Constant,
    /// `coefficient · √x log x + O_r(√x)`; the remainder is not quantified.
    Subcritical {
        coefficient: HpReal,
        main_term: HpReal,
        remainder_unquantified: bool,
    },
}

/// `102644 / (D^{11/4} log φ)` with `D = -r² + 6r - 1`, times `√x log x`.
pub fn exception_bound(r: &BigRational, x: &HpReal, p: usize) -> Result<ExceptionBound> {
    if x.cmp_value(&HpReal::one(p)).is_lt() {
        return arg(format!("x must be at least 1, got {x}"));
    }
    match classify(r) {
        Regime::Supercritical => Ok(ExceptionBound::Constant),
        Regime::Subcritical => {
            let q = p + 32;
            let d = rq(&discriminant_neg(r), q);
            let phi = (ri(1, q) + ri(5, q).sqrt()) / ri(2, q);
            let coef = ri(102644, q) / (d.pow(&(ri(11, q) / ri(4, q))) * phi.ln());
            let xq = x.with_precision(q);
            let main = &coef * xq.sqrt() * xq.ln();
            Ok(ExceptionBound::Subcritical {
                coefficient: coef.with_precision(p),
                main_term: main.with_precision(p),
                remainder_unquantified: true,
            })
        }
        regime => Err(regime_error(
            r,
            regime,
            "r > 1 away from 3 + 2*sqrt(2)",
            "the exception bound",
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    #[test]
    fn ratio_two() {
        let x = ri(1_000_000, 128);
        let ExceptionBound::Subcritical {
            coefficient,
            main_term,
            remainder_unquantified,
        } = exception_bound(&ratio(2, 1), &x, 128).unwrap()
        else {
            panic!("expected subcritical")
        };
        let want = 102644.0 / (7f64.powf(2.75) * (1.25f64.sqrt() + 0.5).ln());
        assert!((coefficient.to_f64() - want).abs() < 1e-9);
        assert!((coefficient.to_f64() - 1011.5274).abs() < 1e-3);
        assert!((main_term.to_f64() / (want * 1000.0 * 1e6f64.ln()) - 1.0).abs() < 1e-12);
        assert!(remainder_unquantified);
    }

    #[test]
    fn supercritical_is_constant() {
        assert!(matches!(
            exception_bound(&ratio(6, 1), &ri(10, 64), 64).unwrap(),
            ExceptionBound::Constant
        ));
    }

    #[test]
    fn x_one_gives_zero() {
        let ExceptionBound::Subcritical { main_term, .. } =
            exception_bound(&ratio(2, 1), &ri(1, 64), 64).unwrap()
        else {
            panic!()
        };
        assert!(main_term.is_zero());
        assert!(exception_bound(&ratio(2, 1), &ri(0, 64), 64).is_err());
        assert!(exception_bound(&ratio(1, 1), &ri(2, 64), 64).is_err());
    }
}
