//! Saddle-point asymptotics of `I(λ) = (-1)^{λ2} C(λ1, λ2)` along rays
//! `λ1 = rλ2`, with explicit error bounds.
//!
//! With `f(z) = r log(1+z) + log(1-z) - log z` the sum is a contour integral
//! of `exp(λ f(z))`. The sign of `r² - 6r + 1` decides the regime: a real
//! saddle `ρ` when it is positive (`r > 3 + 2√2`, supercritical), a pair of
//! conjugate saddles `ρ e^{±iα}` on the circle `|z| = 1/√r` when it is
//! negative (`1 < r < 3 + 2√2`, subcritical).

mod bounds;
mod lemmas;
mod oscillation;

pub use bounds::*;
pub use lemmas::*;
pub use oscillation::*;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::PartitionPair;
use crate::numerics::{bit_length, ri, rq, to_real, HpReal};

/// Extra bits carried internally on top of the requested precision.
pub(crate) const GUARD: usize = 32;

/// Asymptotic regime of a ratio `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    /// `r ≤ 1`.
    Degenerate,
    /// `1 < r < 3 + 2√2`.
    Subcritical,
    /// `r = 3 + 2√2`, not attained by rationals.
    Critical,
    /// `r > 3 + 2√2`.
    Supercritical,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Degenerate => "degenerate",
            Regime::Subcritical => "subcritical",
            Regime::Critical => "critical",
            Regime::Supercritical => "supercritical",
        })
    }
}

/// Exact classification from the sign of `r² - 6r + 1`.
pub fn classify(r: &BigRational) -> Regime {
    if *r <= BigRational::one() {
        return Regime::Degenerate;
    }
    let (n, d) = (r.numer(), r.denom());
    let s: BigInt = n * n - BigInt::from(6) * n * d + d * d;
    if s.is_zero() {
        Regime::Critical
    } else if s.is_positive() {
        // r > 1 and outside the roots 3 ± 2√2 means r > 3 + 2√2.
        Regime::Supercritical
    } else {
        Regime::Subcritical
    }
}

pub(crate) fn regime_error(r: &BigRational, found: Regime, expected: &str, op: &str) -> Error {
    Error::Regime {
        ratio: r.to_string(),
        found: found.to_string(),
        expected: expected.to_string(),
        operation: op.to_string(),
    }
}

/// `-r² + 6r - 1` as an exact rational.
pub fn discriminant_neg(r: &BigRational) -> BigRational {
    -(r * r) + BigRational::from_integer(6.into()) * r - BigRational::one()
}

/// Saddle-point constants for a ratio.
///
/// Supercritical fields: `rho`, `m`, `f_rho`. Subcritical fields: `rho`
/// (`1/√r`), `alpha`, `beta`, `gamma1..3`, `g_alpha`. Fields that do not
/// apply to the regime are `None`.
#[derive(Debug, Clone)]
pub struct SaddleData {
    pub regime: Regime,
    pub r: HpReal,
    pub rho: HpReal,
    pub m: Option<HpReal>,
    pub f_rho: Option<HpReal>,
    pub alpha: Option<HpReal>,
    pub beta: Option<HpReal>,
    pub gamma1: Option<HpReal>,
    pub gamma2: Option<HpReal>,
    pub gamma3: Option<HpReal>,
    pub g_alpha: Option<HpReal>,
}

/// Saddle constants for an exact rational ratio.
pub fn saddle_data(r: &BigRational, p: usize) -> Result<SaddleData> {
    let regime = classify(r);
    match regime {
        Regime::Degenerate | Regime::Critical => Err(regime_error(
            r,
            regime,
            "r > 1 off the critical ratio",
            "saddle data",
        )),
        _ => Ok(saddle_data_real(&rq(r, p + GUARD), regime, p)),
    }
}

/// Saddle constants at the critical ratio `3 + 2√2`, where `ρ = √2 - 1` and `M = 0`.
pub fn critical_saddle_data(p: usize) -> SaddleData {
    let q = p + GUARD;
    let r = ri(3, q) + ri(2, q) * ri(2, q).sqrt();
    saddle_data_real(&r, Regime::Critical, p)
}

/// Saddle constants for a real ratio whose regime is already known.
pub fn saddle_data_real(r: &HpReal, regime: Regime, p: usize) -> SaddleData {
    let q = r.precision().max(p + GUARD);
    let r = r.with_precision(q);
    let one = ri(1, q);
    let two = ri(2, q);
    let fin = |x: HpReal| x.with_precision(p);
    let mut sd = SaddleData {
        regime,
        r: fin(r.clone()),
        rho: HpReal::zero(p),
        m: None,
        f_rho: None,
        alpha: None,
        beta: None,
        gamma1: None,
        gamma2: None,
        gamma3: None,
        g_alpha: None,
    };
    match regime {
        Regime::Supercritical | Regime::Critical => {
            let disc = &r * &r - ri(6, q) * &r + &one;
            let disc = disc.max(&HpReal::zero(q));
            let rho = (&r - &one - disc.sqrt()) / (&two * &r);
            let m = supercritical_m(&rho);
            let f_rho = r.clone() * (&one + &rho).ln() + (&one - &rho).ln() - rho.ln();
            sd.rho = fin(rho);
            sd.m = Some(fin(m));
            sd.f_rho = Some(fin(f_rho));
        }
        Regime::Subcritical => {
            let sr = r.sqrt();
            sd.rho = fin(sr.recip());
            let cos_alpha = (&r - &one) / (&two * &sr);
            sd.alpha = Some(fin(cos_alpha.acos()));
            let beta = ((&r - &one).powi(2) / (ri(4, q) * &r)).asin();
            let sqrt2 = two.sqrt();
            let g1 = ((ri(3, q) * &r - &one) / (&two * &sqrt2 * &r)).acos();
            let g2 = -((&r - ri(3, q)) / (&two * &sqrt2)).acos();
            sd.gamma3 = Some(fin(&beta / &two));
            sd.beta = Some(fin(beta));
            sd.gamma1 = Some(fin(g1));
            sd.gamma2 = Some(fin(g2));
            sd.g_alpha = Some(fin((&r + &one) / &two * HpReal::ln2(q)));
        }
        Regime::Degenerate => {}
    }
    sd
}

/// `M = (1 - 2ρ - ρ²) / ((1+ρ)(1-ρ)²)`.
pub(crate) fn supercritical_m(rho: &HpReal) -> HpReal {
    let q = rho.precision();
    let one = ri(1, q);
    (&one - ri(2, q) * rho - rho * rho) / ((&one + rho) * (&one - rho).powi(2))
}

/// Which asymptotic formula a prediction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Supercritical,
    Subcritical,
    NearOne,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Supercritical => "supercritical",
            Method::Subcritical => "subcritical",
            Method::NearOne => "near-one",
        })
    }
}

/// Asymptotic prediction for one pair.
///
/// `I(λ) · exp(log_normalizer)` equals `normalized_main` up to `error_bound`
/// whenever `valid` is set.
#[derive(Debug, Clone)]
pub struct Prediction {
    pub pair: PartitionPair,
    pub regime: Regime,
    pub method: Method,
    pub normalized_main: HpReal,
    pub error_bound: HpReal,
    pub valid: bool,
    pub log_normalizer: HpReal,
    pub normalizer: &'static str,
    /// Smallest `λ2` for which the bound holds, when there is one.
    pub threshold: Option<u64>,
}

impl Prediction {
    /// `I · exp(log_normalizer)` for an exact `I = (-1)^{λ2} C`.
    pub fn normalize(&self, i: &BigInt) -> HpReal {
        let p = self.log_normalizer.precision();
        if i.is_zero() {
            return HpReal::zero(p);
        }
        let q = p + 64 + bit_length(i.bits());
        let lg = to_real(&i.abs(), q).ln() + self.log_normalizer.with_precision(q);
        let v = lg.exp().with_precision(p);
        if i.is_negative() {
            -v
        } else {
            v
        }
    }

    /// `normalize(i) - normalized_main`.
    pub fn residual(&self, i: &BigInt) -> HpReal {
        self.normalize(i) - &self.normalized_main
    }
}

/// Working precision for angles proportional to `λ1`.
pub fn angle_precision(p: usize, lambda1: u64) -> usize {
    p.max(64 + bit_length(lambda1) + 32) + bit_length(lambda1)
}

/// `λ1 γ1 + λ2 γ2` at a precision that keeps the angle accurate to `2^-p`.
pub fn near_one_angle(pair: &PartitionPair, r: &BigRational, p: usize) -> Result<HpReal> {
    let q = angle_precision(p, pair.lambda1());
    let sd = saddle_data(r, q)?;
    let g1 = sd.gamma1.expect("subcritical");
    let g2 = sd.gamma2.expect("subcritical");
    Ok(HpReal::from_u64(pair.lambda1(), q) * g1 + HpReal::from_u64(pair.lambda2(), q) * g2)
}

/// Asymptotic prediction for `I(λ)` at a pair with `λ2 ≥ 1`.
pub fn predict(pair: &PartitionPair, p: usize) -> Result<Prediction> {
    let r = pair
        .ratio()
        .ok_or_else(|| Error::Argument("lambda2 must be positive".into()))?;
    let regime = classify(&r);
    let l2 = pair.lambda2();
    let q = p + GUARD;
    match regime {
        Regime::Degenerate | Regime::Critical => Err(regime_error(
            &r,
            regime,
            "a supercritical or subcritical ratio",
            "prediction",
        )),
        Regime::Supercritical => {
            let sd = saddle_data(&r, q)?;
            let m = sd.m.unwrap();
            let lam = HpReal::from_u64(l2, q);
            let two_pi = ri(2, q) * HpReal::pi(q);
            let log_norm = (two_pi * &lam * &m).ln() / ri(2, q) - &lam * sd.f_rho.unwrap();
            Ok(Prediction {
                pair: *pair,
                regime,
                method: Method::Supercritical,
                normalized_main: HpReal::one(p),
                error_bound: error_bound_supercritical(&r, l2, p)?,
                valid: true,
                log_normalizer: log_norm.with_precision(p),
                normalizer: "sqrt(2*pi*lambda*M) / exp(lambda*f(rho))",
                threshold: Some(1),
            })
        }
        Regime::Subcritical => {
            let sb = error_bound_subcritical(&r, l2, p)?;
            let near = error_bound_near_one(pair, p);
            let ln2 = HpReal::ln2(q);
            let sum = HpReal::from_u64(pair.lambda1(), q) + HpReal::from_u64(l2, q);
            let pi = HpReal::pi(q);
            if let Ok(nb) = near.as_ref() {
                if nb.valid && (!sb.valid || nb.bound.cmp_value(&sb.bound).is_lt()) {
                    let angle = near_one_angle(pair, &r, p)?;
                    let log_norm = (&pi * HpReal::from_u64(l2, q)).ln() / ri(2, q)
                        - (&sum + ri(1, q)) / ri(2, q) * &ln2;
                    return Ok(Prediction {
                        pair: *pair,
                        regime,
                        method: Method::NearOne,
                        normalized_main: angle.cos().with_precision(p),
                        error_bound: nb.bound.clone(),
                        valid: true,
                        log_normalizer: log_norm.with_precision(p),
                        normalizer: "sqrt(pi*lambda2) / 2^((lambda1+lambda2+1)/2)",
                        threshold: None,
                    });
                }
            }
            let qa = angle_precision(p, pair.lambda1());
            let sd = saddle_data(&r, qa)?;
            let angle = HpReal::from_u64(pair.lambda1(), qa) * sd.gamma1.unwrap()
                + HpReal::from_u64(l2, qa) * sd.gamma2.unwrap()
                + sd.gamma3.unwrap();
            let dd = rq(&discriminant_neg(&r), q);
            let log_norm = dd.ln() / ri(4, q) + (&pi * HpReal::from_u64(l2, q)).ln() / ri(2, q)
                - (ri(1, q) + &sum / ri(2, q)) * &ln2;
            Ok(Prediction {
                pair: *pair,
                regime,
                method: Method::Subcritical,
                normalized_main: angle.cos().with_precision(p),
                error_bound: sb.bound,
                valid: sb.valid,
                log_normalizer: log_norm.with_precision(p),
                normalizer: "D^(1/4) * sqrt(pi*lambda) / 2^(1+(r+1)*lambda/2)",
                threshold: Some(sb.threshold),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{eval, signed_i};
    use crate::numerics::ratio;

    fn close(a: &HpReal, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    #[test]
    fn regimes() {
        assert_eq!(classify(&ratio(6, 1)), Regime::Supercritical);
        assert_eq!(classify(&ratio(2, 1)), Regime::Subcritical);
        assert_eq!(classify(&ratio(1, 1)), Regime::Degenerate);
        assert_eq!(classify(&ratio(1, 2)), Regime::Degenerate);
        // 5.828427 < 3 + 2√2 < 5.828428
        assert_eq!(classify(&ratio(5828427, 1000000)), Regime::Subcritical);
        assert_eq!(classify(&ratio(5828428, 1000000)), Regime::Supercritical);
    }

    #[test]
    fn saddle_at_six() {
        let sd = saddle_data(&ratio(6, 1), 128).unwrap();
        assert!(close(&sd.rho, 1.0 / 3.0, 1e-30));
        assert!(close(sd.m.as_ref().unwrap(), 0.375, 1e-30));
        assert!(sd.alpha.is_none());
    }

    #[test]
    fn critical_probe() {
        let sd = critical_saddle_data(128);
        assert!(close(&sd.rho, std::f64::consts::SQRT_2 - 1.0, 1e-15));
        assert!(sd.m.as_ref().unwrap().abs().to_f64() < 1e-15);
    }

    #[test]
    fn subcritical_constants_at_two() {
        let sd = saddle_data(&ratio(2, 1), 128).unwrap();
        assert!(close(
            sd.gamma3.as_ref().unwrap(),
            0.0626639155840327,
            1e-15
        ));
        let g = ri(2, 128) * sd.gamma1.as_ref().unwrap() + sd.gamma2.as_ref().unwrap();
        assert!(close(&g, -0.958773540552058, 1e-14));
        assert!(close(
            sd.g_alpha.as_ref().unwrap(),
            1.5 * std::f64::consts::LN_2,
            1e-15
        ));
    }

    #[test]
    fn supercritical_prediction_tracks_exact() {
        let pair = PartitionPair::new(600, 100).unwrap();
        let pr = predict(&pair, 128).unwrap();
        assert_eq!(pr.method, Method::Supercritical);
        let i = signed_i(&pair, &eval(&pair).value);
        let res = pr.residual(&i).abs();
        assert!(
            res.cmp_value(&pr.error_bound).is_lt(),
            "{res:?} {:?}",
            pr.error_bound
        );
    }

    #[test]
    fn subcritical_prediction_tracks_exact() {
        let pair = PartitionPair::new(400, 200).unwrap();
        let pr = predict(&pair, 128).unwrap();
        assert_eq!(pr.method, Method::Subcritical);
        assert!(pr.valid);
        let i = signed_i(&pair, &eval(&pair).value);
        assert!(pr.residual(&i).abs().to_f64() < 0.01);
    }

    #[test]
    fn prediction_rejects_degenerate() {
        let pair = PartitionPair::new(5, 5).unwrap();
        assert!(matches!(predict(&pair, 128), Err(Error::Regime { .. })));
        let pair = PartitionPair::new(5, 0).unwrap();
        assert!(predict(&pair, 128).is_err());
    }
}
