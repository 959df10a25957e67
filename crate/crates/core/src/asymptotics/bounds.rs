//! Explicit error bounds for the three asymptotic formulas.

use num_rational::BigRational;

use super::{c_g, c_h, classify, discriminant_neg, regime_error, saddle_data, Regime, GUARD};
use crate::error::{arg, Error, Result};
use crate::exact::PartitionPair;
use crate::numerics::{certified_compare, parse_rational, ri, rq, slack, Comparison, HpReal};

/// Largest ratio for which the refined supercritical bound is proved.
pub const REFINED_RATIO_MAX: &str = "7.686899";

/// Smallest difference `λ1 - λ2` covered by the near-one bound.
pub const NEAR_ONE_MIN_DIFF: u64 = 702;

/// Flat near-one bound for `λ1 - λ2 ≤ √(8πλ2)`.
pub const NEAR_ONE_FLAT: &str = "0.0165";

/// `√λ2` times the near-one error on the window `√((k-1)πλ2) ≤ λ1-λ2 ≤ √(kπλ2)`.
pub const NEAR_ONE_ROWS: [&str; 8] = [
    "1.05882", "1.30775", "1.50929", "1.68876", "1.85482", "2.01189", "2.1626", "2.30865",
];

fn require_supercritical(r: &BigRational, op: &str) -> Result<()> {
    match classify(r) {
        Regime::Supercritical => Ok(()),
        found => Err(regime_error(r, found, "r > 3 + 2*sqrt(2)", op)),
    }
}

/// `(3 + 2√2)`.
fn crit(q: usize) -> HpReal {
    ri(3, q) + ri(2, q) * ri(2, q).sqrt()
}

/// First supercritical bound:
/// `3(3+2√2)π⁵/(256λM²) + 5(3+2√2)/(24λM³) + √2 e^{-λMπ²/2} / (π^{3/2}√(λM))`.
pub fn error_bound_supercritical(r: &BigRational, lambda: u64, p: usize) -> Result<HpReal> {
    require_supercritical(r, "the supercritical bound")?;
    if lambda == 0 {
        return arg("lambda must be positive");
    }
    let q = p + GUARD;
    let m = saddle_data(r, q)?.m.unwrap();
    Ok(phi1_from_m(&m, lambda, q).with_precision(p))
}

pub(crate) fn phi1_from_m(m: &HpReal, lambda: u64, q: usize) -> HpReal {
    let lam = HpReal::from_u64(lambda, q);
    let pi = HpReal::pi(q);
    let k = crit(q);
    let lm = &lam * m;
    let t1 = ri(3, q) * &k * pi.powi(5) / (ri(256, q) * &lam * m.powi(2));
    let t2 = ri(5, q) * &k / (ri(24, q) * &lam * m.powi(3));
    let t3 =
        ri(2, q).sqrt() * (-(&lm * pi.powi(2)) / ri(2, q)).exp() / (pi.powi(3).sqrt() * lm.sqrt());
    t1 + t2 + t3
}

/// Refined supercritical bound together with `λMδ²`, which must be at
/// least 1 for the bound to decrease in `λ`.
#[derive(Debug, Clone)]
pub struct RefinedBound {
    pub bound: HpReal,
    pub lambda_m_delta_sq: HpReal,
}

/// Refined supercritical bound for `r ≤ 7.686899`, `0 < δ ≤ π/3`:
/// `3C_g/(λM²) + 15C_h²/(2λM³) + (√2/(δ√(πλM)) + (1-δ/π)√(2πλM)) e^{-λMδ²/2}`.
pub fn error_bound_supercritical_refined(
    r: &BigRational,
    lambda: u64,
    delta: &HpReal,
    p: usize,
) -> Result<RefinedBound> {
    require_supercritical(r, "the refined supercritical bound")?;
    if *r > parse_rational(REFINED_RATIO_MAX)? {
        return Err(Error::Validity(format!(
            "refined bound needs r <= {REFINED_RATIO_MAX}, got {r}"
        )));
    }
    if lambda == 0 {
        return arg("lambda must be positive");
    }
    let q = p + GUARD;
    let delta = delta.with_precision(q);
    let pi = HpReal::pi(q);
    let zero = HpReal::zero(q);
    if delta.cmp_value(&zero).is_le() || delta.cmp_value(&(&pi / ri(3, q))).is_gt() {
        return Err(Error::Validity(
            "refined bound needs 0 < delta <= pi/3".into(),
        ));
    }
    let sd = saddle_data(r, q)?;
    let (rho, m) = (sd.rho.with_precision(q), sd.m.unwrap().with_precision(q));
    let c = delta.cos();
    let one = ri(1, q);
    let cg = c_g(&rho, &c);
    let ch = c_h(&rho, &c);

    let lam = HpReal::from_u64(lambda, q);
    let lm = &lam * &m;
    let lmd2 = &lm * delta.powi(2);
    let t1 = ri(3, q) * &cg / (&lam * m.powi(2));
    let t2 = ri(15, q) * ch.powi(2) / (ri(2, q) * &lam * m.powi(3));
    let t3 = (ri(2, q).sqrt() / (&delta * (&pi * &lm).sqrt())
        + (&one - &delta / &pi) * (ri(2, q) * &pi * &lm).sqrt())
        * (-(&lmd2) / ri(2, q)).exp();
    Ok(RefinedBound {
        bound: (t1 + t2 + t3).with_precision(p),
        lambda_m_delta_sq: lmd2.with_precision(p),
    })
}

/// Subcritical bound `16336/(√λ D^{11/4})` with `D = -r² + 6r - 1`, valid for
/// `λ ≥ 512 r^{3/2} / ((r+1) D^{3/2})`.
#[derive(Debug, Clone)]
pub struct SubcriticalBound {
    pub bound: HpReal,
    /// Smallest integer `λ` at which the bound holds.
    pub threshold: u64,
    pub threshold_real: HpReal,
    pub valid: bool,
}

pub fn error_bound_subcritical(r: &BigRational, lambda: u64, p: usize) -> Result<SubcriticalBound> {
    let regime = classify(r);
    if regime != Regime::Subcritical {
        return Err(regime_error(
            r,
            regime,
            "1 < r < 3 + 2*sqrt(2)",
            "the subcritical bound",
        ));
    }
    if lambda == 0 {
        return arg("lambda must be positive");
    }
    let q = p + GUARD;
    let d = rq(&discriminant_neg(r), q);
    let rr = rq(r, q);
    let lam = HpReal::from_u64(lambda, q);
    let bound = ri(16336, q) / (lam.sqrt() * d.pow(&(ri(11, q) / ri(4, q))));
    let thr = ri(512, q) * rr.pow(&(ri(3, q) / ri(2, q)))
        / ((&rr + ri(1, q)) * d.pow(&(ri(3, q) / ri(2, q))));
    let threshold = thr.ceil();
    let threshold = u64::try_from(threshold.max(1.into())).unwrap_or(u64::MAX);
    Ok(SubcriticalBound {
        bound: bound.with_precision(p),
        threshold,
        threshold_real: thr.with_precision(p),
        valid: lambda >= threshold,
    })
}

/// Near-one bound for `λ1 - λ2 ≥ 702`.
#[derive(Debug, Clone)]
pub struct NearOneBound {
    pub bound: HpReal,
    /// `λ1 - λ2 ≤ √(8πλ2)`.
    pub valid: bool,
    /// Index 1..=8 of the sharper row used, if any.
    pub row: Option<u8>,
}

/// Where `d` sits relative to the window `[lo, hi]` (squared, to avoid roots).
fn window_status(d2: &HpReal, lo2: &HpReal, hi2: &HpReal) -> (bool, bool) {
    let s = slack(64).with_precision(d2.precision());
    let above_lo = certified_compare(d2, lo2, &s).unwrap();
    let below_hi = certified_compare(d2, hi2, &s).unwrap();
    let certain = above_lo == Comparison::CertifiedGreater && below_hi == Comparison::CertifiedLess;
    let possible =
        above_lo != Comparison::CertifiedLess && below_hi != Comparison::CertifiedGreater;
    (certain, possible)
}

/// Near-one bound: `0.0165` when `λ1 - λ2 ≤ √(8πλ2)`, tightened to
/// `c_k/√λ2` on the window of row `k`. Where `d` certainly lies in two rows
/// the smaller constant is used; when membership cannot be decided the
/// larger candidate is used.
pub fn error_bound_near_one(pair: &PartitionPair, p: usize) -> Result<NearOneBound> {
    let d = pair.difference();
    if d < NEAR_ONE_MIN_DIFF {
        return Err(Error::Validity(format!(
            "near-one bound needs lambda1 - lambda2 >= 702, got {d}"
        )));
    }
    let q = p + GUARD;
    let l2 = HpReal::from_u64(pair.lambda2(), q);
    let pi = HpReal::pi(q);
    let dd = HpReal::from_u64(d, q);
    let d2 = dd.powi(2);
    let flat = HpReal::parse(NEAR_ONE_FLAT, q)?;
    let top = ri(8, q) * &pi * &l2;
    if !window_status(&d2, &HpReal::zero(q), &top).0 {
        return Ok(NearOneBound {
            bound: flat.with_precision(p),
            valid: false,
            row: None,
        });
    }
    let mut certain: Option<(u8, HpReal)> = None;
    let mut possible: Option<(u8, HpReal)> = None;
    let sqrt_l2 = l2.sqrt();
    let log_l2 = l2.ln();
    for (i, c) in NEAR_ONE_ROWS.iter().enumerate() {
        let k = i as i64 + 1;
        let lo2 = if k == 1 {
            log_l2.powi(2)
        } else {
            ri(k - 1, q) * &pi * &l2
        };
        let hi2 = ri(k, q) * &pi * &l2;
        let (is_certain, is_possible) = window_status(&d2, &lo2, &hi2);
        let b = HpReal::parse(c, q)? / &sqrt_l2;
        if is_certain
            && certain
                .as_ref()
                .is_none_or(|(_, cb)| b.cmp_value(cb).is_lt())
        {
            certain = Some((k as u8, b.clone()));
        }
        if is_possible
            && possible
                .as_ref()
                .is_none_or(|(_, pb)| b.cmp_value(pb).is_gt())
        {
            possible = Some((k as u8, b));
        }
    }
    let row = certain.or(possible);
    let (bound, row) = match row {
        Some((k, b)) if b.cmp_value(&flat).is_lt() => (b, Some(k)),
        _ => (flat, None),
    };
    Ok(NearOneBound {
        bound: bound.with_precision(p),
        valid: true,
        row,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    fn f(x: &HpReal) -> f64 {
        x.to_f64()
    }

    #[test]
    fn phi1_values() {
        let b = error_bound_supercritical(&ratio(6, 1), 241, 128).unwrap();
        assert!((f(&b) - 0.712283558).abs() < 1e-8);
        let r = parse_rational("5.941893").unwrap();
        let b = error_bound_supercritical(&r, 241, 128).unwrap();
        assert!((f(&b) - 0.999_997_850_171_938_5).abs() < 1e-14);
        assert!(error_bound_supercritical(&ratio(2, 1), 10, 128).is_err());
    }

    #[test]
    fn phi2_values() {
        let r = parse_rational("5.8478").unwrap();
        let b =
            error_bound_supercritical_refined(&r, 241, &HpReal::parse("0.75", 128).unwrap(), 128)
                .unwrap();
        assert!((f(&b.bound) - 0.993595279).abs() < 1e-8);
        assert!((f(&b.lambda_m_delta_sq) - 20.40).abs() < 0.01);
        let r = parse_rational("5.8362").unwrap();
        let b =
            error_bound_supercritical_refined(&r, 980, &HpReal::parse("0.5", 128).unwrap(), 128)
                .unwrap();
        assert!((f(&b.bound) - 0.999840560).abs() < 1e-8);
        assert!((f(&b.lambda_m_delta_sq) - 24.17).abs() < 0.01);
    }

    #[test]
    fn phi2_preconditions() {
        let half = HpReal::parse("0.5", 128).unwrap();
        assert!(matches!(
            error_bound_supercritical_refined(&ratio(8, 1), 100, &half, 128),
            Err(Error::Validity(_))
        ));
        let big = HpReal::parse("1.1", 128).unwrap();
        assert!(error_bound_supercritical_refined(&ratio(6, 1), 100, &big, 128).is_err());
    }

    #[test]
    fn subcritical_values() {
        let b = error_bound_subcritical(&ratio(2, 1), 2700, 128).unwrap();
        assert!((f(&b.bound) - 1.49088530).abs() < 1e-7);
        assert_eq!(b.threshold, 27);
        assert!((f(&b.threshold_real) - 26.0643).abs() < 1e-4);
        assert_eq!(
            error_bound_subcritical(&ratio(3, 1), 10, 128)
                .unwrap()
                .threshold,
            30
        );
        assert!(
            !error_bound_subcritical(&ratio(3, 1), 29, 128)
                .unwrap()
                .valid
        );
    }

    #[test]
    fn near_one_rows() {
        let l2 = 1_000_000u64;
        // √(π·10⁶) ≈ 1772.45 so d = 1000 is in row 1, d = 2000 in row 2.
        let b = error_bound_near_one(&PartitionPair::new(l2 + 1000, l2).unwrap(), 128).unwrap();
        assert_eq!(b.row, Some(1));
        assert!((f(&b.bound) - 1.05882e-3).abs() < 1e-12);
        let b = error_bound_near_one(&PartitionPair::new(l2 + 2000, l2).unwrap(), 128).unwrap();
        assert_eq!(b.row, Some(2));
        let b = error_bound_near_one(&PartitionPair::new(l2 + 6000, l2).unwrap(), 128).unwrap();
        assert!(!b.valid);
        assert!(error_bound_near_one(&PartitionPair::new(l2 + 701, l2).unwrap(), 128).is_err());
    }

    #[test]
    fn near_one_flat_when_rows_weaker() {
        // λ2 = 10⁴: rows give ≥ 1.05882/100 ≈ 0.0106 < 0.0165, so row 1 applies.
        let b = error_bound_near_one(&PartitionPair::new(10_702, 10_000).unwrap(), 128).unwrap();
        assert!(!b.valid, "702 > √(8π·10⁴) ≈ 501");
        let l2 = 5000u64;
        // √(8π·5000) ≈ 354 < 702: never valid.
        assert!(
            !error_bound_near_one(&PartitionPair::new(l2 + 702, l2).unwrap(), 128)
                .unwrap()
                .valid
        );
        let l2 = 20_000u64;
        // √(8π·2·10⁴) ≈ 709, d = 705 sits in row 8: 2.30865/√20000 ≈ 0.0163 < 0.0165.
        let b = error_bound_near_one(&PartitionPair::new(l2 + 705, l2).unwrap(), 128).unwrap();
        assert!(b.valid);
        assert_eq!(b.row, Some(8));
    }
}
