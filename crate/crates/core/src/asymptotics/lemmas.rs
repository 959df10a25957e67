//! Pointwise validators for the inequalities on `f`, `g = Re f` and
//! `h = Im f` along the circle `z = ρe^{iθ}` used by the error bounds.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use super::{classify, discriminant_neg, saddle_data_real, Regime, GUARD};
use crate::error::{arg, Error, Result};
use crate::numerics::{parse_rational, ri, rq, slack, HpReal, DEFAULT_SLACK_EXP};

/// Inequalities that can be checked numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LemmaId {
    /// `g(θ) - g(0) ≤ -(2/π²)Mθ²`, and `< -Mθ²/2` for `r ≤ 7.686899`, `|θ| ≤ π/3`.
    SuperGQuadratic,
    /// `|g(θ) - g(0) + Mθ²/2| ≤ C_g θ⁴`.
    SuperGQuartic,
    /// `|h(θ)| ≤ C_h |θ|³`.
    SuperHCubic,
    /// `|f(θ) - f(α) + (√D/4) e^{-iβ}(θ-α)²| ≤ 0.33846 (r+1)²/r² |θ-α|³`.
    SubFCubic,
    /// `g(θ) - g(α) ≤ -(r+1)D/(16r) (θ-α)² + (r+1)/4 |θ-α|³`.
    SubGCubic,
    /// `|f(θ) - f(α) + (θ-α)²/2| ≤ |θ-α|³/3 + (r-1)/4 (θ-α)²`.
    NearOneFCubic,
    /// `g(θ) - g(α) ≤ -(θ-α)²/2 + |θ-α|³/2`.
    NearOneGCubic,
}

impl LemmaId {
    pub const ALL: [LemmaId; 7] = [
        LemmaId::SuperGQuadratic,
        LemmaId::SuperGQuartic,
        LemmaId::SuperHCubic,
        LemmaId::SubFCubic,
        LemmaId::SubGCubic,
        LemmaId::NearOneFCubic,
        LemmaId::NearOneGCubic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LemmaId::SuperGQuadratic => "super-g-quadratic",
            LemmaId::SuperGQuartic => "super-g-quartic",
            LemmaId::SuperHCubic => "super-h-cubic",
            LemmaId::SubFCubic => "sub-f-cubic",
            LemmaId::SubGCubic => "sub-g-cubic",
            LemmaId::NearOneFCubic => "near-one-f-cubic",
            LemmaId::NearOneGCubic => "near-one-g-cubic",
        }
    }

    /// A ratio range (as `(lo, hi)` strings) strictly inside the hypothesis region.
    pub fn default_ratio_range(&self) -> (&'static str, &'static str) {
        match self {
            LemmaId::SuperGQuadratic | LemmaId::SuperGQuartic | LemmaId::SuperHCubic => {
                ("5.83", "40")
            }
            LemmaId::SubFCubic | LemmaId::SubGCubic => ("1.01", "5.82"),
            LemmaId::NearOneFCubic => ("1", "2.282"),
            LemmaId::NearOneGCubic => ("1.001", "2.11952"),
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .iter()
            .copied()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown lemma {s:?}")))
    }
}

/// Angles at which to test.
#[derive(Debug, Clone)]
pub enum ThetaGrid {
    /// Literal angles; each must lie in the lemma's region.
    Absolute(Vec<f64>),
    /// Fractions `t ∈ [0, 1]` mapped affinely onto the lemma's θ interval at each `r`.
    Unit(Vec<f64>),
}

/// `n` equally spaced points of `[0, 1]` (both ends included for `n ≥ 2`).
pub fn unit_grid(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.5],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` equally spaced rationals from `lo` to `hi` inclusive.
pub fn ratio_grid(lo: &BigRational, hi: &BigRational, n: usize) -> Vec<BigRational> {
    match n {
        0 => vec![],
        1 => vec![lo.clone()],
        _ => {
            let step = (hi - lo) / BigRational::from_integer((n as i64 - 1).into());
            (0..n)
                .map(|i| lo + &step * BigRational::from_integer((i as i64).into()))
                .collect()
        }
    }
}

/// Result of a validation sweep.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub lemma: LemmaId,
    pub points: usize,
    pub violations: usize,
    /// Largest `lhs - rhs` seen (should be ≤ 0).
    pub max_margin: f64,
    /// `(r, θ)` at the largest margin.
    pub worst: Option<(f64, f64)>,
}

/// `C_g(ρ, c)` from the quartic estimate of `g`.
pub fn c_g(rho: &HpReal, c: &HpReal) -> HpReal {
    let q = rho.precision();
    let one = ri(1, q);
    let (rho2, rho3, rho4) = (rho.powi(2), rho.powi(3), rho.powi(4));
    let opr = &one + rho;
    let omr = &one - rho;
    let a = (&one - ri(2, q) * rho - &rho2) / (ri(24, q) * &opr * omr.powi(2));
    let b = (&rho4 + ri(6, q) * &rho3 + ri(2, q) * &rho2 + ri(4, q) * rho - &one)
        / (ri(24, q) * &opr * omr.powi(4))
        + rho / (ri(4, q) * (&one - &rho2) * (&one + &rho2 + ri(2, q) * rho * c));
    a.max(&b)
}

/// `C_h(ρ, c)` from the cubic estimate of `h`.
pub fn c_h(rho: &HpReal, c: &HpReal) -> HpReal {
    let q = rho.precision();
    let one = ri(1, q);
    let rho2 = rho.powi(2);
    let opr = &one + rho;
    let omr = &one - rho;
    let a =
        (&one + &rho2) * (&rho2 + ri(4, q) * rho - &one) / (ri(6, q) * omr.powi(3) * opr.powi(2));
    let b = (&one + &rho2) * (&one - ri(2, q) * rho * (&one + c) - &rho2)
        / (ri(6, q) * &omr * ((&one + &rho2).powi(2) - ri(4, q) * &rho2 * c.powi(2)));
    a.max(&b)
}

/// `(g(θ), h(θ))` where `f(ρe^{iθ}) = g + ih` and `f(z) = r log(1+z) + log(1-z) - log z`.
pub fn f_on_circle(r: &HpReal, rho: &HpReal, theta: &HpReal) -> (HpReal, HpReal) {
    let q = r.precision().max(theta.precision());
    let one = ri(1, q);
    let (c, s) = (theta.cos(), theta.sin());
    let (x1, y1) = (&one + rho * &c, rho * &s);
    let (x2, y2) = (&one - rho * &c, -(rho * &s));
    let half = ri(1, q) / ri(2, q);
    let g = r * &half * (x1.powi(2) + y1.powi(2)).ln() + &half * (x2.powi(2) + y2.powi(2)).ln()
        - rho.ln();
    let h = r * atan2(&y1, &x1) + atan2(&y2, &x2) - theta;
    (g, h)
}

/// `atan2(y, x)` for `x > 0`.
fn atan2(y: &HpReal, x: &HpReal) -> HpReal {
    (y / x).atan()
}

fn hypot(a: &HpReal, b: &HpReal) -> HpReal {
    (a.powi(2) + b.powi(2)).sqrt()
}

fn leq_rational(r: &BigRational, s: &str) -> bool {
    *r <= parse_rational(s).expect("constant")
}

/// Checks one lemma on every `(r, θ)` grid point.
///
/// Grid points outside the hypothesis region are an argument error.
pub fn validate_inequality(
    lemma: LemmaId,
    r_grid: &[BigRational],
    theta_grid: &ThetaGrid,
    p: usize,
) -> Result<ValidationReport> {
    let q = p + GUARD;
    let tol = slack(DEFAULT_SLACK_EXP);
    let pi = HpReal::pi(q);
    let one = ri(1, q);
    let mut report = ValidationReport {
        lemma,
        points: 0,
        violations: 0,
        max_margin: f64::NEG_INFINITY,
        worst: None,
    };
    for r in r_grid {
        let regime = classify(r);
        let super_lemma = matches!(
            lemma,
            LemmaId::SuperGQuadratic | LemmaId::SuperGQuartic | LemmaId::SuperHCubic
        );
        match lemma {
            _ if super_lemma && regime != Regime::Supercritical => {
                return arg(format!("{lemma} needs r > 3 + 2*sqrt(2), got {r}"));
            }
            LemmaId::SubFCubic | LemmaId::SubGCubic if regime != Regime::Subcritical => {
                return arg(format!("{lemma} needs 1 < r < 3 + 2*sqrt(2), got {r}"));
            }
            LemmaId::NearOneFCubic
                if !(*r >= BigRational::from_integer(1.into()) && leq_rational(r, "2.282")) =>
            {
                return arg(format!("{lemma} needs 1 <= r <= 2.282, got {r}"));
            }
            LemmaId::NearOneGCubic
                if !(regime == Regime::Subcritical && leq_rational(r, "2.11952")) =>
            {
                return arg(format!("{lemma} needs 1 < r <= 2.11952, got {r}"));
            }
            _ => {}
        }
        let rr = rq(r, q);
        let sd_regime = if super_lemma {
            Regime::Supercritical
        } else {
            Regime::Subcritical
        };
        let sd = saddle_data_real(&rr, sd_regime, q);
        let rho = sd.rho.with_precision(q);
        let (lo, hi) = match lemma {
            LemmaId::SuperGQuadratic | LemmaId::SuperGQuartic | LemmaId::SuperHCubic => {
                (-pi.clone(), pi.clone())
            }
            LemmaId::SubFCubic | LemmaId::SubGCubic => {
                let a = sd.alpha.clone().unwrap().with_precision(q);
                (&a / ri(2, q), &pi - &a / ri(2, q))
            }
            LemmaId::NearOneFCubic => {
                let a = sd.alpha.clone().unwrap().with_precision(q);
                let w = (&rr - &one).sqrt();
                (&a - &w, &a + &w)
            }
            LemmaId::NearOneGCubic => {
                let a = sd.alpha.clone().unwrap().with_precision(q);
                (&a / ri(2, q), ri(3, q) * &a / ri(2, q))
            }
        };
        let thetas: Vec<HpReal> = match theta_grid {
            ThetaGrid::Unit(ts) => {
                let mut v = Vec::with_capacity(ts.len());
                for t in ts {
                    if !(0.0..=1.0).contains(t) {
                        return arg(format!("unit grid value {t} outside [0, 1]"));
                    }
                    v.push(&lo + HpReal::from_f64(*t, q) * (&hi - &lo));
                }
                v
            }
            ThetaGrid::Absolute(ts) => {
                let mut v = Vec::with_capacity(ts.len());
                for t in ts {
                    let th = HpReal::from_f64(*t, q);
                    if th.cmp_value(&lo).is_lt() || th.cmp_value(&hi).is_gt() {
                        return arg(format!(
                            "theta {t} outside the region of {lemma} at r = {r}"
                        ));
                    }
                    v.push(th);
                }
                v
            }
        };
        let zero = HpReal::zero(q);
        for th in &thetas {
            let (g, h) = f_on_circle(&rr, &rho, th);
            let margins: Vec<HpReal> = match lemma {
                LemmaId::SuperGQuadratic | LemmaId::SuperGQuartic | LemmaId::SuperHCubic => {
                    let (g0, _) = f_on_circle(&rr, &rho, &zero);
                    let m = sd.m.clone().unwrap().with_precision(q);
                    let th2 = th.powi(2);
                    match lemma {
                        LemmaId::SuperGQuadratic => {
                            let mut out = vec![&g - &g0 + ri(2, q) * &m * &th2 / pi.powi(2)];
                            let third = &pi / ri(3, q);
                            if leq_rational(r, "7.686899") && th.abs().cmp_value(&third).is_le() {
                                out.push(&g - &g0 + &m * &th2 / ri(2, q));
                            }
                            out
                        }
                        LemmaId::SuperGQuartic => {
                            let cg = c_g(&rho, &th.cos());
                            vec![(&g - &g0 + &m * &th2 / ri(2, q)).abs() - cg * th2.powi(2)]
                        }
                        _ => {
                            let ch = c_h(&rho, &th.cos());
                            vec![h.abs() - ch * th.abs().powi(3)]
                        }
                    }
                }
                _ => {
                    let a = sd.alpha.clone().unwrap().with_precision(q);
                    let (ga, ha) = f_on_circle(&rr, &rho, &a);
                    let t = th - &a;
                    let t2 = t.powi(2);
                    let t3 = t.abs().powi(3);
                    match lemma {
                        LemmaId::SubFCubic => {
                            let d = rq(&discriminant_neg(r), q);
                            let beta = sd.beta.clone().unwrap().with_precision(q);
                            let k = d.sqrt() / ri(4, q) * &t2;
                            let re = &g - &ga + &k * beta.cos();
                            let im = &h - &ha - &k * beta.sin();
                            let rp1 = &rr + &one;
                            let rhs = HpReal::parse("0.33846", q)? * rp1.powi(2) / rr.powi(2) * &t3;
                            vec![hypot(&re, &im) - rhs]
                        }
                        LemmaId::SubGCubic => {
                            let d = rq(&discriminant_neg(r), q);
                            let rp1 = &rr + &one;
                            let rhs =
                                -(&rp1 * &d / (ri(16, q) * &rr)) * &t2 + &rp1 / ri(4, q) * &t3;
                            vec![&g - &ga - rhs]
                        }
                        LemmaId::NearOneFCubic => {
                            let re = &g - &ga + &t2 / ri(2, q);
                            let im = &h - &ha;
                            let rhs = &t3 / ri(3, q) + (&rr - &one) / ri(4, q) * &t2;
                            vec![hypot(&re, &im) - rhs]
                        }
                        _ => {
                            let rhs = -(&t2 / ri(2, q)) + &t3 / ri(2, q);
                            vec![&g - &ga - rhs]
                        }
                    }
                }
            };
            report.points += 1;
            for m in margins {
                let mf = m.to_f64();
                if m.cmp_value(&tol).is_gt() {
                    report.violations += 1;
                }
                if mf > report.max_margin {
                    report.max_margin = mf;
                    report.worst = Some((rr.to_f64(), th.to_f64()));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    #[test]
    fn lemma_names_round_trip() {
        for l in LemmaId::ALL {
            assert_eq!(l.name().parse::<LemmaId>().unwrap(), l);
        }
        assert!("r+g".parse::<LemmaId>().is_err());
    }

    #[test]
    fn super_quadratic_at_seven() {
        let rep = validate_inequality(
            LemmaId::SuperGQuadratic,
            &[ratio(7, 1)],
            &ThetaGrid::Absolute(vec![1.0]),
            128,
        )
        .unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.max_margin <= 0.0);
    }

    #[test]
    fn near_one_g_vanishes_at_alpha() {
        let r = ratio(101, 100);
        let rep = validate_inequality(
            LemmaId::NearOneGCubic,
            &[r],
            &ThetaGrid::Unit(vec![0.5]),
            128,
        )
        .unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.max_margin.abs() < 1e-30);
    }

    #[test]
    fn sub_f_off_saddle() {
        let q = 128 + GUARD;
        let sd = super::super::saddle_data(&ratio(2, 1), q).unwrap();
        let theta = sd.alpha.unwrap().to_f64() + 0.1;
        let rep = validate_inequality(
            LemmaId::SubFCubic,
            &[ratio(2, 1)],
            &ThetaGrid::Absolute(vec![theta]),
            128,
        )
        .unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.max_margin < 0.0);
    }

    #[test]
    fn outside_region_is_an_error() {
        assert!(validate_inequality(
            LemmaId::SubGCubic,
            &[ratio(2, 1)],
            &ThetaGrid::Absolute(vec![0.01]),
            128
        )
        .is_err());
        assert!(validate_inequality(
            LemmaId::SuperHCubic,
            &[ratio(2, 1)],
            &ThetaGrid::Unit(vec![0.5]),
            128
        )
        .is_err());
        assert!(validate_inequality(
            LemmaId::NearOneGCubic,
            &[ratio(3, 1)],
            &ThetaGrid::Unit(vec![0.5]),
            128
        )
        .is_err());
    }

    #[test]
    fn saddle_equation_holds_at_alpha() {
        // f'(z) = r/(1+z) - 1/(1-z) - 1/z vanishes at z = ρe^{iα}: check via g'(α) ≈ 0 and h'(α) ≈ 0.
        let q = 160;
        let r = rq(&ratio(5, 2), q);
        let sd = saddle_data_real(&r, Regime::Subcritical, q);
        let a = sd.alpha.unwrap();
        let eps = HpReal::pow2(-40, q);
        let (g1, h1) = f_on_circle(&r, &sd.rho, &(&a + &eps));
        let (g0, h0) = f_on_circle(&r, &sd.rho, &(&a - &eps));
        assert!(((g1 - g0) / (ri(2, q) * &eps)).abs().to_f64() < 1e-9);
        assert!(((h1 - h0) / (ri(2, q) * &eps)).abs().to_f64() < 1e-9);
        assert!(
            (sd.g_alpha.unwrap() - f_on_circle(&r, &sd.rho, &a).0)
                .abs()
                .to_f64()
                < 1e-30
        );
    }
}
