//! Nonvanishing certificates for `C(λ1, λ2)`.
//!
//! [`certify`] tries, cheapest first: exact evaluation within a cost budget,
//! the Stanton criterion, the supercritical bound, the subcritical
//! oscillation bound, and the near-one interval and oscillation bounds.
//! Every nonzero verdict other than exact evaluation comes from a certified
//! comparison with explicit slack.

mod cf;
mod exceptions;
mod intervals;
mod scan;

pub use cf::*;
pub use exceptions::*;
pub use intervals::*;
pub use scan::*;

use std::fmt;

use num_rational::BigRational;

use crate::asymptotics::{
    angle_precision, classify, cos_lower_bound, error_bound_near_one, error_bound_subcritical,
    error_bound_supercritical, error_bound_supercritical_refined, near_one_angle, saddle_data,
    Regime, NEAR_ONE_MIN_DIFF, REFINED_RATIO_MAX,
};
use crate::exact::{estimated_cost, eval, PartitionPair};
use crate::numerics::{
    certified_compare, parse_rational, rq, slack, Comparison, HpReal, DEFAULT_PRECISION,
    DEFAULT_SLACK_EXP,
};

/// Default exact-evaluation budget in 64-bit word operations.
pub const DEFAULT_BUDGET: u128 = 200_000_000;

/// A verdict on one pair.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// Exact value computed; nonzero.
    NonzeroExact {
        sign: i8,
        bits: u64,
    },
    /// `λ1 > λ2(λ2+1) - 1`.
    NonzeroStanton,
    /// Supercritical bound certified below 1; `margin = 1 - bound - slack`.
    NonzeroSupercritical {
        margin: HpReal,
        refined: bool,
    },
    /// Main cosine certified above the error bound; `cos_margin = |cos| (or its lower bound) - bound - slack`.
    NonzeroOscillatory {
        cos_margin: HpReal,
        near_one: bool,
    },
    /// Inside a near-diagonal interval clause.
    NonzeroInterval {
        clause: Thr1Clause,
    },
    /// Exact value computed and equal to zero.
    ExactZero,
    Inconclusive {
        reason: String,
    },
    Refused {
        reason: String,
    },
}

impl Certificate {
    /// Stable kind string used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::NonzeroExact { .. } => "nonzero-exact",
            Certificate::NonzeroStanton => "nonzero-stanton",
            Certificate::NonzeroSupercritical { .. } => "nonzero-supercritical",
            Certificate::NonzeroOscillatory { .. } => "nonzero-oscillatory",
            Certificate::NonzeroInterval { .. } => "nonzero-interval",
            Certificate::ExactZero => "exact-zero",
            Certificate::Inconclusive { .. } => "inconclusive",
            Certificate::Refused { .. } => "refused",
        }
    }

    pub fn is_nonzero(&self) -> bool {
        self.kind().starts_with("nonzero")
    }

    pub fn margin(&self) -> Option<&HpReal> {
        match self {
            Certificate::NonzeroSupercritical { margin, .. } => Some(margin),
            Certificate::NonzeroOscillatory { cos_margin, .. } => Some(cos_margin),
            _ => None,
        }
    }

    /// Sign of the exact value when it was computed.
    pub fn exact_sign(&self) -> Option<i8> {
        match self {
            Certificate::NonzeroExact { sign, .. } => Some(*sign),
            Certificate::ExactZero => Some(0),
            _ => None,
        }
    }

    /// The result the certificate rests on.
    pub fn citation(&self) -> String {
        match self {
            Certificate::NonzeroExact { .. } | Certificate::ExactZero => "exact evaluation".into(),
            Certificate::NonzeroStanton => "Stanton's increasing-terms criterion".into(),
            Certificate::NonzeroSupercritical { refined: false, .. } => {
                "supercritical saddle-point bound".into()
            }
            Certificate::NonzeroSupercritical { refined: true, .. } => {
                "refined supercritical saddle-point bound".into()
            }
            Certificate::NonzeroOscillatory {
                near_one: false, ..
            } => "subcritical oscillation bound".into(),
            Certificate::NonzeroOscillatory { near_one: true, .. } => {
                "near-one oscillation bound".into()
            }
            Certificate::NonzeroInterval { clause } => {
                format!("near-diagonal interval theorem, {clause}")
            }
            Certificate::Inconclusive { .. } | Certificate::Refused { .. } => "none".into(),
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::NonzeroExact { sign, bits } => {
                write!(
                    f,
                    "nonzero (exact evaluation: sign {}, {} bits)",
                    if *sign < 0 { "-" } else { "+" },
                    bits
                )
            }
            Certificate::NonzeroStanton => write!(f, "nonzero ({})", self.citation()),
            Certificate::NonzeroSupercritical { margin, .. }
            | Certificate::NonzeroOscillatory {
                cos_margin: margin, ..
            } => {
                write!(
                    f,
                    "nonzero ({}, margin {})",
                    self.citation(),
                    margin.to_sci(6)
                )
            }
            Certificate::NonzeroInterval { .. } => write!(f, "nonzero ({})", self.citation()),
            Certificate::ExactZero => write!(f, "zero (exact evaluation)"),
            Certificate::Inconclusive { reason } => write!(f, "inconclusive: {reason}"),
            Certificate::Refused { reason } => write!(f, "refused: {reason}"),
        }
    }
}

/// Knobs for [`certify`].
#[derive(Debug, Clone)]
pub struct CertifyOptions {
    /// Largest exact-evaluation cost attempted, in 64-bit word operations.
    pub budget: u128,
    pub precision: usize,
    /// Comparisons use slack `2^-slack_exp`.
    pub slack_exp: u32,
    /// Angles `δ ≤ π/3` tried with the refined supercritical bound.
    pub deltas: Vec<BigRational>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            budget: DEFAULT_BUDGET,
            precision: DEFAULT_PRECISION,
            slack_exp: DEFAULT_SLACK_EXP,
            deltas: ["1/2", "3/4", "1"]
                .iter()
                .map(|s| parse_rational(s).unwrap())
                .collect(),
        }
    }
}

/// `λ1 > λ2(λ2+1) - 1` for `λ1 > λ2 ≥ 1`.
pub fn stanton_certify(pair: &PartitionPair) -> bool {
    pair.lambda1() > pair.lambda2() && pair.stanton_applies()
}

/// Runs the certification cascade on one pair.
pub fn certify(pair: &PartitionPair, opts: &CertifyOptions) -> Certificate {
    let (l1, l2) = (pair.lambda1(), pair.lambda2());
    if l2 == 0 {
        return Certificate::Refused {
            reason: "lambda2 = 0".into(),
        };
    }
    if l1 <= l2 {
        return Certificate::Refused {
            reason: "diagonal pair lambda1 = lambda2".into(),
        };
    }
    if estimated_cost(pair) <= opts.budget {
        let v = eval(pair);
        return match v.sign() {
            0 => Certificate::ExactZero,
            s => Certificate::NonzeroExact {
                sign: s,
                bits: v.bits(),
            },
        };
    }
    if stanton_certify(pair) {
        return Certificate::NonzeroStanton;
    }
    let p = opts.precision;
    let s = slack(opts.slack_exp);
    let one = HpReal::one(p);
    let r = pair.ratio().expect("lambda2 > 0");
    match classify(&r) {
        Regime::Supercritical => {
            if let Ok(phi) = error_bound_supercritical(&r, l2, p) {
                if certified_compare(&phi, &one, &s) == Ok(Comparison::CertifiedLess) {
                    return Certificate::NonzeroSupercritical {
                        margin: one - phi - &s,
                        refined: false,
                    };
                }
            }
            if r <= parse_rational(REFINED_RATIO_MAX).unwrap() {
                for d in &opts.deltas {
                    let delta = rq(d, p);
                    if let Ok(b) = error_bound_supercritical_refined(&r, l2, &delta, p) {
                        if certified_compare(&b.bound, &one, &s) == Ok(Comparison::CertifiedLess) {
                            return Certificate::NonzeroSupercritical {
                                margin: one - b.bound - &s,
                                refined: true,
                            };
                        }
                    }
                }
            }
            Certificate::Inconclusive {
                reason: "supercritical bound not certified below 1".into(),
            }
        }
        Regime::Subcritical => certify_subcritical(pair, &r, p, &s),
        regime => Certificate::Inconclusive {
            reason: format!("{regime} ratio"),
        },
    }
}

fn certify_subcritical(pair: &PartitionPair, r: &BigRational, p: usize, s: &HpReal) -> Certificate {
    let (l1, l2) = (pair.lambda1(), pair.lambda2());
    let mut reasons = Vec::new();
    match error_bound_subcritical(r, l2, p) {
        Ok(sb) if sb.valid => {
            let q = angle_precision(p, l1);
            let sd = saddle_data(r, q).expect("subcritical");
            let angle = HpReal::from_u64(l1, q) * sd.gamma1.unwrap()
                + HpReal::from_u64(l2, q) * sd.gamma2.unwrap()
                + sd.gamma3.unwrap();
            let c = angle.cos().abs().with_precision(p);
            if certified_compare(&c, &sb.bound, s) == Ok(Comparison::CertifiedGreater) {
                return Certificate::NonzeroOscillatory {
                    cos_margin: c - sb.bound - s,
                    near_one: false,
                };
            }
            reasons.push("cosine not above the subcritical bound");
        }
        _ => reasons.push("below the subcritical threshold"),
    }
    if pair.difference() < NEAR_ONE_MIN_DIFF {
        reasons.push("difference below the near-one range");
        return Certificate::Inconclusive {
            reason: reasons.join("; "),
        };
    }
    let nb = match error_bound_near_one(pair, p) {
        Ok(nb) if nb.valid => nb,
        _ => {
            reasons.push("difference above the near-one range");
            return Certificate::Inconclusive {
                reason: reasons.join("; "),
            };
        }
    };
    if let Some(iv) = thr1_membership(pair, p) {
        return Certificate::NonzeroInterval { clause: iv.clause };
    }
    if *r <= BigRational::from_integer(3.into()) {
        if let Ok(cl) = cos_lower_bound(pair, p) {
            if cl.applicable
                && certified_compare(&cl.bound, &nb.bound, s) == Ok(Comparison::CertifiedGreater)
            {
                return Certificate::NonzeroOscillatory {
                    cos_margin: cl.bound - &nb.bound - s,
                    near_one: true,
                };
            }
        }
    }
    if let Ok(angle) = near_one_angle(pair, r, p) {
        let c = angle.cos().abs().with_precision(p);
        if certified_compare(&c, &nb.bound, s) == Ok(Comparison::CertifiedGreater) {
            return Certificate::NonzeroOscillatory {
                cos_margin: c - &nb.bound - s,
                near_one: true,
            };
        }
    }
    reasons.push("cosine not above the near-one bound");
    Certificate::Inconclusive {
        reason: reasons.join("; "),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn tiny() -> CertifyOptions {
        CertifyOptions {
            budget: 0,
            ..CertifyOptions::default()
        }
    }

    fn pair(a: u64, b: u64) -> PartitionPair {
        PartitionPair::new(a, b).unwrap()
    }

    #[test]
    fn stanton_examples() {
        assert!(stanton_certify(&pair(6, 2)));
        assert!(!stanton_certify(&pair(5, 2)));
        assert!(stanton_certify(&pair(100, 1)));
    }

    #[test]
    fn exact_example() {
        let c = certify(&pair(6, 1), &CertifyOptions::default());
        assert!(matches!(c, Certificate::NonzeroExact { sign: -1, bits: 3 }));
        assert_eq!(c.exact_sign(), Some(-1));
    }

    #[test]
    fn refuses_diagonal() {
        assert!(matches!(
            certify(&pair(4, 4), &CertifyOptions::default()),
            Certificate::Refused { .. }
        ));
        assert!(matches!(
            certify(&pair(5, 5), &tiny()),
            Certificate::Refused { .. }
        ));
        assert!(matches!(
            certify(&pair(5, 0), &tiny()),
            Certificate::Refused { .. }
        ));
    }

    #[test]
    fn supercritical_with_tiny_budget() {
        let c = certify(&pair(1800, 300), &tiny());
        assert!(
            matches!(c, Certificate::NonzeroSupercritical { refined: false, .. }),
            "{c}"
        );
        assert!(c.margin().unwrap().signum() > 0);
    }

    #[test]
    fn near_diagonal_small_difference_is_inconclusive() {
        for l2 in [10u64, 100, 700] {
            let c = certify(&pair(l2 + 1, l2), &tiny());
            assert!(matches!(c, Certificate::Inconclusive { .. }), "{l2}: {c}");
            let c = certify(&pair(l2 + 1, l2), &CertifyOptions::default());
            assert!(matches!(c, Certificate::NonzeroExact { .. }));
        }
    }

    #[test]
    fn oscillatory_is_sound() {
        let mut hits = 0;
        for l2 in 24_990..25_000u64 {
            let p = pair(2 * l2, l2);
            let c = certify(&p, &tiny());
            if let Certificate::NonzeroOscillatory {
                near_one: false, ..
            } = c
            {
                hits += 1;
                assert!(!eval(&p).value.is_zero());
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn interval_certificate_is_sound() {
        let l2 = 40_000u64;
        let p = pair(l2 + 800, l2);
        assert_eq!(p.congruence_class(), 0);
        let c = certify(&p, &tiny());
        assert!(matches!(c, Certificate::NonzeroInterval { .. }), "{c}");
        assert!(!eval(&p).value.is_zero());
    }
}
