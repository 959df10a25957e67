//! Near-diagonal windows of `λ1 - λ2` where `C(λ1, λ2) ≠ 0`, one pair of
//! windows per congruence class of `λ1 + λ2 mod 4`.

use std::fmt;

use serde::Serialize;

use crate::exact::PartitionPair;
use crate::numerics::{ri, HpReal};

/// Differences up to this value are covered by direct computation rather
/// than by the near-one asymptotics.
pub const SMALL_DIFFERENCE_MAX: u64 = 701;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Thr1Clause {
    pub class: u8,
    pub window: u8,
}

impl fmt::Display for Thr1Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "class{}-window{}", self.class, self.window)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// `λ1 - λ2 ≤ 701`.
    SmallDifference,
    /// `λ1 - λ2 ≥ 702`.
    Asymptotic,
}

/// A run of differences `d_lo ≤ λ1 - λ2 ≤ d_hi`. Only the `λ1` with
/// `λ1 + λ2 ≡ clause.class (mod 4)` are certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thr1Interval {
    pub clause: Thr1Clause,
    pub lambda2: u64,
    pub d_lo: u64,
    pub d_hi: u64,
    pub basis: Basis,
}

impl Thr1Interval {
    pub fn lambda1_lo(&self) -> u64 {
        self.lambda2 + self.d_lo
    }

    pub fn lambda1_hi(&self) -> u64 {
        self.lambda2 + self.d_hi
    }

    pub fn contains(&self, pair: &PartitionPair) -> bool {
        pair.lambda2() == self.lambda2
            && pair.congruence_class() == self.clause.class
            && (self.d_lo..=self.d_hi).contains(&pair.difference())
    }

    /// The certified `λ1` values, in increasing order.
    pub fn lambda1_values(&self) -> impl Iterator<Item = u64> + '_ {
        let first = self.lambda1_lo()
            + (4 + self.clause.class as u64 - (self.lambda1_lo() + self.lambda2) % 4) % 4;
        (first..=self.lambda1_hi()).step_by(4)
    }
}

enum Lower {
    Int(u64),
    Real(HpReal),
}

fn ceil_inward(x: &HpReal, eps: &HpReal) -> u64 {
    let n = x.ceil();
    let n = if (HpReal::from_bigint(&n, x.precision()) - x) < *eps {
        n + 1
    } else {
        n
    };
    u64::try_from(n.max(0.into())).unwrap()
}

/// `None` when the real bound is below 1.
fn floor_inward(x: &HpReal, eps: &HpReal) -> Option<u64> {
    let n = x.floor();
    let n = if (x - HpReal::from_bigint(&n, x.precision())) < *eps {
        n - 1
    } else {
        n
    };
    u64::try_from(n).ok()
}

/// Certified intervals for one `λ2`, in clause order, split at the
/// small-difference boundary.
pub fn certify_interval_thr1(lambda2: u64, p: usize) -> Vec<Thr1Interval> {
    if lambda2 == 0 {
        return Vec::new();
    }
    let q = p + 32;
    let l = ri(lambda2 as i64, q);
    let pi = HpReal::pi(q);
    let root = |k: i64| (ri(k, q) * &pi * &l).sqrt();
    let c = |s: &str| HpReal::parse(s, q).unwrap();
    let eps = HpReal::pow2(-(p as i64 - 8), q) * root(8);
    let two = ri(2, q);
    let quarter = l.sqrt().sqrt();
    let class2_lo = c("2.0582") * quarter;
    let class2_lo = if class2_lo > ri(702, q) {
        Lower::Real(class2_lo)
    } else {
        Lower::Int(702)
    };
    let table: Vec<(u8, u8, Lower, HpReal)> = vec![
        (0, 1, Lower::Int(1), root(2) - c("1.0443")),
        (
            0,
            2,
            Lower::Real(root(2) + c("3.1407")),
            root(6) - c("0.9275"),
        ),
        (1, 1, Lower::Int(1), root(3) - c("0.984")),
        (
            1,
            2,
            Lower::Real(root(3) + c("3.8433")),
            root(7) - c("0.9231"),
        ),
        (2, 1, class2_lo, root(2) - c("0.9535")),
        (
            2,
            2,
            Lower::Real(&two * root(1) + c("4.5938")),
            &two * root(2) - c("0.9218"),
        ),
        (3, 1, Lower::Int(1), root(1) - c("1.1958")),
        (
            3,
            2,
            Lower::Real(root(1) + c("2.5913")),
            root(5) - c("0.9367"),
        ),
    ];
    let mut out = Vec::new();
    for (class, window, lo, hi) in table {
        let lo = match lo {
            Lower::Int(n) => n,
            Lower::Real(x) => ceil_inward(&x, &eps).max(1),
        };
        let Some(hi) = floor_inward(&hi, &eps) else {
            continue;
        };
        if hi < lo {
            continue;
        }
        let clause = Thr1Clause { class, window };
        let mut push = |d_lo, d_hi, basis| {
            out.push(Thr1Interval {
                clause,
                lambda2,
                d_lo,
                d_hi,
                basis,
            })
        };
        if lo <= SMALL_DIFFERENCE_MAX {
            push(lo, hi.min(SMALL_DIFFERENCE_MAX), Basis::SmallDifference);
        }
        if hi > SMALL_DIFFERENCE_MAX {
            push(lo.max(SMALL_DIFFERENCE_MAX + 1), hi, Basis::Asymptotic);
        }
    }
    out
}

/// The interval certifying `pair`, if any.
pub fn thr1_membership(pair: &PartitionPair, p: usize) -> Option<Thr1Interval> {
    certify_interval_thr1(pair.lambda2(), p)
        .into_iter()
        .find(|iv| iv.contains(pair))
}
