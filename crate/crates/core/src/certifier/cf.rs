use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{arg, Result};
use crate::numerics::{certified_compare, Comparison, HpReal};

/// Continued fraction of a real, computed while each floor is certain.
#[derive(Debug, Clone)]
pub struct CfExpansion {
    pub target: HpReal,
    pub partial_quotients: Vec<BigInt>,
    /// `(p_n, q_n)` for each partial quotient.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// The expansion stopped before `depth` because a floor became uncertain.
    pub terminated: bool,
}

impl CfExpansion {
    /// `|target - p/q|` at the target's precision.
    pub fn distance(&self, n: usize) -> HpReal {
        let (p, q) = &self.convergents[n];
        let w = self.target.precision();
        (&self.target - HpReal::from_bigint(p, w) / HpReal::from_bigint(q, w)).abs()
    }

    /// `|target - p_n/q_n| < 1/q_n²` for every convergent, with slack.
    pub fn legendre_quality(&self, slack: &HpReal) -> bool {
        let w = self.target.precision();
        (0..self.convergents.len()).all(|n| {
            let q = HpReal::from_bigint(&self.convergents[n].1, w);
            let lim = (&q * &q).recip();
            certified_compare(&self.distance(n), &lim, slack) != Ok(Comparison::CertifiedGreater)
        })
    }
}

/// Expands `x` to at most `depth` partial quotients.
///
/// Tracks an absolute error `e` on each complete quotient, starting from
/// `2^-(p-8) max(1, |x|)`; inverting a fractional part `f` maps it to
/// `e / (f (f - e))`. The expansion stops once a complete quotient is within
/// `e` of an integer, emitting that integer only while `e < 1/4`.
pub fn continued_fraction(x: &HpReal, depth: usize) -> Result<CfExpansion> {
    if depth == 0 {
        return arg("depth must be at least 1");
    }
    if !x.is_finite() {
        return arg("target must be finite");
    }
    let w = x.precision();
    let one = HpReal::one(w);
    let mut e = HpReal::pow2(-(w as i64 - 8), w) * x.abs().max(&one);
    let mut cur = x.clone();
    let mut pq = Vec::new();
    let mut conv: Vec<(BigInt, BigInt)> = Vec::new();
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut terminated = false;
    while pq.len() < depth {
        let near = cur.round();
        let gap = (&cur - HpReal::from_bigint(&near, w)).abs();
        let stop = gap <= e;
        if stop && e >= HpReal::pow2(-2, w) {
            terminated = true;
            break;
        }
        let a = if stop { near } else { cur.floor() };
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        (p0, q0, p1, q1) = (p1, q1, p2.clone(), q2.clone());
        conv.push((p2, q2));
        let f = &cur - HpReal::from_bigint(&a, w);
        pq.push(a);
        if stop {
            terminated = true;
            break;
        }
        let next = f.recip();
        e = &e / (&f * (&f - &e)) + next.ulp() * HpReal::from_u64(2, w);
        cur = next;
        if !e.is_finite() || e.is_negative() {
            terminated = true;
            break;
        }
    }
    debug_assert!(conv.iter().all(|(_, q)| q.is_positive()));
    Ok(CfExpansion {
        target: x.clone(),
        partial_quotients: pq,
        convergents: conv,
        terminated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rfrac, ri, slack};

    #[test]
    fn golden_ratio() {
        let phi = (ri(1, 128) + ri(5, 128).sqrt()) / ri(2, 128);
        let cf = continued_fraction(&phi, 10).unwrap();
        assert_eq!(cf.partial_quotients, vec![BigInt::one(); 10]);
        let fib = [1u32, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144];
        for (n, (p, q)) in cf.convergents.iter().enumerate() {
            assert_eq!(*q, BigInt::from(fib[n]));
            assert_eq!(*p, BigInt::from(fib[n + 1]));
        }
        assert!(cf.legendre_quality(&slack(100)));
        assert!(!cf.terminated);
    }

    #[test]
    fn one_third() {
        let cf = continued_fraction(&rfrac(1, 3, 128), 10).unwrap();
        assert_eq!(cf.partial_quotients, vec![BigInt::zero(), BigInt::from(3)]);
        assert!(cf.terminated);
    }

    #[test]
    fn negative_target() {
        let cf = continued_fraction(&rfrac(-7, 3, 128), 10).unwrap();
        assert_eq!(
            cf.partial_quotients,
            vec![BigInt::from(-3), BigInt::from(1), BigInt::from(2)]
        );
        assert_eq!(
            cf.convergents.last().unwrap(),
            &(BigInt::from(-7), BigInt::from(3))
        );
    }

    #[test]
    fn precision_limits_depth() {
        let pi = HpReal::pi(64);
        let cf = continued_fraction(&pi, 1000).unwrap();
        assert!(cf.terminated);
        assert!(cf.partial_quotients.len() < 60);
        assert_eq!(
            &cf.partial_quotients[..5],
            &[3, 7, 15, 1, 292].map(BigInt::from)
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(continued_fraction(&ri(1, 64), 0).is_err());
    }
}
