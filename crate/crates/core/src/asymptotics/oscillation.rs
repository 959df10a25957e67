//! Lower bounds for `|cos(λ1γ1 + λ2γ2)|` near `r = 1`.
//!
//! Writing `γ(r) = rγ1 + γ2`, the cubic expansion
//! `0 ≤ γ(r) - (r-3)π/4 + (r-1)²/4 ≤ (r-1)³/8` (for `1 ≤ r ≤ (9+√73)/4`)
//! pins the angle `λ2 γ(r)` to within a window of width
//! `(3-r)/2 · x` around `(λ1 - 3λ2)π/4 - x`, where `x = (λ1-λ2)²/(4λ2)`.
//! Depending on `(λ1+λ2) mod 4` this keeps the cosine away from zero on
//! two ranges of `x`.

use num_rational::BigRational;
use num_traits::One;

use super::GUARD;
use crate::error::{arg, Result};
use crate::exact::PartitionPair;
use crate::numerics::{certified_compare, ri, rq, slack, Comparison, HpReal};

/// `γ1 = arccos((3r-1)/(2√2 r))` and `γ2 = -arccos((r-3)/(2√2))`, for `1 ≤ r < 3 + 2√2`.
pub fn gammas(r: &HpReal) -> (HpReal, HpReal) {
    let q = r.precision();
    let sqrt2 = ri(2, q).sqrt();
    let g1 = ((ri(3, q) * r - ri(1, q)) / (ri(2, q) * &sqrt2 * r)).acos();
    let g2 = -((r - ri(3, q)) / (ri(2, q) * &sqrt2)).acos();
    (g1, g2)
}

/// The cubic sandwich at one ratio.
#[derive(Debug, Clone)]
pub struct GammaCubic {
    /// Always 0.
    pub lo: HpReal,
    /// `(r-1)³/8`.
    pub hi: HpReal,
    /// `rγ1 + γ2 - (r-3)π/4 + (r-1)²/4`.
    pub middle: HpReal,
}

/// `true` if `1 ≤ r ≤ (9+√73)/4`, decided exactly.
pub fn in_gamma_range(r: &BigRational) -> bool {
    if *r < BigRational::one() {
        return false;
    }
    let t = BigRational::from_integer(4.into()) * r - BigRational::from_integer(9.into());
    t <= BigRational::from_integer(0.into()) || &t * &t <= BigRational::from_integer(73.into())
}

pub fn gamma_cubic_bounds(r: &BigRational, p: usize) -> Result<GammaCubic> {
    if !in_gamma_range(r) {
        return arg(format!("ratio {r} outside [1, (9+sqrt(73))/4]"));
    }
    let q = p + GUARD;
    let rr = rq(r, q);
    let (g1, g2) = gammas(&rr);
    let pi = HpReal::pi(q);
    let rm1 = &rr - ri(1, q);
    let middle = &rr * g1 + g2 - (&rr - ri(3, q)) * pi / ri(4, q) + rm1.powi(2) / ri(4, q);
    Ok(GammaCubic {
        lo: HpReal::zero(p),
        hi: (rm1.powi(3) / ri(8, q)).with_precision(p),
        middle: middle.with_precision(p),
    })
}

/// A lower bound for `|cos(λ1γ1 + λ2γ2)|`, if one of the windows applies.
#[derive(Debug, Clone)]
pub struct CosLowerBound {
    pub bound: HpReal,
    pub applicable: bool,
    /// Window 1 or 2 within the congruence class.
    pub window: Option<u8>,
}

/// `(λ1-λ2)²/(4λ2)` exactly.
pub fn oscillation_x(pair: &PartitionPair) -> BigRational {
    let d = BigRational::from_integer(pair.difference().into());
    &d * &d / BigRational::from_integer((4 * pair.lambda2()).into())
}

/// Lower bound for `|cos(λ1γ1 + λ2γ2)|` for `1 < r ≤ 3`, dispatched on
/// `(λ1+λ2) mod 4` and on which window `x = (λ1-λ2)²/(4λ2)` lies in. Window
/// membership is only granted when certified; outside every window the
/// result is marked not applicable.
pub fn cos_lower_bound(pair: &PartitionPair, p: usize) -> Result<CosLowerBound> {
    let Some(r) = pair.ratio() else {
        return arg("lambda2 must be positive");
    };
    let three = BigRational::from_integer(3.into());
    if r > three {
        return arg(format!("cosine lower bound needs r <= 3, got {r}"));
    }
    if r <= BigRational::one() {
        return arg(format!("cosine lower bound needs r > 1, got {r}"));
    }
    let q = p + GUARD;
    let xq = oscillation_x(pair);
    let sq = (&three - &r) / BigRational::from_integer(2.into());
    let x = rq(&xq, q);
    let sx = rq(&(&sq * &xq), q);
    let pi = HpReal::pi(q);
    let frac = |n: i64, d: i64| &pi * ri(n, q) / ri(d, q);
    let s = slack(q as u32 - 16);
    let lt =
        |a: &HpReal, b: &HpReal| certified_compare(a, b, &s).unwrap() == Comparison::CertifiedLess;
    // x ≤ hi (certified strictly inside).
    let below = |hi: &HpReal| lt(&x, hi);
    // lo ≤ x where lo = c·π/(3-r); absent when r = 3.
    let above_scaled = |n: i64, d: i64| -> bool {
        if sq == BigRational::from_integer(0.into()) {
            return false;
        }
        // π·n/(d·(3-r)) = π·n/(2d·s).
        let lo = &pi * ri(n, q) / (ri(2 * d, q) * rq(&sq, q));
        lt(&lo, &x)
    };
    let cos = |v: HpReal| v.cos();
    let min2 = |shift: HpReal| cos(&shift - &x).min(&cos(&shift - &sx));
    let class = pair.congruence_class();
    let (w1, w2) = match class {
        0 => (
            below(&frac(1, 2)).then(|| cos(x.clone())),
            (above_scaled(1, 1) && below(&frac(3, 2))).then(|| min2(pi.clone())),
        ),
        1 => (
            below(&frac(3, 4)).then(|| (ri(2, q).sqrt().recip()).min(&cos(frac(1, 4) - &x))),
            (above_scaled(3, 2) && below(&frac(7, 4))).then(|| min2(frac(5, 4))),
        ),
        2 => (
            below(&pi).then(|| min2(frac(1, 2))),
            (above_scaled(2, 1) && below(&frac(2, 1))).then(|| min2(frac(3, 2))),
        ),
        _ => (
            below(&frac(1, 4)).then(|| cos(frac(1, 4) + &x)),
            (above_scaled(1, 2) && below(&frac(5, 4))).then(|| min2(frac(3, 4))),
        ),
    };
    let out = match (w1, w2) {
        (Some(b), _) => CosLowerBound {
            bound: b.with_precision(p),
            applicable: true,
            window: Some(1),
        },
        (None, Some(b)) => CosLowerBound {
            bound: b.with_precision(p),
            applicable: true,
            window: Some(2),
        },
        (None, None) => CosLowerBound {
            bound: HpReal::zero(p),
            applicable: false,
            window: None,
        },
    };
    Ok(out)
}
