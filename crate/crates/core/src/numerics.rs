//! Arbitrary-precision reals and certified comparison.
//!
//! [`HpReal`] wraps a binary floating-point number carrying an explicit
//! working precision in bits. Every primitive (arithmetic, `sqrt`, `ln`,
//! `exp`, trigonometric and inverse trigonometric functions) is rounded to
//! nearest at the working precision, so a single operation contributes at
//! most one unit in the last place (ulp) of relative error; we budget two.
//! A formula built from `n` primitives on well-conditioned inputs therefore
//! carries a relative error below `2n * 2^-p`. With the default 128 bits and
//! the formulas used in this crate (fewer than 60 primitives each) this is
//! below `2^-120`, far under the default comparison slack of `2^-40`.
//!
//! Cancellation is handled at the call sites: angles of size `2^k` are
//! evaluated with `k + 64` extra bits, and quantities that are differences of
//! nearly equal terms are never compared against thresholds finer than the
//! slack.
//!
//! Decisions that must be sound go through [`certified_compare`], which only
//! answers "less" or "greater" when the gap exceeds the slack.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Exponent, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{arg, Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 128;
/// Default comparison slack is `2^-DEFAULT_SLACK_EXP`.
pub const DEFAULT_SLACK_EXP: u32 = 40;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A real number with an explicit binary working precision.
#[derive(Clone)]
pub struct HpReal {
    v: BigFloat,
    p: usize,
}

/// Outcome of [`certified_compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    CertifiedLess,
    CertifiedGreater,
    Indeterminate,
}

impl HpReal {
    fn wrap(v: BigFloat, p: usize) -> Self {
        HpReal { v, p }
    }

    pub fn zero(p: usize) -> Self {
        Self::wrap(BigFloat::from_u64(0, p), p)
    }

    pub fn one(p: usize) -> Self {
        Self::from_u64(1, p)
    }

    pub fn from_u64(n: u64, p: usize) -> Self {
        let mut v = BigFloat::from_u64(n, p.max(64));
        v.set_precision(p, RM).ok();
        Self::wrap(v, p)
    }

    pub fn from_i64(n: i64, p: usize) -> Self {
        let mut v = BigFloat::from_i64(n, p.max(64));
        v.set_precision(p, RM).ok();
        Self::wrap(v, p)
    }

    /// Exact conversion of a finite `f64` (rounded only if `p < 53`).
    pub fn from_f64(x: f64, p: usize) -> Self {
        let mut v = BigFloat::from_f64(x, p.max(64));
        v.set_precision(p, RM).ok();
        Self::wrap(v, p)
    }

    /// Nearest representable value to `n` at precision `p`.
    pub fn from_bigint(n: &BigInt, p: usize) -> Self {
        to_real(n, p)
    }

    /// Correctly rounded quotient of the numerator and denominator.
    pub fn from_rational(q: &BigRational, p: usize) -> Self {
        let guard = p + 8;
        let n = to_real(q.numer(), guard);
        let d = to_real(q.denom(), guard);
        let mut v = n.v.div(&d.v, guard, RM);
        v.set_precision(p, RM).ok();
        Self::wrap(v, p)
    }

    /// Parses a decimal (`-1.25e-3`) or a fraction (`7/3`).
    pub fn parse(s: &str, p: usize) -> Result<Self> {
        Ok(Self::from_rational(&parse_rational(s)?, p))
    }

    pub fn pi(p: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(p, RM)), p)
    }

    pub fn ln2(p: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.ln_2(p, RM)), p)
    }

    /// `2^k` exactly.
    pub fn pow2(k: i64, p: usize) -> Self {
        let mut v = BigFloat::from_u64(1, p.max(64));
        v.set_exponent((k + 1) as Exponent);
        v.set_precision(p, RM).ok();
        Self::wrap(v, p)
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    /// The same value rounded (or padded) to precision `p`.
    pub fn with_precision(&self, p: usize) -> Self {
        let mut v = self.v.clone();
        v.set_precision(p, RM).ok();
        Self::wrap(v, p)
    }

    fn unary(&self, f: impl FnOnce(&BigFloat, usize, &mut Consts) -> BigFloat) -> Self {
        let p = self.p;
        Self::wrap(with_consts(|cc| f(&self.v, p, cc)), p)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.p, RM), self.p)
    }

    pub fn ln(&self) -> Self {
        self.unary(|v, p, cc| v.ln(p, RM, cc))
    }

    pub fn exp(&self) -> Self {
        self.unary(|v, p, cc| v.exp(p, RM, cc))
    }

    pub fn sin(&self) -> Self {
        self.unary(|v, p, cc| v.sin(p, RM, cc))
    }

    pub fn cos(&self) -> Self {
        self.unary(|v, p, cc| v.cos(p, RM, cc))
    }

    pub fn acos(&self) -> Self {
        self.unary(|v, p, cc| v.acos(p, RM, cc))
    }

    pub fn asin(&self) -> Self {
        self.unary(|v, p, cc| v.asin(p, RM, cc))
    }

    pub fn atan(&self) -> Self {
        self.unary(|v, p, cc| v.atan(p, RM, cc))
    }

    /// `self^e` for positive `self`.
    pub fn pow(&self, e: &HpReal) -> Self {
        let p = self.p.max(e.p);
        Self::wrap(with_consts(|cc| self.v.pow(&e.v, p, RM, cc)), p)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.v.powi(n, self.p, RM), self.p)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.p)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.v.reciprocal(self.p, RM), self.p)
    }

    /// Multiplies by `2^k` exactly.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = self.v.clone();
        let e = v.exponent().unwrap_or(0) as i64 + k;
        v.set_exponent(e as Exponent);
        Self::wrap(v, self.p)
    }

    pub fn max(&self, o: &HpReal) -> Self {
        if self.cmp_value(o) == Ordering::Less {
            o.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, o: &HpReal) -> Self {
        if self.cmp_value(o) == Ordering::Greater {
            o.clone()
        } else {
            self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_nan(&self) -> bool {
        self.v.is_nan()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.v.is_negative()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.v.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Total order on values; NaN compares equal to everything.
    pub fn cmp_value(&self, o: &HpReal) -> Ordering {
        match self.v.cmp(&o.v) {
            Some(c) if c < 0 => Ordering::Less,
            Some(c) if c > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Unit in the last place at the working precision.
    pub fn ulp(&self) -> HpReal {
        let e = if self.is_zero() {
            0
        } else {
            self.v.exponent().unwrap_or(0) as i64
        };
        HpReal::pow2(e - self.p as i64, 64)
    }

    pub fn floor(&self) -> BigInt {
        bigfloat_int_to_bigint(&self.v.floor())
    }

    pub fn ceil(&self) -> BigInt {
        bigfloat_int_to_bigint(&self.v.ceil())
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        let half = HpReal::from_f64(0.5, self.p);
        if self.is_negative() {
            -(self.abs() + &half).floor()
        } else {
            (self + &half).floor()
        }
    }

    /// Nearest `f64` (overflow gives infinity, underflow gives zero).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        let Some((m, _, s, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        if m.is_empty() || self.v.is_zero() {
            return 0.0;
        }
        let top = m[m.len() - 1];
        let next = if m.len() > 1 { m[m.len() - 2] } else { 0 };
        // 64 high bits with a sticky bit from the rest so the u64 -> f64 rounding is correct.
        let sticky = (next != 0 || m[..m.len().saturating_sub(2)].iter().any(|w| *w != 0)) as u64;
        let mant = (top | sticky) as f64;
        let x = ldexp_f64(mant, e as i64 - 64);
        if s == Sign::Neg {
            -x
        } else {
            x
        }
    }

    /// Scientific notation with `digits` significant decimal digits.
    pub fn to_sci(&self, digits: usize) -> String {
        let x = self.to_f64();
        if x.is_finite() && x != 0.0 || self.is_zero() {
            return format!("{:.*e}", digits.saturating_sub(1), x);
        }
        self.to_string()
    }
}

fn ldexp_f64(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(k as i32)
}

fn bigfloat_int_to_bigint(v: &BigFloat) -> BigInt {
    if v.is_zero() {
        return BigInt::zero();
    }
    let Some((m, _, s, e, _)) = v.as_raw_parts() else {
        return BigInt::zero();
    };
    let mut digits = Vec::with_capacity(m.len() * 2);
    for w in m {
        digits.push(*w as u32);
        digits.push((*w >> 32) as u32);
    }
    let mag = BigUint::new(digits);
    let shift = e as i64 - 64 * m.len() as i64;
    let mag = if shift >= 0 {
        mag << (shift as u64)
    } else {
        mag >> ((-shift) as u64)
    };
    let sign = if s == Sign::Neg {
        BigSign::Minus
    } else {
        BigSign::Plus
    };
    BigInt::from_biguint(sign, mag)
}

/// Rounds an integer to the nearest value at precision `p` (ties to even).
pub fn to_real(n: &BigInt, p: usize) -> HpReal {
    if n.is_zero() {
        return HpReal::zero(p);
    }
    let bits = n.bits();
    assert!(
        bits < Exponent::MAX as u64,
        "integer too large for the exponent range"
    );
    let words = n.magnitude().to_u64_digits().len() as u64;
    let shift = words * 64 - bits;
    let norm = n.magnitude() << shift;
    let digits = norm.to_u64_digits();
    let sign = if n.is_negative() {
        Sign::Neg
    } else {
        Sign::Pos
    };
    let mut v = BigFloat::from_words(&digits, sign, bits as Exponent);
    v.set_precision(p, RM).ok();
    HpReal::wrap(v, p)
}

/// The slack `2^-k` at 64 bits.
pub fn slack(k: u32) -> HpReal {
    HpReal::pow2(-(k as i64), 64)
}

/// Compares `a` against `b` with a safety margin.
///
/// Answers `CertifiedLess` only if `a < b - slack` and `CertifiedGreater`
/// only if `a > b + slack`; NaN inputs give `Indeterminate`.
pub fn certified_compare(a: &HpReal, b: &HpReal, slack: &HpReal) -> Result<Comparison> {
    if slack.is_negative() || slack.is_nan() {
        return arg("slack must be nonnegative");
    }
    if a.is_nan() || b.is_nan() {
        return Ok(Comparison::Indeterminate);
    }
    let p = a.p.max(b.p) + 8;
    let diff = a.with_precision(p) - b.with_precision(p);
    if diff.cmp_value(&-slack.clone()) == Ordering::Less {
        Ok(Comparison::CertifiedLess)
    } else if diff.cmp_value(slack) == Ordering::Greater {
        Ok(Comparison::CertifiedGreater)
    } else {
        Ok(Comparison::Indeterminate)
    }
}

/// Parses `p/q`, an integer, or a decimal with optional exponent.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a
            .trim()
            .parse()
            .map_err(|_| Error::Argument(format!("bad numerator in {s:?}")))?;
        let d: BigInt = b
            .trim()
            .parse()
            .map_err(|_| Error::Argument(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return arg(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (
            &s[..i],
            s[i + 1..]
                .parse::<i64>()
                .map_err(|_| Error::Argument(format!("bad exponent in {s:?}")))?,
        ),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() || !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return arg(format!("not a number: {s:?}"));
    }
    let digits: BigInt = format!("0{ip}{fp}").parse().expect("digits");
    let scale = exp - fp.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return arg(format!("exponent out of range in {s:?}"));
    }
    let ten = BigInt::from(10u32);
    let mut q = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

/// Exact rational value of a finite `f64`.
pub fn f64_to_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Argument(format!("not finite: {x}")))
}

/// Ceiling of the square root of a rational is not needed often; this gives `floor(sqrt(n))`.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Number of bits of `n` (0 for 0).
pub fn bit_length(n: u64) -> usize {
    64 - n.leading_zeros() as usize
}

/// Converts a small rational to `f64` for display.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    HpReal::from_rational(q, 64).to_f64()
}

/// `true` if `q` is a nonnegative integer fitting in `u64`.
pub fn rational_to_u64(q: &BigRational) -> Option<u64> {
    if q.is_integer() && !q.is_negative() {
        q.to_integer().to_u64()
    } else {
        None
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = with_consts(|cc| self.v.format(astro_float::Radix::Dec, RM, cc));
        match s {
            Ok(s) => f.write_str(&s),
            Err(_) => write!(f, "{}", self.to_f64()),
        }
    }
}

impl fmt::Debug for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HpReal({} @{})", self, self.p)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&HpReal> for &HpReal {
            type Output = HpReal;
            fn $m(self, o: &HpReal) -> HpReal {
                let p = self.p.max(o.p);
                HpReal::wrap(self.v.$m(&o.v, p, RM), p)
            }
        }
        impl $tr<HpReal> for HpReal {
            type Output = HpReal;
            fn $m(self, o: HpReal) -> HpReal {
                (&self).$m(&o)
            }
        }
        impl $tr<&HpReal> for HpReal {
            type Output = HpReal;
            fn $m(self, o: &HpReal) -> HpReal {
                (&self).$m(o)
            }
        }
        impl $tr<HpReal> for &HpReal {
            type Output = HpReal;
            fn $m(self, o: HpReal) -> HpReal {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl PartialEq for HpReal {
    fn eq(&self, o: &Self) -> bool {
        self.v.cmp(&o.v) == Some(0)
    }
}

impl PartialOrd for HpReal {
    /// `None` if either side is NaN.
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.v.cmp(&o.v).map(|c| c.cmp(&0))
    }
}

impl Neg for HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal::wrap(BigFloat::neg(&self.v), self.p)
    }
}

impl Neg for &HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal::wrap(BigFloat::neg(&self.v), self.p)
    }
}

/// `q` rounded to precision `p`, convenient for rational constants in formulas.
pub fn rq(q: &BigRational, p: usize) -> HpReal {
    HpReal::from_rational(q, p)
}

/// Small integer constant.
pub fn ri(n: i64, p: usize) -> HpReal {
    HpReal::from_i64(n, p)
}

/// Ratio of two small integers.
pub fn rfrac(n: i64, d: i64, p: usize) -> HpReal {
    HpReal::from_rational(&BigRational::new(n.into(), d.into()), p)
}

/// `BigRational` from two integers.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `1` as a rational.
pub fn rone() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_round_trip() {
        for s in [
            "0",
            "1",
            "-7",
            "18446744073709551617",
            "-340282366920938463463374607431768211457",
        ] {
            let n: BigInt = s.parse().unwrap();
            assert_eq!(to_real(&n, 256).floor(), n, "{s}");
        }
    }

    #[test]
    fn large_integer_rounds_to_nearest() {
        // 2^130 + 3 at 128 bits rounds to 2^130.
        let n = (BigInt::one() << 130u32) + 3;
        assert_eq!(to_real(&n, 128).floor(), BigInt::one() << 130u32);
        // 2^130 + 2^3 + 1 is above the midpoint of the last place (2^3 at 128 bits).
        let n = (BigInt::one() << 130u32) + 9;
        assert_eq!(to_real(&n, 128).floor(), (BigInt::one() << 130u32) + 8);
    }

    #[test]
    fn compare_examples() {
        let one = HpReal::one(128);
        let a = HpReal::parse("0.9999978502", 128).unwrap();
        let s = HpReal::parse("1e-9", 128).unwrap();
        assert_eq!(
            certified_compare(&a, &one, &s).unwrap(),
            Comparison::CertifiedLess
        );
        let a = HpReal::parse("1.0000000000001", 128).unwrap();
        assert_eq!(
            certified_compare(&a, &one, &s).unwrap(),
            Comparison::Indeterminate
        );
        let neg = HpReal::from_f64(-1.0, 64);
        assert!(certified_compare(&a, &one, &neg).is_err());
    }

    #[test]
    fn pi_and_acos() {
        let third = HpReal::pi(128) / ri(3, 128);
        let a = HpReal::from_f64(0.5, 128).acos();
        assert!((a - third).abs().cmp_value(&HpReal::pow2(-125, 64)) == Ordering::Less);
    }

    #[test]
    fn floor_ceil_round() {
        let x = HpReal::parse("-2.5", 128).unwrap();
        assert_eq!(x.floor(), BigInt::from(-3));
        assert_eq!(x.ceil(), BigInt::from(-2));
        assert_eq!(x.round(), BigInt::from(-3));
        assert_eq!(HpReal::parse("7/3", 128).unwrap().floor(), BigInt::from(2));
    }

    #[test]
    fn f64_conversion() {
        for x in [1.0, -0.1, 1e300, 3.0e-300, std::f64::consts::PI] {
            assert_eq!(HpReal::from_f64(x, 128).to_f64(), x);
        }
        let third = rfrac(1, 3, 128).to_f64();
        assert_eq!(third, 1.0 / 3.0);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("5.941893").unwrap(), ratio(5941893, 1000000));
        assert_eq!(parse_rational("-1.5e-3").unwrap(), ratio(-3, 2000));
        assert_eq!(parse_rational("22/7").unwrap(), ratio(22, 7));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn ldexp_and_pow2() {
        let x = HpReal::from_f64(3.0, 64).ldexp(-2);
        assert_eq!(x.to_f64(), 0.75);
        assert_eq!(HpReal::pow2(100, 64).floor(), BigInt::one() << 100u32);
    }
}
