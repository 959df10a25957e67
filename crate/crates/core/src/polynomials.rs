//! Exact polynomial families behind the near-diagonal and fixed-`λ2` cases.
//!
//! For fixed `λ2`, `C(X, λ2)` is a polynomial of degree `λ2` in `X = λ1` with
//! denominator dividing `λ2!`. For fixed `d = λ1 - λ2` and parities
//! `λ2 = 2k + ε1`, `d = 2l + ε2`, the reduced sum is
//! `λ2! (-1)^⌈λ2/2⌉ / (⌊λ1/2⌋! ⌊λ2/2⌋!)` times an integer polynomial `C̃(k)`.
//! An integer root search then rules out zeros on whole families.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::exact::{binomial, odd_primes_up_to, signed_sum, PartitionPair};

/// Largest prime used by the modular root sieve.
pub const SIEVE_PRIME_MAX: u64 = 1223;
/// Search bounds up to this are checked one integer at a time.
pub const BRUTE_FORCE_MAX: u64 = 1 << 16;
/// Most residue combinations the sieve will enumerate.
pub const CANDIDATE_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `C(X, λ2)` in `X = λ1`.
    C {
        lambda2: u64,
    },
    /// `C̃_{l,ε1,ε2}(k)`.
    Tilde {
        l: u64,
        eps1: u8,
        eps2: u8,
    },
    Custom,
}

impl Family {
    fn tag(&self) -> (&'static str, Vec<u64>) {
        match *self {
            Family::C { lambda2 } => ("c", vec![lambda2]),
            Family::Tilde { l, eps1, eps2 } => ("tilde", vec![l, eps1 as u64, eps2 as u64]),
            Family::Custom => ("custom", vec![]),
        }
    }
}

/// `coeffs / scale`, ascending degree, with `gcd(coeffs, scale) = 1` and
/// `scale > 0`. The zero polynomial has no coefficients.
#[derive(Debug, Clone)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
    scale: BigInt,
    family: Family,
    /// Roots divided out of the family member, in order.
    divided_by: Vec<BigInt>,
}

#[derive(Serialize)]
struct PolyJson {
    family: &'static str,
    params: Vec<u64>,
    scale: String,
    coefficients: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    divided_by: Vec<String>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>, scale: BigInt, family: Family) -> Result<Self> {
        if scale.is_zero() {
            return arg("polynomial scale must be nonzero");
        }
        let mut p = IntPolynomial {
            coeffs,
            scale,
            family,
            divided_by: Vec::new(),
        };
        p.normalize();
        Ok(p)
    }

    /// Integer coefficients, scale 1.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs, BigInt::one(), Family::Custom).unwrap()
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.scale = BigInt::one();
            return;
        }
        let g = self.coeffs.iter().fold(self.scale.abs(), |g, c| g.gcd(c));
        let g = if self.scale.is_negative() { -g } else { g };
        for c in &mut self.coeffs {
            *c = &*c / &g;
        }
        self.scale = &self.scale / &g;
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn divided_by(&self) -> &[BigInt] {
        &self.divided_by
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `scale · P(x)`.
    pub fn eval_numerator(&self, x: &BigInt) -> BigInt {
        horner(&self.coeffs, x)
    }

    pub fn eval(&self, x: &BigInt) -> BigRational {
        BigRational::new(self.eval_numerator(x), self.scale.clone())
    }

    /// Same rational polynomial, ignoring the family tag.
    pub fn same_value(&self, o: &IntPolynomial) -> bool {
        self.coeffs == o.coeffs && self.scale == o.scale
    }

    /// `self · (X - root)`.
    pub fn times_linear(&self, root: &BigInt) -> IntPolynomial {
        let mut p = self.clone();
        p.coeffs = mul_linear(&self.coeffs, root);
        p.divided_by.clear();
        p.normalize();
        p
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (family, params) = self.family.tag();
        serde_json::to_value(PolyJson {
            family,
            params,
            scale: self.scale.to_string(),
            coefficients: self.coeffs.iter().map(|c| c.to_string()).collect(),
            divided_by: self.divided_by.iter().map(|c| c.to_string()).collect(),
        })
        .expect("plain data")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        if !self.scale.is_one() {
            f.write_str("(")?;
        }
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        f.write_str("X")?
                    } else {
                        write!(f, "X^{i}")?
                    }
                }
            }
        }
        if !self.scale.is_one() {
            write!(f, ")/{}", self.scale)?;
        }
        Ok(())
    }
}

fn horner(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
}

fn mul_linear(p: &[BigInt], root: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + 1];
    for (i, a) in p.iter().enumerate() {
        out[i + 1] += a;
        out[i] -= a * root;
    }
    out
}

fn add_scaled(acc: &mut Vec<BigInt>, p: &[BigInt], k: &BigInt) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigInt::zero());
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a += b * k;
    }
}

/// `X (X-1) ... (X-j+1)` for `j = 0..=n`.
fn falling_factorials(n: u64) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![BigInt::one()]];
    for j in 1..=n {
        let next = mul_linear(out.last().unwrap(), &BigInt::from(j - 1));
        out.push(next);
    }
    out
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// `Σ_j (-1)^j C(X, j) C(λ2, j)`, expanded term by term over `λ2!`.
pub fn c_poly_symbolic(lambda2: u64) -> IntPolynomial {
    let ff = falling_factorials(lambda2);
    let mut acc = Vec::new();
    // λ2!/j! built downwards from j = λ2.
    let mut tail = vec![BigInt::one(); lambda2 as usize + 1];
    for j in (0..lambda2 as usize).rev() {
        tail[j] = &tail[j + 1] * (j as u64 + 1);
    }
    for j in 0..=lambda2 {
        let mut k = BigInt::from(binomial(lambda2, j)) * &tail[j as usize];
        if j % 2 == 1 {
            k = -k;
        }
        add_scaled(&mut acc, &ff[j as usize], &k);
    }
    IntPolynomial::new(acc, factorial(lambda2), Family::C { lambda2 }).unwrap()
}

/// Newton forward-difference interpolation of `C(λ1, λ2)` on `λ1 = 0..=λ2`.
pub fn c_poly_interpolated(lambda2: u64) -> IntPolynomial {
    let mut diffs: Vec<BigInt> = (0..=lambda2).map(|a| signed_sum(a, lambda2)).collect();
    let mut lead = Vec::with_capacity(diffs.len());
    while !diffs.is_empty() {
        lead.push(diffs[0].clone());
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let ff = falling_factorials(lambda2);
    let mut acc = Vec::new();
    // λ2!/k!, built while walking down from k = λ2.
    let mut tail = BigInt::one();
    for k in (0..=lambda2).rev() {
        add_scaled(&mut acc, &ff[k as usize], &(&lead[k as usize] * &tail));
        tail *= k.max(1);
    }
    IntPolynomial::new(acc, factorial(lambda2), Family::C { lambda2 }).unwrap()
}

/// `C(X, λ2)` as a polynomial in `X = λ1`; both constructions must agree.
pub fn c_poly(lambda2: u64) -> IntPolynomial {
    let a = c_poly_symbolic(lambda2);
    let b = c_poly_interpolated(lambda2);
    assert!(
        a.same_value(&b),
        "interpolated and symbolic forms differ at lambda2 = {lambda2}"
    );
    a
}

/// `C̃_{l,ε1,ε2}(k)`, the bracket of the reduced sum for `λ2 = 2k+ε1`,
/// `λ1 = λ2 + 2l + ε2`:
/// `Σ_j (-1)^j C(2l+ε2, 2j+ε1) (k+L)!/(k+ε1+j)! · k!/(k-j)!`
/// with `L = l + ε1ε2` and `0 ≤ j ≤ L - ε1`.
pub fn tilde_poly(l: u64, eps1: u8, eps2: u8) -> Result<IntPolynomial> {
    if eps1 > 1 || eps2 > 1 {
        return arg(format!("parities must be 0 or 1, got ({eps1}, {eps2})"));
    }
    let (e1, e2) = (eps1 as u64, eps2 as u64);
    let big_l = l + e1 * e2;
    let family = Family::Tilde { l, eps1, eps2 };
    let Some(jmax) = big_l.checked_sub(e1) else {
        return IntPolynomial::new(Vec::new(), BigInt::one(), family);
    };
    let d = 2 * l + e2;
    let ff = falling_factorials(jmax);
    let mut acc = Vec::new();
    for j in 0..=jmax {
        let idx = 2 * j + e1;
        if idx > d {
            continue;
        }
        let mut k = BigInt::from(binomial(d, idx));
        if j % 2 == 1 {
            k = -k;
        }
        let mut rising = vec![BigInt::one()];
        for t in (e1 + j + 1)..=big_l {
            rising = mul_linear(&rising, &-BigInt::from(t));
        }
        let term = poly_mul(&rising, &ff[j as usize]);
        add_scaled(&mut acc, &term, &k);
    }
    IntPolynomial::new(acc, BigInt::one(), family)
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// The pair `(λ1, λ2)` a tilde family member describes at `k`.
pub fn tilde_pair(l: u64, eps1: u8, eps2: u8, k: u64) -> Result<PartitionPair> {
    let l2 = 2 * k + eps1 as u64;
    PartitionPair::new(l2 + 2 * l + eps2 as u64, l2)
}

/// `λ2! (-1)^⌈λ2/2⌉ / (⌊λ1/2⌋! ⌊λ2/2⌋!)`, so that `C = prefactor · C̃(k)`.
pub fn tilde_prefactor(pair: &PartitionPair) -> BigRational {
    let (l1, l2) = (pair.lambda1(), pair.lambda2());
    let sign = if l2.div_ceil(2) % 2 == 1 {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    BigRational::new(sign * factorial(l2), factorial(l1 / 2) * factorial(l2 / 2))
}

/// Quotient of `poly` by `X - root`; errors unless `root` is an exact root.
pub fn factor_linear(poly: &IntPolynomial, root: &BigInt) -> Result<IntPolynomial> {
    if poly.is_zero() {
        return arg("cannot divide the zero polynomial");
    }
    let c = &poly.coeffs;
    let n = c.len() - 1;
    let mut q = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for i in (0..=n).rev() {
        let v = &c[i] + &carry * root;
        if i == 0 {
            if !v.is_zero() {
                return arg(format!("{root} is not a root"));
            }
        } else {
            q[i - 1] = v.clone();
            carry = v;
        }
    }
    let mut out = IntPolynomial::new(q, poly.scale.clone(), poly.family)?;
    out.divided_by = poly.divided_by.clone();
    out.divided_by.push(root.clone());
    Ok(out)
}

fn mod_pow(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

struct Sieve {
    p: u64,
    roots: Vec<u64>,
}

fn roots_mod(coeffs: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let c: Vec<u64> = coeffs
        .iter()
        .map(|a| a.mod_floor(&pb).to_u64().unwrap())
        .collect();
    (0..p)
        .filter(|&t| c.iter().rev().fold(0u64, |acc, &a| (acc * t + a) % p) == 0)
        .collect()
}

/// Every integer root `x` with `|x| ≤ bound`, ascending.
///
/// Nonzero roots divide the lowest nonzero coefficient and satisfy the
/// Cauchy bound. Small ranges are scanned directly; larger ones are sieved
/// by roots modulo primes up to 1223, combined by CRT until the modulus
/// covers `[-B, B]`, then checked exactly.
pub fn integer_roots(poly: &IntPolynomial, bound: u64) -> Result<Vec<BigInt>> {
    if poly.is_zero() {
        return arg("the zero polynomial has every integer as a root");
    }
    let c = &poly.coeffs;
    let m = c.iter().position(|a| !a.is_zero()).unwrap();
    let q = &c[m..];
    let mut roots = Vec::new();
    if m > 0 {
        roots.push(BigInt::zero());
    }
    if q.len() == 1 {
        return Ok(roots);
    }
    let a0 = q[0].abs();
    let an = q.last().unwrap().abs();
    let cauchy = q.iter().map(|a| a.abs()).max().unwrap() / &an + 1u32;
    let b = BigInt::from(bound).min(cauchy).min(a0.clone());
    let b = b.to_u64().unwrap();
    let check = |x: &BigInt| (&a0 % x.abs()).is_zero() && horner(q, x).is_zero();
    let mut found = Vec::new();
    if b <= BRUTE_FORCE_MAX {
        for v in 1..=b as i64 {
            for x in [BigInt::from(-v), BigInt::from(v)] {
                if check(&x) {
                    found.push(x);
                }
            }
        }
    } else {
        match sieve_candidates(q, b)? {
            None => {}
            Some(cands) => found.extend(cands.into_iter().filter(|x| check(x))),
        }
    }
    roots.extend(found);
    roots.sort();
    Ok(roots)
}

/// Candidates `0 < |x| ≤ b` consistent with the roots of `q` modulo small
/// primes; `None` if some prime has no root at all.
fn sieve_candidates(q: &[BigInt], b: u64) -> Result<Option<Vec<BigInt>>> {
    let primes: Vec<u64> = std::iter::once(2)
        .chain(odd_primes_up_to(SIEVE_PRIME_MAX))
        .collect();
    let mut sieves = Vec::with_capacity(primes.len());
    for p in primes {
        let roots = roots_mod(q, p);
        if roots.is_empty() {
            return Ok(None);
        }
        sieves.push(Sieve { p, roots });
    }
    // Fewest residues per bit of modulus first.
    let cost = |s: &Sieve| (s.roots.len() as f64).ln() / (s.p as f64).ln();
    sieves.sort_by(|a, b| cost(a).total_cmp(&cost(b)).then(b.p.cmp(&a.p)));
    let need = 2 * b as u128 + 1;
    let mut modulus: u128 = 1;
    let mut combos: u128 = 1;
    let mut used = 0;
    while modulus < need {
        let Some(s) = sieves.get(used) else {
            return Err(Error::SearchTooLarge(combos));
        };
        modulus *= s.p as u128;
        combos *= s.roots.len() as u128;
        used += 1;
    }
    if combos > CANDIDATE_LIMIT {
        return Err(Error::SearchTooLarge(combos));
    }
    let mut residues: Vec<u128> = vec![0];
    let mut m: u128 = 1;
    for s in &sieves[..used] {
        let p = s.p as u128;
        let inv = mod_pow(m % p, p - 2, p);
        let mut next = Vec::with_capacity(residues.len() * s.roots.len());
        for &r in &residues {
            for &t in &s.roots {
                let k = ((t as u128 + p - r % p) % p) * inv % p;
                next.push(r + m * k);
            }
        }
        residues = next;
        m *= p;
    }
    let rest = &sieves[used..];
    let mut out = Vec::new();
    for r in residues {
        for x in [r as i128, r as i128 - m as i128] {
            if x == 0 || x.unsigned_abs() > b as u128 {
                continue;
            }
            let ok = rest.iter().all(|s| {
                s.roots
                    .binary_search(&(x.rem_euclid(s.p as i128) as u64))
                    .is_ok()
            });
            if ok {
                out.push(BigInt::from(x));
            }
        }
    }
    Ok(Some(out))
}
