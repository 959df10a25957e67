//! Exact evaluation of the signed binomial sum
//! `C(λ1, λ2) = Σ_j (-1)^j binom(λ1, j) binom(λ2, j)`.
//!
//! Three routes are provided:
//!
//! * **direct**: the plain alternating sum, walking the terms by their
//!   rational ratio `(λ1-j+1)(λ2-j+1)/j²`;
//! * **reduced**: the equivalent shorter sum
//!   `Σ_{λ2 ≤ 2j ≤ λ1} (-1)^j binom(λ2, j) binom(λ1-λ2, λ1-2j)`,
//!   which has `⌊λ1/2⌋ - ⌈λ2/2⌉ + 1` terms and wins near the diagonal;
//! * **diagonal**: `(-1)^{λ/2} binom(λ, λ/2)` for even `λ1 = λ2 = λ`, and 0 for odd.
//!
//! All term updates multiply by one-word factors and then divide by one-word
//! factors. Each intermediate division is exact: if `N = T·a·b` is divisible
//! by `x·y` then `N/x = (N/(x·y))·y`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{arg, Error, Result};
use crate::numerics::{to_real, HpReal};

/// An ordered pair `λ1 ≥ λ2 ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionPair {
    lambda1: u64,
    lambda2: u64,
}

impl PartitionPair {
    pub fn new(lambda1: u64, lambda2: u64) -> Result<Self> {
        if lambda1 < lambda2 {
            return arg(format!(
                "need lambda1 >= lambda2, got ({lambda1}, {lambda2})"
            ));
        }
        Ok(PartitionPair { lambda1, lambda2 })
    }

    pub fn lambda1(&self) -> u64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> u64 {
        self.lambda2
    }

    /// `λ1 - λ2`.
    pub fn difference(&self) -> u64 {
        self.lambda1 - self.lambda2
    }

    /// `(λ1 + λ2) mod 4`.
    pub fn congruence_class(&self) -> u8 {
        ((self.lambda1 % 4 + self.lambda2 % 4) % 4) as u8
    }

    /// The exact ratio `λ1/λ2`, absent when `λ2 = 0`.
    pub fn ratio(&self) -> Option<BigRational> {
        (self.lambda2 > 0).then(|| BigRational::new(self.lambda1.into(), self.lambda2.into()))
    }

    /// `λ1 > λ2(λ2+1) - 1`, where the term magnitudes increase strictly with `j`.
    pub fn stanton_applies(&self) -> bool {
        let l2 = self.lambda2 as u128;
        self.lambda2 > 0 && (self.lambda1 as u128) + 1 > l2 * (l2 + 1)
    }
}

/// Evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Direct,
    Reduced,
    Diagonal,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Direct => "direct",
            Route::Reduced => "reduced",
            Route::Diagonal => "diagonal",
        }
    }
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Route::Direct),
            "reduced" => Ok(Route::Reduced),
            "diagonal" => Ok(Route::Diagonal),
            _ => arg(format!("unknown route {s:?}")),
        }
    }
}

/// Exact value together with the route used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactValue {
    pub value: BigInt,
    pub route: Route,
}

impl ExactValue {
    pub fn sign(&self) -> i8 {
        match self.value.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn bits(&self) -> u64 {
        self.value.bits()
    }
}

/// Largest `λ1` accepted by the reduced route.
pub const REDUCED_LIMIT: u64 = 1 << 40;

const SIEVE_LIMIT: u64 = 50_000_000;

fn product(xs: &[BigUint]) -> BigUint {
    match xs.len() {
        0 => BigUint::one(),
        1 => xs[0].clone(),
        n => product(&xs[..n / 2]) * product(&xs[n / 2..]),
    }
}

/// Multiplies word-size factors, packing them into full words first.
fn product_u64(factors: impl IntoIterator<Item = u64>) -> BigUint {
    let mut packed = Vec::new();
    let mut acc: u64 = 1;
    for f in factors {
        match acc.checked_mul(f) {
            Some(v) => acc = v,
            None => {
                packed.push(BigUint::from(acc));
                acc = f;
            }
        }
    }
    packed.push(BigUint::from(acc));
    product(&packed)
}

pub(crate) fn odd_primes_up_to(n: u64) -> Vec<u64> {
    // Index i represents 2i + 1.
    let half = (n as usize).div_ceil(2);
    let mut composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    (1..half)
        .filter(|&i| !composite[i])
        .map(|i| 2 * i as u64 + 1)
        .collect()
}

fn legendre_binomial_exponent(n: u64, k: u64, p: u64) -> u32 {
    let (mut e, mut pp) = (0u32, p as u128);
    let (n, k, m) = (n as u128, k as u128, (n - k) as u128);
    while pp <= n {
        e += (n / pp - k / pp - m / pp) as u32;
        pp *= p as u128;
    }
    e
}

/// `binom(n, k)`, via prime factorization for moderate `n` and a product
/// quotient otherwise.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    if k == 0 {
        return BigUint::one();
    }
    if k < 64 {
        let mut acc = BigUint::one();
        for i in 0..k {
            acc *= n - i;
            acc /= i + 1;
        }
        return acc;
    }
    if n <= SIEVE_LIMIT {
        let mut factors = Vec::new();
        let e2 = legendre_binomial_exponent(n, k, 2);
        let mut two_pow = BigUint::one() << e2;
        for p in odd_primes_up_to(n) {
            let e = legendre_binomial_exponent(n, k, p);
            for _ in 0..e {
                factors.push(p);
            }
        }
        two_pow *= product_u64(factors);
        return two_pow;
    }
    let num = product_u64((n - k + 1)..=n);
    let den = product_u64(1..=k);
    num / den
}

fn signed(pos: BigUint, neg: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, pos) - BigInt::from_biguint(Sign::Plus, neg)
}

/// `Σ_j (-1)^j binom(a, j) binom(b, j)` for arbitrary `a, b ≥ 0`.
pub fn signed_sum(a: u64, b: u64) -> BigInt {
    let (a, b) = if a >= b { (a, b) } else { (b, a) };
    let mut term = BigUint::one();
    let (mut pos, mut neg) = (BigUint::one(), BigUint::zero());
    for j in 1..=b {
        term *= a - j + 1;
        term *= b - j + 1;
        term /= j;
        term /= j;
        if j % 2 == 0 {
            pos += &term;
        } else {
            neg += &term;
        }
    }
    signed(pos, neg)
}

/// Plain alternating sum.
pub fn eval_direct(pair: &PartitionPair) -> BigInt {
    signed_sum(pair.lambda1, pair.lambda2)
}

/// Shortened sum over `⌈λ2/2⌉ ≤ j ≤ ⌊λ1/2⌋`.
pub fn eval_reduced(pair: &PartitionPair) -> Result<BigInt> {
    let (l1, l2) = (pair.lambda1, pair.lambda2);
    if l1 >= REDUCED_LIMIT {
        return Err(Error::Validity(format!(
            "reduced route needs lambda1 < 2^40, got {l1}"
        )));
    }
    let d = l1 - l2;
    let j0 = l2.div_ceil(2);
    let j1 = l1 / 2;
    let (mut pos, mut neg) = (BigUint::zero(), BigUint::zero());
    if j0 > j1 {
        return Ok(BigInt::zero());
    }
    let mut term = binomial(l2, j0) * binomial(d, l1 - 2 * j0);
    let mut j = j0;
    loop {
        if j % 2 == 0 {
            pos += &term;
        } else {
            neg += &term;
        }
        if j == j1 || term.is_zero() {
            break;
        }
        let m = l1 - 2 * j;
        if l2 == j {
            break;
        }
        term *= l2 - j;
        term *= m;
        term *= m - 1;
        term /= j + 1;
        term /= d - m + 1;
        term /= d - m + 2;
        j += 1;
    }
    Ok(signed(pos, neg))
}

/// `(-1)^{λ/2} binom(λ, λ/2)` for even `λ`, otherwise 0.
pub fn eval_diagonal(lambda: u64) -> BigInt {
    if lambda % 2 == 1 {
        return BigInt::zero();
    }
    let b = BigInt::from_biguint(Sign::Plus, binomial(lambda, lambda / 2));
    if (lambda / 2).is_multiple_of(2) {
        b
    } else {
        -b
    }
}

/// Route chosen by [`eval`].
pub fn choose_route(pair: &PartitionPair) -> Route {
    let (l1, l2) = (pair.lambda1, pair.lambda2);
    if l1 == l2 {
        Route::Diagonal
    } else if l1 < REDUCED_LIMIT && 4 * (l1 / 2 - l2.div_ceil(2)) < l2 {
        Route::Reduced
    } else {
        Route::Direct
    }
}

/// Number of terms the chosen route walks.
pub fn route_terms(pair: &PartitionPair, route: Route) -> u64 {
    match route {
        Route::Diagonal => 1,
        Route::Reduced => (pair.lambda1 / 2 + 1).saturating_sub(pair.lambda2.div_ceil(2)),
        Route::Direct => pair.lambda2 + 1,
    }
}

/// Cost of exact evaluation in 64-bit word operations: the number of terms
/// walked times the word length of a `λ1 + λ2` bit integer.
pub fn estimated_cost(pair: &PartitionPair) -> u128 {
    let terms = route_terms(pair, choose_route(pair)) as u128;
    let words = (pair.lambda1 as u128 + pair.lambda2 as u128)
        .div_ceil(64)
        .max(1);
    terms * words
}

/// Exact value using the fastest route.
pub fn eval(pair: &PartitionPair) -> ExactValue {
    let route = choose_route(pair);
    eval_with(pair, route).expect("chosen route is applicable")
}

/// Exact value using a specific route.
pub fn eval_with(pair: &PartitionPair, route: Route) -> Result<ExactValue> {
    let value = match route {
        Route::Direct => eval_direct(pair),
        Route::Reduced => eval_reduced(pair)?,
        Route::Diagonal => {
            if pair.lambda1 != pair.lambda2 {
                return arg("diagonal route needs lambda1 = lambda2");
            }
            eval_diagonal(pair.lambda1)
        }
    };
    Ok(ExactValue { value, route })
}

/// `I(λ) = (-1)^{λ2} C(λ1, λ2)` as a real.
pub fn normalized_i(pair: &PartitionPair, p: usize) -> HpReal {
    to_real(&signed_i(pair, &eval(pair).value), p)
}

/// Applies the sign `(-1)^{λ2}` to an exact value.
pub fn signed_i(pair: &PartitionPair, c: &BigInt) -> BigInt {
    if pair.lambda2.is_odd() {
        -c
    } else {
        c.clone()
    }
}

/// Absolute values of the terms `binom(λ1, j) binom(λ2, j)`, `0 ≤ j ≤ λ2`.
pub fn term_magnitudes(pair: &PartitionPair) -> Vec<BigUint> {
    let (a, b) = (pair.lambda1, pair.lambda2);
    let mut out = Vec::with_capacity(b as usize + 1);
    let mut term = BigUint::one();
    out.push(term.clone());
    for j in 1..=b {
        term *= a - j + 1;
        term *= b - j + 1;
        term /= j;
        term /= j;
        out.push(term.clone());
    }
    out
}
