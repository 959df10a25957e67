use binsum::asymptotics::{
    classify, cos_lower_bound, error_bound_subcritical, error_bound_supercritical, near_one_angle,
    predict, saddle_data, Regime,
};
use binsum::certifier::{
    certify, continued_fraction, scan_range, Certificate, CertifyOptions, Lambda1Rule, ScanOptions,
};
use binsum::cli::RunConfig;
use binsum::exact::{
    eval, eval_diagonal, eval_direct, eval_reduced, term_magnitudes, PartitionPair,
};
use binsum::numerics::{certified_compare, ratio, ri, rq, slack, to_real, Comparison, HpReal};
use binsum::polynomials::{c_poly, factor_linear, tilde_pair, tilde_poly, tilde_prefactor};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const P: usize = 128;

fn pair(a: u64, b: u64) -> PartitionPair {
    PartitionPair::new(a, b).unwrap()
}

fn opposite(a: Comparison, b: Comparison) -> bool {
    matches!(
        (a, b),
        (Comparison::CertifiedLess, Comparison::CertifiedGreater)
            | (Comparison::CertifiedGreater, Comparison::CertifiedLess)
    )
}

/// Rationals strictly inside `(lo, hi)` with denominator up to 1000.
fn rational_in(lo: f64, hi: f64) -> impl Strategy<Value = BigRational> {
    (1i64..=1000, 0.0f64..1.0).prop_filter_map("endpoint", move |(d, t)| {
        let n = ((lo + (hi - lo) * t) * d as f64).round() as i64;
        let q = ratio(n, d);
        (q > rq_f(lo) && q < rq_f(hi)).then_some(q)
    })
}

fn rq_f(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn sup_critical() -> f64 {
    3.0 + 2.0 * 2f64.sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rounding_is_monotone(m in any::<i128>(), gap in 1u64.., p in 53usize..300) {
        let n = BigInt::from(m) + gap;
        let (a, b) = (to_real(&BigInt::from(m), p), to_real(&n, p));
        prop_assert!(a.cmp_value(&b).is_le());
    }

    #[test]
    fn compare_is_consistent(a in -1e6f64..1e6, b in -1e6f64..1e6, k in 0u32..80) {
        let (x, y, s) = (HpReal::from_f64(a, P), HpReal::from_f64(b, P), slack(k));
        let ab = certified_compare(&x, &y, &s).unwrap();
        let ba = certified_compare(&y, &x, &s).unwrap();
        prop_assert_eq!(ab == Comparison::CertifiedLess, ba == Comparison::CertifiedGreater);
        prop_assert_eq!(ab == Comparison::CertifiedGreater, ba == Comparison::CertifiedLess);
    }

    #[test]
    fn doubling_precision_never_flips(m in 2u64..1_000_000, n in 2u64..1_000_000, k in 20u32..120) {
        let verdict = |p: usize| {
            let a = ri(m as i64, p).sqrt().ln();
            let b = ri(n as i64, p).sqrt().sqrt().ln() * ri(2, p);
            certified_compare(&a, &b, &slack(k)).unwrap()
        };
        prop_assert!(!opposite(verdict(P), verdict(2 * P)));
    }

    #[test]
    fn primitives_within_two_ulp(x in 0.001f64..0.999, p in 64usize..256) {
        let lo = HpReal::from_f64(x, p);
        let hi = HpReal::from_f64(x, 2 * p + 64);
        let ops: [(&str, fn(&HpReal) -> HpReal); 7] = [
            ("sqrt", HpReal::sqrt),
            ("ln", HpReal::ln),
            ("exp", HpReal::exp),
            ("cos", HpReal::cos),
            ("atan", HpReal::atan),
            ("acos", HpReal::acos),
            ("asin", HpReal::asin),
        ];
        for (name, f) in ops {
            let got = f(&lo);
            let want = f(&hi);
            let err = (got.with_precision(2 * p + 64) - &want).abs();
            let lim = got.ulp().with_precision(2 * p + 64) * ri(2, 2 * p + 64);
            prop_assert!(err.cmp_value(&lim).is_le(), "{} off by {} at p={}", name, err, p);
        }
    }

    #[test]
    fn routes_agree(l2 in 0u64..400, d in 0u64..400) {
        let p = pair(l2 + d, l2);
        prop_assert_eq!(eval_direct(&p), eval_reduced(&p).unwrap());
        prop_assert_eq!(eval(&p).value, eval_direct(&p));
    }

    #[test]
    fn diagonal_closed_form(l in 0u64..800) {
        prop_assert_eq!(eval_diagonal(l), eval_direct(&pair(l, l)));
    }

    #[test]
    fn lambda2_one(l1 in 1u64..=1000) {
        prop_assert_eq!(eval_direct(&pair(l1, 1)), BigInt::from(1) - BigInt::from(l1));
    }

    #[test]
    fn stanton_terms_increase(l2 in 1u64..=30, extra in 1u64..=20) {
        let l1 = l2 * (l2 + 1) - 1 + extra;
        let p = pair(l1, l2);
        let t = term_magnitudes(&p);
        prop_assert!(t[1..].windows(2).all(|w| w[0] < w[1]));
        prop_assert!(!eval_direct(&p).is_zero());
    }

    #[test]
    fn gamma3_is_half_beta(r in rational_in(1.0, sup_critical())) {
        let sd = saddle_data(&r, P).unwrap();
        let rr = rq(&r, 2 * P);
        let one = ri(1, 2 * P);
        let want = ((&rr - &one).powi(2) / (ri(4, 2 * P) * &rr)).asin() / ri(2, 2 * P);
        let diff = (sd.gamma3.clone().unwrap().with_precision(2 * P) - want).abs();
        prop_assert!(diff.cmp_value(&HpReal::pow2(-100, P)).is_le());
        let b = sd.beta.unwrap();
        let diff = (sd.gamma3.clone().unwrap() - b / ri(2, P)).abs();
        prop_assert!(diff.cmp_value(&HpReal::pow2(-100, P)).is_le());
    }

    #[test]
    fn subcritical_angles(r in rational_in(1.0, sup_critical())) {
        let sd = saddle_data(&r, P).unwrap();
        let (a, b) = (sd.alpha.unwrap(), sd.beta.unwrap());
        let half_pi = HpReal::pi(P) / ri(2, P);
        prop_assert!(a.signum() > 0 && a.cmp_value(&half_pi).is_lt());
        prop_assert!(b.signum() > 0 && b.cmp_value(&half_pi).is_lt());
        let rr = rq(&r, P);
        let want = (&rr - ri(1, P)) / (ri(2, P) * rr.sqrt());
        let s = slack(100);
        prop_assert_eq!(certified_compare(&a.cos(), &want, &s).unwrap(), Comparison::Indeterminate);
        let unit = a.cos().powi(2) + a.sin().powi(2);
        prop_assert_eq!(certified_compare(&unit, &ri(1, P), &s).unwrap(), Comparison::Indeterminate);
        let rho = sd.rho;
        prop_assert_eq!(certified_compare(&(&rho * &rho * &rr), &ri(1, P), &s).unwrap(), Comparison::Indeterminate);
    }

    #[test]
    fn supercritical_saddle_ranges(r in rational_in(sup_critical(), 200.0)) {
        let sd = saddle_data(&r, P).unwrap();
        let m = sd.m.unwrap();
        prop_assert!(sd.rho.signum() > 0 && sd.rho.cmp_value(&(ri(2, P).sqrt() - ri(1, P))).is_lt());
        prop_assert!(m.signum() > 0 && m.cmp_value(&ri(1, P)).is_lt());
    }

    #[test]
    fn regime_matches_float_away_from_threshold(r in rational_in(0.5, 20.0)) {
        let x: f64 = num_traits::ToPrimitive::to_f64(&r).unwrap();
        prop_assume!((x - sup_critical()).abs() > 1e-9 && (x - 1.0).abs() > 1e-9);
        let want = if x <= 1.0 { Regime::Degenerate } else if x < sup_critical() { Regime::Subcritical } else { Regime::Supercritical };
        prop_assert_eq!(classify(&r), want);
    }

    #[test]
    fn bounds_are_nonnegative(r in rational_in(1.0, 40.0), l in 1u64..100_000) {
        match classify(&r) {
            Regime::Supercritical => prop_assert!(error_bound_supercritical(&r, l, P).unwrap().signum() > 0),
            Regime::Subcritical => {
                let b = error_bound_subcritical(&r, l, P).unwrap();
                prop_assert!(b.bound.signum() > 0);
                prop_assert_eq!(b.valid, l >= b.threshold);
            }
            _ => {}
        }
    }

    #[test]
    fn cos_lower_bound_is_sound(l2 in 50u64..2_000_000, t in 0.0f64..1.0) {
        let dmax = ((8.0 * std::f64::consts::PI * l2 as f64).sqrt() as u64).min(2 * l2).max(1);
        let d = 1 + (t * (dmax - 1) as f64) as u64;
        let p = pair(l2 + d, l2);
        let r = p.ratio().unwrap();
        prop_assume!(r <= ratio(3, 1));
        let cl = cos_lower_bound(&p, P).unwrap();
        if cl.applicable {
            let c = near_one_angle(&p, &r, P).unwrap().cos().abs();
            prop_assert!(cl.bound.cmp_value(&(c + slack(40))).is_le());
        }
    }

    #[test]
    fn diagonal_never_certified(l in 0u64..10_000, budget in prop_oneof![Just(0u128), Just(u128::MAX)]) {
        let c = certify(&pair(l, l), &CertifyOptions { budget, ..CertifyOptions::default() });
        let hit = matches!(c, Certificate::Refused { .. });
        prop_assert!(hit);
    }

    #[test]
    fn continued_fraction_convergents(n in 2u64..100_000, k in 1u64..50) {
        prop_assume!(Roots::sqrt(&n) * Roots::sqrt(&n) != n);
        let x = ri(n as i64, P).sqrt() / ri(k as i64, P);
        let cf = continued_fraction(&x, 30).unwrap();
        let qs: Vec<&BigInt> = cf.convergents.iter().map(|(_, q)| q).collect();
        prop_assert!(qs[1..].windows(2).all(|w| w[0] < w[1]));
        // The target itself carries about 2^-(P-8)|x| of rounding error.
        let noise = HpReal::pow2(-(P as i64 - 8), P) * x.abs().max(&HpReal::one(P));
        for i in 0..cf.convergents.len().saturating_sub(1) {
            let lim = (HpReal::from_bigint(qs[i], P) * HpReal::from_bigint(qs[i + 1], P)).recip() + &noise;
            prop_assert!(cf.distance(i).cmp_value(&lim).is_lt(), "k = {}", i);
        }
        prop_assert!(cf.legendre_quality(&slack(100)));
    }

    #[test]
    fn c_poly_matches_direct(l2 in 0u64..=60, l1 in 0u64..=200) {
        let p = c_poly(l2);
        prop_assert_eq!(p.degree(), Some(l2 as usize));
        let g = p.coeffs().iter().fold(p.scale().clone(), |g, c| g.gcd(c));
        prop_assert!(g.is_one());
        let (a, b) = (l1.max(l2), l1.min(l2));
        let want = eval_direct(&pair(a, b));
        prop_assert_eq!(p.eval(&BigInt::from(l1)), BigRational::from_integer(want));
    }

    #[test]
    fn tilde_matches_direct(l in 0u64..=40, k in 0u64..=100, e1 in 0u8..2, e2 in 0u8..2) {
        let t = tilde_poly(l, e1, e2).unwrap();
        let p = tilde_pair(l, e1, e2, k).unwrap();
        let got = tilde_prefactor(&p) * t.eval(&BigInt::from(k));
        prop_assert_eq!(got, BigRational::from_integer(eval_direct(&p)));
        prop_assert!(t.degree().map_or(0, |d| d as u64) <= l);
    }

    #[test]
    fn factor_linear_round_trip(l2 in 0u64..=30, root in -5i64..40) {
        let p = c_poly(l2);
        let root = BigInt::from(root);
        match factor_linear(&p, &root) {
            Ok(q) => prop_assert!(q.times_linear(&root).same_value(&p)),
            Err(_) => prop_assert!(!p.eval_numerator(&root).is_zero()),
        }
    }

    #[test]
    fn jsonl_margins_round_trip(l2a in 200u64..400, n in 1u64..4, num in 4i64..20) {
        let r = ratio(num, 2);
        let opts = ScanOptions { certify: CertifyOptions { budget: 0, ..CertifyOptions::default() }, ..ScanOptions::default() };
        let rep = scan_range(l2a..=l2a + n, &Lambda1Rule::Ratio(r), &opts).unwrap();
        let mut buf = Vec::new();
        rep.write_jsonl(&mut buf).unwrap();
        for line in String::from_utf8(buf).unwrap().lines() {
            if let Some(i) = line.find("\"margin\":") {
                let rest = &line[i + 9..];
                let text = &rest[..rest.find(',').unwrap()];
                if text != "null" {
                    let v: f64 = text.parse().unwrap();
                    let shown = format!("{:.16e}", v);
                    prop_assert_eq!(shown.as_str(), text);
                }
            }
        }
    }
}

/// Certificates issued without exact evaluation hold up under exact evaluation.
fn check_sound(l1: u64, l2: u64) -> Result<Option<&'static str>, TestCaseError> {
    let p = pair(l1, l2);
    let c = certify(
        &p,
        &CertifyOptions {
            budget: 0,
            ..CertifyOptions::default()
        },
    );
    if c.is_nonzero() {
        prop_assert!(
            !eval(&p).value.is_zero(),
            "({}, {}) certified {} but zero",
            l1,
            l2,
            c.kind()
        );
        if let Some(m) = c.margin() {
            prop_assert!(m.signum() > 0);
        }
        return Ok(Some(c.kind()));
    }
    Ok(None)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn soundness_supercritical(l2 in 1u64..5_000, r in 6u64..=10) {
        check_sound(r * l2, l2)?;
    }

    #[test]
    fn soundness_subcritical(l2 in 25u64..20_000, num in 11u64..58) {
        let l1 = l2 * num / 10;
        prop_assume!(l1 > l2 && l1 <= 50_000);
        check_sound(l1, l2)?;
    }

    #[test]
    fn soundness_near_one(l2 in 40_000u64..49_000, d in 702u64..1_000) {
        prop_assume!(l2 + d <= 50_000);
        check_sound(l2 + d, l2)?;
    }

    #[test]
    fn soundness_stanton(l2 in 1u64..200, extra in 0u64..1000) {
        let l1 = l2 * (l2 + 1) + extra;
        prop_assume!(l1 <= 50_000);
        prop_assert_eq!(check_sound(l1, l2)?, Some("nonzero-stanton"));
    }
}

#[test]
fn every_branch_is_exercised() {
    let cases = [
        ((1800, 300), "nonzero-supercritical"),
        ((40_800, 40_000), "nonzero-interval"),
        ((6, 2), "nonzero-stanton"),
    ];
    for ((a, b), kind) in cases {
        assert_eq!(check_sound(a, b).unwrap(), Some(kind), "({a}, {b})");
    }
    let mut osc = 0;
    for l2 in 24_990..25_000 {
        if check_sound(2 * l2, l2).unwrap() == Some("nonzero-oscillatory") {
            osc += 1;
        }
    }
    assert!(osc > 0);
}

#[test]
fn saddle_monotone_on_grid() {
    let grid: Vec<BigRational> = (0..60).map(|i| ratio(583 + 25 * i, 100)).collect();
    let data: Vec<_> = grid.iter().map(|r| saddle_data(r, P).unwrap()).collect();
    for w in data.windows(2) {
        assert!(w[0]
            .m
            .as_ref()
            .unwrap()
            .cmp_value(w[1].m.as_ref().unwrap())
            .is_lt());
        assert!(w[0].rho.cmp_value(&w[1].rho).is_gt());
    }
}

#[test]
fn predictions_track_exact_values() {
    for (a, b) in [(1200u64, 200u64), (600, 300), (3000, 500)] {
        let p = pair(a, b);
        let pr = predict(&p, P).unwrap();
        let i = binsum::exact::signed_i(&p, &eval(&p).value);
        let res = pr.residual(&i).abs();
        assert!(res.cmp_value(&(&pr.error_bound + slack(40))).is_le());
    }
}

#[test]
fn config_invariants() {
    assert!(RunConfig::parse("precision=52").is_err());
    assert!(RunConfig::parse("precision=53").is_ok());
    assert!(RunConfig::parse("parallelism=0").is_err());
    let neg = BigInt::from(-3);
    assert!(neg.is_negative());
}
