use std::collections::BTreeMap;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::value::RawValue;

use super::{certify, Certificate, CertifyOptions};
use crate::error::{arg, Result};
use crate::exact::PartitionPair;

/// How `λ1` is chosen for each `λ2` in a scan.
#[derive(Debug, Clone)]
pub enum Lambda1Rule {
    /// `λ1 = rλ2`, skipping `λ2` where that is not an integer.
    Ratio(BigRational),
    /// `λ1 = λ2 + d`.
    Difference(u64),
    /// Every `λ2 < λ1 ≤ n`.
    AllUpTo(u64),
    /// Every listed `λ1` with `λ1 > λ2`.
    List(Vec<u64>),
}

#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    pub certify: CertifyOptions,
    /// Worker threads; 0 uses the rayon default.
    pub parallelism: usize,
    /// Keep only pairs with `(λ1+λ2) mod 4` equal to this.
    pub class_filter: Option<u8>,
    /// Record wall-clock time per pair.
    pub timings: bool,
}

#[derive(Debug, Clone)]
pub struct ScanEntry {
    pub pair: PartitionPair,
    pub certificate: Certificate,
    pub usec: u64,
}

/// One output record.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub lambda1: u64,
    pub lambda2: u64,
    pub class: u8,
    pub certificate: &'static str,
    /// Seventeen significant digits.
    pub margin: Option<Box<RawValue>>,
    pub exact_sign: Option<i8>,
    pub usec: u64,
}

impl ScanEntry {
    pub fn record(&self) -> ScanRecord {
        ScanRecord {
            lambda1: self.pair.lambda1(),
            lambda2: self.pair.lambda2(),
            class: self.pair.congruence_class(),
            certificate: self.certificate.kind(),
            margin: self
                .certificate
                .margin()
                .map(|m| RawValue::from_string(format!("{:.16e}", m.to_f64())).unwrap()),
            exact_sign: self.certificate.exact_sign(),
            usec: self.usec,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScanReport {
    /// Sorted by `(λ2, λ1)`.
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        let mut m = BTreeMap::new();
        for e in &self.entries {
            *m.entry(e.certificate.kind()).or_insert(0) += 1;
        }
        m
    }

    pub fn inconclusive(&self) -> Vec<PartitionPair> {
        self.entries
            .iter()
            .filter(|e| matches!(e.certificate, Certificate::Inconclusive { .. }))
            .map(|e| e.pair)
            .collect()
    }

    pub fn zeros(&self) -> Vec<PartitionPair> {
        self.entries
            .iter()
            .filter(|e| matches!(e.certificate, Certificate::ExactZero))
            .map(|e| e.pair)
            .collect()
    }

    /// Some pair is inconclusive or exactly zero.
    pub fn has_unresolved(&self) -> bool {
        !self.inconclusive().is_empty() || !self.zeros().is_empty()
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        for e in &self.entries {
            let line = serde_json::to_string(&e.record()).map_err(io::Error::other)?;
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(
            w,
            "lambda1,lambda2,class,certificate,margin,exact_sign,usec"
        )?;
        for e in &self.entries {
            let r = e.record();
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.lambda1,
                r.lambda2,
                r.class,
                r.certificate,
                r.margin.map(|m| m.get().to_string()).unwrap_or_default(),
                r.exact_sign.map(|s| s.to_string()).unwrap_or_default(),
                r.usec
            )?;
        }
        Ok(())
    }
}

fn pairs_for(l2: u64, rule: &Lambda1Rule) -> Vec<u64> {
    match rule {
        Lambda1Rule::Ratio(r) => {
            let v = r * BigRational::from_integer(l2.into());
            if v.is_integer() && v.is_positive() {
                u64::try_from(v.to_integer()).ok().into_iter().collect()
            } else {
                Vec::new()
            }
        }
        Lambda1Rule::Difference(d) => l2.checked_add(*d).into_iter().collect(),
        Lambda1Rule::AllUpTo(n) => (l2 + 1..=*n).collect(),
        Lambda1Rule::List(v) => v.iter().copied().filter(|&a| a > l2).collect(),
    }
}

/// Certifies every pair selected by `rule` for `λ2` in `lambda2`.
pub fn scan_range(
    lambda2: RangeInclusive<u64>,
    rule: &Lambda1Rule,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    if lambda2.is_empty() {
        return arg("empty lambda2 range");
    }
    if let Lambda1Rule::Ratio(r) = rule {
        if *r <= BigRational::one() {
            return arg(format!("ratio must exceed 1, got {r}"));
        }
    }
    if let Some(c) = opts.class_filter {
        if c > 3 {
            return arg(format!("class must be 0..=3, got {c}"));
        }
    }
    let mut pairs = Vec::new();
    for l2 in lambda2 {
        for l1 in pairs_for(l2, rule) {
            let p = PartitionPair::new(l1, l2)?;
            if opts.class_filter.is_none_or(|c| c == p.congruence_class()) {
                pairs.push(p);
            }
        }
    }
    let run = |p: &PartitionPair| {
        let t = Instant::now();
        let certificate = certify(p, &opts.certify);
        let usec = if opts.timings {
            t.elapsed().as_micros() as u64
        } else {
            0
        };
        ScanEntry {
            pair: *p,
            certificate,
            usec,
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.parallelism)
        .build()
        .map_err(|e| crate::error::Error::Argument(e.to_string()))?;
    let mut entries: Vec<ScanEntry> = pool.install(|| pairs.par_iter().map(run).collect());
    entries.sort_by_key(|e| (e.pair.lambda2(), e.pair.lambda1()));
    Ok(ScanReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    #[test]
    fn rejects_empty_range() {
        #[allow(clippy::reversed_empty_ranges)]
        let r = scan_range(5..=4, &Lambda1Rule::Difference(1), &ScanOptions::default());
        assert!(r.is_err());
    }

    #[test]
    fn ratio_rule_skips_non_integers() {
        let rep = scan_range(
            1..=10,
            &Lambda1Rule::Ratio(ratio(3, 2)),
            &ScanOptions::default(),
        )
        .unwrap();
        let l2s: Vec<_> = rep.entries.iter().map(|e| e.pair.lambda2()).collect();
        assert_eq!(l2s, vec![2, 4, 6, 8, 10]);
    }

    #[test]
    fn small_sweep_is_clean_and_ordered() {
        let opts = ScanOptions {
            parallelism: 3,
            ..Default::default()
        };
        let rep = scan_range(1..=20, &Lambda1Rule::AllUpTo(40), &opts).unwrap();
        assert!(!rep.has_unresolved());
        let keys: Vec<_> = rep
            .entries
            .iter()
            .map(|e| (e.pair.lambda2(), e.pair.lambda1()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(rep.counts().values().sum::<usize>(), rep.entries.len());
    }

    #[test]
    fn jsonl_shape() {
        let opts = ScanOptions {
            certify: CertifyOptions {
                budget: 0,
                ..Default::default()
            },
            ..Default::default()
        };
        let rep = scan_range(300..=300, &Lambda1Rule::Ratio(ratio(6, 1)), &opts).unwrap();
        let mut buf = Vec::new();
        rep.write_jsonl(&mut buf).unwrap();
        let line = String::from_utf8(buf).unwrap();
        let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(v["certificate"], "nonzero-supercritical");
        assert!(v["margin"].is_f64());
        assert!(v["exact_sign"].is_null());
        assert_eq!(v["usec"], 0);
    }
}
