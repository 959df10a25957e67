//! Command-line front end. The `binsum` binary is a thin wrapper around [`run`].
//!
//! Settings come from an optional `key=value` file (`--config`), then from
//! flags, which win. Environment variables are not read.
//!
//! Exit codes: 0 on success, 1 when a lemma validation finds violations,
//! 2 on argument errors, 3 when a scan contains inconclusive or zero pairs.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use crate::asymptotics::{
    classify, predict, ratio_grid, saddle_data, unit_grid, validate_inequality, LemmaId, Regime,
    ThetaGrid,
};
use crate::certifier::{
    certify, certify_interval_thr1, continued_fraction, exception_bound, scan_range, Certificate,
    CertifyOptions, ExceptionBound, Lambda1Rule, ScanOptions, DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::exact::{eval, eval_with, signed_i, PartitionPair, Route};
use crate::numerics::{parse_rational, rq, slack, HpReal, DEFAULT_PRECISION, DEFAULT_SLACK_EXP};
use crate::polynomials::{c_poly, factor_linear, integer_roots, tilde_poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Jsonl,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(s, true)
            .map_err(|_| Error::Argument(format!("unknown format {s:?}")))
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub precision_bits: usize,
    /// Exact-evaluation budget in 64-bit word operations.
    pub budget: u128,
    pub output_format: OutputFormat,
    pub parallelism: usize,
    pub slack_exponent: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: DEFAULT_PRECISION,
            budget: DEFAULT_BUDGET,
            output_format: OutputFormat::Human,
            parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
            slack_exponent: DEFAULT_SLACK_EXP,
        }
    }
}

impl RunConfig {
    /// Parses `key=value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Argument(format!("config line {}: expected key=value", n + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            let bad =
                |_| Error::Argument(format!("config line {}: bad value for {k}: {v:?}", n + 1));
            match k {
                "precision" | "precision_bits" => c.precision_bits = v.parse().map_err(bad)?,
                "budget" => c.budget = v.parse().map_err(bad)?,
                "format" | "output_format" => c.output_format = v.parse()?,
                "parallelism" => c.parallelism = v.parse().map_err(bad)?,
                "slack" | "slack_exponent" => c.slack_exponent = v.parse().map_err(bad)?,
                _ => {
                    return Err(Error::Argument(format!(
                        "config line {}: unknown key {k:?}",
                        n + 1
                    )))
                }
            }
        }
        c.check()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Argument(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn check(&self) -> Result<()> {
        if self.precision_bits < 53 {
            return Err(Error::Argument(format!(
                "precision must be at least 53, got {}",
                self.precision_bits
            )));
        }
        if self.parallelism < 1 {
            return Err(Error::Argument("parallelism must be at least 1".into()));
        }
        Ok(())
    }

    pub fn certify_options(&self) -> CertifyOptions {
        CertifyOptions {
            budget: self.budget,
            precision: self.precision_bits,
            slack_exp: self.slack_exponent,
            ..CertifyOptions::default()
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "binsum",
    version,
    about = "Signed binomial sums C(l1, l2) = sum_j (-1)^j C(l1,j) C(l2,j)"
)]
struct Cli {
    /// key=value settings file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Working precision in bits.
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Exact-evaluation budget in 64-bit word operations.
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads for scans.
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    /// Comparisons use slack 2^-N.
    #[arg(long, global = true)]
    slack: Option<u32>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact value of C(l1, l2).
    Eval {
        lambda1: u64,
        lambda2: u64,
        #[arg(long)]
        route: Option<String>,
    },
    /// Asymptotic main term and error bound.
    Predict { lambda1: u64, lambda2: u64 },
    /// Nonvanishing certificate for one pair.
    Certify { lambda1: u64, lambda2: u64 },
    /// Certify a range of pairs.
    Scan(ScanArgs),
    /// Certified near-diagonal windows of l1 for one l2.
    Intervals { lambda2: u64 },
    /// Polynomial families and their integer roots.
    Poly(PolyArgs),
    /// Exception-count bound along l1 = r l2 and the continued fraction of r*g1 + g2.
    Exceptions {
        ratio: String,
        x: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Check a lemma inequality on an (r, theta) grid.
    Validate {
        /// Lemma name, or "all".
        #[arg(long)]
        lemma: String,
        /// RxT: R ratios across the lemma's range, T angles across its theta interval.
        #[arg(long, default_value = "50x50")]
        grid: String,
        /// Ratio range lo..hi overriding the lemma default.
        #[arg(long)]
        ratios: Option<String>,
    },
    /// Columns (l1, l2, method, residual, bound, valid) for plotting.
    Plotdata(PlotArgs),
}

#[derive(Args, Debug)]
#[group(id = "rule", required = true, multiple = false)]
struct RuleArgs {
    /// l1 = r l2 for a rational r.
    #[arg(long, group = "rule")]
    ratio: Option<String>,
    /// l1 = l2 + d.
    #[arg(long, group = "rule")]
    diff: Option<u64>,
    /// Every l2 < l1 <= N.
    #[arg(long = "all-l1-up-to", group = "rule")]
    all_l1_up_to: Option<u64>,
    /// Comma-separated l1 values.
    #[arg(long = "l1-list", group = "rule")]
    l1_list: Option<String>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Range a..b (inclusive).
    #[arg(long)]
    l2: String,
    #[command(flatten)]
    rule: RuleArgs,
    /// Keep only pairs with (l1 + l2) mod 4 = CLASS.
    #[arg(long)]
    class: Option<u8>,
    /// Record per-pair wall-clock time.
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long)]
    l2: String,
    #[command(flatten)]
    rule: RuleArgs,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("family").required(true).args(["c", "tilde"])))]
struct PolyArgs {
    /// C(X, l2) as a polynomial in X = l1.
    #[arg(long)]
    c: Option<u64>,
    /// The tilde family for (l, eps1, eps2).
    #[arg(long, num_args = 3, value_names = ["L", "EPS1", "EPS2"])]
    tilde: Option<Vec<u64>>,
    /// List integer roots with absolute value at most BOUND.
    #[arg(long)]
    roots: Option<u64>,
    /// Divide out X - ROOT first.
    #[arg(long)]
    divide: Option<i64>,
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>> {
    let bad = || Error::Argument(format!("expected a range a..b, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok(a.trim().parse().map_err(|_| bad())?..=b.trim().parse().map_err(|_| bad())?)
}

fn rule_of(r: &RuleArgs) -> Result<Lambda1Rule> {
    Ok(if let Some(s) = &r.ratio {
        Lambda1Rule::Ratio(parse_rational(s)?)
    } else if let Some(d) = r.diff {
        Lambda1Rule::Difference(d)
    } else if let Some(n) = r.all_l1_up_to {
        Lambda1Rule::AllUpTo(n)
    } else {
        let list = r.l1_list.as_deref().unwrap_or_default();
        let v: std::result::Result<Vec<u64>, _> =
            list.split(',').map(|t| t.trim().parse()).collect();
        Lambda1Rule::List(v.map_err(|_| Error::Argument(format!("bad l1 list {list:?}")))?)
    })
}

fn config_of(cli: &Cli) -> Result<RunConfig> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = cli.precision {
        c.precision_bits = v;
    }
    if let Some(v) = cli.budget {
        c.budget = v;
    }
    if let Some(v) = cli.format {
        c.output_format = v;
    }
    if let Some(v) = cli.parallelism {
        c.parallelism = v;
    }
    if let Some(v) = cli.slack {
        c.slack_exponent = v;
    }
    c.check()?;
    Ok(c)
}

fn sci(x: &HpReal) -> String {
    format!("{:.16e}", x.to_f64())
}

/// Parses `args` (program name first), writes results to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Argument(format!("write failed: {e}"))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = config_of(cli)?;
    let p = cfg.precision_bits;
    let fmt = cfg.output_format;
    match &cli.cmd {
        Command::Eval {
            lambda1,
            lambda2,
            route,
        } => {
            let pair = PartitionPair::new(*lambda1.max(lambda2), *lambda1.min(lambda2))?;
            let v = match route {
                Some(r) => eval_with(&pair, r.parse::<Route>()?)?,
                None => eval(&pair),
            };
            match fmt {
                OutputFormat::Human => writeln!(out, "{}", v.value),
                OutputFormat::Jsonl => writeln!(
                    out,
                    "{}",
                    json!({"lambda1": lambda1, "lambda2": lambda2, "route": v.route.name(), "value": v.value.to_string()})
                ),
                OutputFormat::Csv => {
                    writeln!(out, "lambda1,lambda2,route,value")
                        .and_then(|_| writeln!(out, "{lambda1},{lambda2},{},{}", v.route.name(), v.value))
                }
            }
            .map_err(io)?;
            Ok(0)
        }
        Command::Predict { lambda1, lambda2 } => {
            let pair = PartitionPair::new(*lambda1, *lambda2)?;
            let pr = predict(&pair, p)?;
            let fields = [
                ("lambda1", lambda1.to_string()),
                ("lambda2", lambda2.to_string()),
                ("regime", pr.regime.to_string()),
                ("method", pr.method.to_string()),
                ("normalized_main", sci(&pr.normalized_main)),
                ("error_bound", sci(&pr.error_bound)),
                ("valid", pr.valid.to_string()),
                ("log_normalizer", sci(&pr.log_normalizer)),
                ("normalizer", pr.normalizer.to_string()),
                (
                    "threshold",
                    pr.threshold.map_or("null".into(), |t| t.to_string()),
                ),
            ];
            write_fields(out, fmt, &fields)?;
            Ok(0)
        }
        Command::Certify { lambda1, lambda2 } => {
            let pair = PartitionPair::new(*lambda1.max(lambda2), *lambda1.min(lambda2))?;
            let c = if lambda1 < lambda2 {
                Certificate::Refused {
                    reason: "lambda1 < lambda2".into(),
                }
            } else {
                certify(&pair, &cfg.certify_options())
            };
            let fields = [
                ("lambda1", lambda1.to_string()),
                ("lambda2", lambda2.to_string()),
                ("class", pair.congruence_class().to_string()),
                ("certificate", c.kind().to_string()),
                ("basis", c.citation()),
                ("margin", c.margin().map_or("null".into(), sci)),
                (
                    "exact_sign",
                    c.exact_sign().map_or("null".into(), |s| s.to_string()),
                ),
            ];
            match fmt {
                OutputFormat::Human => writeln!(out, "({lambda1}, {lambda2}): {c}").map_err(io)?,
                _ => write_fields(out, fmt, &fields)?,
            }
            Ok(0)
        }
        Command::Scan(a) => {
            let opts = ScanOptions {
                certify: cfg.certify_options(),
                parallelism: cfg.parallelism,
                class_filter: a.class,
                timings: a.timings,
            };
            let report = scan_range(parse_range(&a.l2)?, &rule_of(&a.rule)?, &opts)?;
            match fmt {
                OutputFormat::Jsonl => report.write_jsonl(&mut *out).map_err(io)?,
                OutputFormat::Csv => report.write_csv(&mut *out).map_err(io)?,
                OutputFormat::Human => {
                    for e in &report.entries {
                        writeln!(
                            out,
                            "({}, {}) class {}: {}",
                            e.pair.lambda1(),
                            e.pair.lambda2(),
                            e.pair.congruence_class(),
                            e.certificate
                        )
                        .map_err(io)?;
                    }
                }
            }
            let counts: Vec<String> = report
                .counts()
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            writeln!(err, "pairs={} {}", report.entries.len(), counts.join(" ")).map_err(io)?;
            for pair in report.inconclusive() {
                writeln!(
                    err,
                    "inconclusive: ({}, {})",
                    pair.lambda1(),
                    pair.lambda2()
                )
                .map_err(io)?;
            }
            for pair in report.zeros() {
                writeln!(err, "zero: ({}, {})", pair.lambda1(), pair.lambda2()).map_err(io)?;
            }
            Ok(if report.has_unresolved() { 3 } else { 0 })
        }
        Command::Intervals { lambda2 } => {
            if *lambda2 == 0 {
                return Err(Error::Argument("lambda2 must be at least 1".into()));
            }
            let ivs = certify_interval_thr1(*lambda2, p);
            match fmt {
                OutputFormat::Human => {
                    for iv in &ivs {
                        writeln!(
                            out,
                            "{}: {} <= l1 <= {} (d in [{}, {}], {} basis)",
                            iv.clause,
                            iv.lambda1_lo(),
                            iv.lambda1_hi(),
                            iv.d_lo,
                            iv.d_hi,
                            if iv.basis == crate::certifier::Basis::Asymptotic {
                                "asymptotic"
                            } else {
                                "small-difference"
                            }
                        )
                        .map_err(io)?;
                    }
                }
                OutputFormat::Jsonl => {
                    for iv in &ivs {
                        let v = json!({
                            "clause": iv.clause.to_string(), "class": iv.clause.class, "window": iv.clause.window,
                            "lambda2": iv.lambda2, "lambda1_lo": iv.lambda1_lo(), "lambda1_hi": iv.lambda1_hi(),
                            "d_lo": iv.d_lo, "d_hi": iv.d_hi, "basis": iv.basis,
                        });
                        writeln!(out, "{v}").map_err(io)?;
                    }
                }
                OutputFormat::Csv => {
                    writeln!(out, "clause,lambda2,lambda1_lo,lambda1_hi,d_lo,d_hi,basis")
                        .map_err(io)?;
                    for iv in &ivs {
                        let basis = serde_json::to_value(iv.basis).unwrap();
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{}",
                            iv.clause,
                            iv.lambda2,
                            iv.lambda1_lo(),
                            iv.lambda1_hi(),
                            iv.d_lo,
                            iv.d_hi,
                            basis.as_str().unwrap()
                        )
                        .map_err(io)?;
                    }
                }
            }
            Ok(0)
        }
        Command::Poly(a) => {
            let mut poly = match (&a.c, &a.tilde) {
                (Some(l2), _) => c_poly(*l2),
                (_, Some(t)) => {
                    let eps = |x: u64| {
                        u8::try_from(x).map_err(|_| Error::Argument(format!("bad parity {x}")))
                    };
                    tilde_poly(t[0], eps(t[1])?, eps(t[2])?)?
                }
                _ => unreachable!("clap enforces the group"),
            };
            if let Some(r) = a.divide {
                poly = factor_linear(&poly, &BigInt::from(r))?;
            }
            let roots = a.roots.map(|b| integer_roots(&poly, b)).transpose()?;
            match fmt {
                OutputFormat::Human => {
                    writeln!(out, "{poly}").map_err(io)?;
                    writeln!(
                        out,
                        "degree: {}",
                        poly.degree().map_or("-inf".into(), |d| d.to_string())
                    )
                    .map_err(io)?;
                    if let Some(r) = &roots {
                        let r: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                        writeln!(out, "integer roots: [{}]", r.join(", ")).map_err(io)?;
                    }
                }
                _ => {
                    let mut v = poly.to_json();
                    if let Some(r) = &roots {
                        v["roots"] = r.iter().map(|x| x.to_string()).collect();
                    }
                    writeln!(out, "{v}").map_err(io)?;
                }
            }
            Ok(0)
        }
        Command::Exceptions { ratio, x, depth } => {
            let r = parse_rational(ratio)?;
            let xv = HpReal::parse(x, p)?;
            let mut fields = vec![("ratio", r.to_string()), ("x", x.clone())];
            match exception_bound(&r, &xv, p)? {
                ExceptionBound::Constant => fields.push(("bound", "O_r(1)".into())),
                ExceptionBound::Subcritical {
                    coefficient,
                    main_term,
                    remainder_unquantified,
                } => {
                    fields.push(("coefficient", sci(&coefficient)));
                    fields.push(("main_term", sci(&main_term)));
                    fields.push((
                        "remainder",
                        if remainder_unquantified {
                            "O_r(sqrt x), unquantified"
                        } else {
                            "none"
                        }
                        .into(),
                    ));
                    let sd = saddle_data(&r, p + 32)?;
                    let angle = (rq(&r, p + 32) * sd.gamma1.unwrap() + sd.gamma2.unwrap())
                        .with_precision(p);
                    let cf = continued_fraction(&angle, *depth)?;
                    fields.push(("angle", sci(&angle)));
                    let pq: Vec<String> =
                        cf.partial_quotients.iter().map(|a| a.to_string()).collect();
                    fields.push(("partial_quotients", pq.join(" ")));
                    let conv: Vec<String> = cf
                        .convergents
                        .iter()
                        .map(|(a, b)| format!("{a}/{b}"))
                        .collect();
                    fields.push(("convergents", conv.join(" ")));
                    fields.push((
                        "legendre",
                        cf.legendre_quality(&slack(cfg.slack_exponent)).to_string(),
                    ));
                    fields.push(("terminated", cf.terminated.to_string()));
                }
            }
            write_fields(out, fmt, &fields)?;
            Ok(0)
        }
        Command::Validate {
            lemma,
            grid,
            ratios,
        } => {
            let (nr, nt) = grid
                .split_once('x')
                .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                .ok_or_else(|| {
                    Error::Argument(format!("grid must look like 50x50, got {grid:?}"))
                })?;
            let lemmas: Vec<LemmaId> = if lemma == "all" {
                LemmaId::ALL.to_vec()
            } else {
                vec![lemma.parse()?]
            };
            let mut violations = 0;
            for l in lemmas {
                let (lo, hi) = match ratios {
                    Some(s) => {
                        let (a, b) = s.split_once("..").ok_or_else(|| {
                            Error::Argument(format!("expected lo..hi, got {s:?}"))
                        })?;
                        (parse_rational(a)?, parse_rational(b)?)
                    }
                    None => {
                        let (a, b) = l.default_ratio_range();
                        (parse_rational(a)?, parse_rational(b)?)
                    }
                };
                let rep = validate_inequality(
                    l,
                    &ratio_grid(&lo, &hi, nr),
                    &ThetaGrid::Unit(unit_grid(nt)),
                    p,
                )?;
                violations += rep.violations;
                let fields = [
                    ("lemma", l.name().to_string()),
                    ("points", rep.points.to_string()),
                    ("violations", rep.violations.to_string()),
                    ("max_margin", format!("{:.16e}", rep.max_margin)),
                    (
                        "worst_r",
                        rep.worst.map_or("null".into(), |w| format!("{:.16e}", w.0)),
                    ),
                    (
                        "worst_theta",
                        rep.worst.map_or("null".into(), |w| format!("{:.16e}", w.1)),
                    ),
                ];
                write_fields(out, fmt, &fields)?;
            }
            Ok(if violations > 0 { 1 } else { 0 })
        }
        Command::Plotdata(a) => {
            let rule = rule_of(&a.rule)?;
            let rows = plot_rows(parse_range(&a.l2)?, &rule, p)?;
            if fmt == OutputFormat::Csv || fmt == OutputFormat::Human {
                writeln!(out, "lambda1,lambda2,method,residual,bound,valid").map_err(io)?;
            }
            for r in rows {
                match fmt {
                    OutputFormat::Jsonl => {
                        let v = format!(
                            "{{\"lambda1\":{},\"lambda2\":{},\"method\":\"{}\",\"residual\":{},\"bound\":{},\"valid\":{}}}",
                            r.0, r.1, r.2, r.3, r.4, r.5
                        );
                        writeln!(out, "{v}").map_err(io)?;
                    }
                    _ => writeln!(out, "{},{},{},{},{},{}", r.0, r.1, r.2, r.3, r.4, r.5)
                        .map_err(io)?,
                }
            }
            Ok(0)
        }
    }
}

type PlotRow = (u64, u64, String, String, String, bool);

fn plot_rows(l2s: RangeInclusive<u64>, rule: &Lambda1Rule, p: usize) -> Result<Vec<PlotRow>> {
    let mut pairs = Vec::new();
    for l2 in l2s {
        let l1s: Vec<u64> = match rule {
            Lambda1Rule::Ratio(r) => {
                let v = r * BigRational::from_integer(l2.into());
                if v.is_integer() {
                    vec![u64::try_from(v.to_integer())
                        .map_err(|_| Error::Argument("lambda1 out of range".into()))?]
                } else {
                    vec![]
                }
            }
            Lambda1Rule::Difference(d) => vec![l2 + d],
            Lambda1Rule::AllUpTo(n) => (l2 + 1..=*n).collect(),
            Lambda1Rule::List(v) => v.iter().copied().filter(|&a| a > l2).collect(),
        };
        for l1 in l1s {
            pairs.push(PartitionPair::new(l1, l2)?);
        }
    }
    let mut rows = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let r = pair.ratio().unwrap();
        if matches!(classify(&r), Regime::Critical | Regime::Degenerate) {
            continue;
        }
        let pr = predict(&pair, p)?;
        let i = signed_i(&pair, &eval(&pair).value);
        let res = pr.residual(&i).abs();
        rows.push((
            pair.lambda1(),
            pair.lambda2(),
            pr.method.to_string(),
            sci(&res),
            sci(&pr.error_bound),
            pr.valid,
        ));
    }
    Ok(rows)
}

/// Fields written as JSON numbers; everything else stays a string so that
/// big integers and high-precision reals survive a round trip.
const INTEGER_KEYS: &[&str] = &[
    "lambda1",
    "lambda2",
    "class",
    "exact_sign",
    "threshold",
    "points",
    "violations",
    "depth",
];

fn write_fields(out: &mut dyn Write, fmt: OutputFormat, fields: &[(&str, String)]) -> Result<()> {
    match fmt {
        OutputFormat::Human => {
            for (k, v) in fields {
                writeln!(out, "{k}: {v}").map_err(io)?;
            }
        }
        OutputFormat::Jsonl => {
            let m: serde_json::Map<String, serde_json::Value> = fields
                .iter()
                .map(|(k, v)| {
                    let v = match v.as_str() {
                        "null" => serde_json::Value::Null,
                        "true" => json!(true),
                        "false" => json!(false),
                        _ if INTEGER_KEYS.contains(k) => {
                            v.parse::<i64>().map_or_else(|_| json!(v), |n| json!(n))
                        }
                        _ => json!(v),
                    };
                    (k.to_string(), v)
                })
                .collect();
            writeln!(out, "{}", serde_json::Value::Object(m)).map_err(io)?;
        }
        OutputFormat::Csv => {
            let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let vals: Vec<String> = fields
                .iter()
                .map(|(_, v)| {
                    if v.contains([',', '"', ' ']) {
                        format!("\"{}\"", v.replace('"', "\"\""))
                    } else {
                        v.clone()
                    }
                })
                .collect();
            writeln!(out, "{}\n{}", keys.join(","), vals.join(",")).map_err(io)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("binsum").chain(args.iter().copied()),
            &mut o,
            &mut e,
        );
        (
            code,
            String::from_utf8(o).unwrap(),
            String::from_utf8(e).unwrap(),
        )
    }

    #[test]
    fn config_file() {
        let c = RunConfig::parse("# comment\nprecision = 96\nformat=jsonl\nbudget=5\n").unwrap();
        assert_eq!(
            (c.precision_bits, c.budget, c.output_format),
            (96, 5, OutputFormat::Jsonl)
        );
        assert!(RunConfig::parse("precision=40").is_err());
        assert!(RunConfig::parse("parallelism=0").is_err());
        assert!(RunConfig::parse("colour=red").is_err());
        assert!(RunConfig::parse("precision").is_err());
    }

    #[test]
    fn eval_and_errors() {
        assert_eq!(
            run_str(&["eval", "6", "1"]),
            (0, "-5\n".into(), String::new())
        );
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["eval", "6"]).0, 2);
        assert_eq!(run_str(&["--precision", "20", "eval", "6", "1"]).0, 2);
        assert_eq!(run_str(&["eval", "6", "1", "--route", "sideways"]).0, 2);
    }

    #[test]
    fn certify_diagonal_refused() {
        let (code, out, _) = run_str(&["certify", "4", "4"]);
        assert_eq!(code, 0);
        assert!(out.contains("refused"), "{out}");
    }

    #[test]
    fn scan_exit_codes() {
        let (code, out, _) = run_str(&["scan", "--l2", "1..5", "--diff", "1", "--format", "jsonl"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 5);
        let (code, _, err) = run_str(&["--budget", "0", "scan", "--l2", "10..12", "--diff", "1"]);
        assert_eq!(code, 3);
        assert!(err.contains("inconclusive: (11, 10)"));
        assert_eq!(run_str(&["scan", "--l2", "1..5"]).0, 2);
        assert_eq!(run_str(&["scan", "--l2", "5..1", "--diff", "1"]).0, 2);
    }
}
