//! Command-line surface: argument parsing, command dispatch and exit codes.
//!
//! Exit codes: 0 success, 1 verification failure, 2 argument error,
//! 3 precision ceiling, 4 contradiction between classification and zero scan.

pub mod cache;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::arith::{ErrValue, Precision};
use crate::asymptotics::{
    classify, f_main_constant, gamma_asymptotic_estimate, gamma_profile, vanishing_sets, ModularPoint, Verdict,
};
use crate::coeff::{gamma_eval, CoeffKey};
use crate::error::{Error, Result};
use crate::lattice::{ellipsoid_volume, f_kn_eval, lattice_count, QuadLinForm};
use crate::suites::{run_suite, Suite};
use crate::zeros::{find_zeros_with, parse_rational, rational_to_decimal, ZeroSearch, DEFAULT_CEILING_DIGITS};

pub use cache::{CacheEntry, CacheStatus, SeriesCache};
pub use output::{Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_CONTRADICTION: i32 = 4;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionCeiling { .. } | Error::NonConvergence(_) | Error::Scale(_) | Error::UncertifiedNonzero(_) => {
            EXIT_PRECISION
        }
        Error::Contradiction(_) => EXIT_CONTRADICTION,
        Error::Argument(_) | Error::Domain(_) | Error::Divergence(_) | Error::UnknownIdentity(_) | Error::Io(_) => {
            EXIT_ARGUMENT
        }
    }
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(t, 16).map_err(|_| format!("seed must be hexadecimal, got {s:?}"))
}

fn parse_precision(s: &str) -> std::result::Result<u32, String> {
    let d: u32 = s.parse().map_err(|_| format!("precision must be a digit count, got {s:?}"))?;
    if !(5..=DEFAULT_CEILING_DIGITS).contains(&d) {
        return Err(format!("precision must lie in 5..={DEFAULT_CEILING_DIGITS} digits, got {d}"));
    }
    Ok(d)
}

#[derive(Debug, Parser)]
#[command(name = "theta-powers", version, about = "Coefficients of powers of theta functions: exact series, certified values, zeros and asymptotics")]
pub struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value = "50", value_parser = parse_precision)]
    pub precision: u32,
    /// Series truncation order (automatic when absent).
    #[arg(long, global = true)]
    pub order: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory of the exact series cache.
    #[arg(long, global = true, default_value = "./cache")]
    pub cache_dir: PathBuf,
    /// Seed for sampled test points, in hexadecimal.
    #[arg(long, global = true, default_value = "5EED", value_parser = parse_seed)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact series of γ_{k,n} (columns: m,coeff) or its value at a nome q (columns: k,n,q,value,radius,digits).
    Coeff(CoeffArgs),
    /// Run an invariant suite (columns: check,passed,residual,bound,detail); exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Certified zero brackets on (-1, 0) (columns: k,n,lo,hi,sign_lo,sign_hi,width).
    Zeros(ZerosArgs),
    /// Limit behaviour at q -> -1 (columns: k,n,verdict,corollary_flag,complementary_flag,predicted_constant).
    Classify(ClassifyArgs),
    /// Sweep of a coefficient against its asymptotic law
    /// (modular columns: t,gamma,radius,profile,estimate,ratio; main columns: x,f,main_term,ratio).
    Asymptote(AsymptoteArgs),
    /// Lattice point counts against ellipsoid volumes (columns: M,count,volume,deviation).
    Lattice(LatticeArgs),
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
    /// Real nome in (-1, 1) as a decimal; without it the exact series is printed.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of identities, routes, asymptotics, lattice, poisson.
    pub suite: String,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub n: i64,
    /// Scan window lo:hi inside (-1, 0).
    #[arg(long, allow_hyphen_values = true, default_value = "-0.999:-0.001")]
    pub window: String,
    /// Target bracket width.
    #[arg(long, default_value = "1e-8")]
    pub width: String,
    /// Number of scan intervals.
    #[arg(long, default_value_t = crate::zeros::DEFAULT_GRID)]
    pub grid: usize,
    /// Digits beyond which an uncertified sign is reported as a precision failure.
    #[arg(long, default_value_t = DEFAULT_CEILING_DIGITS)]
    pub max_precision: u32,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// A single k or a range lo:hi.
    #[arg(long)]
    pub k: String,
    /// Restrict to one n.
    #[arg(long)]
    pub n: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Law {
    /// γ_{k,n}(e^{πi-2πt}) against ±2Γ or ±√2Γ.
    Modular,
    /// f_{k,n}(-x)(1-x)^{k/2} against its limiting constant.
    Main,
}

#[derive(Debug, Args)]
pub struct AsymptoteArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub n: i64,
    #[arg(long, value_enum, default_value_t = Law::Modular)]
    pub law: Law,
    /// Comma-separated sample points: t values for the modular law, x values for the main term.
    #[arg(long)]
    pub points: Option<String>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Dimension of the form of θ^{k+1}; ignored when --matrix is given.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Linear shift n of the form of θ^{k+1}.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub n: i64,
    /// Symmetric matrix as rows separated by ';' and rational entries by ',', e.g. "1,1/2;1/2,1".
    #[arg(long)]
    pub matrix: Option<String>,
    /// Linear part as comma-separated rationals (zero when absent).
    #[arg(long, allow_hyphen_values = true)]
    pub linear: Option<String>,
    /// Comma-separated levels M.
    #[arg(long, default_value = "25,50,100,200,400")]
    pub levels: String,
}

/// Settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision: Precision,
    pub order: Option<usize>,
    pub format: Format,
    pub cache_dir: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: Precision::DEFAULT,
            order: None,
            format: Format::Text,
            cache_dir: PathBuf::from("./cache"),
            seed: 0x5EED,
        }
    }
}

impl RunConfig {
    fn to_json(&self) -> Value {
        json!({
            "precision": self.precision.digits(),
            "order": self.order,
            "format": format!("{:?}", self.format).to_lowercase(),
            "cache_dir": self.cache_dir.display().to_string(),
            "seed": format!("0x{:X}", self.seed),
        })
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ARGUMENT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let config = RunConfig {
        precision: Precision::new(cli.precision),
        order: cli.order,
        format: cli.format,
        cache_dir: cli.cache_dir.clone(),
        seed: cli.seed,
    };
    match execute(&cli.command, &config) {
        Ok((report, code)) => {
            let _ = write!(out, "{}", report.render(config.format, &config.to_json()));
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: &Command, config: &RunConfig) -> Result<(Report, i32)> {
    match command {
        Command::Coeff(a) => cmd_coeff(a, config).map(|r| (r, EXIT_OK)),
        Command::Verify(a) => cmd_verify(a, config),
        Command::Zeros(a) => cmd_zeros(a, config).map(|r| (r, EXIT_OK)),
        Command::Classify(a) => cmd_classify(a).map(|r| (r, EXIT_OK)),
        Command::Asymptote(a) => cmd_asymptote(a, config).map(|r| (r, EXIT_OK)),
        Command::Lattice(a) => cmd_lattice(a).map(|r| (r, EXIT_OK)),
    }
}

/// Default order of printed series when neither `--order` nor `--q` is given.
pub const DEFAULT_SERIES_ORDER: usize = 20;

fn cmd_coeff(a: &CoeffArgs, config: &RunConfig) -> Result<Report> {
    let key = CoeffKey::new(a.k, a.n)?;
    let (i, shift) = key.reduce()?;
    let prec = config.precision;
    let mut report;
    match &a.q {
        Some(q) => {
            report = Report::new("coeff", vec!["k", "n", "q", "value", "radius", "digits"]);
            let qv = ErrValue::parse_decimal(q, prec)?;
            let v = gamma_eval(key, &qv, config.order)?;
            let d = v.to_decimal(prec.digits());
            report.row(vec![
                a.k.to_string(),
                a.n.to_string(),
                q.trim().to_string(),
                d.re.clone(),
                d.radius.clone(),
                prec.digits().to_string(),
            ]);
        }
        None => {
            report = Report::new("coeff", vec!["m", "coeff"]);
            let order = config.order.unwrap_or(DEFAULT_SERIES_ORDER);
            let cache = SeriesCache::new(&config.cache_dir);
            let base = CoeffKey::new(a.k, i)?;
            let (series, status) = cache.series(base, order)?;
            report.meta("cache", status.name());
            report.meta("order", order);
            let shift = usize::try_from(shift).unwrap_or(usize::MAX);
            for m in 0..=order {
                let c = if m >= shift { series.coeff(m - shift).to_string() } else { "0".to_string() };
                report.row(vec![m.to_string(), c]);
            }
        }
    }
    report.meta("k", a.k);
    report.meta("n", a.n);
    if a.n != i {
        report.meta("reduced_n", i);
        report.meta("shift", shift.to_string());
        report.notes.push(format!("γ_(k={}, n={}) = q^{shift} γ_(k={}, n={i})", a.k, a.n, a.k));
    }
    Ok(report)
}

fn cmd_verify(a: &VerifyArgs, config: &RunConfig) -> Result<(Report, i32)> {
    let suite: Suite = a.suite.parse()?;
    let result = run_suite(suite, config.seed, config.precision)?;
    let mut report = Report::new("verify", vec!["check", "passed", "residual", "bound", "detail"]);
    report.meta("suite", suite.name());
    report.meta("passed", result.passed());
    for c in &result.checks {
        report.row(vec![c.name.clone(), c.passed.to_string(), c.residual.clone(), c.bound.clone(), c.detail.clone()]);
    }
    let code = if result.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok((report, code))
}

fn parse_window(s: &str) -> Result<(BigRational, BigRational)> {
    // the separator is the first ':' after position 0
    let idx = s.char_indices().skip(1).find(|(_, c)| *c == ':').map(|(i, _)| i);
    let Some(idx) = idx else {
        return Err(Error::Argument(format!("window must look like lo:hi, got {s:?}")));
    };
    Ok((parse_rational(&s[..idx])?, parse_rational(&s[idx + 1..])?))
}

/// Decimal places that resolve a rational of size `w`.
fn places_for(w: &BigRational) -> u32 {
    let mut places = 6;
    let mut scale = BigRational::from_integer(BigInt::from(1_000_000));
    while w * &scale < BigRational::from_integer(BigInt::from(1000)) && places < 60 {
        scale *= BigRational::from_integer(BigInt::from(10));
        places += 1;
    }
    places
}

fn cmd_zeros(a: &ZerosArgs, config: &RunConfig) -> Result<Report> {
    if a.max_precision < config.precision.digits() {
        return Err(Error::Argument(format!(
            "--max-precision {} is below --precision {}",
            a.max_precision,
            config.precision.digits()
        )));
    }
    let (lo, hi) = parse_window(&a.window)?;
    let width = parse_rational(&a.width)?;
    let search = ZeroSearch {
        lo,
        hi,
        grid: a.grid,
        width: width.clone(),
        precision: config.precision,
        ceiling: Precision::new(a.max_precision),
    };
    let result = find_zeros_with(a.k, a.n, &search)?;
    let mut report = Report::new("zeros", vec!["k", "n", "lo", "hi", "sign_lo", "sign_hi", "width"]);
    report.meta("k", a.k);
    report.meta("n", a.n);
    match &result.verdict {
        Some(v) => {
            report.meta("verdict", v.verdict.to_string());
            report.meta("corollary_flag", v.corollary_flag);
        }
        None => {
            report.meta("verdict", "non_vanishing");
            report.notes.push("k <= 2: γ is a monomial or a triple product, neither of which vanishes on (-1, 0)".into());
        }
    }
    let places = places_for(&width);
    for b in &result.brackets {
        report.row(vec![
            a.k.to_string(),
            a.n.to_string(),
            rational_to_decimal(&b.lo, places, false),
            rational_to_decimal(&b.hi, places, true),
            b.sign_lo.to_string(),
            b.sign_hi.to_string(),
            rational_to_decimal(&b.width(), places, true),
        ]);
    }
    for g in &result.gaps {
        report.notes.push(format!(
            "no sign certified on [{}, {}] within {} digits",
            rational_to_decimal(&g.lo, 6, false),
            rational_to_decimal(&g.hi, 6, true),
            a.max_precision
        ));
    }
    Ok(report)
}

fn parse_k_range(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::Argument(format!("k must be an integer or a range lo:hi, got {s:?}"));
    let (a, b) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if a < 3 || b < a {
        return Err(Error::Argument(format!("classification needs 3 <= lo <= hi, got {s:?}")));
    }
    Ok((a, b))
}

fn cmd_classify(a: &ClassifyArgs) -> Result<Report> {
    let (lo, hi) = parse_k_range(&a.k)?;
    let mut report =
        Report::new("classify", vec!["k", "n", "verdict", "corollary_flag", "complementary_flag", "predicted_constant"]);
    let mut sets = Vec::new();
    for k in lo..=hi {
        let ns: Vec<i64> = match a.n {
            Some(n) => vec![n],
            None => (0..k as i64).collect(),
        };
        for n in ns {
            let v = classify(k, n)?;
            report.row(vec![
                k.to_string(),
                n.to_string(),
                v.verdict.to_string(),
                v.corollary_flag.to_string(),
                v.complementary_flag.to_string(),
                v.predicted_constant.map(constant_name).unwrap_or_default(),
            ]);
        }
        let (x, y) = vanishing_sets(k)?;
        let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        report.notes.push(format!("X_{k} = {{{}}}, Y_{k} = {y}", xs.join(", ")));
        sets.push(json!({ "k": k, "x": x, "y": y.to_string() }));
    }
    report.meta("vanishing_sets", Value::Array(sets));
    Ok(report)
}

fn constant_name(c: f64) -> String {
    let sign = if c < 0.0 { "-" } else { "+" };
    if (c.abs() - 2.0).abs() < 1e-12 {
        format!("{sign}2")
    } else {
        format!("{sign}sqrt2")
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Argument(format!("not a number: {t:?}"))))
        .collect()
}

fn sig(x: f64) -> String {
    format!("{x:.10e}")
}

fn cmd_asymptote(a: &AsymptoteArgs, config: &RunConfig) -> Result<Report> {
    let prec = config.precision;
    let shown = prec.digits().min(20);
    let mut report;
    match a.law {
        Law::Modular => {
            report = Report::new("asymptote", vec!["t", "gamma", "radius", "profile", "estimate", "ratio"]);
            let v = classify(a.k, a.n)?;
            report.meta("verdict", v.verdict.to_string());
            let ts = parse_list(a.points.as_deref().unwrap_or("0.2,0.15,0.1,0.07,0.05"))?;
            for t in ts {
                let mp = ModularPoint::new(t, prec)?;
                let g = gamma_eval(CoeffKey::new(a.k, a.n)?, mp.nome(), config.order)?;
                let est = gamma_asymptotic_estimate(a.k, a.n, t, prec)?;
                let profile = gamma_profile(a.k, a.n, t)?;
                let d = g.to_decimal(shown);
                let ratio = if v.verdict == Verdict::TendsToZero {
                    g.re_f64().abs() / profile
                } else {
                    g.re_f64() / est.re_f64()
                };
                let est_text = if est.contains_zero() {
                    format!("0 +/- {}", est.radius().to_decimal_up())
                } else {
                    est.to_decimal(shown).re
                };
                report.row(vec![t.to_string(), d.re, d.radius, sig(profile), est_text, sig(ratio)]);
            }
            if v.verdict == Verdict::TendsToZero {
                report.notes.push("vanishing class: ratio is |gamma| / profile".into());
            }
        }
        Law::Main => {
            report = Report::new("asymptote", vec!["x", "f", "main_term", "ratio"]);
            let c = f_main_constant(a.k, a.n);
            report.meta("constant", sig(c));
            let xs = parse_list(a.points.as_deref().unwrap_or("0.9,0.99,0.999"))?;
            for x in xs {
                if !(0.0 < x && x < 1.0) {
                    return Err(Error::Domain(format!("x must lie in (0, 1), got {x}")));
                }
                let f = f_kn_eval(a.k, a.n, &ErrValue::from_f64(-x, prec))?;
                let main = c / (1.0 - x).powf(a.k as f64 / 2.0);
                let ratio = if c == 0.0 { f64::NAN } else { f.re_f64() / main };
                report.row(vec![x.to_string(), f.to_decimal(shown).re, sig(main), sig(ratio)]);
            }
            if c == 0.0 {
                report.notes.push("the limiting constant vanishes, so no ratio is defined".into());
            }
        }
    }
    report.meta("k", a.k);
    report.meta("n", a.n);
    Ok(report)
}

fn parse_rationals(s: &str, sep: char) -> Result<Vec<BigRational>> {
    s.split(sep).map(|t| parse_rational(t.trim())).collect()
}

fn cmd_lattice(a: &LatticeArgs) -> Result<Report> {
    let form = match &a.matrix {
        Some(m) => {
            let rows: Vec<Vec<BigRational>> = m.split(';').map(|r| parse_rationals(r, ',')).collect::<Result<_>>()?;
            let b = match &a.linear {
                Some(l) => parse_rationals(l, ',')?,
                None => vec![BigRational::from_integer(BigInt::from(0)); rows.len()],
            };
            QuadLinForm::new(rows, b)?
        }
        None => QuadLinForm::theta_power(a.k, a.n)?,
    };
    let k = form.dim();
    let mut report = Report::new("lattice", vec!["M", "count", "volume", "deviation"]);
    report.meta("dimension", k);
    report.meta("det", form.det().to_string());
    for m in a.levels.split(',') {
        let level = parse_rational(m)?;
        let count = lattice_count(&form, &level)?;
        let mf = level.to_f64().unwrap_or(f64::NAN);
        let vol = ellipsoid_volume(&form, mf)?;
        let dev = (count as f64 - vol).abs() / mf.powf((k as f64 - 1.0) / 2.0);
        report.row(vec![m.trim().to_string(), count.to_string(), sig(vol), sig(dev)]);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["theta-powers"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn series_csv() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let (code, out, _) = call(&["coeff", "--k", "3", "--n", "0", "--order", "5", "--format", "csv", "--cache-dir", d]);
        assert_eq!(code, 0);
        assert_eq!(out, "m,coeff\n0,1\n1,6\n2,0\n3,6\n4,6\n5,0\n");
    }

    #[test]
    fn reduction_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let (code, out, _) = call(&["coeff", "--k", "2", "--n", "5", "--format", "json", "--cache-dir", d]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["reduced_n"], 1);
        assert_eq!(v["shift"], "4");
    }

    #[test]
    fn value_at_nome() {
        let (code, out, _) = call(&["coeff", "--k", "3", "--n", "0", "--q", "-0.163034", "--precision", "30", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.contains("-2.965997090772840138"), "{out}");
    }

    #[test]
    fn argument_errors_exit_two() {
        assert_eq!(call(&["coeff", "--k", "0", "--n", "0"]).0, 2);
        assert_eq!(call(&["classify", "--k", "2"]).0, 2);
        assert_eq!(call(&["zeros", "--k", "3", "--n", "0", "--window", "-1.5:-0.1"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["verify", "nothing"]).0, 2);
        assert_eq!(call(&["--precision", "2", "classify", "--k", "3"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn classify_table() {
        let (code, out, _) = call(&["classify", "--k", "4", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.contains("4,0,minus_infinity,true,true,-2"));
        assert!(out.contains("4,1,tends_to_zero,false,false,"));
        assert!(out.contains("4,2,plus_infinity,false,false,+2"));
        let (_, out, _) = call(&["classify", "--k", "3"]);
        assert!(out.contains("X_3 = {0, 3}, Y_3 = 3Z"));
        let (_, out, _) = call(&["classify", "--k", "10", "--n", "0", "--format", "csv"]);
        assert!(out.contains("10,0,tends_to_zero,false,true,"));
    }

    #[test]
    fn zeros_bracket_for_cubic() {
        let (code, out, _) = call(&["zeros", "--k", "3", "--n", "0", "--format", "csv"]);
        assert_eq!(code, 0);
        let row = out.lines().nth(1).unwrap();
        let cells: Vec<&str> = row.split(',').collect();
        let lo: f64 = cells[2].parse().unwrap();
        let hi: f64 = cells[3].parse().unwrap();
        assert!(-0.163034 <= lo && hi <= -0.163033, "{row}");
        let (code, out, _) = call(&["zeros", "--k", "2", "--n", "0", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 0);
        assert_eq!(v["verdict"], "non_vanishing");
    }

    #[test]
    fn contradiction_exits_four() {
        // a window that stops before the sign change of the cubic
        let (code, _, err) = call(&["zeros", "--k", "3", "--n", "0", "--window", "-0.1:-0.01", "--grid", "8"]);
        assert_eq!(code, 4, "{err}");
    }

    #[test]
    fn lattice_and_asymptote_sweeps() {
        let (code, out, _) = call(&["lattice", "--k", "2", "--levels", "25,50", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("M,count,volume,deviation\n25,"));
        let (code, out, _) =
            call(&["lattice", "--matrix", "1,1/2;1/2,1", "--levels", "10", "--format", "csv"]);
        assert_eq!(code, 0, "{out}");
        let (code, out, _) = call(&["asymptote", "--k", "3", "--n", "0", "--points", "0.1,0.05", "--precision", "30", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
        let (code, _, _) = call(&["asymptote", "--k", "3", "--n", "1", "--law", "main", "--points", "0.9"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn output_is_deterministic() {
        let a = call(&["classify", "--k", "3:6", "--format", "json"]).1;
        let b = call(&["classify", "--k", "3:6", "--format", "json"]).1;
        assert_eq!(a, b);
    }

    #[test]
    fn verify_lattice_suite() {
        let (code, out, _) = call(&["verify", "lattice", "--format", "csv"]);
        assert_eq!(code, 0, "{out}");
    }
}
