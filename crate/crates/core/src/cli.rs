//! The `odoni` command line: JSON in, JSON out.
//!
//! Exit codes: 0 success or pass, 1 a check failed, 2 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arith;
use crate::certify::{self, Certificate, CertifyOptions};
use crate::construct::{self, IterInstance, ParityCase};
use crate::error::Error;
use crate::frobenius::{self, FrobeniusStats};
use crate::newton;
use crate::permgroup::{self, Perm};
use crate::poly::{self, Poly, PolyJson, Trinomial};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "odoni", version, about = "Certify full wreath-product Galois groups for iterated trinomials")]
pub struct Cli {
    /// Echo every checked relation to stderr
    #[arg(long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the instance (f, x0) for a degree
    Construct(ConstructArgs),
    /// Certify an instance to a depth
    Certify(CertifyArgs),
    /// Trinomial or iterated discriminants
    Disc(DiscArgs),
    /// Newton polygon of a polynomial at a prime
    Newton(NewtonArgs),
    /// Check the S_d generation criterion on generator sets
    GroupCheck(GroupCheckArgs),
    /// Sample Frobenius cycle types at many primes
    Frobenius(FrobeniusArgs),
    /// construct, certify and frobenius in one report
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write JSON here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub degree: u32,
    /// Warn if certifying to this depth would hit the size cap
    #[arg(long)]
    pub depth_hint: Option<u32>,
    /// Force the odd-degree case: odd-case-1 or odd-case-2
    #[arg(long)]
    pub case: Option<String>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, default_value_t = certify::DEFAULT_DEPTH)]
    pub depth: u32,
    /// Inline every integer instead of hashing large ones
    #[arg(long)]
    pub full_values: bool,
    /// Skip the search for an explicit odd-valuation prime
    #[arg(long)]
    pub no_exhibit: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DiscArgs {
    /// Iterated discriminants of f^l - x0 for an instance
    #[arg(long, conflicts_with = "coeffs")]
    pub params: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub level: u32,
    /// Trinomial A x^d + B x^m + C as "A,B,C"
    #[arg(long, requires_all = ["d", "m"])]
    pub coeffs: Option<String>,
    #[arg(short = 'd', long)]
    pub d: Option<u32>,
    #[arg(short = 'm', long)]
    pub m: Option<u32>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct NewtonArgs {
    /// Coefficients in ascending degree, e.g. "-2/9,0,0,-1/9,0,1"
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    #[arg(long)]
    pub prime: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct GroupCheckArgs {
    /// JSON file {"d":5,"m":3,"G":["(1 2 3 4 5)","(4 5)"],"H":[[2,3,1,4,5]]}
    #[arg(long)]
    pub gens: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct FrobeniusArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub level: u32,
    #[arg(long, default_value_t = 2000)]
    pub primes: usize,
    #[arg(long, env = "ODONI_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub degree: u32,
    #[arg(long, default_value_t = certify::DEFAULT_DEPTH)]
    pub depth: u32,
    #[arg(long, default_value_t = 2000)]
    pub primes: usize,
    /// Frobenius level; default is the deepest level with an exact reference
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long, env = "ODONI_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub full_values: bool,
    #[command(flatten)]
    pub output: Output,
}

/// Error carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: msg.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::NotPrime(_) | Error::NotOddPrime(_) | Error::InvalidTrinomial(_) => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        CliError { code, message: e.to_string() }
    }
}

type CliResult = std::result::Result<i32, CliError>;

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult {
    let verbose = cli.verbose;
    match &cli.command {
        Command::Construct(a) => cmd_construct(a, verbose),
        Command::Certify(a) => cmd_certify(a, verbose),
        Command::Disc(a) => cmd_disc(a),
        Command::Newton(a) => cmd_newton(a),
        Command::GroupCheck(a) => cmd_group_check(a, verbose),
        Command::Frobenius(a) => cmd_frobenius(a, verbose),
        Command::Pipeline(a) => cmd_pipeline(a, verbose),
    }
}

fn emit<T: Serialize>(value: &T, out: &Output) -> std::result::Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError { code: EXIT_FAIL, message: e.to_string() })?;
    match &out.out {
        Some(path) => fs::write(path, text + "\n")
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError { code: EXIT_FAIL, message: e.to_string() })
                }
                _ => Ok(()),
            }
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> std::result::Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("bad JSON in {}: {e}", path.display())))
}

pub fn load_params(path: &Path) -> std::result::Result<IterInstance, CliError> {
    read_json(path)
}

fn build(degree: u32, case: Option<&str>) -> std::result::Result<IterInstance, CliError> {
    if degree < 2 {
        return Err(CliError::usage("degree must be at least 2"));
    }
    let inst = match case {
        None => construct::build_params(degree)?,
        Some("odd-case-1") => construct::build_params_odd_case(degree, ParityCase::OddCase1)?,
        Some("odd-case-2") => construct::build_params_odd_case(degree, ParityCase::OddCase2)?,
        Some("even") => construct::build_params_even(degree)?,
        Some(other) => return Err(CliError::usage(format!("unknown case {other:?}"))),
    };
    Ok(inst)
}

fn cmd_construct(a: &ConstructArgs, verbose: bool) -> CliResult {
    let inst = build(a.degree, a.case.as_deref())?;
    if verbose {
        for r in inst.relations() {
            eprintln!("[{}] {}", if r.holds { "ok" } else { "FAIL" }, r.name);
        }
    }
    if let Some(n) = a.depth_hint {
        let bits = certify::predicted_bits(&inst, n);
        if bits > certify::F_BIT_CAP {
            eprintln!("warning: F_{n} predicted at {bits} bits, certification will stop earlier");
        }
    }
    emit(&inst, &a.output)?;
    Ok(EXIT_OK)
}

fn print_checks(cert: &Certificate) {
    for c in &cert.checks {
        eprintln!("[{}] {}: {}", if c.ok { "ok" } else { "FAIL" }, c.name, c.relation);
    }
}

fn report_certificate(cert: &Certificate) {
    match &cert.first_failure {
        None => eprintln!(
            "certificate: pass (depth {}, {} criterion)",
            cert.depth,
            match cert.criterion {
                certify::Criterion::Full => "full",
                certify::Criterion::LowDegree => "low-degree",
            }
        ),
        Some(f) => eprintln!("certificate: FAIL at {f} ({} failed checks)", cert.failures.len()),
    }
}

fn cmd_certify(a: &CertifyArgs, verbose: bool) -> CliResult {
    let inst = load_params(&a.params)?;
    let opts = CertifyOptions {
        depth: a.depth,
        full_values: a.full_values,
        exhibit: !a.no_exhibit,
        ..Default::default()
    };
    let cert = certify::certify(&inst, &opts)?;
    if verbose {
        print_checks(&cert);
    }
    report_certificate(&cert);
    emit(&cert, &a.output)?;
    Ok(if cert.passed() { EXIT_OK } else { EXIT_FAIL })
}

fn parse_list(s: &str) -> std::result::Result<Vec<arith::Rational>, CliError> {
    s.split(',')
        .map(|c| arith::parse_rational(c).map_err(CliError::from))
        .collect()
}

fn cmd_disc(a: &DiscArgs) -> CliResult {
    if let Some(path) = &a.params {
        let inst = load_params(path)?;
        let f = inst.map()?;
        let levels = poly::disc_iterate_levels(&f, &inst.x0, a.level, poly::DEFAULT_BIT_BUDGET)?;
        let out = json!({
            "d": inst.d.to_string(),
            "m": inst.m.to_string(),
            "x0": arith::format_rational(&inst.x0),
            "levels": levels.iter().enumerate().skip(1).map(|(l, v)| json!({
                "level": l,
                "disc": arith::format_rational(v),
                "bits": arith::rational_bits(v),
            })).collect::<Vec<_>>(),
        });
        emit(&out, &a.output)?;
        return Ok(EXIT_OK);
    }
    let (Some(coeffs), Some(d), Some(m)) = (&a.coeffs, a.d, a.m) else {
        return Err(CliError::usage("give --params, or --coeffs with -d and -m"));
    };
    let c = parse_list(coeffs)?;
    if c.len() != 3 {
        return Err(CliError::usage("--coeffs takes exactly A,B,C"));
    }
    let tri = Trinomial::new(c[0].clone(), c[1].clone(), c[2].clone(), d, m)?;
    let closed = poly::disc_trinomial(&tri);
    let by_resultant = poly::disc_resultant(&tri.to_poly())?;
    let out = json!({
        "poly": tri.to_poly().to_string(),
        "closed_form": arith::format_rational(&closed),
        "resultant": arith::format_rational(&by_resultant),
        "agree": closed == by_resultant,
    });
    emit(&out, &a.output)?;
    Ok(if closed == by_resultant { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_newton(a: &NewtonArgs) -> CliResult {
    let f = Poly::try_from(PolyJson {
        coeffs: a.coeffs.split(',').map(str::to_string).collect(),
    })?;
    let np = newton::newton_polygon(&f, a.prime)?;
    emit(&np, &a.output)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PermSpec {
    Cycles(String),
    Images(Vec<u32>),
}

#[derive(Debug, Deserialize)]
struct GroupFile {
    d: usize,
    m: usize,
    #[serde(rename = "G")]
    g: Vec<PermSpec>,
    #[serde(rename = "H", default)]
    h: Vec<PermSpec>,
}

fn to_perm(d: usize, spec: &PermSpec) -> std::result::Result<Perm, CliError> {
    let p = match spec {
        PermSpec::Cycles(s) => Perm::parse_cycles(d, s)?,
        PermSpec::Images(v) => Perm::from_one_based(v)?,
    };
    if p.degree() != d {
        return Err(CliError::usage(format!("{p} is not on {d} points")));
    }
    Ok(p)
}

fn cmd_group_check(a: &GroupCheckArgs, verbose: bool) -> CliResult {
    let file: GroupFile = read_json(&a.gens)?;
    let g = file.g.iter().map(|s| to_perm(file.d, s)).collect::<Result<Vec<_>, _>>()?;
    let h = file.h.iter().map(|s| to_perm(file.d, s)).collect::<Result<Vec<_>, _>>()?;
    let v = permgroup::gen_sd_check(file.d, file.m, &g, &h).map_err(|e| CliError::usage(e.to_string()))?;
    if verbose {
        eprintln!("[{}] closure of G contains a transposition", ok(v.has_transposition));
        eprintln!("[{}] G is transitive on 1..d", ok(v.transitive));
        eprintln!("[{}] H fixes m+1..d and is transitive on 1..m", ok(v.h_ok));
        eprintln!("[{}] closure of G is S_d (order {})", ok(v.conclusion_holds), v.group_order);
    }
    emit(&v, &a.output)?;
    // a counterexample would be hypotheses without conclusion
    Ok(if v.hypotheses_hold && !v.conclusion_holds { EXIT_FAIL } else { EXIT_OK })
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "no"
    }
}

fn report_frobenius(s: &FrobeniusStats) {
    let tv = s.tv_distance.map_or("n/a".to_string(), |t| format!("{t:.4}"));
    eprintln!(
        "frobenius: {} primes in ({}, {}], TV = {tv}, unrealizable = {}",
        s.prime_count,
        s.scan_start,
        s.last_prime,
        s.unrealizable.len()
    );
}

fn cmd_frobenius(a: &FrobeniusArgs, verbose: bool) -> CliResult {
    let inst = load_params(&a.params)?;
    let stats = frobenius::sample_distribution(&inst, a.level, a.primes, a.seed)?;
    if verbose {
        report_frobenius(&stats);
    }
    emit(&stats, &a.output)?;
    Ok(if stats.unrealizable.is_empty() { EXIT_OK } else { EXIT_FAIL })
}

/// Deepest level ≤ `depth` whose wreath product is small enough to enumerate,
/// or 1 if none is.
pub fn default_frobenius_level(d: u32, depth: u32) -> u32 {
    (1..=depth)
        .rev()
        .find(|&n| permgroup::is_enumerable(d as usize, n))
        .unwrap_or(1)
}

fn cmd_pipeline(a: &PipelineArgs, verbose: bool) -> CliResult {
    let inst = build(a.degree, None)?;
    let opts = CertifyOptions {
        depth: a.depth,
        full_values: a.full_values,
        ..Default::default()
    };
    let cert = certify::certify(&inst, &opts)?;
    if verbose {
        print_checks(&cert);
    }
    report_certificate(&cert);
    let level = a.level.unwrap_or_else(|| default_frobenius_level(a.degree, a.depth));
    let stats = frobenius::sample_distribution(&inst, level, a.primes, a.seed)?;
    report_frobenius(&stats);
    let pass = cert.passed() && stats.unrealizable.is_empty();
    let report = json!({
        "params": inst,
        "certificate": cert,
        "frobenius": stats,
        "verdict": if pass { "pass" } else { "fail" },
    });
    emit(&report, &a.output)?;
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}
