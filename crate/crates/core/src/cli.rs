//! Command-line front end. [`run`] takes the argument vector and two
//! writers so it can be driven in-process by tests.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::campaign::{self, CampaignConfig, IntRange, OutputFormat, MAX_DIM};
use crate::error::{Error, Result};
use crate::fib;
use crate::matrix::{ExactMatrix, IntPolynomial, ModMatrix};
use crate::modorder;
use crate::pascal::PascalKind;
use crate::report::Verdict;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest |e| accepted for exact powers; modular powers take any exponent.
pub const MAX_EXACT_EXPONENT: i64 = 4096;

#[derive(Debug, Parser)]
#[command(name = "pascalfib", version, about = "Exact Pascal-matrix and Fibonacci verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build, power, invert or analyse a Pascal matrix.
    Matrix(MatrixArgs),
    /// Fibonacci values, entry points and periods.
    Fib(FibArgs),
    /// Multiplicative order of a Pascal matrix mod p, with the related theorem checks.
    Order(OrderArgs),
    /// Run a verification campaign over a grid of n, e and p.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
}

#[derive(Debug, Args)]
struct MatrixArgs {
    /// left or right
    #[arg(value_parser = parse_kind)]
    kind: PascalKind,
    n: usize,
    #[command(subcommand)]
    action: MatrixAction,
    /// Reduce the result modulo this prime.
    #[arg(long = "mod", global = true)]
    modulus: Option<u64>,
    #[arg(long, value_enum, default_value = "plain", global = true)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum MatrixAction {
    Show,
    #[command(allow_negative_numbers = true)]
    Pow { e: i64 },
    Inverse,
    Charpoly,
    Det,
}

#[derive(Debug, Args)]
struct FibArgs {
    #[command(subcommand)]
    query: FibQuery,
    #[arg(long, value_enum, default_value = "plain", global = true)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum FibQuery {
    /// Least k > 0 with m | F_k.
    EntryPoint { m: u64 },
    /// Pisano period of m.
    Period { m: u64 },
    /// F_k.
    Value { k: u64 },
    /// L_k.
    Lucas { k: u64 },
    /// Divisibility of the period and entry point of a prime p.
    BloomWall { p: u64 },
}

#[derive(Debug, Args)]
struct OrderArgs {
    #[arg(value_parser = parse_kind)]
    kind: PascalKind,
    n: usize,
    p: u64,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Comma-separated law identifiers.
    #[arg(long)]
    laws: Option<String>,
    /// Dimension range, `lo..hi` (inclusive).
    #[arg(long = "n", allow_hyphen_values = true)]
    n_range: Option<String>,
    /// Exponent range, `lo..hi` (inclusive).
    #[arg(long = "e", allow_hyphen_values = true)]
    e_range: Option<String>,
    /// Comma-separated primes.
    #[arg(long)]
    primes: Option<String>,
    /// json, csv or plain.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    fail_fast: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// JSON campaign config; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the list of law identifiers and exit.
    #[arg(long)]
    list_laws: bool,
}

fn parse_kind(s: &str) -> std::result::Result<PascalKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// JSON form of a matrix. Entries are decimal strings so that arbitrarily
/// large values survive consumers with fixed-width numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    pub entries: Vec<Vec<String>>,
}

impl MatrixDoc {
    pub fn from_exact(m: &ExactMatrix) -> Self {
        MatrixDoc {
            n: m.dim(),
            modulus: None,
            entries: m.rows().map(|r| r.iter().map(BigInt::to_string).collect()).collect(),
        }
    }

    pub fn from_mod(m: &ModMatrix) -> Self {
        let n = m.dim();
        MatrixDoc {
            n,
            modulus: Some(m.modulus()),
            entries: m.entries().chunks(n).map(|r| r.iter().map(u64::to_string).collect()).collect(),
        }
    }

    pub fn to_exact(&self) -> Result<ExactMatrix> {
        let bad = |what: &str| Error::Parse(format!("matrix document: {what}"));
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(bad("entries are not n x n"));
        }
        let entries = self
            .entries
            .iter()
            .flatten()
            .map(|s| s.parse::<BigInt>().map_err(|_| bad(&format!("`{s}` is not an integer"))))
            .collect::<Result<Vec<_>>>()?;
        ExactMatrix::new(self.n, entries)
    }

    pub fn to_mod(&self) -> Result<ModMatrix> {
        let p = self.modulus.ok_or_else(|| Error::Parse("matrix document has no modulus".into()))?;
        self.to_exact()?.to_mod(p)
    }
}

/// Runs the CLI and returns the process exit code: 0 when everything
/// passed, 1 when a verification failed, 2 on usage or input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                return EXIT_USAGE;
            }
            let _ = out.write_all(text.as_bytes());
            return EXIT_OK;
        }
    };
    let outcome = match cli.command {
        Command::Matrix(a) => cmd_matrix(&a),
        Command::Fib(a) => cmd_fib(&a),
        Command::Order(a) => cmd_order(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    match outcome {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return EXIT_FAILURE;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

type Output = (String, i32);

fn json_line(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if n as i64 > MAX_DIM {
        return Err(Error::Precondition(format!("n = {n} exceeds the limit of {MAX_DIM}")));
    }
    Ok(())
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::BadModulus(p));
    }
    if !crate::matrix::primes::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

enum MatrixValue {
    Exact(ExactMatrix),
    Mod(ModMatrix),
}

impl MatrixValue {
    fn render(&self, format: Format) -> String {
        match (self, format) {
            (MatrixValue::Exact(m), Format::Plain) => format!("{m}\n"),
            (MatrixValue::Mod(m), Format::Plain) => format!("{m}\n"),
            (MatrixValue::Exact(m), Format::Json) => json_line(&MatrixDoc::from_exact(m)),
            (MatrixValue::Mod(m), Format::Json) => json_line(&MatrixDoc::from_mod(m)),
        }
    }
}

fn cmd_matrix(a: &MatrixArgs) -> Result<Output> {
    check_dim(a.n)?;
    if let Some(p) = a.modulus {
        check_prime(p)?;
    }
    let base = a.kind.build(a.n)?;
    let text = match a.action {
        MatrixAction::Show => reduce(base, a.modulus)?.render(a.format),
        MatrixAction::Inverse => reduce(base.unimodular_inverse()?, a.modulus)?.render(a.format),
        MatrixAction::Pow { e } => power(&base, e, a.modulus)?.render(a.format),
        MatrixAction::Det => {
            let det = reduce_int(base.det(), a.modulus);
            match a.format {
                Format::Plain => format!("{det}\n"),
                Format::Json => json_line(&json!({ "det": det.to_string(), "modulus": a.modulus })),
            }
        }
        MatrixAction::Charpoly => {
            let poly = base.charpoly();
            let poly = match a.modulus {
                Some(p) => IntPolynomial::new(poly.coeffs().iter().map(|c| reduce_int(c.clone(), Some(p))).collect()),
                None => poly,
            };
            match a.format {
                Format::Plain => format!("{poly}\n"),
                Format::Json => json_line(&json!({
                    "coefficients": poly.coeffs().iter().map(BigInt::to_string).collect::<Vec<_>>(),
                    "modulus": a.modulus,
                })),
            }
        }
    };
    Ok((text, EXIT_OK))
}

fn reduce(m: ExactMatrix, modulus: Option<u64>) -> Result<MatrixValue> {
    Ok(match modulus {
        Some(p) => MatrixValue::Mod(m.to_mod(p)?),
        None => MatrixValue::Exact(m),
    })
}

fn reduce_int(v: BigInt, modulus: Option<u64>) -> BigInt {
    match modulus {
        Some(p) => v.mod_floor(&BigInt::from(p)),
        None => v,
    }
}

fn power(base: &ExactMatrix, e: i64, modulus: Option<u64>) -> Result<MatrixValue> {
    match modulus {
        Some(p) => {
            let b = if e < 0 { base.unimodular_inverse()? } else { base.clone() };
            Ok(MatrixValue::Mod(b.to_mod(p)?.pow(e.unsigned_abs())))
        }
        None => {
            if e.abs() > MAX_EXACT_EXPONENT {
                return Err(Error::Precondition(format!(
                    "|e| = {} exceeds {MAX_EXACT_EXPONENT} for exact powers; pass --mod p",
                    e.unsigned_abs()
                )));
            }
            Ok(MatrixValue::Exact(base.pow(e)?))
        }
    }
}

fn cmd_fib(a: &FibArgs) -> Result<Output> {
    let scalar = |name: &str, key: &str, arg: u64, value: String| match a.format {
        Format::Plain => format!("{value}\n"),
        Format::Json => json_line(&json!({ "query": name, key: arg, "value": value })),
    };
    let text = match a.query {
        FibQuery::EntryPoint { m } => scalar("entry-point", "m", m, fib::entry_point(m)?.to_string()),
        FibQuery::Period { m } => scalar("period", "m", m, fib::pisano_period(m)?.to_string()),
        FibQuery::Value { k } => scalar("value", "k", k, fib::fib(k).to_string()),
        FibQuery::Lucas { k } => scalar("lucas", "k", k, fib::lucas(k).to_string()),
        FibQuery::BloomWall { p } => {
            let r = fib::bloom_wall_check(p)?;
            let code = if r.holds() { EXIT_OK } else { EXIT_FAILURE };
            let text = match a.format {
                Format::Json => json_line(&r),
                Format::Plain => {
                    let mut s = format!(
                        "p: {}\nentry point: {}\nperiod: {}\n",
                        r.p, r.entry_point, r.pisano_period
                    );
                    for c in &r.claims {
                        let v = Verdict::from_bool(c.holds);
                        s.push_str(&format!("{}: {}\n", c.claim, v));
                    }
                    s
                }
            };
            return Ok((text, code));
        }
    };
    Ok((text, EXIT_OK))
}

fn cmd_order(a: &OrderArgs) -> Result<Output> {
    check_dim(a.n)?;
    check_prime(a.p)?;
    let report = modorder::order_report(a.kind, a.n, a.p)?;
    let code = if report.verdict().is_fail() { EXIT_FAILURE } else { EXIT_OK };
    let text = match a.format {
        Format::Json => json_line(&report),
        Format::Plain => {
            let mut s = match report.order {
                Some(o) => format!("order: {o}\n"),
                None => "order: unknown\n".to_owned(),
            };
            s.push_str(&format!("exponent bound: {}\n", report.witness_exponent_bound));
            for (id, check) in &report.theorem_checks {
                s.push_str(&format!("{id}: {}\n", check.verdict));
            }
            s
        }
    };
    Ok((text, code))
}

fn parse_primes(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad prime `{s}`"))))
        .collect()
}

fn campaign_config(a: &VerifyArgs) -> Result<CampaignConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<CampaignConfig>(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        }
        None => {
            let laws = a
                .laws
                .as_deref()
                .ok_or_else(|| Error::Parse("--laws or --config is required".into()))?;
            CampaignConfig::new(campaign::parse_laws(laws)?)
        }
    };
    if a.config.is_some() {
        if let Some(laws) = &a.laws {
            cfg.laws = campaign::parse_laws(laws)?;
        }
    }
    if let Some(n) = &a.n_range {
        cfg.n_range = n.parse::<IntRange>()?;
    }
    if let Some(e) = &a.e_range {
        cfg.e_range = e.parse::<IntRange>()?;
    }
    if let Some(p) = &a.primes {
        cfg.primes = parse_primes(p)?;
    }
    if let Some(f) = &a.format {
        cfg.output_format = f.parse::<OutputFormat>()?;
    }
    if a.fail_fast {
        cfg.fail_fast = true;
    }
    if let Some(t) = a.threads {
        cfg.threads = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_verify(a: &VerifyArgs) -> Result<Output> {
    if a.list_laws {
        let ids: Vec<&str> = campaign::Law::ALL.iter().map(|l| l.id()).collect();
        return Ok((ids.join("\n") + "\n", EXIT_OK));
    }
    let cfg = campaign_config(a)?;
    let report = campaign::run_campaign(&cfg)?;
    Ok((report.render(cfg.output_format), report.exit_code()))
}
