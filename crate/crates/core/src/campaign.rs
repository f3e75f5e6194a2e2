//! Verification campaigns: run named checks over a grid of dimensions,
//! exponents and primes and collect the verdicts in a fixed order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fib;
use crate::laws::{self, CellLawReport};
use crate::matrix::primes::is_prime;
use crate::modorder::{self, OrderReport};
use crate::pascal;
use crate::report::Verdict;
use crate::spectra;

pub const MAX_DIM: i64 = 64;
pub const MAX_EXPONENT: i64 = 64;
pub const MAX_PRIME: u64 = 1 << 31;
const MAX_WITNESS_CELLS: usize = 16;

macro_rules! laws {
    ($($variant:ident => $id:literal, axes: $axes:expr;)*) => {
        /// Identifier of a verifiable law or theorem.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Law {
            $($variant,)*
        }

        impl Law {
            pub const ALL: &'static [Law] = &[$(Law::$variant,)*];

            pub fn id(self) -> &'static str {
                match self {
                    $(Law::$variant => $id,)*
                }
            }

            fn axes(self) -> Axes {
                match self {
                    $(Law::$variant => $axes,)*
                }
            }
        }

        impl FromStr for Law {
            type Err = Error;

            fn from_str(s: &str) -> Result<Law> {
                match s {
                    $($id => Ok(Law::$variant),)*
                    other => Err(Error::Parse(format!("unknown law `{other}`"))),
                }
            }
        }
    };
}

#[derive(Debug, Clone, Copy)]
struct Axes {
    n: bool,
    e: bool,
    p: bool,
}

const N: Axes = Axes { n: true, e: false, p: false };
const NE: Axes = Axes { n: true, e: true, p: false };
const NP: Axes = Axes { n: true, e: false, p: true };
const E: Axes = Axes { n: false, e: true, p: false };
const P: Axes = Axes { n: false, e: false, p: true };

laws! {
    Mod2 => "mod2", axes: N;
    LeftClosedForm => "left-closed-form", axes: NE;
    SquareRecurrence => "square-recurrence", axes: N;
    CubeRecurrence => "cube-recurrence", axes: N;
    FibRecurrence => "fib-recurrence", axes: NE;
    Border => "border", axes: NE;
    RowExpansion => "row-expansion", axes: N;
    RowPropagation => "row-propagation", axes: NE;
    CoefficientSystem => "coefficient-system", axes: E;
    Inverses => "inverses", axes: N;
    LeftOrder => "left-order", axes: NP;
    ScalarPower => "scalar-power", axes: NP;
    PMinus1 => "p-minus-1", axes: NP;
    PPlus1 => "p-plus-1", axes: NP;
    OrderBound => "order-bound", axes: NP;
    BloomWall => "bloom-wall", axes: P;
    PeriodExactness => "period-exactness", axes: P;
    Identities => "identities", axes: E;
    FibBinomial => "fib-binomial", axes: E;
    EigenConjecture => "eigen-conjecture", axes: N;
}

impl Law {
    /// Whether `(n, e, p)` lies in the law's domain. Grid points outside
    /// it are skipped rather than reported.
    fn applies(self, n: i64, e: i64, p: u64) -> bool {
        match self {
            Law::Mod2 | Law::SquareRecurrence | Law::CubeRecurrence | Law::RowExpansion => n >= 2,
            Law::LeftClosedForm | Law::Inverses | Law::EigenConjecture => n >= 1,
            Law::FibRecurrence => n >= 2 && e >= 1,
            Law::Border => n >= 1 && e >= 1,
            Law::RowPropagation => n >= 2 && e >= 2,
            Law::CoefficientSystem | Law::Identities | Law::FibBinomial => e >= 1,
            Law::LeftOrder | Law::ScalarPower | Law::OrderBound => n >= 2,
            Law::PMinus1 | Law::PPlus1 => n >= 1,
            Law::BloomWall | Law::PeriodExactness => p != 2 && p != 5,
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for Law {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Law {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Inclusive integer range, written `lo..hi` or `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        IntRange { lo, hi }
    }

    fn iter(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl FromStr for IntRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad range `{s}`, expected `lo..hi` or a single integer"));
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (lo.trim(), hi.trim().trim_start_matches('=')),
            None => (s.trim(), s.trim()),
        };
        Ok(IntRange {
            lo: lo.parse().map_err(|_| bad())?,
            hi: hi.parse().map_err(|_| bad())?,
        })
    }
}

impl<'de> Deserialize<'de> for IntRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Pair([i64; 2]),
        }
        match Repr::deserialize(d)? {
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
            Repr::Pair([lo, hi]) => Ok(IntRange { lo, hi }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Plain,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "plain" => Ok(OutputFormat::Plain),
            other => Err(Error::Parse(format!("unknown output format `{other}`"))),
        }
    }
}

fn default_n_range() -> IntRange {
    IntRange::new(2, 8)
}

fn default_e_range() -> IntRange {
    IntRange::new(1, 12)
}

fn default_primes() -> Vec<u64> {
    vec![2, 3, 5, 7, 11, 13]
}

fn default_threads() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub laws: Vec<Law>,
    #[serde(default = "default_n_range")]
    pub n_range: IntRange,
    #[serde(default = "default_e_range")]
    pub e_range: IntRange,
    #[serde(default = "default_primes")]
    pub primes: Vec<u64>,
    #[serde(default)]
    pub output_format: OutputFormat,
    #[serde(default)]
    pub fail_fast: bool,
    #[serde(default = "default_threads")]
    pub threads: usize,
}

impl CampaignConfig {
    pub fn new(laws: Vec<Law>) -> Self {
        CampaignConfig {
            laws,
            n_range: default_n_range(),
            e_range: default_e_range(),
            primes: default_primes(),
            output_format: OutputFormat::default(),
            fail_fast: false,
            threads: default_threads(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: CampaignConfig =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parse(msg));
        if self.laws.is_empty() {
            return bad("at least one law is required".into());
        }
        let IntRange { lo, hi } = self.n_range;
        if lo > hi || lo < 1 || hi > MAX_DIM {
            return bad(format!("n range {lo}..{hi} must be nonempty within 1..{MAX_DIM}"));
        }
        let IntRange { lo, hi } = self.e_range;
        if lo > hi || lo < -MAX_EXPONENT || hi > MAX_EXPONENT {
            return bad(format!(
                "e range {lo}..{hi} must be nonempty within -{MAX_EXPONENT}..{MAX_EXPONENT}"
            ));
        }
        if self.laws.iter().any(|l| l.axes().p) && self.primes.is_empty() {
            return bad("at least one prime is required".into());
        }
        for &p in &self.primes {
            if p >= MAX_PRIME || !is_prime(p) {
                return bad(format!("{p} is not a prime below 2^31"));
            }
        }
        if self.threads == 0 {
            return bad("threads must be at least 1".into());
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        self.sorted_laws()
            .iter()
            .map(|l| l.id())
            .collect::<Vec<_>>()
            .join(",")
    }

    fn sorted_laws(&self) -> Vec<Law> {
        let mut laws = self.laws.clone();
        laws.sort();
        laws.dedup();
        laws
    }

    /// Grid points in `(law, n, e, p)` order.
    fn tasks(&self) -> Vec<Task> {
        let mut primes = self.primes.clone();
        primes.sort_unstable();
        primes.dedup();
        let mut tasks = Vec::new();
        for law in self.sorted_laws() {
            let axes = law.axes();
            let ns: Vec<Option<i64>> = if axes.n { self.n_range.iter().map(Some).collect() } else { vec![None] };
            let es: Vec<Option<i64>> = if axes.e { self.e_range.iter().map(Some).collect() } else { vec![None] };
            let ps: Vec<Option<u64>> = if axes.p { primes.iter().copied().map(Some).collect() } else { vec![None] };
            for &n in &ns {
                for &e in &es {
                    for &p in &ps {
                        if law.applies(n.unwrap_or(1), e.unwrap_or(1), p.unwrap_or(3)) {
                            tasks.push(Task { law, n, e, p });
                        }
                    }
                }
            }
        }
        tasks
    }
}

#[derive(Debug, Clone, Copy)]
struct Task {
    law: Law,
    n: Option<i64>,
    e: Option<i64>,
    p: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub law: String,
    pub params: BTreeMap<String, Value>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub campaign: String,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl CampaignReport {
    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["law", "params", "verdict", "witness"]).expect("in-memory write");
                for c in &self.checks {
                    let witness = c.witness.as_ref().map(Value::to_string).unwrap_or_default();
                    w.write_record([c.law.as_str(), &params_text(&c.params), c.verdict.as_str(), &witness])
                        .expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
            }
            OutputFormat::Plain => {
                let mut out = String::new();
                for c in &self.checks {
                    out.push_str(&format!("{} {}: {}\n", c.law, params_text(&c.params), c.verdict));
                    if let Some(w) = &c.witness {
                        out.push_str(&format!("  witness: {w}\n"));
                    }
                }
                out.push_str(&format!(
                    "{}: {} pass, {} fail\n",
                    self.campaign, self.summary.pass, self.summary.fail
                ));
                out
            }
        }
    }
}

fn params_text(params: &BTreeMap<String, Value>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn cell_outcome(reports: &[CellLawReport]) -> (Verdict, Option<Value>) {
    let failed: Vec<&CellLawReport> = reports.iter().filter(|r| !r.passed()).collect();
    if failed.is_empty() {
        return (Verdict::Pass, None);
    }
    let witness = failed
        .iter()
        .map(|r| {
            json!({
                "law": r.law,
                "checked_cells": r.checked_cells,
                "failing_cells": r.failures.len(),
                "cells": r.failures.iter().take(MAX_WITNESS_CELLS).collect::<Vec<_>>(),
            })
        })
        .collect::<Vec<_>>();
    (Verdict::Fail, Some(Value::Array(witness)))
}

fn order_outcome(report: &OrderReport, ids: &[&str]) -> (Verdict, Option<Value>) {
    let verdict = Verdict::combine(
        report
            .theorem_checks
            .iter()
            .filter(|(id, _)| ids.is_empty() || ids.contains(id))
            .map(|(_, c)| c.verdict),
    );
    let witness = verdict.is_fail().then(|| serde_json::to_value(report).expect("serializes"));
    (verdict, witness)
}

fn bool_outcome(ok: bool, witness: impl FnOnce() -> Value) -> (Verdict, Option<Value>) {
    if ok {
        (Verdict::Pass, None)
    } else {
        (Verdict::Fail, Some(witness()))
    }
}

fn evaluate(task: Task) -> Result<(Verdict, Option<Value>)> {
    let n = task.n.unwrap_or(0) as usize;
    let e = task.e.unwrap_or(0);
    let p = task.p.unwrap_or(0);
    Ok(match task.law {
        Law::Mod2 => {
            let l2 = pascal::build_left(n)?.pow(2)?.to_mod(2)?;
            let r3 = pascal::build_right(n)?.pow(3)?.to_mod(2)?;
            bool_outcome(l2.is_identity() && r3.is_identity(), || {
                json!({ "left_squared_is_identity": l2.is_identity(), "right_cubed_is_identity": r3.is_identity() })
            })
        }
        Law::LeftClosedForm => cell_outcome(&[laws::verify_left_closed_form(n, e)?]),
        Law::SquareRecurrence => cell_outcome(&[laws::verify_square_recurrence(n)?]),
        Law::CubeRecurrence => cell_outcome(&[laws::verify_cube_recurrence(n)?]),
        Law::FibRecurrence => cell_outcome(&[laws::verify_fib_recurrence(n, e)?]),
        Law::Border => cell_outcome(&[laws::verify_border_formulas(n, e)?]),
        Law::RowExpansion => cell_outcome(&laws::verify_row_expansion_23(n)?),
        Law::RowPropagation => cell_outcome(&[laws::verify_row_propagation(n, e)?]),
        Law::CoefficientSystem => {
            let e = e as u64;
            bool_outcome(laws::coefficient_system_matches_fibonacci(e), || {
                let rel = laws::LocalRelation::from_system(e);
                json!({
                    "system": [rel.delta.to_string(), rel.alpha.to_string(), rel.beta.to_string(), rel.gamma.to_string()],
                })
            })
        }
        Law::Inverses => {
            let (l, r) = (pascal::build_left(n)?, pascal::build_right(n)?);
            let (li, ri) = (pascal::left_inverse(n)?, pascal::right_inverse(n)?);
            let checks = [
                l.mul(&li)?.is_identity(),
                li.mul(&l)?.is_identity(),
                r.mul(&ri)?.is_identity(),
                ri.mul(&r)?.is_identity(),
            ];
            bool_outcome(checks.iter().all(|&b| b), || {
                json!({ "left_right_inverse": [checks[0], checks[1]], "right_two_sided": [checks[2], checks[3]] })
            })
        }
        Law::LeftOrder => order_outcome(&modorder::verify_left_order(n, p)?, &[]),
        Law::ScalarPower => order_outcome(&modorder::verify_scalar_power(n, p)?, &[]),
        Law::PMinus1 => order_outcome(&modorder::verify_pminus1(n, p)?, &[modorder::P_MINUS_ONE]),
        Law::PPlus1 => order_outcome(&modorder::verify_pplus1(n, p)?, &[modorder::P_PLUS_ONE]),
        Law::OrderBound => order_outcome(
            &modorder::verify_order_bound(n, p)?,
            &[modorder::ORDER_BOUND, modorder::BOUND_MET],
        ),
        Law::BloomWall => {
            let r = fib::bloom_wall_check(p)?;
            bool_outcome(r.holds(), || serde_json::to_value(&r).expect("serializes"))
        }
        Law::PeriodExactness => {
            let r = fib::period_exactness_check(p)?;
            let witness = r.verdict.is_fail().then(|| serde_json::to_value(&r).expect("serializes"));
            (r.verdict, witness)
        }
        Law::Identities => {
            let r = fib::check_identities(e as u64)?;
            bool_outcome(r.holds(), || serde_json::to_value(&r).expect("serializes"))
        }
        Law::FibBinomial => {
            let via = fib::fib_via_binomials(e as u64)?;
            let direct = fib::fib(e as u64);
            bool_outcome(via == direct, || {
                json!({ "binomial_sum": via.to_string(), "fib": direct.to_string() })
            })
        }
        Law::EigenConjecture => {
            let r = spectra::check_eigen_conjecture(n)?;
            let witness = r.verdict.is_fail().then(|| serde_json::to_value(&r).expect("serializes"));
            (r.verdict, witness)
        }
    })
}

fn run_task(task: Task) -> Check {
    let mut params = BTreeMap::new();
    if let Some(n) = task.n {
        params.insert("n".to_owned(), json!(n));
    }
    if let Some(e) = task.e {
        params.insert("e".to_owned(), json!(e));
    }
    if let Some(p) = task.p {
        params.insert("p".to_owned(), json!(p));
    }
    let (verdict, witness) = match evaluate(task) {
        Ok(outcome) => outcome,
        Err(err) => (Verdict::Fail, Some(json!({ "error": err.to_string() }))),
    };
    Check {
        law: task.law.id().to_owned(),
        params,
        verdict,
        witness,
    }
}

/// Runs every grid point of `config`. With `fail_fast`, stops after the
/// first failing check and returns the report up to and including it.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let tasks = config.tasks();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let chunk = if config.fail_fast { config.threads.max(1) } else { tasks.len().max(1) };
    let mut checks = Vec::with_capacity(tasks.len());
    for batch in tasks.chunks(chunk) {
        let results: Vec<Check> = pool.install(|| batch.par_iter().map(|&t| run_task(t)).collect());
        checks.extend(results);
        if config.fail_fast {
            if let Some(pos) = checks.iter().position(|c| c.verdict.is_fail()) {
                checks.truncate(pos + 1);
                break;
            }
        }
    }
    let fail = checks.iter().filter(|c| c.verdict.is_fail()).count();
    let pass = checks.iter().filter(|c| c.verdict == Verdict::Pass).count();
    Ok(CampaignReport {
        campaign: config.name(),
        checks,
        summary: Summary { pass, fail },
    })
}

/// Parses a comma-separated list of law identifiers.
pub fn parse_laws(text: &str) -> Result<Vec<Law>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}
