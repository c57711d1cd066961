//! The `hilbgw` command line: series tables, identity-check suites and
//! certificates, rendered as JSON, CSV or text.
//!
//! Every run produces a [`Report`]. Output is a pure function of the parsed
//! arguments unless `--timing` is given.

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Read, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{bernoulli, partitions, sigma, Partition};
use crate::genus1::{
    d_prefactor, d_series, d_series_in, d_series_qexp, degree0_identity_check, exxx_check, hodge_family_series,
    nl_coefficient, nl_projection_check, nl_tilde_coefficient, ones_series, table_display_in, table_eval,
    table_eval_in, theorem1_consistency, theorem1_consistency_in, xcce_series, Section5Table, TraceCache,
};
use crate::hilb::{build_md, trn_in, QuantumRing};
use crate::kernel::{Frac, GcdDomain, Mode, Rat, RatFunc, Ring, Specialized, Symbolic, TruncSeries};
use crate::qmodular::lemma_trace_check;
use crate::spectrum::{certify_wronskian, choose_specialization, vieta_check, Eigensystem, Verdict};
use crate::symfun::{
    evaluation_oracle, parse_diffpoly, random_cases, random_point, DiffPoly, Family, LocalizedExpr, OracleCase,
    Rewriter,
};

pub const DEFAULT_SEED: u64 = 2024;

/// Specializations used by check suites, in order; `--fast` keeps the first.
const CHECK_POINTS: [(i64, i64); 2] = [(1, 5), (2, 7)];

#[derive(Debug, Parser)]
#[command(name = "hilbgw", version, about = "Exact genus-1 series, identity checks and certificates for Hilb^n(C^2)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Record wall-clock timings in check reports. Output then varies between runs.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The genus-1 series <D>_1 as an exact rational function.
    Dseries {
        #[command(flatten)]
        range: NRange,
        /// Also expand the q-dependent factor through q^K.
        #[arg(long, value_name = "K")]
        expand: Option<usize>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Tabulated one-point series <mu>_1 for every partition mu of n.
    Tables {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// The Hodge-class family series in Q.
    Hodge {
        #[arg(long, conflicts_with = "g_max")]
        g: Option<u32>,
        /// Every genus from 1 up to this one.
        #[arg(long)]
        g_max: Option<u32>,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// Runs an identity-check suite.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        /// Reduced orders and ranges; every suite keeps at least one item.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        u_order: Option<i32>,
    },
    /// Certificates that the Wronskian of the eigenvalues is nonzero.
    Wronskian {
        #[command(flatten)]
        range: NRange,
        /// Starting q-order of the eigenvalue series.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Symmetric differential polynomials in abstract roots.
    Symfun {
        #[command(subcommand)]
        action: SymfunAction,
    },
    /// Coefficients of the NL projection and its generating identity.
    Nl {
        #[arg(long, default_value_t = 2)]
        g: u32,
        #[arg(long, default_value_t = 12)]
        n_max: u64,
    },
    /// Tr_n with a cross-check against the trace of M_D.
    Trace {
        #[command(flatten)]
        range: NRange,
        #[command(flatten)]
        mode: ModeArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum SymfunAction {
    /// Rewrites a symmetric expression over s_k and 1/Delta. Without EXPR,
    /// reads one expression per nonempty line of stdin.
    Rewrite {
        expr: Option<String>,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Method::Trace)]
        method: Method,
        /// Also compare against explicit random roots.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Trace,
    Clearing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Trace,
    Lemma34,
    Degree0,
    Hodge,
    Section5,
    Exxx,
    Nl,
    Wronskian,
    Symfun,
    All,
}

impl Suite {
    const EACH: [Suite; 9] = [
        Suite::Trace,
        Suite::Lemma34,
        Suite::Degree0,
        Suite::Hodge,
        Suite::Section5,
        Suite::Exxx,
        Suite::Nl,
        Suite::Wronskian,
        Suite::Symfun,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Trace => "trace",
            Suite::Lemma34 => "lemma34",
            Suite::Degree0 => "degree0",
            Suite::Hodge => "hodge",
            Suite::Section5 => "section5",
            Suite::Exxx => "exxx",
            Suite::Nl => "nl",
            Suite::Wronskian => "wronskian",
            Suite::Symfun => "symfun",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct NRange {
    #[arg(long, conflicts_with = "n_max")]
    pub n: Option<u32>,
    /// Every n from the smallest meaningful value up to this one.
    #[arg(long)]
    pub n_max: Option<u32>,
}

impl NRange {
    fn values(&self, min: u32) -> Result<Vec<u32>, CliError> {
        match (self.n, self.n_max) {
            (Some(n), _) if n < min => Err(CliError::Usage(format!("--n must be at least {min}"))),
            (Some(n), _) => Ok(vec![n]),
            (None, Some(m)) if m < min => Err(CliError::Usage(format!("--n-max must be at least {min}"))),
            (None, Some(m)) => Ok((min..=m).collect()),
            (None, None) => Err(CliError::Usage("one of --n or --n-max is required".into())),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModeArgs {
    /// Fix (t1, t2), e.g. `1,5` or `3/7,-2/5`; q stays symbolic.
    #[arg(long, value_name = "T1,T2", allow_hyphen_values = true, conflicts_with = "symbolic")]
    pub specialize: Option<Point>,
    /// Keep t1, t2 symbolic, including for expensive trace combinations.
    #[arg(long)]
    pub symbolic: bool,
}

impl ModeArgs {
    fn spec(&self) -> ModeSpec {
        match &self.specialize {
            Some(p) => ModeSpec::Specialized { t1: p.t1.clone(), t2: p.t2.clone() },
            None => ModeSpec::Symbolic,
        }
    }
}

/// A rational specialization `t1,t2` with both coordinates nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub t1: Rat,
    pub t2: Rat,
}

impl FromStr for Point {
    type Err = String;
    fn from_str(s: &str) -> Result<Point, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected T1,T2, found {s:?}"))?;
        let t1: Rat = a.parse().map_err(|_| format!("invalid rational {a:?}"))?;
        let t2: Rat = b.parse().map_err(|_| format!("invalid rational {b:?}"))?;
        if t1.is_zero() || t2.is_zero() {
            return Err("t1 and t2 must be nonzero".into());
        }
        Ok(Point { t1, t2 })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ModeSpec {
    Symbolic,
    Specialized { t1: Rat, t2: Rat },
}

/// The normalized configuration of a run, echoed as `params`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub g: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_order: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub fast: bool,
    pub seed: u64,
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl RunConfig {
    fn new(cli: &Cli, subcommand: &str) -> Self {
        RunConfig {
            subcommand: subcommand.into(),
            suite: None,
            n: Vec::new(),
            g: Vec::new(),
            order: None,
            u_order: None,
            mode: None,
            method: None,
            fast: false,
            seed: cli.seed,
            format: cli.format,
            out: cli.out.as_ref().map(|p| p.display().to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesOut {
    pub var: String,
    /// Coefficients are known through `var^order`.
    pub order: usize,
    /// Overall factor multiplying the series, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<String>,
    pub coefficients: Vec<Rat>,
}

impl SeriesOut {
    fn new(s: &TruncSeries<Rat>, factor: Option<String>) -> Self {
        SeriesOut {
            var: s.var().name().into(),
            order: s.order().unwrap_or(s.coeffs().len().saturating_sub(1)),
            factor,
            coefficients: s.coeffs().to_vec(),
        }
    }
}

impl fmt::Display for SeriesOut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = &self.factor {
            write!(f, "({c}) * ")?;
        }
        f.write_str("(")?;
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*{}", self.var)?,
                _ => write!(f, "({c})*{}^{k}", self.var)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O({}^{}))", self.var, self.order + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultItem {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
    pub provenance: String,
}

impl ResultItem {
    fn value(id: impl Into<String>, value: impl fmt::Display, provenance: impl Into<String>) -> Self {
        ResultItem {
            id: id.into(),
            value: Some(value.to_string()),
            series: None,
            certificate: None,
            provenance: provenance.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    pub id: String,
    pub status: Status,
    /// The offending index or coefficient on failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckItem>,
    pub verdict: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: RunConfig,
    pub results: Vec<ResultItem>,
    pub checks: Option<CheckReport>,
    pub version: String,
}

impl Report {
    /// 0 when every check passed (or there were none), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match &self.checks {
            Some(c) if !c.passed() => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn usage(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// One independent unit of a check suite.
pub struct CheckJob {
    pub id: String,
    run: Box<dyn Fn() -> Result<(), String> + Send + Sync>,
}

impl CheckJob {
    pub fn new(id: impl Into<String>, run: impl Fn() -> Result<(), String> + Send + Sync + 'static) -> Self {
        CheckJob { id: id.into(), run: Box::new(run) }
    }
}

fn job(id: impl Into<String>, run: impl Fn() -> Result<(), String> + Send + Sync + 'static) -> CheckJob {
    CheckJob::new(id, run)
}

fn ensure(ok: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    match p.downcast::<String>() {
        Ok(s) => format!("panicked: {s}"),
        Err(p) => match p.downcast::<&str>() {
            Ok(s) => format!("panicked: {s}"),
            Err(_) => "panicked".into(),
        },
    }
}

/// Runs jobs in parallel; the report lists them in the given order.
pub fn run_jobs(suite: &str, seed: u64, jobs: Vec<CheckJob>, timing: bool) -> CheckReport {
    let start = Instant::now();
    let checks: Vec<CheckItem> = jobs
        .into_par_iter()
        .map(|j| {
            let t = Instant::now();
            let r = catch_unwind(AssertUnwindSafe(|| (j.run)())).unwrap_or_else(|p| Err(panic_message(p)));
            let millis = timing.then(|| t.elapsed().as_millis() as u64);
            match r {
                Ok(()) => CheckItem { id: j.id, status: Status::Pass, witness: None, millis },
                Err(w) => CheckItem { id: j.id, status: Status::Fail, witness: Some(w), millis },
            }
        })
        .collect();
    let verdict = if checks.iter().all(|c| c.status == Status::Pass) { Status::Pass } else { Status::Fail };
    CheckReport {
        suite: suite.into(),
        seed,
        checks,
        verdict,
        timing_ms: timing.then(|| start.elapsed().as_millis() as u64),
    }
}

/// Sizes of a check suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub fast: bool,
    pub n_max: Option<u32>,
    pub order: Option<usize>,
    pub u_order: Option<i32>,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn full(seed: u64) -> Self {
        SuiteConfig { fast: false, n_max: None, order: None, u_order: None, seed }
    }

    fn pick<T>(&self, fast: T, full: T) -> T {
        if self.fast {
            fast
        } else {
            full
        }
    }

    fn points(&self) -> Vec<(Rat, Rat)> {
        let k = self.pick(1, CHECK_POINTS.len());
        CHECK_POINTS[..k].iter().map(|&(a, b)| (Rat::from(a), Rat::from(b))).collect()
    }
}

fn trace_identity<M: Mode>(mode: &M, n: u32) -> Result<(), String>
where
    M::S: fmt::Display,
{
    let lhs = build_md(mode, n).trace();
    let rhs = mode.t1().add_ref(&mode.t2()).mul_ref(&trn_in(mode, n));
    ensure(lhs == rhs, || format!("trace(M_D) = {lhs}, (t1+t2) Tr_n = {rhs}"))
}

fn point_label(t1: &Rat, t2: &Rat) -> String {
    format!("t=({t1},{t2})")
}

fn factorial(k: u32) -> Rat {
    (1..=k).fold(Rat::one(), |a, j| a * Rat::from(j))
}

/// The jobs of one suite.
pub fn suite_jobs(suite: Suite, c: &SuiteConfig) -> Vec<CheckJob> {
    let mut jobs = Vec::new();
    match suite {
        Suite::All => {
            for s in Suite::EACH {
                jobs.extend(suite_jobs(s, c));
            }
        }
        Suite::Trace => {
            let top = c.n_max.unwrap_or(c.pick(5, 7));
            let symbolic_top = top.min(c.pick(4, 5));
            for n in 1..=symbolic_top {
                jobs.push(job(format!("trace/n={n}/symbolic"), move || trace_identity(&Symbolic, n)));
            }
            for n in symbolic_top + 1..=top {
                for (t1, t2) in c.points() {
                    let id = format!("trace/n={n}/{}", point_label(&t1, &t2));
                    jobs.push(job(id, move || trace_identity(&Specialized::new(t1.clone(), t2.clone()), n)));
                }
            }
            for n in 1..=c.pick(3, 4) {
                jobs.push(job(format!("trace/commutativity/n={n}/symbolic"), move || {
                    let ring = QuantumRing::new(&Symbolic, n).map_err(|e| e.to_string())?;
                    ring.commutativity_check().map_err(|(a, b)| format!("{a} and {b} do not commute"))
                }));
            }
        }
        Suite::Lemma34 => {
            let n_max = c.n_max.unwrap_or(c.pick(4, 7));
            let u_order = c.u_order.unwrap_or(c.pick(5, 11));
            jobs.push(job(format!("lemma34/n-max={n_max}/u-order={u_order}"), move || {
                lemma_trace_check(n_max, u_order).map(|_| ()).map_err(|m| m.to_string())
            }));
        }
        Suite::Degree0 => {
            let q = c.order.unwrap_or(c.pick(6, 12));
            jobs.push(job(format!("degree0/Q-order={q}"), move || {
                let r = degree0_identity_check(q).map_err(|m| m.to_string())?;
                ensure(r.m0_is_partition_series, || "m^0 part differs from the partition series".into())?;
                ensure(r.theorem1_at_q0, || "q = 0 values of <D>_1 differ from the degree-0 series".into())
            }));
        }
        Suite::Hodge => {
            let order = c.order.unwrap_or(c.pick(6, 12));
            jobs.push(job(format!("hodge/g=1/Q-order={order}"), move || {
                let h = hodge_family_series(1, order);
                for k in 0..=order {
                    let e2 = if k == 0 { Rat::one() } else { Rat::from(-24) * sigma(1, k as u64) };
                    let want = e2 / Rat::from(-576);
                    let got = h.coeff(k).expect("within order");
                    ensure(got == want, || format!("Q^{k}: {got} vs {want}"))?;
                }
                Ok(())
            }));
            jobs.push(job("hodge/g=2/constant", || {
                let got = hodge_family_series(2, 0).coeff(0).expect("constant term");
                ensure(got == Rat::new(1, 69120), || format!("constant term {got}"))
            }));
            for g in 2..=c.pick(4, 6) {
                jobs.push(job(format!("hodge/g={g}/Q-order={order}"), move || {
                    let h = hodge_family_series(g, order);
                    let w = bernoulli(2 * g as usize - 2).abs() / factorial(2 * g - 2) / Rat::from(24);
                    for k in 1..=order {
                        let want = &w * &sigma(2 * g as i32 - 1, k as u64);
                        let got = h.coeff(k).expect("within order");
                        ensure(got == want, || format!("Q^{k}: {got} vs {want}"))?;
                    }
                    Ok(())
                }));
            }
        }
        Suite::Section5 => {
            jobs.push(job("section5/well-formed", || {
                let issues = Section5Table::builtin().validate();
                ensure(issues.is_empty(), || issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))
            }));
            jobs.push(job("section5/ones", || {
                for n in 2..=5 {
                    let got = table_eval(&Partition::ones(n)).map_err(|e| e.to_string())?.value;
                    let want = ones_series(n).value();
                    ensure(got == want, || format!("n = {n}: {got} vs {want}"))?;
                }
                Ok(())
            }));
            for n in 2..=4 {
                jobs.push(job(format!("section5/hook/n={n}/symbolic"), move || {
                    let ok = theorem1_consistency(n).map_err(|e| e.to_string())?;
                    ensure(ok, || format!("<(2,1^{})>_1 differs from -<D>_1", n - 2))
                }));
            }
            jobs.push(job("section5/t-symmetry", || {
                for e in Section5Table::builtin().entries() {
                    let mut forms: Vec<&RatFunc> = e.closed.iter().collect();
                    forms.push(&e.constant);
                    forms.extend(e.terms.iter().map(|t| &t.coeff));
                    if let Some(f) = forms.into_iter().find(|f| f.swap_t() != **f) {
                        return Err(format!("{}: {f}", e.mu));
                    }
                }
                for n in 1..=8 {
                    let d = d_series(n);
                    ensure(d.swap_t() == d, || format!("<D>_1 at n = {n}"))?;
                }
                Ok(())
            }));
            for (t1, t2) in c.points() {
                jobs.push(job(format!("section5/n=5/{}", point_label(&t1, &t2)), move || {
                    let mut cache = TraceCache::new(Specialized::new(t1.clone(), t2.clone()));
                    for mu in partitions(5) {
                        let v = table_eval_in(&mut cache, &mu).map_err(|e| e.to_string())?.value;
                        if let Some(shown) = table_display_in(&cache, &mu).map_err(|e| e.to_string())? {
                            ensure(v == shown, || format!("{mu}: combination {v} vs closed form {shown}"))?;
                        }
                    }
                    let ok = theorem1_consistency_in(&mut cache, 5).map_err(|e| e.to_string())?;
                    ensure(ok, || "<(2,1,1,1)>_1 differs from -<D>_1".into())
                }));
            }
        }
        Suite::Exxx => {
            let n_max = c.n_max.unwrap_or(c.pick(5, 8));
            jobs.push(job(format!("exxx/n-max={n_max}"), move || {
                exxx_check(n_max).map(|_| ()).map_err(|n| format!("first failing n = {n}"))
            }));
            let g_max = c.pick(3, 4);
            jobs.push(job(format!("exxx/xcce/g-max={g_max}/n-max={n_max}"), move || {
                xcce_series(g_max, n_max).map(|_| ()).map_err(|m| m.to_string())
            }));
        }
        Suite::Nl => {
            let n_max = c.n_max.unwrap_or(c.pick(6, 12)) as u64;
            for g in 1..=4 {
                jobs.push(job(format!("nl/g={g}/n-max={n_max}"), move || {
                    nl_projection_check(g, n_max).map_err(|m| format!("Q^{}: {} vs {}", m.n, m.lhs, m.rhs))
                }));
            }
        }
        Suite::Wronskian => {
            let top = c.n_max.unwrap_or(c.pick(4, 7));
            let order = c.order;
            for n in 2..=top {
                jobs.push(job(format!("wronskian/n={n}/certificate"), move || {
                    let cert = certify_wronskian(n, order).map_err(|e| e.to_string())?;
                    ensure(cert.verdict == Verdict::Pass, || format!("no nonzero coefficient through q^{}", cert.q_order))
                }));
            }
            for n in 1..=top {
                jobs.push(job(format!("wronskian/n={n}/vieta"), move || {
                    let (t1, t2) = choose_specialization(n, 64).map_err(|e| e.to_string())?;
                    let d = partitions(n).len();
                    let sys = Eigensystem::new(n, &t1, &t2, 2 * d).map_err(|e| e.to_string())?;
                    vieta_check(&sys).map_err(|m| format!("{} at {}: {m:?}", n, point_label(&t1, &t2)))
                }));
            }
        }
        Suite::Symfun => {
            let count = c.pick(20, 200);
            let cases = random_cases(count, c.seed);
            for n in 2..=4u32 {
                for m in 1..=2usize {
                    let group: Vec<OracleCase> =
                        cases.iter().filter(|k| k.n() == n && k.nvars() == m).cloned().collect();
                    let id = format!("symfun/n={n}/m={m}/cases={}", group.len());
                    jobs.push(job(id, move || {
                        let mut rw = Rewriter::new(n);
                        for k in &group {
                            let e = rw.rewrite(&k.input).map_err(|e| format!("{}: {e}", k.input))?;
                            let r = evaluation_oracle(&k.input, &e, &k.family, &k.point)
                                .map_err(|e| format!("{}: {e}", k.input))?;
                            ensure(r.agrees(), || {
                                format!("{}: direct {} vs rewritten {}", k.input, r.direct, r.rewritten)
                            })?;
                        }
                        Ok(())
                    }));
                }
            }
        }
    }
    jobs
}

fn mode_display(mode: &ModeSpec, f: &RatFunc) -> Result<String, CliError> {
    match mode {
        ModeSpec::Symbolic => Ok(f.to_string()),
        ModeSpec::Specialized { t1, t2 } => f
            .specialize(t1, t2)
            .map(|v| v.to_string())
            .ok_or_else(|| CliError::Usage(format!("(t1, t2) = ({t1}, {t2}) is a pole"))),
    }
}

fn cmd_dseries(range: &NRange, expand: Option<usize>, mode: &ModeSpec) -> Result<Vec<ResultItem>, CliError> {
    let mut out = Vec::new();
    for n in range.values(1)? {
        let value = match mode {
            ModeSpec::Symbolic => d_series(n).to_string(),
            ModeSpec::Specialized { t1, t2 } => {
                d_series_in(&Specialized::new(t1.clone(), t2.clone()), n).map_err(usage)?.to_string()
            }
        };
        let mut item = ResultItem::value(format!("dseries/n={n}"), value, "closed-formula");
        if let Some(k) = expand {
            let s = d_series_qexp(n, k).map_err(usage)?;
            item.series = Some(SeriesOut::new(&s, Some(mode_display(mode, &d_prefactor())?)));
        }
        out.push(item);
    }
    Ok(out)
}

fn tables_in<D: GcdDomain, M: Mode<S = Frac<D>>>(
    mut cache: TraceCache<D, M>,
    n: u32,
    evaluate: bool,
    seed: u64,
) -> Result<(Vec<ResultItem>, Option<CheckReport>), CliError>
where
    Frac<D>: fmt::Display,
{
    let table = Section5Table::builtin();
    let mut results = Vec::new();
    let mut checks = Vec::new();
    let check = |id: String, ok: bool, witness: String| CheckItem {
        id,
        status: if ok { Status::Pass } else { Status::Fail },
        witness: (!ok).then_some(witness),
        millis: None,
    };
    for mu in partitions(n) {
        let e = table.get(&mu).ok_or_else(|| CliError::Usage(format!("no tabulated series for n = {n}")))?;
        let id = format!("tables/{mu}");
        if !e.is_trace_combination() || evaluate {
            let v = table_eval_in(&mut cache, &mu).map_err(usage)?;
            if e.is_trace_combination() {
                if let Some(shown) = table_display_in(&cache, &mu).map_err(usage)? {
                    let ok = shown == v.value;
                    checks.push(check(format!("{id}/closed-form"), ok, format!("{} vs {}", v.value, shown)));
                }
            }
            results.push(ResultItem::value(id.clone(), &v.value, v.source.to_string()));
        } else if let Some(shown) = table_display_in(&cache, &mu).map_err(usage)? {
            results.push(ResultItem::value(id.clone(), shown, "table"));
        } else {
            let mut parts = vec![format!("({})", e.constant)];
            parts.extend(e.terms.iter().map(|t| t.to_string()));
            results.push(ResultItem::value(id.clone(), parts.join(" + "), "trace-combo-unevaluated"));
        }
        if mu == Partition::hook(n) && n >= 2 && (!e.is_trace_combination() || evaluate) {
            let ok = theorem1_consistency_in(&mut cache, n).map_err(usage)?;
            checks.push(check(format!("{id}/minus-dseries"), ok, format!("{mu} differs from -<D>_1")));
        }
    }
    let report = (!checks.is_empty()).then(|| {
        let verdict = if checks.iter().all(|c| c.status == Status::Pass) { Status::Pass } else { Status::Fail };
        CheckReport { suite: "tables".into(), seed, checks, verdict, timing_ms: None }
    });
    Ok((results, report))
}

fn cmd_trace<M: Mode + 'static>(mode: &M, ns: &[u32], seed: u64, timing: bool) -> (Vec<ResultItem>, CheckReport)
where
    M::S: fmt::Display,
{
    let results = ns.iter().map(|&n| ResultItem::value(format!("Tr/n={n}"), trn_in(mode, n), "cot-basis")).collect();
    let jobs = ns
        .iter()
        .map(|&n| {
            let mode = mode.clone();
            job(format!("trace/n={n}"), move || trace_identity(&mode, n))
        })
        .collect();
    (results, run_jobs("trace", seed, jobs, timing))
}

fn read_expressions(expr: &Option<String>) -> Result<Vec<String>, CliError> {
    match expr {
        Some(e) => Ok(vec![e.clone()]),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            let lines: Vec<String> = s.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect();
            if lines.is_empty() {
                return Err(CliError::Usage("no expression given on the command line or stdin".into()));
            }
            Ok(lines)
        }
    }
}

/// Three random root families in as many variables as the input differentiates.
fn symfun_oracle(input: &DiffPoly, expr: &LocalizedExpr, n: u32, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let m = input.symbols().map(|s| s.deriv().len()).max().unwrap_or(0).max(1);
    for _ in 0..3 {
        let family = Family::random(n, m, 3, rng);
        let point = loop {
            let z = random_point(m, rng);
            if !family.discriminant(&z).is_zero() {
                break z;
            }
        };
        let r = evaluation_oracle(input, expr, &family, &point).map_err(|e| e.to_string())?;
        ensure(r.agrees(), || format!("direct {} vs rewritten {}", r.direct, r.rewritten))?;
    }
    Ok(())
}

/// Builds the report for parsed arguments.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let (name, mut params, results, checks) = match &cli.command {
        Command::Dseries { range, expand, mode } => {
            let mut p = RunConfig::new(cli, "dseries");
            p.n = range.values(1)?;
            p.order = *expand;
            p.mode = Some(mode.spec());
            let r = cmd_dseries(range, *expand, &mode.spec())?;
            ("dseries", p, r, None)
        }
        Command::Tables { n, mode } => {
            let mut p = RunConfig::new(cli, "tables");
            p.n = vec![*n];
            p.mode = Some(mode.spec());
            let (r, c) = match mode.spec() {
                ModeSpec::Specialized { t1, t2 } => {
                    tables_in(TraceCache::new(Specialized::new(t1, t2)), *n, true, cli.seed)?
                }
                ModeSpec::Symbolic => tables_in(TraceCache::new(Symbolic), *n, mode.symbolic, cli.seed)?,
            };
            ("tables", p, r, c)
        }
        Command::Hodge { g, g_max, order } => {
            let gs: Vec<u32> = match (g, g_max) {
                (Some(g), _) => vec![*g],
                (None, Some(m)) => (1..=*m).collect(),
                (None, None) => return Err(CliError::Usage("one of --g or --g-max is required".into())),
            };
            if gs.contains(&0) {
                return Err(CliError::Usage("the genus must be at least 1".into()));
            }
            let mut p = RunConfig::new(cli, "hodge");
            p.g = gs.clone();
            p.order = Some(*order);
            let r = gs
                .iter()
                .map(|&g| ResultItem {
                    id: format!("hodge/g={g}"),
                    value: None,
                    series: Some(SeriesOut::new(&hodge_family_series(g, *order), None)),
                    certificate: None,
                    provenance: "eisenstein".into(),
                })
                .collect();
            ("hodge", p, r, None)
        }
        Command::Check { suite, fast, n_max, order, u_order } => {
            let mut p = RunConfig::new(cli, "check");
            p.suite = Some(*suite);
            p.fast = *fast;
            p.n = n_max.iter().copied().collect();
            p.order = *order;
            p.u_order = *u_order;
            let sc = SuiteConfig { fast: *fast, n_max: *n_max, order: *order, u_order: *u_order, seed: cli.seed };
            let report = run_jobs(suite.name(), cli.seed, suite_jobs(*suite, &sc), cli.timing);
            ("check", p, Vec::new(), Some(report))
        }
        Command::Wronskian { range, order } => {
            let ns = range.values(2)?;
            let mut p = RunConfig::new(cli, "wronskian");
            p.n = ns.clone();
            p.order = *order;
            let certs: Vec<_> = ns.par_iter().map(|&n| certify_wronskian(n, *order)).collect();
            let mut results = Vec::new();
            let mut checks = Vec::new();
            for (n, c) in ns.iter().zip(certs) {
                let c = c.map_err(usage)?;
                let ok = c.verdict == Verdict::Pass;
                checks.push(CheckItem {
                    id: format!("wronskian/n={n}"),
                    status: if ok { Status::Pass } else { Status::Fail },
                    witness: (!ok).then(|| format!("no nonzero coefficient through q^{}", c.q_order)),
                    millis: None,
                });
                results.push(ResultItem {
                    id: format!("wronskian/n={n}"),
                    value: None,
                    series: None,
                    certificate: Some(serde_json::to_value(&c).expect("certificate serializes")),
                    provenance: "eigenvalue-lifting".into(),
                });
            }
            let verdict = if checks.iter().all(|c| c.status == Status::Pass) { Status::Pass } else { Status::Fail };
            let report = CheckReport { suite: "wronskian".into(), seed: cli.seed, checks, verdict, timing_ms: None };
            ("wronskian", p, results, Some(report))
        }
        Command::Symfun { action: SymfunAction::Rewrite { expr, n, method, check } } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let mut p = RunConfig::new(cli, "symfun");
            p.n = vec![*n];
            p.method = Some(*method);
            let mut rw = Rewriter::new(*n);
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut results = Vec::new();
            let mut checks = Vec::new();
            for (k, text) in read_expressions(expr)?.iter().enumerate() {
                let input = parse_diffpoly(text, *n).map_err(|e| CliError::Usage(format!("{text:?}: {e}")))?;
                let out = match method {
                    Method::Trace => rw.rewrite(&input),
                    Method::Clearing => rw.rewrite_by_clearing(&input),
                }
                .map_err(|e| CliError::Usage(format!("{text:?}: {e}")))?;
                let id = format!("symfun/{}", k + 1);
                if *check {
                    let r = symfun_oracle(&input, &out, *n, &mut rng);
                    checks.push(CheckItem {
                        id: format!("{id}/oracle"),
                        status: if r.is_ok() { Status::Pass } else { Status::Fail },
                        witness: r.err(),
                        millis: None,
                    });
                }
                results.push(ResultItem::value(id, &out, format!("rewrite-{}", format!("{method:?}").to_lowercase())));
            }
            let report = (!checks.is_empty()).then(|| {
                let verdict = if checks.iter().all(|c| c.status == Status::Pass) { Status::Pass } else { Status::Fail };
                CheckReport { suite: "symfun".into(), seed: cli.seed, checks, verdict, timing_ms: None }
            });
            ("symfun", p, results, report)
        }
        Command::Nl { g, n_max } => {
            if *g == 0 || *n_max == 0 {
                return Err(CliError::Usage("--g and --n-max must be positive".into()));
            }
            let mut p = RunConfig::new(cli, "nl");
            p.g = vec![*g];
            p.n = vec![*n_max as u32];
            let mut results: Vec<ResultItem> = (1..=*n_max)
                .map(|n| ResultItem::value(format!("nl/g={g}/n={n}"), nl_coefficient(*g, n), "closed-formula"))
                .collect();
            let sign = if g % 2 == 0 { Rat::one() } else { -Rat::one() };
            let mut c = vec![sign / Rat::from(24)];
            c.extend((1..=*n_max).map(|n| nl_tilde_coefficient(*g, n)));
            let s = TruncSeries::new(crate::kernel::Var::Q, *n_max as usize, c);
            results.push(ResultItem {
                id: format!("nl-tilde/g={g}"),
                value: None,
                series: Some(SeriesOut::new(&s, None)),
                certificate: None,
                provenance: "divisor-convolution".into(),
            });
            let report = run_jobs(
                "nl",
                cli.seed,
                vec![job(format!("nl/g={g}/n-max={n_max}"), {
                    let (g, n_max) = (*g, *n_max);
                    move || nl_projection_check(g, n_max).map_err(|m| format!("Q^{}: {} vs {}", m.n, m.lhs, m.rhs))
                })],
                false,
            );
            ("nl", p, results, Some(report))
        }
        Command::Trace { range, mode } => {
            let ns = range.values(1)?;
            let mut p = RunConfig::new(cli, "trace");
            p.n = ns.clone();
            p.mode = Some(mode.spec());
            let (r, c) = match mode.spec() {
                ModeSpec::Specialized { t1, t2 } => cmd_trace(&Specialized::new(t1, t2), &ns, cli.seed, cli.timing),
                ModeSpec::Symbolic => cmd_trace(&Symbolic, &ns, cli.seed, cli.timing),
            };
            ("trace", p, r, Some(c))
        }
    };
    params.subcommand = name.into();
    Ok(Report { command: name.into(), params, results, checks, version: env!("CARGO_PKG_VERSION").into() })
}

fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let params = serde_json::to_string(&r.params).expect("params serialize");
    s.push_str(&format!("# hilbgw {} {}\n", r.command, params));
    for item in &r.results {
        s.push_str(&format!("{} [{}]\n", item.id, item.provenance));
        if let Some(v) = &item.value {
            s.push_str(&format!("  value: {v}\n"));
        }
        if let Some(v) = &item.series {
            s.push_str(&format!("  series: {v}\n"));
        }
        if let Some(v) = &item.certificate {
            s.push_str(&format!("  certificate: {v}\n"));
        }
    }
    if let Some(c) = &r.checks {
        s.push_str(&format!("checks: {} (seed {})\n", c.suite, c.seed));
        for k in &c.checks {
            let t = k.millis.map(|m| format!(" ({m} ms)")).unwrap_or_default();
            match &k.witness {
                Some(w) => s.push_str(&format!("  {} {}{t}: {w}\n", k.status, k.id)),
                None => s.push_str(&format!("  {} {}{t}\n", k.status, k.id)),
            }
        }
        let passed = c.checks.iter().filter(|k| k.status == Status::Pass).count();
        let t = c.timing_ms.map(|m| format!(" in {m} ms")).unwrap_or_default();
        s.push_str(&format!("verdict: {} ({passed}/{} passed){t}\n", c.verdict, c.checks.len()));
    }
    s
}

fn render_csv(r: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |cols: [&str; 4]| w.write_record(cols).expect("in-memory write");
    row(["kind", "id", "value", "provenance"]);
    for item in &r.results {
        if let Some(v) = &item.value {
            row(["value", &item.id, v, &item.provenance]);
        }
        if let Some(v) = &item.series {
            row(["series", &item.id, &v.to_string(), &item.provenance]);
        }
        if let Some(v) = &item.certificate {
            row(["certificate", &item.id, &v.to_string(), &item.provenance]);
        }
    }
    if let Some(c) = &r.checks {
        for k in &c.checks {
            let v = match &k.witness {
                Some(wit) => format!("{}: {wit}", k.status),
                None => k.status.to_string(),
            };
            row(["check", &k.id, &v, &c.suite]);
        }
        row(["verdict", &c.suite, &c.verdict.to_string(), &format!("seed {}", c.seed)]);
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        Format::Csv => render_csv(r),
        Format::Text => render_text(r),
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// output. Returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let text = render(&report, cli.format);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return 2;
        }
    }
    report.exit_code()
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}
