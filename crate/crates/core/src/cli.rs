//! Command-line front end. Payloads go to standard output, logs to standard
//! error.
//!
//! Exit codes: 0 success or property holds, 1 property fails, 2 usage or
//! input error, 3 internal limit exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{self, CapacityOptions, Distribution, DEFAULT_QPRIME_MAX};
use crate::channel::{ChannelKind, ChannelSpec};
use crate::construct::{self, Ensemble, EnsembleSpec, SearchMode};
use crate::error::Error;
use crate::exponent::{self, EnsembleKind};
use crate::io;
use crate::verify;

/// Version tag of every JSON payload.
pub const SCHEMA: &str = "sepmac/1";

#[derive(Debug, Parser)]
#[command(name = "sepmac", version, about = "Separable codes for symmetric multiple-access channels")]
pub struct Cli {
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Random seed; defaults to $SEPMAC_SEED, then 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a code property and print a JSON verdict.
    Verify(VerifyArgs),
    /// Evaluate a rate or capacity bound.
    Bound(BoundArgs),
    /// CSV of list-decoding lower bounds for s in 2..=6, L in {1,2}, q in {2,3}.
    Table1(Table1Args),
    /// Find a largest s-separable code.
    Search(SearchArgs),
    /// Draw a random code.
    Gen(GenArgs),
    /// Map a code to a smaller alphabet, keeping list-decoding.
    Reduce(ReduceArgs),
    /// Factor-decode an observed union word.
    Decode(DecodeArgs),
    /// CSV sweep of the random-coding exponent over rates.
    Exponent(ExponentArgs),
    /// Error fraction and L-rare census of a code.
    Stats(StatsArgs),
    /// Exact collision probabilities behind the random-coding bounds.
    Estimates(EstimatesArgs),
    /// CSV of asymptotic reference curves.
    Reference(ReferenceArgs),
}

#[derive(Debug, Args, Serialize)]
#[command(group = clap::ArgGroup::new("property").required(true))]
pub struct VerifyArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub s: usize,
    /// A, B, eras, thr:L, disj or custom:FILE.
    #[arg(long)]
    pub channel: Option<String>,
    #[arg(long, group = "property")]
    pub separable: bool,
    #[arg(long, group = "property")]
    pub le_separable: bool,
    #[arg(long, group = "property")]
    pub frameproof: bool,
    #[arg(long, group = "property")]
    pub hash: bool,
    /// List-decoding with list size L.
    #[arg(long, group = "property", value_name = "L")]
    pub list: Option<usize>,
    /// Split-graph girth condition at this row (1-based prefix length).
    #[arg(long, group = "property", value_name = "SPLIT")]
    pub girth: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Entropy,
    BCapacity,
    CombUpper,
    LdLower,
    LdUpper,
    AUpper,
    /// Random-coding rate lower bound for a channel and input law.
    RandomCoding,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub kind: BoundKind,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long = "L")]
    pub list_size: Option<usize>,
    #[arg(long)]
    pub channel: Option<String>,
    #[arg(long)]
    pub qprime_max: Option<usize>,
    /// Input law for random-coding, comma separated; uniform by default.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long, default_value = "cr")]
    pub ensemble: String,
    /// Report in bits instead of nats.
    #[arg(long)]
    pub bits: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct Table1Args {
    #[arg(long, default_value_t = DEFAULT_QPRIME_MAX)]
    pub qprime_max: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exhaustive,
    Greedy,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub channel: String,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    /// Also write the code found to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    /// cr or fc.
    #[arg(long, default_value = "cr")]
    pub ensemble: String,
    #[arg(long)]
    pub q: usize,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long)]
    pub t: usize,
    /// Symbol law for cr, comma separated; uniform by default.
    #[arg(long)]
    pub p: Option<String>,
    /// Symbol counts for fc, comma separated; as balanced as possible by default.
    #[arg(long)]
    pub composition: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReduceArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// One subset per line, e.g. {0,2}.
    #[arg(long)]
    pub word: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ExponentArgs {
    #[arg(long)]
    pub channel: String,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub q: usize,
    /// Input law, comma separated; uniform by default.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long, default_value = "cr")]
    pub ensemble: String,
    /// Rates, comma separated.
    #[arg(long = "R", conflicts_with = "grid")]
    pub rates: Option<String>,
    /// Rate grid start:stop:count.
    #[arg(long)]
    pub grid: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct StatsArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub channel: String,
    /// Window length for the L-rare census.
    #[arg(long = "L", default_value_t = 1)]
    pub list_size: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct EstimatesArgs {
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub s: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ReferenceArgs {
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub q: usize,
    /// List size or threshold where a curve uses one.
    #[arg(long = "L", default_value_t = 1)]
    pub list_size: usize,
}

/// Why a command did not complete.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Failed(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(Error::TooLarge(_)) => 3,
            CliError::Failed(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Failed(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Serialize)]
struct Envelope<'a, P: Serialize, T: Serialize> {
    schema: &'static str,
    version: &'static str,
    command: &'a str,
    parameters: &'a P,
    payload: T,
    wall_time_ms: f64,
}

fn emit<P: Serialize, T: Serialize>(
    out: &mut dyn Write,
    command: &str,
    parameters: &P,
    payload: T,
    started: Instant,
) -> CliResult<()> {
    let envelope = Envelope {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        command,
        parameters,
        payload,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    let text = serde_json::to_string_pretty(&envelope).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

/// Resolves `A`, `B`, `eras`, `thr:L`, `disj` or `custom:FILE`.
pub fn load_channel(spec: &str, s: usize, q: usize) -> CliResult<ChannelSpec> {
    if let Some(path) = spec.strip_prefix("custom:") {
        let ch = io::read_channel(Path::new(path))?;
        if ch.s() != s || ch.q() != q {
            return Err(usage(format!(
                "channel file is for s={}, q={} but s={s}, q={q} was requested",
                ch.s(),
                ch.q()
            )));
        }
        return Ok(ch);
    }
    let kind = ChannelKind::parse(spec).map_err(|e| usage(e.to_string()))?;
    Ok(ChannelSpec::builtin(kind, s, q)?)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> CliResult<Vec<T>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| usage(format!("bad {what} entry '{tok}'")))
        })
        .collect()
}

fn parse_distribution(text: Option<&str>, q: usize) -> CliResult<Distribution> {
    match text {
        None => Ok(Distribution::uniform(q)),
        Some(t) => {
            let p = Distribution::new(parse_list(t, "probability")?)?;
            if p.q() != q {
                return Err(usage(format!("--p has {} entries, expected q={q}", p.q())));
            }
            Ok(p)
        }
    }
}

fn parse_ensemble(text: &str) -> CliResult<EnsembleKind> {
    EnsembleKind::parse(text).map_err(|e| usage(e.to_string()))
}

/// Seed from the flag, then `SEPMAC_SEED`, then 0.
pub fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("SEPMAC_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("SEPMAC_SEED must be an integer, got '{v}'"))),
        Err(_) => Ok(0),
    }
}

fn write_or_print(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs a parsed command, writing the payload to `out`. Returns the exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> i32 {
    // buffered so the payload can be produced inside a worker pool
    let mut buf: Vec<u8> = Vec::new();
    let result = match cli.threads {
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| dispatch(cli, &mut buf)),
            Err(e) => Err(usage(e.to_string())),
        },
        None => dispatch(cli, &mut buf),
    };
    let result = result.and_then(|code| {
        out.write_all(&buf)?;
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sepmac: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let seed = resolve_seed(cli.seed)?;
    match &cli.command {
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bound(a) => cmd_bound(a, seed, out),
        Command::Table1(a) => cmd_table1(a, out),
        Command::Search(a) => cmd_search(a, seed, out),
        Command::Gen(a) => cmd_gen(a, seed, out),
        Command::Reduce(a) => cmd_reduce(a, out),
        Command::Decode(a) => cmd_decode(a, out),
        Command::Exponent(a) => cmd_exponent(a, out),
        Command::Stats(a) => cmd_stats(a, out),
        Command::Estimates(a) => cmd_estimates(a, out),
        Command::Reference(a) => cmd_reference(a, out),
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let started = Instant::now();
    let code = io::read_code(&a.code)?;
    if !a.separable && a.channel.is_some() {
        return Err(usage("--channel only applies to --separable; the other properties are channel-free"));
    }
    let verdict = if a.separable {
        let spec = a
            .channel
            .as_deref()
            .ok_or_else(|| usage("--separable needs --channel"))?;
        let channel = load_channel(spec, a.s, code.q())?;
        verify::is_separable(&code, a.s, &channel)?
    } else if a.le_separable {
        verify::is_at_most_s_separable(&code, a.s)?
    } else if a.frameproof {
        verify::is_frameproof(&code, a.s)?
    } else if a.hash {
        verify::is_hash(&code, a.s)?
    } else if let Some(l) = a.list {
        verify::is_list_decoding(&code, a.s, l)?
    } else if let Some(split) = a.girth {
        verify::split_graph_girth_check(&code, a.s, split)?
    } else {
        return Err(usage("no property selected"));
    };
    eprintln!("verify: {} holds = {}", verdict.property, verdict.holds);
    let holds = verdict.holds;
    emit(out, "verify", a, verdict, started)?;
    Ok(if holds { 0 } else { 1 })
}

fn need<T: Copy>(value: Option<T>, flag: &str, kind: &str) -> CliResult<T> {
    value.ok_or_else(|| usage(format!("--kind {kind} needs {flag}")))
}

fn cmd_bound(a: &BoundArgs, seed: u64, out: &mut dyn Write) -> CliResult<i32> {
    let started = Instant::now();
    let params = |channel: Option<String>| bounds::BoundParams {
        s: a.s,
        list_size: a.list_size,
        q: a.q,
        channel,
        qprime_max: None,
    };
    let closed = |name: &str, value: f64, channel: Option<String>| bounds::BoundReport {
        name: name.to_string(),
        value,
        params: params(channel),
        witness: None,
        exact: None,
        converged: true,
        flags: Vec::new(),
    };
    let mut report = match a.kind {
        BoundKind::Entropy => {
            let spec = a.channel.as_deref().ok_or_else(|| usage("--kind entropy needs --channel"))?;
            let channel = load_channel(spec, a.s, a.q)?;
            bounds::capacity_entropy_bound(
                &channel,
                CapacityOptions {
                    seed,
                    ..CapacityOptions::default()
                },
            )?
        }
        BoundKind::BCapacity => closed("b-capacity", bounds::capacity_b_closed_form(a.s, a.q)?, None),
        BoundKind::CombUpper => closed("comb-upper", bounds::comb_upper_bound(a.s, a.q)?, None),
        BoundKind::LdLower => bounds::lower_bound_ld(
            a.s,
            need(a.list_size, "--L", "ld-lower")?,
            a.q,
            a.qprime_max.unwrap_or(DEFAULT_QPRIME_MAX),
        )?,
        BoundKind::LdUpper => closed(
            "ld-upper",
            bounds::upper_bound_ld(a.s, need(a.list_size, "--L", "ld-upper")?, a.q)?,
            None,
        ),
        BoundKind::AUpper => closed("a-upper", bounds::upper_bound_a(a.s, a.q)?, None),
        BoundKind::RandomCoding => {
            let spec = a
                .channel
                .as_deref()
                .ok_or_else(|| usage("--kind random-coding needs --channel"))?;
            let channel = load_channel(spec, a.s, a.q)?;
            let p = parse_distribution(a.p.as_deref(), a.q)?;
            let value = exponent::rate_lower_bound_general(&channel, &p, parse_ensemble(&a.ensemble)?)?;
            closed("random-coding", value, Some(channel.kind().name()))
        }
    };
    #[derive(Serialize)]
    struct Payload {
        units: &'static str,
        #[serde(flatten)]
        report: bounds::BoundReport,
    }
    if a.bits {
        report.value /= std::f64::consts::LN_2;
    }
    eprintln!("bound: {} = {}", report.name, report.value);
    let payload = Payload {
        units: if a.bits { "bits" } else { "nats" },
        report,
    };
    emit(out, "bound", a, payload, started)?;
    Ok(0)
}

/// CSV rows of the list-decoding table: `s,L,q,lower_bound,qprime_argmax,upper_bound`.
pub fn table1_csv(qprime_max: usize) -> crate::error::Result<String> {
    let mut text = String::from("s,L,q,lower_bound,qprime_argmax,upper_bound\n");
    for list_size in 1..=2 {
        for q in [2, 3] {
            for s in 2..=6 {
                let r = bounds::lower_bound_ld(s, list_size, q, qprime_max)?;
                let qp = match r.witness {
                    Some(bounds::BoundWitness::QPrime { qprime }) => qprime,
                    _ => unreachable!("ld-lower always reports its argmax"),
                };
                let upper = bounds::upper_bound_ld(s, list_size, q)?;
                text.push_str(&format!("{s},{list_size},{q},{:.4},{qp},{upper:.4}\n", r.value));
            }
        }
    }
    Ok(text)
}

fn cmd_table1(a: &Table1Args, out: &mut dyn Write) -> CliResult<i32> {
    out.write_all(table1_csv(a.qprime_max)?.as_bytes())?;
    Ok(0)
}

fn cmd_search(a: &SearchArgs, seed: u64, out: &mut dyn Write) -> CliResult<i32> {
    let started = Instant::now();
    let channel = load_channel(&a.channel, a.s, a.q)?;
    let mode = match a.mode {
        ModeArg::Exhaustive => SearchMode::Exhaustive,
        ModeArg::Greedy => SearchMode::Greedy,
    };
    let result = construct::max_code_search(&channel, a.n, mode, seed)?;
    eprintln!("search: t* = {} after {} nodes", result.t_star, result.nodes);
    if let Some(path) = &a.out {
        io::write_code(path, &result.code)?;
    }
    #[derive(Serialize)]
    struct Payload {
        #[serde(flatten)]
        result: construct::SearchResult,
        code: Vec<String>,
    }
    let code = io::format_code(&result.code).lines().map(str::to_string).collect();
    emit(out, "search", a, Payload { result, code }, started)?;
    Ok(0)
}

fn balanced_composition(q: usize, n: usize) -> Vec<usize> {
    (0..q).map(|a| n / q + usize::from(a < n % q)).collect()
}

fn cmd_gen(a: &GenArgs, seed: u64, out: &mut dyn Write) -> CliResult<i32> {
    let ensemble = match parse_ensemble(&a.ensemble)? {
        EnsembleKind::Cr => {
            if a.composition.is_some() {
                return Err(usage("--composition applies to the fc ensemble"));
            }
            Ensemble::CompletelyRandom(parse_distribution(a.p.as_deref(), a.q)?)
        }
        EnsembleKind::Fc => {
            if a.p.is_some() {
                return Err(usage("--p applies to the cr ensemble"));
            }
            let counts = match &a.composition {
                Some(text) => parse_list(text, "composition")?,
                None => balanced_composition(a.q, a.n),
            };
            if counts.len() != a.q {
                return Err(usage(format!("composition has {} entries, expected q={}", counts.len(), a.q)));
            }
            Ensemble::FixedComposition(counts)
        }
    };
    let code = construct::random_code(&EnsembleSpec {
        ensemble,
        n: a.n,
        t: a.t,
        seed,
    })?;
    write_or_print(out, a.out.as_deref(), &io::format_code(&code))?;
    Ok(0)
}

fn cmd_reduce(a: &ReduceArgs, out: &mut dyn Write) -> CliResult<i32> {
    let code = io::read_code(&a.code)?;
    let reduced = construct::reduce_alphabet(&code, a.q)?;
    eprintln!(
        "reduce: q {} -> {}, N {} -> {}",
        code.q(),
        reduced.q(),
        code.len(),
        reduced.len()
    );
    write_or_print(out, a.out.as_deref(), &io::format_code(&reduced))?;
    Ok(0)
}

fn cmd_decode(a: &DecodeArgs, out: &mut dyn Write) -> CliResult<i32> {
    let started = Instant::now();
    let code = io::read_code(&a.code)?;
    let word = io::parse_subset_word(&std::fs::read_to_string(&a.word)?, code.q())?;
    let decoded: Vec<usize> = verify::factor_decode(&code, &word)?.into_iter().map(|j| j + 1).collect();
    #[derive(Serialize)]
    struct Payload {
        decoded: Vec<usize>,
    }
    emit(out, "decode", a, Payload { decoded }, started)?;
    Ok(0)
}

fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(usage("--grid must be start:stop:count"));
    };
    let start: f64 = start.parse().map_err(|_| usage("bad grid start"))?;
    let stop: f64 = stop.parse().map_err(|_| usage("bad grid stop"))?;
    let count: usize = count.parse().map_err(|_| usage("bad grid count"))?;
    match count {
        0 => Err(usage("grid count must be positive")),
        1 => Ok(vec![start]),
        _ => Ok((0..count)
            .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
            .collect()),
    }
}

fn cmd_exponent(a: &ExponentArgs, out: &mut dyn Write) -> CliResult<i32> {
    let channel = load_channel(&a.channel, a.s, a.q)?;
    let p = parse_distribution(a.p.as_deref(), a.q)?;
    let ensemble = parse_ensemble(&a.ensemble)?;
    let rates = match (&a.rates, &a.grid) {
        (Some(r), None) => parse_list(r, "rate")?,
        (None, Some(g)) => parse_grid(g)?,
        _ => return Err(usage("give exactly one of --R and --grid")),
    };
    let mut text = String::from("R,E\n");
    for rate in rates {
        let report = exponent::exponent(&channel, &p, rate, ensemble)?;
        if !report.converged {
            eprintln!("exponent: R={rate} did not fully converge");
        }
        text.push_str(&format!("{rate},{:.10}\n", report.value));
    }
    out.write_all(text.as_bytes())?;
    Ok(0)
}

fn cmd_stats(a: &StatsArgs, out: &mut dyn Write) -> CliResult<i32> {
    let started = Instant::now();
    let code = io::read_code(&a.code)?;
    let channel = load_channel(&a.channel, a.s, code.q())?;
    #[derive(Serialize)]
    struct Payload {
        error_fraction: verify::ErrorFractionReport,
        l_rare: verify::LRareReport,
    }
    let payload = Payload {
        error_fraction: verify::error_fraction(&code, a.s, &channel)?,
        l_rare: verify::count_l_rare(&code, a.list_size)?,
    };
    emit(out, "stats", a, payload, started)?;
    Ok(0)
}

fn cmd_estimates(a: &EstimatesArgs, out: &mut dyn Write) -> CliResult<i32> {
    let started = Instant::now();
    let estimates = bounds::proof_probability_estimates(a.q, a.m, a.s)?;
    emit(out, "estimates", a, estimates, started)?;
    Ok(0)
}

fn cmd_reference(a: &ReferenceArgs, out: &mut dyn Write) -> CliResult<i32> {
    let mut text = String::from("name,regime,formula,unit,coefficient,value\n");
    for curve in bounds::reference_asymptotics() {
        let unit = match curve.unit {
            bounds::Unit::LnQ => "ln q",
            bounds::Unit::One => "1",
        };
        text.push_str(&format!(
            "{},\"{}\",\"{}\",{unit},{:.6},{:.6}\n",
            curve.name,
            curve.regime,
            curve.formula,
            curve.coefficient(a.s, a.q, a.list_size),
            curve.value(a.s, a.q, a.list_size)
        ));
    }
    out.write_all(text.as_bytes())?;
    Ok(0)
}
