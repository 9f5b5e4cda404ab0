mod config;
mod grid;
mod pipeline;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use tricurve::dataset::{paper_dataset, PaperRecord, TAGS};
use tricurve::factor::FactorBudget;
use tricurve::families::{FamilyId, FamilyMember};
use tricurve::mestre_nagao::rank_candidates;
use tricurve::triples::Triple;
use tricurve::verify::{scopes, verify_scope, VerifyOptions, EXACT_RANK_NOTE};
use tricurve::{Point, Rational};

use config::{Config, Overrides};
use grid::{parameter_grid, Span};
use pipeline::{is_input_error, process, SCHEMA_VERSION};

const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "tricurve", version, about = "Elliptic curves induced by Diophantine triples")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Flags {
    /// Sieve depth: primes up to N
    #[arg(long = "N", global = true)]
    n: Option<u64>,
    /// Fraction of sieved candidates processed in full
    #[arg(long, global = true)]
    keep: Option<f64>,
    /// Good primes used for the torsion bound
    #[arg(long, global = true)]
    primes: Option<usize>,
    /// Target accuracy of canonical heights
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Naive height bound of the point search
    #[arg(long = "height-bound", global = true)]
    height_bound: Option<f64>,
    /// Work limit for integer factorization
    #[arg(long = "factor-budget", global = true)]
    factor_budget: Option<u64>,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Enable long certifications (Gram regulators of full point sets)
    #[arg(long, global = true)]
    long: bool,
    /// Add wall-clock timings to records
    #[arg(long, global = true)]
    timings: bool,
    /// Flat key=value file with the same keys as the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full pipeline on one triple, e.g. "{1,3,8}"
    Induce { triple: String },
    /// Score a family over a parameter grid and process the best candidates
    Sieve {
        #[arg(long)]
        family: String,
        /// Numerator range a..b
        #[arg(long)]
        num: Span,
        /// Denominator range c..d
        #[arg(long, default_value = "1..1")]
        den: Span,
    },
    /// Re-verify the embedded records
    Verify {
        #[arg(default_value = "all")]
        scope: String,
    },
    /// Print the embedded records as JSON lines
    Dataset {
        #[arg(long)]
        tag: Option<String>,
    },
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            keep: self.keep,
            primes: self.primes,
            eps: self.eps,
            height_bound: self.height_bound,
            factor_budget: self.factor_budget,
            jobs: self.jobs,
            out: self.out.clone(),
            long: self.long,
            timings: self.timings,
        }
    }
}

struct Failure(u8, String);

fn input(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INPUT, msg.into())
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn load_config(flags: &Flags) -> Result<Config, Failure> {
    let mut cfg = Config::default();
    if let Some(path) = &flags.config {
        cfg.apply(&Overrides::from_file(path).map_err(input)?);
    }
    cfg.apply(&flags.overrides());
    cfg.validate().map_err(input)?;
    Ok(cfg)
}

fn emit(cfg: &Config, text: &str) -> Result<(), Failure> {
    let res = match &cfg.out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure(EXIT_FAILURE, format!("write failed: {e}")))
}

fn cmd_induce(cfg: &Config, text: &str) -> Result<u8, Failure> {
    let triple: Triple = text.parse().map_err(|e: tricurve::Error| {
        if is_input_error(&e) {
            input(e.to_string())
        } else {
            Failure(EXIT_FAILURE, e.to_string())
        }
    })?;
    let rec = process(&triple, None, None, cfg);
    emit(cfg, &(rec.to_line() + "\n"))?;
    Ok(if rec.error.is_some() { EXIT_FAILURE } else { 0 })
}

fn cmd_sieve(cfg: &Config, family: &str, num: Span, den: Span) -> Result<u8, Failure> {
    let family: FamilyId = family.parse().map_err(|e: tricurve::Error| usage(e.to_string()))?;
    let members: Vec<FamilyMember> = parameter_grid(num, den)
        .into_iter()
        .filter_map(|p| FamilyMember::new(family, p).ok())
        .collect();
    let triples: Vec<Triple> = members.iter().map(|m| m.triple.clone()).collect();
    let kept = rank_candidates(&triples, cfg.n, cfg.keep);
    let lines: Vec<String> = kept
        .into_par_iter()
        .map(|(i, score)| {
            let m = &members[i];
            process(&m.triple, Some((family, &m.parameter)), Some(score), cfg).to_line()
        })
        .collect();
    let mut text = String::new();
    for l in lines {
        text.push_str(&l);
        text.push('\n');
    }
    emit(cfg, &text)?;
    Ok(0)
}

fn cmd_verify(cfg: &Config, scope: &str) -> Result<u8, Failure> {
    let opts = VerifyOptions {
        long: cfg.long,
        eps: cfg.eps,
        prime_count: cfg.primes,
        budget: FactorBudget(cfg.factor_budget),
    };
    let reports = match verify_scope(scope, &opts) {
        None => return Err(usage(format!("unknown scope {scope:?}; expected one of {}", scopes().join(", ")))),
        Some(Err(e)) => return Err(Failure(EXIT_FAILURE, e.to_string())),
        Some(Ok(r)) => r,
    };
    let mut text = String::new();
    let mut failed = 0;
    for r in &reports {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        failed += usize::from(!r.passed());
        text.push_str(&format!("{verdict} {} {} ({:.2} s)\n", r.scope, r.name, r.seconds));
        for c in &r.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            text.push_str(&format!("    {mark} {}: {}\n", c.name, c.detail));
        }
    }
    text.push_str(&format!("{} of {} records passed (scope {scope})\n", reports.len() - failed, reports.len()));
    text.push_str(&format!("note: {EXACT_RANK_NOTE}\n"));
    emit(cfg, &text)?;
    Ok(if failed == 0 { 0 } else { EXIT_FAILURE })
}

#[derive(Serialize)]
struct DatasetLine<'a> {
    version: u32,
    tag: &'a str,
    name: &'a str,
    family: Option<String>,
    parameter: Option<String>,
    triple: String,
    printed: Option<&'a str>,
    curve: Option<String>,
    torsion: Vec<[String; 2]>,
    points: Vec<[String; 2]>,
    claimed_rank: u32,
}

fn coords(v: &[Point<Rational>]) -> Vec<[String; 2]> {
    v.iter()
        .filter_map(|p| Some([p.x()?.to_string(), p.y()?.to_string()]))
        .collect()
}

fn dataset_line(r: &PaperRecord) -> String {
    let line = DatasetLine {
        version: SCHEMA_VERSION,
        tag: &r.tag,
        name: &r.name,
        family: r.family.as_ref().map(|(f, _)| f.to_string()),
        parameter: r.family.as_ref().map(|(_, p)| p.to_string()),
        triple: r.triple.to_string(),
        printed: r.printed.as_deref(),
        curve: r.curve.as_ref().map(|c| c.to_string()),
        torsion: coords(&r.torsion),
        points: coords(&r.points),
        claimed_rank: r.claimed_rank,
    };
    serde_json::to_string(&line).expect("record serializes")
}

fn cmd_dataset(cfg: &Config, tag: Option<&str>) -> Result<u8, Failure> {
    if let Some(t) = tag {
        if !TAGS.contains(&t) {
            return Err(usage(format!("unknown tag {t:?}; expected one of {}", TAGS.join(", "))));
        }
    }
    let data = paper_dataset().map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    let mut text = String::new();
    for r in data.iter().filter(|r| tag.is_none_or(|t| r.tag == t)) {
        text.push_str(&dataset_line(r));
        text.push('\n');
    }
    emit(cfg, &text)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let cfg = load_config(&cli.flags)?;
    if let Some(j) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    }
    match &cli.cmd {
        Cmd::Induce { triple } => cmd_induce(&cfg, triple),
        Cmd::Sieve { family, num, den } => cmd_sieve(&cfg, family, *num, *den),
        Cmd::Verify { scope } => cmd_verify(&cfg, scope),
        Cmd::Dataset { tag } => cmd_dataset(&cfg, tag.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
