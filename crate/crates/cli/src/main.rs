//! `virasoro` — normal forms, quotient-module actions, induced-module
//! descents, and named verification suites, all over exact rationals.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use virasoro_cli::parser::parse;
use virasoro_cli::suites::{run_suite, SuiteConfig, SuiteReport, DEFAULT_MAX_WEIGHT, DEFAULT_SEED};
use virasoro_core::induced::{descend, InducedElement};
use virasoro_core::quotient::{act_word, NElement, QuotientSpec};
use virasoro_core::{Scalar, UElement};

#[derive(Parser)]
#[command(name = "virasoro", version, about = "Exact Virasoro-algebra computations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the PBW normal form of an expression.
    Nf { expr: String },
    /// Apply a nonnegative generator to an element of a quotient module.
    ///
    /// The expression is read as an operator word in the nonnegative
    /// generators applied to the cyclic vector.
    Act {
        /// Path to a spec file `{"k":.., "S":[..], "lambda":{..}}`.
        #[arg(long)]
        spec: PathBuf,
        /// Index of the acting generator.
        #[arg(long)]
        gen: u32,
        expr: String,
    },
    /// Apply a generator (or `c`) to an element of an induced module.
    IndAct {
        #[arg(long)]
        spec: PathBuf,
        /// Central charge, e.g. `1/2`.
        #[arg(long)]
        theta: String,
        /// Generator index, or `c` for the central generator.
        #[arg(long)]
        gen: String,
        expr: String,
    },
    /// Descend an induced-module element to its bottom layer.
    Descend {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        theta: String,
        expr: String,
    },
    /// Run a named verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_weight: Option<u32>,
        /// Emit the machine-readable report instead of the human summary.
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Nf { expr } => {
            println!("{}", parse(&expr)?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Act { spec, gen, expr } => {
            let spec = load_spec(&spec)?;
            let v = embed_in_quotient(&spec, &parse(&expr)?)?;
            println!("{}", v.act(gen));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::IndAct { spec, theta, gen, expr } => {
            let spec = load_spec(&spec)?;
            let theta = parse_scalar(&theta)?;
            let v = InducedElement::from_operator(theta, spec, &parse(&expr)?);
            let image = if gen == "c" {
                v.act_central()
            } else {
                let index: i64 = gen
                    .parse()
                    .with_context(|| format!("--gen must be an integer or `c`, got `{gen}`"))?;
                v.ind_act(index)
            };
            println!("{image}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Descend { spec, theta, expr } => {
            let spec = load_spec(&spec)?;
            let theta = parse_scalar(&theta)?;
            let v = InducedElement::from_operator(theta, spec, &parse(&expr)?);
            let budget = v
                .leading_term()
                .context("cannot descend from the zero vector")?
                .weight() as u32;
            let outcome = descend(&v, budget).context("descent failed")?;
            println!("bottom: {}", outcome.bottom);
            println!("steps: {}", outcome.steps);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { suite, seed, max_weight, json } => {
            let config = SuiteConfig {
                seed: seed.unwrap_or(DEFAULT_SEED),
                max_weight: max_weight.unwrap_or(DEFAULT_MAX_WEIGHT),
            };
            let report = run_suite(&suite, &config)?;
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                print_human(&report);
            }
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn print_human(report: &SuiteReport) {
    println!(
        "suite {}: {} cases, {} failures (seed {}, {} ms)",
        report.suite,
        report.cases,
        report.failures.len(),
        report.seed,
        report.wall.as_millis()
    );
    for f in &report.failures {
        println!("  FAIL {} [{}] {}", f.case, f.claim, f.detail);
    }
}

/// On-disk spec shape: `{"k":5,"S":[2,4,5],"lambda":{"2":"1","4":"0","5":"1"}}`.
#[derive(serde::Deserialize)]
struct SpecFile {
    k: u32,
    #[serde(rename = "S")]
    marked: Vec<u32>,
    #[serde(default)]
    lambda: BTreeMap<String, Scalar>,
}

fn load_spec(path: &Path) -> Result<QuotientSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read spec file {}", path.display()))?;
    let raw: SpecFile = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse spec file {}", path.display()))?;
    let mut lambda = BTreeMap::new();
    for (key, value) in raw.lambda {
        let index: u32 = key
            .parse()
            .with_context(|| format!("bad lambda index `{key}` in {}", path.display()))?;
        lambda.insert(index, value);
    }
    let marked: BTreeSet<u32> = raw.marked.into_iter().collect();
    QuotientSpec::new(raw.k, marked, lambda)
        .with_context(|| format!("invalid spec in {}", path.display()))
}

fn parse_scalar(text: &str) -> Result<Scalar> {
    Scalar::from_str(text).with_context(|| format!("bad rational `{text}`"))
}

/// Read a normal-form operator element as acting on the quotient's cyclic
/// vector. Central factors and negative indices have no meaning there.
fn embed_in_quotient(spec: &QuotientSpec, u: &UElement) -> Result<NElement> {
    let mut out = NElement::zero(spec.clone());
    for (mono, coeff) in u.terms() {
        if mono.cpow() > 0 {
            bail!("the central generator does not act on the quotient; remove `c` factors");
        }
        let word = mono.word();
        if word.iter().any(|&g| g < 0) {
            bail!("negative generator indices do not act on the quotient");
        }
        let word: Vec<u32> = word.into_iter().map(|g| g as u32).collect();
        out.add_scaled(&act_word(spec, &word), coeff);
    }
    Ok(out)
}
