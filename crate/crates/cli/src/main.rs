//! `covers`: knot groups, branched covers and their exact sequences from the command line.

mod hom;
mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use covers_core::presentation::{tietze_simplify_tracked, DEFAULT_TIETZE_BUDGET};
use covers_core::verify::{check_prop_b, check_prop_c_degree01, check_prop_d, check_splitting};
use covers_core::{
    analyze, builtin, linking_hom, map_ordered, wirtinger, EnumerationLimits, Execution, KnotDiagram, Permutation,
    WirtingerData,
};
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "covers", version, about = "Finite cyclic and permutation branched covers of knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Wirtinger presentation, meridian, longitude and H_1 of a knot
    Group {
        #[command(flatten)]
        knot: KnotArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fundamental group, order and H_1 of branched covers
    Cover(JobArgs),
    /// Check the exact sequences and the splitting criterion on branched covers
    Verify(JobArgs),
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct KnotArgs {
    /// PD code, e.g. "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]" or "unknot"
    #[arg(long)]
    pd: Option<String>,
    /// Braid word whose closure is the knot, e.g. "s1 s1 s1"
    #[arg(long)]
    braid: Option<String>,
    /// Built-in knot: unknot, trefoil, figure-eight, cinquefoil
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct JobArgs {
    #[command(flatten)]
    knot: KnotArgs,
    /// Cyclic covers for n in an inclusive range "A..B", or a single n
    #[arg(long, value_parser = parse_range, conflicts_with = "hom", required_unless_present = "hom")]
    cyclic: Option<CyclicRange>,
    /// Homomorphism file with one "generator = cycles" line per Wirtinger generator
    #[arg(long)]
    hom: Option<PathBuf>,
    #[arg(long, default_value_t = EnumerationLimits::default().max_cosets)]
    max_cosets: usize,
    #[arg(long, default_value_t = EnumerationLimits::default().max_steps)]
    max_steps: u64,
    /// Number of covers computed at once (default: one per core)
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct CyclicRange(Vec<usize>);

fn parse_range(s: &str) -> Result<CyclicRange, String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("{t:?} is not a positive integer"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if lo == 0 {
        return Err("n must be at least 1".into());
    }
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(CyclicRange((lo..=hi).collect()))
}

enum KnotSource {
    Pd(String),
    Braid(String),
    Builtin(String),
}

impl KnotSource {
    fn from_args(a: &KnotArgs) -> Self {
        match (&a.pd, &a.braid, &a.builtin) {
            (Some(p), _, _) => KnotSource::Pd(p.clone()),
            (_, Some(b), _) => KnotSource::Braid(b.clone()),
            (_, _, Some(n)) => KnotSource::Builtin(n.clone()),
            _ => unreachable!("clap requires one knot source"),
        }
    }

    fn load(&self) -> Result<KnotDiagram> {
        let d = match self {
            KnotSource::Pd(t) => KnotDiagram::parse_pd(t).context("in --pd")?,
            KnotSource::Braid(t) => KnotDiagram::parse_braid(t).context("in --braid")?,
            KnotSource::Builtin(n) => builtin(n)?,
        };
        Ok(d)
    }

    fn describe(&self) -> String {
        match self {
            KnotSource::Pd(t) => format!("pd {t}"),
            KnotSource::Braid(t) => format!("braid {t}"),
            KnotSource::Builtin(n) => format!("builtin {n}"),
        }
    }
}

enum Mode {
    Cyclic(Vec<usize>),
    Hom(PathBuf),
}

/// Everything one `cover` or `verify` run needs.
struct JobConfig {
    source: KnotSource,
    mode: Mode,
    limits: EnumerationLimits,
    execution: Execution,
    output: OutputArgs,
}

impl JobConfig {
    fn from_args(a: &JobArgs) -> Result<Self> {
        if a.max_cosets == 0 || a.max_steps == 0 {
            bail!("--max-cosets and --max-steps must be positive");
        }
        if a.workers == Some(0) {
            bail!("--workers must be positive");
        }
        let mode = match (&a.cyclic, &a.hom) {
            (Some(ns), None) => Mode::Cyclic(ns.0.clone()),
            (None, Some(p)) => Mode::Hom(p.clone()),
            _ => unreachable!("clap requires exactly one of --cyclic and --hom"),
        };
        Ok(JobConfig {
            source: KnotSource::from_args(&a.knot),
            mode,
            limits: EnumerationLimits { max_cosets: a.max_cosets, max_steps: a.max_steps },
            execution: Execution::from_workers(a.workers),
            output: a.output.clone(),
        })
    }

    /// One `(description, images)` pair per cover to compute.
    fn homomorphisms(&self, w: &WirtingerData) -> Result<Vec<(Value, Vec<Permutation>)>> {
        match &self.mode {
            Mode::Cyclic(ns) => Ok(ns.iter().map(|&n| (json!({ "cyclic": n }), linking_hom(w, n))).collect()),
            Mode::Hom(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let images = hom::parse_hom(&text, &w.pres).with_context(|| format!("in {}", path.display()))?;
                let shown: Vec<String> = images.iter().map(Permutation::to_string).collect();
                Ok(vec![(json!({ "images": shown }), images)])
            }
        }
    }
}

fn knot_summary(source: &KnotSource, d: &KnotDiagram) -> Value {
    json!({
        "source": source.describe(),
        "pd": d.to_string(),
        "crossings": d.crossings().len(),
        "writhe": d.writhe(),
    })
}

fn cmd_group(knot: &KnotArgs) -> Result<Value> {
    let source = KnotSource::from_args(knot);
    let d = source.load()?;
    let w = wirtinger(&d);
    let s = tietze_simplify_tracked(&w.pres, DEFAULT_TIETZE_BUDGET);
    let meridian = &s.generator_images[w.meridian.zero_based()];
    let longitude = w.longitude.substitute_slice(&s.generator_images).expect("longitude uses Wirtinger generators");
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "group",
        "knot": knot_summary(&source, &d),
        "wirtinger": w.pres.to_string(),
        "presentation": s.presentation.to_string(),
        "meridian": s.presentation.display_word(meridian),
        "longitude": s.presentation.display_word(&longitude),
        "h1": s.presentation.abelian_invariants().to_string(),
    }))
}

fn job_header(cfg: &JobConfig, command: &str, d: &KnotDiagram) -> serde_json::Map<String, Value> {
    let mut doc = serde_json::Map::new();
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    doc.insert("command".into(), json!(command));
    doc.insert("knot".into(), knot_summary(&cfg.source, d));
    doc.insert("limits".into(), json!({ "max_cosets": cfg.limits.max_cosets, "max_steps": cfg.limits.max_steps }));
    doc
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        x.extend(y);
    }
    a
}

fn cmd_cover(cfg: &JobConfig) -> Result<Value> {
    let d = cfg.source.load()?;
    let w = wirtinger(&d);
    let homs = cfg.homomorphisms(&w)?;
    let reports = map_ordered(&homs, cfg.execution, |(desc, images)| {
        analyze(&w, images, cfg.limits).map(|r| merge(desc.clone(), serde_json::to_value(r).expect("serializable")))
    });
    let covers: Vec<Value> = reports.into_iter().collect::<Result<_, _>>()?;
    let mut doc = job_header(cfg, "cover", &d);
    doc.insert("covers".into(), Value::Array(covers));
    Ok(Value::Object(doc))
}

/// Verification document and whether every applicable check passed.
fn cmd_verify(cfg: &JobConfig) -> Result<(Value, bool)> {
    let d = cfg.source.load()?;
    let w = wirtinger(&d);
    let homs = cfg.homomorphisms(&w)?;
    let results = map_ordered(&homs, cfg.execution, |(desc, images)| -> Result<(Value, bool)> {
        let b = check_prop_b(&w, images, cfg.limits)?;
        let s = check_splitting(&w, images, cfg.limits)?;
        let dd = check_prop_d(&w, images, cfg.limits)?;
        let c = check_prop_c_degree01(&w, images, cfg.limits)?;
        let passed = b.passed() && s.consistent && dd.passed() && c.passed();
        let v = json!({
            "prop_b": b,
            "splitting": s,
            "prop_d": dd,
            "prop_c_degree_0_1": c,
            "passed": passed,
        });
        Ok((merge(desc.clone(), v), passed))
    });
    let mut checks = Vec::with_capacity(results.len());
    let mut all = true;
    for r in results {
        let (v, ok) = r?;
        all &= ok;
        checks.push(v);
    }
    let mut doc = job_header(cfg, "verify", &d);
    doc.insert("checks".into(), Value::Array(checks));
    doc.insert("all_passed".into(), json!(all));
    Ok((Value::Object(doc), all))
}

fn emit(doc: &Value, output: &OutputArgs) -> Result<()> {
    let text = match output.format {
        Format::Text => render::to_text(doc),
        Format::Json => serde_json::to_string_pretty(doc)? + "\n",
    };
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Group { knot, output } => {
            emit(&cmd_group(&knot)?, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Cover(args) => {
            let cfg = JobConfig::from_args(&args)?;
            emit(&cmd_cover(&cfg)?, &cfg.output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => {
            let cfg = JobConfig::from_args(&args)?;
            let (doc, passed) = cmd_verify(&cfg)?;
            emit(&doc, &cfg.output)?;
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
