use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ontodem_cli::{
    mann_whitney_u, recommend_methods, run_experiment, summarize, write_metrics_csv, write_summary_csv,
    write_transitions, Alternative, EnvKind, ExperimentError, ExperimentSpec, Preconditions, Scenario, Thresholds,
    TriggerMetrics, Variant,
};
use ontodem_rl::{AgentConfig, Method};
use ontodem_rules::{parse_rules, pretty_print};

#[derive(Parser)]
#[command(name = "ontodem", version, about = "Ontology-driven decision making experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write per-run metrics.
    Run(RunArgs),
    /// Suggest methods for a measured situation.
    Recommend(RecommendArgs),
    /// Inference rule tools.
    Rules {
        #[command(subcommand)]
        command: RulesCommand,
    },
    /// Rank statistics.
    Stats {
        #[command(subcommand)]
        command: StatsCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Baseline,
    Ontodem,
    Both,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_env)]
    env: EnvKind,
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    variant: VariantArg,
    /// Comma-separated methods for the ontodem variant; overrides the config.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<Method>,
    /// Number of seeds, counted up from the scenario seed.
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Episodes per run; defaults to the scenario's.
    #[arg(long)]
    episodes: Option<usize>,
    /// Average metrics over the final N episodes only.
    #[arg(long, default_value_t = 0)]
    tail: usize,
    /// Agent configuration JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write per-step transitions as JSON lines.
    #[arg(long)]
    transitions: bool,
}

#[derive(Args)]
struct RecommendArgs {
    /// JSON with the measured trigger metrics.
    #[arg(long)]
    metrics: PathBuf,
    /// JSON overriding default thresholds.
    #[arg(long)]
    thresholds: Option<PathBuf>,
    /// JSON listing available preconditions; all are assumed when absent.
    #[arg(long)]
    preconditions: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RulesCommand {
    /// Parse and safety-check a rule file.
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Mann-Whitney U test of sample A against sample B.
    Mwu {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Vec<f64>,
        #[arg(long, default_value = "two-sided")]
        alt: Alternative,
    },
}

fn parse_env(s: &str) -> Result<EnvKind, String> {
    s.parse().map_err(|e: ExperimentError| e.to_string())
}

/// Failure classes mapped to exit codes.
enum Failure {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let scenario = Scenario::load(args.env, &args.scenario).map_err(|e| Failure::Config(e.into()))?;
    let mut agent: AgentConfig = match &args.config {
        Some(p) => read_json(p)?,
        None => args.env.default_agent(),
    };
    let methods: BTreeSet<Method> = if args.methods.is_empty() {
        std::mem::take(&mut agent.methods)
    } else {
        args.methods.iter().copied().collect()
    };
    let ontodem = || -> anyhow::Result<Variant> {
        if methods.is_empty() {
            bail!("the ontodem variant needs at least one method (--methods or config)");
        }
        Ok(Variant::ontodem(methods.iter().copied()))
    };
    let variants = match args.variant {
        VariantArg::Baseline => vec![Variant::baseline()],
        VariantArg::Ontodem => vec![ontodem()?],
        VariantArg::Both => vec![Variant::baseline(), ontodem()?],
    };
    let mut spec = ExperimentSpec::new(scenario, variants, args.seeds);
    spec.agent = agent;
    spec.tail = args.tail;
    spec.record_transitions = args.transitions;
    if let Some(e) = args.episodes {
        spec.episodes = e;
    }
    spec.validate().map_err(|e| Failure::Config(e.into()))?;

    let records = run_experiment(&spec).map_err(|e| {
        if e.is_config() {
            Failure::Config(e.into())
        } else {
            Failure::Runtime(e.into())
        }
    })?;
    let write = || -> anyhow::Result<()> {
        fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
        write_metrics_csv(&records, BufWriter::new(File::create(args.out.join("metrics.csv"))?))?;
        if spec.variants.len() == 2 {
            let rows = summarize(&records, Variant::BASELINE, Variant::ONTODEM);
            write_summary_csv(&rows, BufWriter::new(File::create(args.out.join("summary.csv"))?))?;
            write_summary_csv(&rows, io::stdout().lock())?;
        }
        if spec.record_transitions {
            write_transitions(&records, &args.out)?;
        }
        Ok(())
    };
    write().map_err(Failure::Runtime)?;
    eprintln!("{} runs written to {}", records.len(), args.out.display());
    Ok(())
}

fn recommend(args: RecommendArgs) -> Result<(), Failure> {
    let metrics: TriggerMetrics = read_json(&args.metrics)?;
    let thresholds: Thresholds = match &args.thresholds {
        Some(p) => read_json(p)?,
        None => Thresholds::default(),
    };
    let pre: Preconditions = match &args.preconditions {
        Some(p) => read_json(p)?,
        None => Preconditions::all(),
    };
    let mut out = io::stdout().lock();
    for r in recommend_methods(&metrics, &thresholds, &pre) {
        writeln!(out, "{}\t{}", r.technique, r.reason).map_err(|e| Failure::Runtime(e.into()))?;
    }
    Ok(())
}

fn rules_check(file: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let rules = parse_rules(&text).with_context(|| format!("checking {}", file.display()))?;
    print!("{}", pretty_print(&rules));
    eprintln!("{}: {} rules ok", file.display(), rules.len());
    Ok(())
}

fn mwu(a: &[f64], b: &[f64], alt: Alternative) -> Result<(), Failure> {
    let r = mann_whitney_u(a, b, alt).context("mann-whitney test")?;
    let method = if r.exact { "exact" } else { "normal" };
    println!("u_a={} u_b={} p={} method={method} alternative={alt}", r.u_a, r.u_b, r.p);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Recommend(a) => recommend(a),
        Command::Rules { command: RulesCommand::Check { file } } => rules_check(&file),
        Command::Stats { command: StatsCommand::Mwu { a, b, alt } } => mwu(&a, &b, alt),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
