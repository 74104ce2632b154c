use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ontodem_hsc::{hsc_knowledge, HscEnv, HscError, HscScenario};
use ontodem_jss::{jss_knowledge, JssEnv, JssError, JssScenario};
use ontodem_observation::AugmentMode;
use ontodem_rl::{
    mean_metric, write_jsonl, Agent, AgentConfig, Environment, EpisodeReport, Knowledge, Method, PlainAgent, RlError,
    RngStreams,
};
use rayon::prelude::*;
use thiserror::Error;

use crate::stats::{mann_whitney_u, median, Alternative, StatsError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("scenario {path}")]
    Jss { path: PathBuf, source: JssError },
    #[error("scenario {path}")]
    Hsc { path: PathBuf, source: HscError },
    #[error("knowledge assets: {0}")]
    Knowledge(String),
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error("run {run_id} ({variant}, seed {seed})")]
    Run { run_id: usize, variant: String, seed: u64, source: RlError },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Rl(#[from] RlError),
}

impl ExperimentError {
    /// Whether the error comes from the experiment description rather than
    /// from running it.
    pub fn is_config(&self) -> bool {
        matches!(self, ExperimentError::Jss { .. } | ExperimentError::Hsc { .. } | ExperimentError::Invalid(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvKind {
    Jss,
    Hsc,
}

impl EnvKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EnvKind::Jss => "jss",
            EnvKind::Hsc => "hsc",
        }
    }

    /// Agent settings used when an experiment gives none.
    pub fn default_agent(self) -> AgentConfig {
        let mut c = AgentConfig::default();
        match self {
            EnvKind::Jss => c.pipeline.augment_mode = AugmentMode::MissingAndNoisy,
            EnvKind::Hsc => {
                c.learning_rate = 0.3;
                c.discount = 0.8;
                c.epsilon = 0.1;
                c.epsilon_decay = 0.995;
            }
        }
        c
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnvKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jss" => Ok(EnvKind::Jss),
            "hsc" => Ok(EnvKind::Hsc),
            other => Err(ExperimentError::Invalid(format!("unknown environment {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scenario {
    Jss(JssScenario),
    Hsc(HscScenario),
}

impl Scenario {
    pub fn load(env: EnvKind, path: &Path) -> Result<Self, ExperimentError> {
        match env {
            EnvKind::Jss => JssScenario::load(path)
                .map(Scenario::Jss)
                .map_err(|source| ExperimentError::Jss { path: path.to_owned(), source }),
            EnvKind::Hsc => HscScenario::load(path)
                .map(Scenario::Hsc)
                .map_err(|source| ExperimentError::Hsc { path: path.to_owned(), source }),
        }
    }

    pub fn env(&self) -> EnvKind {
        match self {
            Scenario::Jss(_) => EnvKind::Jss,
            Scenario::Hsc(_) => EnvKind::Hsc,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Scenario::Jss(s) => &s.name,
            Scenario::Hsc(s) => &s.name,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Scenario::Jss(s) => s.seed,
            Scenario::Hsc(s) => s.seed,
        }
    }

    pub fn episodes(&self) -> usize {
        match self {
            Scenario::Jss(s) => s.episodes,
            Scenario::Hsc(s) => s.episodes,
        }
    }

    pub fn knowledge(&self) -> Result<Knowledge, ExperimentError> {
        match self {
            Scenario::Jss(_) => jss_knowledge().map_err(|e| ExperimentError::Knowledge(e.to_string())),
            Scenario::Hsc(_) => hsc_knowledge().map_err(|e| ExperimentError::Knowledge(e.to_string())),
        }
    }

    fn environment(&self) -> Result<(Box<dyn Environment>, usize), ExperimentError> {
        let invalid = |e: String| ExperimentError::Invalid(e);
        Ok(match self {
            Scenario::Jss(s) => {
                let env = JssEnv::new(s.clone()).map_err(|e| invalid(e.to_string()))?;
                let budget = env.decision_budget();
                (Box::new(env), budget)
            }
            Scenario::Hsc(s) => (Box::new(HscEnv::new(s.clone()).map_err(|e| invalid(e.to_string()))?), s.steps),
        })
    }
}

/// A named agent setup. The empty method set runs the plain learner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variant {
    pub name: String,
    pub methods: BTreeSet<Method>,
}

impl Variant {
    pub const BASELINE: &'static str = "baseline";
    pub const ONTODEM: &'static str = "ontodem";

    pub fn baseline() -> Self {
        Variant { name: Self::BASELINE.into(), methods: BTreeSet::new() }
    }

    pub fn ontodem(methods: impl IntoIterator<Item = Method>) -> Self {
        Variant { name: Self::ONTODEM.into(), methods: methods.into_iter().collect() }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub scenario: Scenario,
    pub variants: Vec<Variant>,
    pub seeds: Vec<u64>,
    pub episodes: usize,
    /// Final episodes averaged into each run's metrics; 0 means all.
    pub tail: usize,
    pub agent: AgentConfig,
    /// Keep per-step transition records.
    pub record_transitions: bool,
}

impl ExperimentSpec {
    /// `seeds` consecutive seeds from the scenario seed, default agent
    /// settings for the environment, all episodes averaged.
    pub fn new(scenario: Scenario, variants: Vec<Variant>, seeds: usize) -> Self {
        let base = scenario.seed();
        ExperimentSpec {
            episodes: scenario.episodes(),
            agent: scenario.env().default_agent(),
            seeds: (base..base + seeds as u64).collect(),
            variants,
            scenario,
            tail: 0,
            record_transitions: false,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.seeds.is_empty() {
            return Err(ExperimentError::Invalid("at least one seed is required".into()));
        }
        if self.variants.is_empty() {
            return Err(ExperimentError::Invalid("at least one variant is required".into()));
        }
        if self.episodes == 0 {
            return Err(ExperimentError::Invalid("episodes must be positive".into()));
        }
        if self.tail > self.episodes {
            return Err(ExperimentError::Invalid(format!("tail {} exceeds {} episodes", self.tail, self.episodes)));
        }
        let mut names = BTreeSet::new();
        for v in &self.variants {
            if !names.insert(&v.name) {
                return Err(ExperimentError::Invalid(format!("duplicate variant {}", v.name)));
            }
        }
        self.agent.validate().map_err(|e| ExperimentError::Invalid(e.to_string()))
    }
}

/// Metrics of one (variant, seed) run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub run_id: usize,
    pub env: EnvKind,
    pub scenario: String,
    pub variant: String,
    pub seed: u64,
    pub metrics: BTreeMap<String, f64>,
    pub reports: Vec<EpisodeReport>,
}

/// Runs one variant under one seed.
pub fn run_one(
    spec: &ExperimentSpec,
    knowledge: &Knowledge,
    variant: &Variant,
    seed: u64,
) -> Result<Vec<EpisodeReport>, RlError> {
    let (mut env, steps) = spec.scenario.environment().map_err(|e| RlError::Environment(e.to_string()))?;
    let mut config = spec.agent.clone().with_methods(variant.methods.iter().copied());
    config.record_transitions = spec.record_transitions;
    let mut streams = RngStreams::new(seed);
    let actions = env.actions().len();
    if variant.methods.is_empty() {
        PlainAgent::new(config, actions)?.run(env.as_mut(), &mut streams, spec.episodes, steps)
    } else {
        Agent::new(config, actions)?.run(env.as_mut(), knowledge, &mut streams, spec.episodes, steps)
    }
}

/// Every (variant, seed) run, in parallel, returned in run-id order:
/// variants in listed order, seeds ascending within each.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunRecord>, ExperimentError> {
    spec.validate()?;
    let knowledge = spec.scenario.knowledge()?;
    let jobs: Vec<(usize, &Variant, u64)> = spec
        .variants
        .iter()
        .flat_map(|v| spec.seeds.iter().map(move |&s| (v, s)))
        .enumerate()
        .map(|(id, (v, s))| (id, v, s))
        .collect();
    let mut records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(run_id, variant, seed)| {
            let reports = run_one(spec, &knowledge, variant, seed).map_err(|source| ExperimentError::Run {
                run_id,
                variant: variant.name.clone(),
                seed,
                source,
            })?;
            let tail = if spec.tail == 0 { reports.len() } else { spec.tail };
            let window = &reports[reports.len() - tail.min(reports.len())..];
            let names: BTreeSet<&String> = window.iter().flat_map(|r| r.metrics.keys()).collect();
            let mut metrics: BTreeMap<String, f64> =
                names.into_iter().filter_map(|m| mean_metric(window, m).map(|v| (m.clone(), v))).collect();
            let total = window.iter().map(|r| r.total_reward).sum::<f64>() / window.len() as f64;
            metrics.entry("total_reward".into()).or_insert(total);
            Ok(RunRecord {
                run_id,
                env: spec.scenario.env(),
                scenario: spec.scenario.name().to_owned(),
                variant: variant.name.clone(),
                seed,
                metrics,
                reports: if spec.record_transitions { reports } else { Vec::new() },
            })
        })
        .collect::<Result<_, ExperimentError>>()?;
    records.sort_by_key(|r| r.run_id);
    Ok(records)
}

/// Long-format CSV: one row per run and metric.
pub fn write_metrics_csv<W: Write>(records: &[RunRecord], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["run_id", "env", "scenario", "variant", "seed", "metric", "value"])?;
    for r in records {
        for (metric, value) in &r.metrics {
            w.write_record([
                r.run_id.to_string(),
                r.env.to_string(),
                r.scenario.clone(),
                r.variant.clone(),
                r.seed.to_string(),
                metric.clone(),
                value.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes the transitions of every run that kept them, one file per run.
pub fn write_transitions(records: &[RunRecord], dir: &Path) -> Result<(), ExperimentError> {
    for r in records.iter().filter(|r| !r.reports.is_empty()) {
        let path = dir.join(format!("transitions_{}_{}_{}.jsonl", r.run_id, r.variant, r.seed));
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        write_jsonl(&r.reports, file)?;
    }
    Ok(())
}

/// Comparison of one metric between two variants.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub metric: String,
    pub baseline_median: f64,
    pub treatment_median: f64,
    /// `(treatment - baseline) / |baseline|` in percent; `None` when the
    /// baseline median is zero.
    pub change_pct: Option<f64>,
    pub p_two_sided: f64,
    /// Treatment larger than baseline.
    pub p_greater: f64,
    /// Treatment smaller than baseline.
    pub p_less: f64,
}

/// Per-metric medians, percentage change and Mann-Whitney p-values of
/// `treatment` against `baseline`. Identical samples get p = 1.
pub fn summarize(records: &[RunRecord], baseline: &str, treatment: &str) -> Vec<SummaryRow> {
    let values = |variant: &str, metric: &str| -> Vec<f64> {
        records.iter().filter(|r| r.variant == variant).filter_map(|r| r.metrics.get(metric).copied()).collect()
    };
    let metrics: BTreeSet<&String> = records.iter().flat_map(|r| r.metrics.keys()).collect();
    let mut rows = Vec::new();
    for metric in metrics {
        let (a, b) = (values(treatment, metric), values(baseline, metric));
        let (Some(mt), Some(mb)) = (median(&a), median(&b)) else {
            continue;
        };
        let p = |alt: Alternative| match mann_whitney_u(&a, &b, alt) {
            Ok(r) => r.p,
            Err(StatsError::DegenerateSamples) => 1.0,
            Err(_) => f64::NAN,
        };
        rows.push(SummaryRow {
            metric: metric.clone(),
            baseline_median: mb,
            treatment_median: mt,
            change_pct: (mb != 0.0).then(|| (mt - mb) / mb.abs() * 100.0),
            p_two_sided: p(Alternative::TwoSided),
            p_greater: p(Alternative::Greater),
            p_less: p(Alternative::Less),
        });
    }
    rows
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "metric",
        "baseline_median",
        "treatment_median",
        "change_pct",
        "p_two_sided",
        "p_greater",
        "p_less",
    ])?;
    for r in rows {
        w.write_record([
            r.metric.clone(),
            r.baseline_median.to_string(),
            r.treatment_median.to_string(),
            r.change_pct.map_or_else(String::new, |c| c.to_string()),
            r.p_two_sided.to_string(),
            r.p_greater.to_string(),
            r.p_less.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
