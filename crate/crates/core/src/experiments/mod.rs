//! Seeded experiment runners and their JSON/CSV/SVG outputs.
//!
//! Each runner is a pure function of an [`ExperimentConfig`]: replications
//! fan out over rayon with per-replication RNG streams, and the report
//! contains no wall-clock or thread information, so a rerun reproduces
//! `report.json` byte for byte.

mod figures;
mod plot;
mod table1;
mod targets;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub use plot::{svg_plot, Series, SeriesStyle};
pub use targets::{
    coloring_times, registered_targets, Check, ColoringTime, Source, Target, TargetCheck,
};

use crate::error::{invalid, Error, Result};
use crate::spectra::LaplacianKind;

/// Registered experiment ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Anchors,
    Table1,
    Fig1,
    Fig3,
    Fig4a,
    Fig4b,
    Fig4c,
    Fig4d,
    Fig5,
    Appendix,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 10] = [
        ExperimentId::Anchors,
        ExperimentId::Table1,
        ExperimentId::Fig1,
        ExperimentId::Fig3,
        ExperimentId::Fig4a,
        ExperimentId::Fig4b,
        ExperimentId::Fig4c,
        ExperimentId::Fig4d,
        ExperimentId::Fig5,
        ExperimentId::Appendix,
    ];

    /// Ids accepted by the `figures` subcommand.
    pub const FIGURES: [ExperimentId; 7] = [
        ExperimentId::Fig1,
        ExperimentId::Fig3,
        ExperimentId::Fig4a,
        ExperimentId::Fig4b,
        ExperimentId::Fig4c,
        ExperimentId::Fig4d,
        ExperimentId::Fig5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Anchors => "anchors",
            ExperimentId::Table1 => "table1",
            ExperimentId::Fig1 => "fig1",
            ExperimentId::Fig3 => "fig3",
            ExperimentId::Fig4a => "fig4a",
            ExperimentId::Fig4b => "fig4b",
            ExperimentId::Fig4c => "fig4c",
            ExperimentId::Fig4d => "fig4d",
            ExperimentId::Fig5 => "fig5",
            ExperimentId::Appendix => "appendix",
        }
    }

    /// Replications used when the config leaves `reps` unset.
    pub fn default_reps(self) -> usize {
        match self {
            ExperimentId::Anchors | ExperimentId::Table1 | ExperimentId::Fig4a => 1000,
            ExperimentId::Fig1 => 100,
            ExperimentId::Fig3 => 100,
            ExperimentId::Fig5 => 50,
            ExperimentId::Appendix => 10_000,
            ExperimentId::Fig4b | ExperimentId::Fig4c | ExperimentId::Fig4d => 1,
        }
    }

    pub fn default_kind(self) -> LaplacianKind {
        match self {
            ExperimentId::Anchors | ExperimentId::Table1 | ExperimentId::Fig4a => {
                LaplacianKind::RowNormalized
            }
            _ => LaplacianKind::Binary,
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = ExperimentId::ALL.iter().map(|id| id.as_str()).collect();
                invalid(format!(
                    "unknown experiment '{s}' (known: {})",
                    known.join(", ")
                ))
            })
    }
}

pub const DEFAULT_SEED: u64 = 1;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// Everything a run depends on. Echoed verbatim into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<LaplacianKind>,
    /// Experiment-specific overrides, e.g. `p_list`, `sizes`, `rel_epsilon`.
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub params: Map<String, Value>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentId) -> Self {
        ExperimentConfig {
            experiment,
            seed: DEFAULT_SEED,
            reps: None,
            out_dir: None,
            kind: None,
            params: Map::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_reps(mut self, reps: usize) -> Self {
        self.reps = Some(reps);
        self
    }

    pub fn with_kind(mut self, kind: LaplacianKind) -> Self {
        self.kind = Some(kind);
        self
    }

    pub fn with_param(mut self, key: &str, value: Value) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn reps(&self) -> usize {
        self.reps.unwrap_or_else(|| self.experiment.default_reps())
    }

    pub fn kind(&self) -> LaplacianKind {
        self.kind.unwrap_or_else(|| self.experiment.default_kind())
    }

    pub(crate) fn f64_param(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| invalid(format!("parameter '{key}' must be a number"))),
        }
    }

    pub(crate) fn usize_param(&self, key: &str, default: usize) -> Result<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.as_u64().map(|x| x as usize).ok_or_else(|| {
                invalid(format!("parameter '{key}' must be a non-negative integer"))
            }),
        }
    }

    pub(crate) fn parsed_param<T: serde::de::DeserializeOwned>(
        &self,
        key: &str,
        default: T,
    ) -> Result<T> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => serde_json::from_value(v.clone())
                .map_err(|e| invalid(format!("parameter '{key}': {e}"))),
        }
    }

    pub(crate) fn f64_list_param(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.params.get(key) {
            None => Ok(default.to_vec()),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_f64()
                        .ok_or_else(|| invalid(format!("parameter '{key}' must hold numbers")))
                })
                .collect(),
            Some(_) => Err(invalid(format!("parameter '{key}' must be an array"))),
        }
    }

    pub(crate) fn usize_range_param(
        &self,
        key: &str,
        default: (usize, usize),
    ) -> Result<Vec<usize>> {
        let (lo, hi) = match self.params.get(key) {
            None => default,
            Some(Value::Array(items)) if items.len() == 2 => {
                let get = |v: &Value| {
                    v.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| invalid(format!("parameter '{key}' must hold integers")))
                };
                (get(&items[0])?, get(&items[1])?)
            }
            Some(_) => return Err(invalid(format!("parameter '{key}' must be [first, last]"))),
        };
        if lo > hi {
            return Err(invalid(format!("parameter '{key}' has first > last")));
        }
        Ok((lo..=hi).collect())
    }
}

/// Mean and standard error of one measured quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub sd: f64,
    pub count: usize,
}

impl Estimate {
    /// Sample statistics (`n - 1` denominator); a single value has zero error.
    pub fn of(values: &[f64]) -> Estimate {
        let count = values.len();
        if count == 0 {
            return Estimate {
                mean: f64::NAN,
                std_error: f64::NAN,
                sd: f64::NAN,
                count,
            };
        }
        let k = count as f64;
        let mean = values.iter().sum::<f64>() / k;
        let sd = if count > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
        } else {
            0.0
        };
        Estimate {
            mean,
            std_error: sd / k.sqrt(),
            sd,
            count,
        }
    }
}

/// One output file of a run, kept in memory until [`ExperimentOutput::write`].
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub kind: LaplacianKind,
    pub reps: usize,
    /// Conventions and derived settings that are not part of the config.
    pub metadata: BTreeMap<String, Value>,
    /// Per-cell estimates, keyed by cell label.
    pub cells: BTreeMap<String, BTreeMap<String, Estimate>>,
    pub fits: BTreeMap<String, Value>,
    /// Experiment-specific detail (per-graph rows, trajectories summaries).
    pub results: Value,
    pub targets: Vec<TargetCheck>,
    pub files: Vec<String>,
    pub passed: bool,
}

impl ExperimentReport {
    pub(crate) fn new(config: &ExperimentConfig) -> Self {
        ExperimentReport {
            config: config.clone(),
            kind: config.kind(),
            reps: config.reps(),
            metadata: BTreeMap::new(),
            cells: BTreeMap::new(),
            fits: BTreeMap::new(),
            results: Value::Null,
            targets: Vec::new(),
            files: Vec::new(),
            passed: true,
        }
    }

    pub(crate) fn meta(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.metadata
            .insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub(crate) fn fit(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.fits
            .insert(key.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub(crate) fn cell(&mut self, cell: &str, quantity: &str, est: Estimate) {
        self.cells
            .entry(cell.to_string())
            .or_default()
            .insert(quantity.to_string(), est);
    }

    /// Compares `observed` against the registered target `id`.
    pub(crate) fn check(&mut self, id: &str, observed: f64) -> Result<()> {
        if !self.check_if_registered(id, observed)? {
            return Err(invalid(format!("no registered target '{id}'")));
        }
        Ok(())
    }

    /// Like [`Self::check`] but silently skips ids with no target, for
    /// cells (such as custom p values) that have nothing to compare to.
    pub(crate) fn check_if_registered(&mut self, id: &str, observed: f64) -> Result<bool> {
        let Some(target) = registered_targets()?.into_iter().find(|t| t.id == id) else {
            return Ok(false);
        };
        let check = TargetCheck::evaluate(target, observed);
        self.passed &= check.pass;
        self.targets.push(check);
        Ok(true)
    }

    pub fn failed_targets(&self) -> impl Iterator<Item = &TargetCheck> {
        self.targets.iter().filter(|t| !t.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// A finished run: the report plus the CSV/SVG files behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub report: ExperimentReport,
    pub artifacts: Vec<Artifact>,
}

impl ExperimentOutput {
    pub(crate) fn new(mut report: ExperimentReport, artifacts: Vec<Artifact>) -> Self {
        report.files = std::iter::once("report.json".to_string())
            .chain(artifacts.iter().map(|a| a.name.clone()))
            .collect();
        ExperimentOutput { report, artifacts }
    }

    /// Writes `report.json` and every artifact into `dir`, creating it.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.report.to_json()?)?;
        for a in &self.artifacts {
            std::fs::write(dir.join(&a.name), &a.contents)?;
        }
        Ok(())
    }
}

/// Runs the experiment named in `config` on the global rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    if config.reps == Some(0) {
        return Err(invalid("reps must be at least 1"));
    }
    match config.experiment {
        ExperimentId::Anchors => figures::anchors(config),
        ExperimentId::Table1 => table1::table1(config),
        ExperimentId::Fig1 => figures::fig1(config),
        ExperimentId::Fig3 => figures::fig3(config),
        ExperimentId::Fig4a => table1::fig4a(config),
        ExperimentId::Fig4b => figures::fig4b(config),
        ExperimentId::Fig4c => figures::fig4c(config),
        ExperimentId::Fig4d => figures::fig4d(config),
        ExperimentId::Fig5 => figures::fig5(config),
        ExperimentId::Appendix => figures::appendix(config),
    }
}

/// Runs on a dedicated pool of `threads` workers (`0` = rayon default).
pub fn run_experiment_with_threads(
    config: &ExperimentConfig,
    threads: usize,
) -> Result<ExperimentOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_experiment(config))
}

pub(crate) fn csv_artifact(
    name: &str,
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> Artifact {
    let mut contents = String::from(header);
    contents.push('\n');
    for r in rows {
        contents.push_str(&r);
        contents.push('\n');
    }
    Artifact {
        name: name.to_string(),
        contents,
    }
}

pub(crate) fn svg_artifact(
    name: &str,
    title: &str,
    x: &str,
    y: &str,
    series: Vec<Series>,
) -> Artifact {
    Artifact {
        name: name.to_string(),
        contents: svg_plot(title, x, y, &series),
    }
}
