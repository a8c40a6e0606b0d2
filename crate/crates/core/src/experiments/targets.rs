use serde::{Deserialize, Serialize};

use crate::error::Result;

const TARGETS_JSON: &str = include_str!("targets.json");

/// Acceptance rule for one observed value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `|observed - expected| <= tol`
    Abs(f64),
    /// `|observed - expected| <= tol * |expected|`
    Rel(f64),
    /// `lo <= observed <= hi`
    Range(f64, f64),
    /// `observed > bound`
    Above(f64),
    /// `observed >= bound`
    AtLeast(f64),
}

impl Check {
    pub fn passes(self, expected: f64, observed: f64) -> bool {
        if !observed.is_finite() {
            return false;
        }
        match self {
            Check::Abs(tol) => (observed - expected).abs() <= tol,
            Check::Rel(tol) => (observed - expected).abs() <= tol * expected.abs(),
            Check::Range(lo, hi) => (lo..=hi).contains(&observed),
            Check::Above(bound) => observed > bound,
            Check::AtLeast(bound) => observed >= bound,
        }
    }
}

/// Where an expected value comes from: a published number, or a value
/// derived independently (closed form, oracle).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Reported,
    Derived,
}

/// A registered comparison target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    pub id: String,
    pub experiment: String,
    pub quantity: String,
    pub expected: f64,
    pub check: Check,
    pub source: Source,
}

/// A target together with the value a run observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetCheck {
    #[serde(flatten)]
    pub target: Target,
    pub observed: f64,
    pub pass: bool,
}

impl TargetCheck {
    pub fn evaluate(target: Target, observed: f64) -> Self {
        let pass = target.check.passes(target.expected, observed);
        TargetCheck {
            target,
            observed,
            pass,
        }
    }
}

/// Completion time of the coloring task at rewiring probability `p`, as
/// tabulated alongside the targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColoringTime {
    pub p: f64,
    pub t: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetsFile {
    coloring_times: Vec<ColoringTime>,
    targets: Vec<Target>,
}

fn load() -> Result<TargetsFile> {
    Ok(serde_json::from_str(TARGETS_JSON)?)
}

/// The shipped target table.
pub fn registered_targets() -> Result<Vec<Target>> {
    Ok(load()?.targets)
}

pub fn coloring_times() -> Result<Vec<ColoringTime>> {
    Ok(load()?.coloring_times)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::ExperimentId;

    #[test]
    fn table_parses_with_unique_ids_and_known_experiments() {
        let all = registered_targets().unwrap();
        assert!(all.len() > 20);
        let mut ids: Vec<&str> = all.iter().map(|t| t.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), all.len());
        for t in &all {
            t.experiment.parse::<ExperimentId>().unwrap();
        }
        let times = coloring_times().unwrap();
        assert_eq!(times.len(), 6);
        assert!(times.windows(2).all(|w| w[0].p < w[1].p && w[0].t > w[1].t));
    }

    #[test]
    fn checks() {
        assert!(Check::Abs(0.001).passes(1.0435, 1.04348));
        assert!(!Check::Abs(0.0).passes(1.0, 2.0));
        assert!(Check::Rel(0.1).passes(0.33, 0.31));
        assert!(!Check::Rel(0.1).passes(0.33, 0.29));
        assert!(Check::Range(0.4, 0.5).passes(0.0, 0.434));
        assert!(!Check::Above(0.0).passes(0.0, 0.0));
        assert!(Check::AtLeast(5.0).passes(5.0, 5.0));
        assert!(!Check::Abs(1.0).passes(0.0, f64::NAN));
    }
}
