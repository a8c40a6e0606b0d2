//! Rewired cluster networks: mean cohesion per rewiring probability and the
//! learning-curve fits against tabulated completion times.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{
    coloring_times, csv_artifact, svg_artifact, Estimate, ExperimentConfig, ExperimentOutput,
    ExperimentReport, Series, SeriesStyle,
};
use crate::error::{invalid, Result};
use crate::fitting::{fit_linear, fit_power_law, PowerLawMethod};
use crate::generators::{kearns_network, rewire, KearnsLayout, RewireConfig, RewireMode};
use crate::graph::{distance_summary, vertex_connectivity};
use crate::rng::child_seed;
use crate::spectra::algebraic_connectivity;

pub const DEFAULT_P_LIST: [f64; 6] = [0.0, 0.1, 0.2, 0.4, 0.6, 1.0];

#[derive(Debug, Clone, Serialize)]
struct Cell {
    p: f64,
    lambda2: Estimate,
    mean_distance: Estimate,
    kappa: Estimate,
}

struct Setup {
    p_list: Vec<f64>,
    layout: KearnsLayout,
    mode: RewireMode,
}

fn setup(config: &ExperimentConfig, report: &mut ExperimentReport) -> Result<Setup> {
    let p_list = config.f64_list_param("p_list", &DEFAULT_P_LIST)?;
    if p_list.is_empty() {
        return Err(invalid("p_list is empty"));
    }
    let layout = config.parsed_param("layout", KearnsLayout::default())?;
    let mode = config.parsed_param("rewire_mode", RewireMode::default())?;
    report.meta("network", "six 6-cliques tied in a chain")?;
    report.meta("layout", layout)?;
    report.meta("rewire_mode", mode)?;
    report.meta("rewire_constraint", "keep_connected")?;
    report.meta("p_list", &p_list)?;
    Ok(Setup {
        p_list,
        layout,
        mode,
    })
}

fn cells(config: &ExperimentConfig, s: &Setup) -> Result<Vec<Cell>> {
    let base = kearns_network(s.layout);
    let reps = config.reps();
    let kind = config.kind();
    s.p_list
        .iter()
        .enumerate()
        .map(|(c, &p)| {
            let mut rc = RewireConfig::new(p);
            rc.mode = s.mode;
            let rows: Vec<(f64, f64, f64)> = (0..reps)
                .into_par_iter()
                .map(|r| {
                    let g = rewire(&base, rc, child_seed(config.seed, c as u64, r as u64))?;
                    Ok((
                        algebraic_connectivity(&g, kind)?,
                        distance_summary(&g).mean_distance,
                        vertex_connectivity(&g)? as f64,
                    ))
                })
                .collect::<Result<_>>()?;
            let col = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).collect::<Vec<_>>();
            Ok(Cell {
                p,
                lambda2: Estimate::of(&col(|r| r.0)),
                mean_distance: Estimate::of(&col(|r| r.1)),
                kappa: Estimate::of(&col(|r| r.2)),
            })
        })
        .collect()
}

fn record_cells(report: &mut ExperimentReport, cells: &[Cell]) {
    for c in cells {
        let key = format!("p={}", c.p);
        report.cell(&key, "lambda2", c.lambda2);
        report.cell(&key, "mean_distance", c.mean_distance);
        report.cell(&key, "kappa", c.kappa);
    }
}

/// `(t, cell)` for every cell whose `p` has a tabulated completion time.
fn with_times(cells: &[Cell]) -> Result<Vec<(f64, &Cell)>> {
    let times = coloring_times()?;
    Ok(cells
        .iter()
        .filter_map(|c| {
            times
                .iter()
                .find(|ct| (ct.p - c.p).abs() < 1e-12)
                .map(|ct| (ct.t, c))
        })
        .collect())
}

pub(super) fn table1(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut report = ExperimentReport::new(config);
    let s = setup(config, &mut report)?;
    let cells = cells(config, &s)?;
    record_cells(&mut report, &cells);

    for c in &cells {
        let p = c.p;
        report.check_if_registered(&format!("table1.p{p}.lambda2"), c.lambda2.mean)?;
        report.check_if_registered(&format!("table1.p{p}.mean_distance"), c.mean_distance.mean)?;
        report.check_if_registered(&format!("table1.p{p}.kappa"), c.kappa.mean)?;
    }

    let timed = with_times(&cells)?;
    let points: Vec<(f64, f64)> = timed.iter().map(|(t, c)| (c.lambda2.mean, *t)).collect();
    let mut artifacts = Vec::new();
    if points.len() >= 3 {
        let nls = fit_power_law(&points, PowerLawMethod::Nls)?;
        let ols = fit_power_law(&points, PowerLawMethod::LogLogOls)?;
        let line = fit_linear(&points)?;
        report.fit("power_law_nls", &nls)?;
        report.fit("power_law_loglog_ols", &ols)?;
        report.fit("linear", &line)?;
        report.fit("reported_exponent", 0.434)?;
        report.check("table1.power_law.b", nls.b)?;
        report.check("table1.power_law.beats_line", line.rss - nls.rss)?;

        let (lo, hi) = points.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), p| {
            (lo.min(p.0), hi.max(p.0))
        });
        let grid: Vec<f64> = (0..=100)
            .map(|i| lo + (hi - lo) * i as f64 / 100.0)
            .collect();
        artifacts.push(svg_artifact(
            "table1.svg",
            "completion time against algebraic connectivity",
            "mean lambda2",
            "t",
            vec![
                Series::new("table", points.clone(), SeriesStyle::Points),
                Series::new(
                    "power law (nls)",
                    grid.iter().map(|&x| (x, nls.predict(x))).collect(),
                    SeriesStyle::Line,
                ),
                Series::new(
                    "straight line",
                    grid.iter()
                        .map(|&x| (x, line.intercept + line.slope * x))
                        .collect(),
                    SeriesStyle::Line,
                ),
            ],
        ));
    }

    let rows = cells.iter().map(|c| {
        let t = timed
            .iter()
            .find(|(_, tc)| std::ptr::eq(*tc, c))
            .map(|(t, _)| t.to_string())
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            c.p,
            t,
            c.lambda2.mean,
            c.lambda2.std_error,
            c.mean_distance.mean,
            c.mean_distance.std_error,
            c.kappa.mean,
            c.kappa.std_error
        )
    });
    artifacts.insert(
        0,
        csv_artifact(
            "table1.csv",
            "p,t,lambda2,lambda2_se,mean_distance,mean_distance_se,kappa,kappa_se",
            rows.collect::<Vec<_>>(),
        ),
    );
    report.results = json!({ "rows": cells });
    Ok(ExperimentOutput::new(report, artifacts))
}

/// Completion time against mean distance over the same network family.
pub(super) fn fig4a(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut report = ExperimentReport::new(config);
    let s = setup(config, &mut report)?;
    let cells = cells(config, &s)?;
    record_cells(&mut report, &cells);
    let timed = with_times(&cells)?;
    let points: Vec<(f64, f64)> = timed
        .iter()
        .map(|(t, c)| (c.mean_distance.mean, *t))
        .collect();
    let mut artifacts = vec![csv_artifact(
        "fig4a.csv",
        "p,t,mean_distance,mean_distance_se",
        timed
            .iter()
            .map(|(t, c)| {
                format!(
                    "{},{},{},{}",
                    c.p, t, c.mean_distance.mean, c.mean_distance.std_error
                )
            })
            .collect::<Vec<_>>(),
    )];
    let mut series = vec![Series::new("table", points.clone(), SeriesStyle::Points)];
    if points.len() >= 3 {
        let line = fit_linear(&points)?;
        report.fit("linear", &line)?;
        let (lo, hi) = points.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), p| {
            (lo.min(p.0), hi.max(p.0))
        });
        series.push(Series::new(
            "straight line",
            vec![
                (lo, line.intercept + line.slope * lo),
                (hi, line.intercept + line.slope * hi),
            ],
            SeriesStyle::Line,
        ));
    }
    artifacts.push(svg_artifact(
        "fig4a.svg",
        "completion time against mean distance",
        "mean distance",
        "t",
        series,
    ));
    report.results = json!({ "points": points });
    Ok(ExperimentOutput::new(report, artifacts))
}
