use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{
    csv_artifact, svg_artifact, Estimate, ExperimentConfig, ExperimentOutput, ExperimentReport,
    Series, SeriesStyle,
};
use crate::dynamics::{
    convergence_time, diffuse_spectral, four_cluster_protocol, memory_experiment, MemoryProtocol,
    PositionVector,
};
use crate::error::{invalid, Result};
use crate::fitting::{fit_hyperbola, fit_linear};
use crate::generators::{
    chord_midway, chord_suite_graph, misplace_chord, random_poisson, random_skewed, relocate_chord,
    standard, two_cliques_bridged, StandardGraph,
};
use crate::graph::{distance_summary, vertex_connectivity, Graph};
use crate::rng::{child_seed, stream};
use crate::spectra::{algebraic_connectivity, bound_report, BoundReport};

fn pairs_density(n: usize, m: usize) -> f64 {
    m as f64 / (n * (n - 1) / 2) as f64
}

pub(super) fn anchors(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut report = ExperimentReport::new(config);
    let kind = config.kind();
    let n = config.usize_param("n", 24)?;
    let m = config.usize_param("m", 48)?;
    let clique = algebraic_connectivity(&standard(StandardGraph::Clique(24))?, kind)?;
    let ring = algebraic_connectivity(&standard(StandardGraph::RingLattice(24, 4))?, kind)?;
    let density = pairs_density(n, m);
    let random: Vec<f64> = (0..config.reps())
        .into_par_iter()
        .map(|r| {
            algebraic_connectivity(
                &random_poisson(n, density, child_seed(config.seed, 0, r as u64))?,
                kind,
            )
        })
        .collect::<Result<_>>()?;
    let est = Estimate::of(&random);
    report.meta(
        "random_family",
        format!("connected uniform random graphs, n = {n}, m = {m}"),
    )?;
    report.cell("clique:24", "lambda2", Estimate::of(&[clique]));
    report.cell("ring_lattice:24,4", "lambda2", Estimate::of(&[ring]));
    report.cell(&format!("random:{n},{m}"), "lambda2", est);
    report.check("anchors.clique24.lambda2", clique)?;
    report.check("anchors.ring24_4.lambda2", ring)?;
    if (n, m) == (24, 48) {
        report.check("anchors.random24_48.lambda2", est.mean)?;
    }
    let artifacts = vec![csv_artifact(
        "anchors.csv",
        "rep,lambda2",
        random
            .iter()
            .enumerate()
            .map(|(r, l)| format!("{r},{l}"))
            .collect::<Vec<_>>(),
    )];
    report.results =
        json!({ "clique24": clique, "ring_lattice24_4": ring, "random_mean": est.mean });
    Ok(ExperimentOutput::new(report, artifacts))
}

/// Two connected uniform random clusters joined by one random tie, and a
/// connected uniform random graph with the same node and tie counts.
fn fig1_pair(seed: u64, r: u64, cluster: usize, cluster_ties: usize) -> Result<(Graph, Graph)> {
    let density = pairs_density(cluster, cluster_ties);
    let a = random_poisson(cluster, density, child_seed(seed, 0, 2 * r))?;
    let b = random_poisson(cluster, density, child_seed(seed, 0, 2 * r + 1))?;
    let mut clustered = Graph::new(2 * cluster);
    for (u, v, _) in a.edges() {
        clustered.add_edge(u, v)?;
    }
    for (u, v, _) in b.edges() {
        clustered.add_edge(cluster + u, cluster + v)?;
    }
    let mut rng = stream(seed, 1, r);
    clustered.add_edge(
        rng.gen_range(0..cluster),
        cluster + rng.gen_range(0..cluster),
    )?;
    let n = 2 * cluster;
    let random = random_poisson(
        n,
        pairs_density(n, 2 * cluster_ties + 1),
        child_seed(seed, 2, r),
    )?;
    Ok((clustered, random))
}

#[derive(Debug, Clone, Serialize)]
struct PairRow {
    pair: usize,
    lambda2_clustered: f64,
    lambda2_random: f64,
    time_clustered: f64,
    time_random: f64,
    ordered: bool,
}

pub(super) fn fig1(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut report = ExperimentReport::new(config);
    let kind = config.kind();
    let cluster = config.usize_param("cluster_size", 6)?;
    let cluster_ties = config.usize_param("cluster_ties", 12)?;
    let rel = config.f64_param("rel_epsilon", 1e-6)?;
    if !(rel > 0.0 && rel < 1.0) {
        return Err(invalid("rel_epsilon must lie in (0, 1)"));
    }
    report.meta(
        "design",
        format!(
            "matched pairs on {} nodes and {} ties: two connected random {cluster}-node clusters \
             with {cluster_ties} ties each plus one bridge, against a connected uniform random graph; \
             shared uniform start",
            2 * cluster,
            2 * cluster_ties + 1
        ),
    )?;
    report.meta(
        "convergence",
        format!("spread below {rel} times the initial spread"),
    )?;

    let run_pair = |r: usize| -> Result<(PairRow, Graph, Graph, PositionVector)> {
        let (clustered, random) = fig1_pair(config.seed, r as u64, cluster, cluster_ties)?;
        let mut rng = stream(config.seed, 3, r as u64);
        let y0 = PositionVector::new((0..2 * cluster).map(|_| rng.gen::<f64>()).collect())?;
        let eps = rel * y0.spread();
        let lc = algebraic_connectivity(&clustered, kind)?;
        let lr = algebraic_connectivity(&random, kind)?;
        let tc = convergence_time(&clustered, kind, &y0, eps)?;
        let tr = convergence_time(&random, kind, &y0, eps)?;
        let row = PairRow {
            pair: r,
            lambda2_clustered: lc,
            lambda2_random: lr,
            time_clustered: tc,
            time_random: tr,
            ordered: (tc < tr) == (lc > lr),
        };
        Ok((row, clustered, random, y0))
    };
    let rows: Vec<PairRow> = (0..config.reps())
        .into_par_iter()
        .map(|r| run_pair(r).map(|x| x.0))
        .collect::<Result<_>>()?;
    let ordered = rows.iter().filter(|r| r.ordered).count();
    let fraction = ordered as f64 / rows.len() as f64;
    report.cell(
        "clustered",
        "lambda2",
        Estimate::of(&rows.iter().map(|r| r.lambda2_clustered).collect::<Vec<_>>()),
    );
    report.cell(
        "clustered",
        "convergence_time",
        Estimate::of(&rows.iter().map(|r| r.time_clustered).collect::<Vec<_>>()),
    );
    report.cell(
        "random",
        "lambda2",
        Estimate::of(&rows.iter().map(|r| r.lambda2_random).collect::<Vec<_>>()),
    );
    report.cell(
        "random",
        "convergence_time",
        Estimate::of(&rows.iter().map(|r| r.time_random).collect::<Vec<_>>()),
    );
    report.check("fig1.ordering", fraction)?;

    // spread curves of the first pair
    let (demo, clustered, random, y0) = run_pair(0)?;
    let horizon = demo.time_clustered.max(demo.time_random);
    let times: Vec<f64> = (0..=200).map(|i| horizon * i as f64 / 200.0).collect();
    let sc = diffuse_spectral(&clustered, kind, &y0, &times)?.spread();
    let sr = diffuse_spectral(&random, kind, &y0, &times)?.spread();
    let (hi, lo) = if demo.lambda2_random >= demo.lambda2_clustered {
        (&sr, &sc)
    } else {
        (&sc, &sr)
    };
    let below = hi.iter().zip(lo).skip(1).filter(|(h, l)| h < l).count();
    report.results = json!({
        "pairs": rows.len(),
        "ordered_pairs": ordered,
        "demo_pair": {
            "lambda2_clustered": demo.lambda2_clustered,
            "lambda2_random": demo.lambda2_random,
            "samples": times.len() - 1,
            "samples_with_higher_lambda2_below": below,
        },
    });

    let artifacts = vec![
        csv_artifact(
            "fig1_pairs.csv",
            "pair,lambda2_clustered,lambda2_random,time_clustered,time_random,ordered",
            rows.iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{},{}",
                        r.pair,
                        r.lambda2_clustered,
                        r.lambda2_random,
                        r.time_clustered,
                        r.time_random,
                        r.ordered
                    )
                })
                .collect::<Vec<_>>(),
        ),
        csv_artifact(
            "fig1_spread.csv",
            "t,spread_clustered,spread_random",
            times
                .iter()
                .zip(sc.iter().zip(&sr))
                .map(|(t, (a, b))| format!("{t},{a},{b}"))
                .collect::<Vec<_>>(),
        ),
        svg_artifact(
            "fig1_spread.svg",
            "spread of positions over time",
            "t",
            "spread",
            vec![
                Series::new(
                    "clustered",
                    times.iter().copied().zip(sc.iter().copied()).collect(),
                    SeriesStyle::Line,
                ),
                Series::new(
                    "random",
                    times.iter().copied().zip(sr.iter().copied()).collect(),
                    SeriesStyle::Line,
                ),
            ],
        ),
    ];
    Ok(ExperimentOutput::new(report, artifacts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Family {
    Poisson,
    Skewed,
}

#[derive(Debug, Clone, Serialize)]
struct BoundRow {
    family: Family,
    edges: usize,
    #[serde(flatten)]
    bounds: BoundReport,
}

pub(super) fn fig3(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut report = ExperimentReport::new(config);
    let sizes = config.usize_range_param("sizes", (10, 50))?;
    let density = config.f64_param("density", 0.3)?;
    let reps = config.reps();
    report.meta("sizes", [sizes[0], sizes[sizes.len() - 1]])?;
    report.meta("density", density)?;
    report.meta("graphs_per_family", reps)?;
    report.meta(
        "size_rule",
        "graph r of each family has n = sizes[r mod len]",
    )?;
    report.meta("bounds_laplacian", "binary")?;

    let mut rows = Vec::new();
    for (f, family) in [Family::Poisson, Family::Skewed].into_iter().enumerate() {
        let mut part: Vec<BoundRow> = (0..reps)
            .into_par_iter()
            .map(|r| {
                let n = sizes[r % sizes.len()];
                let seed = child_seed(config.seed, f as u64, r as u64);
                let g = match family {
                    Family::Poisson => random_poisson(n, density, seed)?,
                    Family::Skewed => random_skewed(n, density, seed)?,
                };
                Ok(BoundRow {
                    family,
                    edges: g.edge_count(),
                    bounds: bound_report(&g)?,
                })
            })
            .collect::<Result<_>>()?;
        rows.append(&mut part);
    }
    let violations = rows.iter().filter(|r| !r.bounds.satisfied.all()).count();
    report.check("fig3.bound_violations", violations as f64)?;

    let mut r2 = [0.0; 2];
    let mut series = Vec::new();
    for (f, family) in [Family::Poisson, Family::Skewed].into_iter().enumerate() {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.family == family)
            .map(|r| (r.bounds.mean_distance, r.bounds.lambda2))
            .collect();
        let key = format!("{family:?}").to_lowercase();
        report.cell(
            &key,
            "lambda2",
            Estimate::of(&pts.iter().map(|p| p.1).collect::<Vec<_>>()),
        );
        report.cell(
            &key,
            "mean_distance",
            Estimate::of(&pts.iter().map(|p| p.0).collect::<Vec<_>>()),
        );
        let fit = fit_hyperbola(&pts)?;
        r2[f] = fit.r_squared;
        report.fit(&format!("hyperbola_{key}"), &fit)?;
        series.push(Series::new(&key, pts, SeriesStyle::Points));
    }
    report.check("fig3.r2_gap", r2[0] - r2[1])?;

    let bound_curve: Vec<(f64, f64)> = {
        let mut v: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.bounds.mean_distance, r.bounds.eq5_bound))
            .collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    };
    series.push(Series::new(
        "mean-distance bound",
        bound_curve,
        SeriesStyle::Points,
    ));
    let artifacts = vec![
        csv_artifact(
            "fig3.csv",
            "family,n,m,mean_distance,diameter,lambda2,mean_distance_bound,diameter_bound,kappa,k_min,satisfied",
            rows.iter()
                .map(|r| {
                    let b = &r.bounds;
                    format!(
                        "{},{},{},{},{},{},{},{},{},{},{}",
                        format!("{:?}", r.family).to_lowercase(),
                        b.n,
                        r.edges,
                        b.mean_distance,
                        b.diameter,
                        b.lambda2,
                        b.eq5_bound,
                        b.diameter_bound,
                        b.kappa,
                        b.k_min,
                        b.satisfied.all()
                    )
                })
                .collect::<Vec<_>>(),
        ),
        svg_artifact("fig3.svg", "algebraic connectivity against mean distance", "mean distance", "lambda2", series),
    ];
    report.results = json!({ "graphs": rows.len(), "violations": violations });
    Ok(ExperimentOutput::new(report, artifacts))
}

pub(super) fn fig4b(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut report = ExperimentReport::new(config);
    let kind = config.kind();
    let sides = config.usize_range_param("sides", (2, 25))?;
    report.meta("sides", [sides[0], sides[sides.len() - 1]])?;
    let pts: Vec<(usize, f64, f64)> = sides
        .par_iter()
        .map(|&side| {
            let g = standard(StandardGraph::SquareLattice(side))?;
            Ok((
                side,
                distance_summary(&g).mean_distance,
                algebraic_connectivity(&g, kind)?,
            ))
        })
        .collect::<Result<_>>()?;
    let xy: Vec<(f64, f64)> = pts.iter().map(|p| (p.1, p.2)).collect();
    let fit = fit_hyperbola(&xy)?;
    report.fit("hyperbola", &fit)?;
    report.check("fig4b.r2", fit.r_squared)?;
    let curve: Vec<(f64, f64)> = xy.iter().map(|&(x, _)| (x, fit.predict(x))).collect();
    let artifacts = vec![
        csv_artifact(
            "fig4b.csv",
            "side,n,mean_distance,lambda2,fitted",
            pts.iter()
                .map(|&(s, d, l)| format!("{s},{},{d},{l},{}", s * s, fit.predict(d)))
                .collect::<Vec<_>>(),
        ),
        svg_artifact(
            "fig4b.svg",
            "square lattices",
            "mean distance",
            "lambda2",
            vec![
                Series::new("lattice", xy, SeriesStyle::Points),
                Series::new("c1 / (x + c2)", curve, SeriesStyle::Line),
            ],
        ),
    ];
    report.results = json!({ "lattices": pts.len() });
    Ok(ExperimentOutput::new(report, artifacts))
}

pub(super) fn fig4c(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut report = ExperimentReport::new(config);
    let kind = config.kind();
    let n_each = config.usize_param("clique_size", 30)?;
    let ks = config.usize_range_param("bridges", (1, 20))?;
    report.meta("clique_size", n_each)?;
    report.meta("bridges", [ks[0], ks[ks.len() - 1]])?;
    let rows: Vec<(usize, usize, f64)> = ks
        .par_iter()
        .map(|&k| {
            let g = two_cliques_bridged(n_each, k, child_seed(config.seed, 0, k as u64))?;
            Ok((
                k,
                vertex_connectivity(&g)?,
                algebraic_connectivity(&g, kind)?,
            ))
        })
        .collect::<Result<_>>()?;
    let mismatches = rows.iter().filter(|r| r.0 != r.1).count();
    let xy: Vec<(f64, f64)> = rows.iter().map(|r| (r.1 as f64, r.2)).collect();
    let line = fit_linear(&xy)?;
    let c = xy.iter().map(|p| p.0 * p.1).sum::<f64>() / xy.iter().map(|p| p.0 * p.0).sum::<f64>();
    report.fit("linear", &line)?;
    report.fit("through_origin_slope", c)?;
    report.check("fig4c.r2", line.r_squared)?;
    report.check("fig4c.kappa_equals_k", mismatches as f64)?;
    let artifacts = vec![
        csv_artifact(
            "fig4c.csv",
            "bridges,kappa,lambda2",
            rows.iter()
                .map(|r| format!("{},{},{}", r.0, r.1, r.2))
                .collect::<Vec<_>>(),
        ),
        svg_artifact(
            "fig4c.svg",
            "two cliques joined by k independent ties",
            "vertex connectivity",
            "lambda2",
            vec![
                Series::new("networks", xy.clone(), SeriesStyle::Points),
                Series::new(
                    "linear fit",
                    xy.iter()
                        .map(|&(x, _)| (x, line.intercept + line.slope * x))
                        .collect(),
                    SeriesStyle::Line,
                ),
            ],
        ),
    ];
    report.results = json!({ "kappa_mismatches": mismatches });
    Ok(ExperimentOutput::new(report, artifacts))
}

pub(super) fn fig4d(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut report = ExperimentReport::new(config);
    let ls = config.usize_range_param("cycle_lengths", (6, 30))?;
    report.meta("cycle_lengths", [ls[0], ls[ls.len() - 1]])?;
    report.meta("chord", "(0, floor(l / 2))")?;
    let rows: Vec<(usize, f64, f64)> = ls
        .iter()
        .map(|&l| {
            let before = distance_summary(&standard(StandardGraph::Cycle(l))?).mean_distance;
            let after = distance_summary(&chord_midway(l)?).mean_distance;
            Ok((l, before, after))
        })
        .collect::<Result<_>>()?;
    let reductions: Vec<f64> = rows.iter().map(|r| r.1 - r.2).collect();
    let bad_steps = reductions.windows(2).filter(|w| w[1] <= w[0]).count()
        + reductions.iter().filter(|d| **d <= 0.0).count();
    report.check("fig4d.increasing", bad_steps as f64)?;
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .zip(&reductions)
        .map(|(r, d)| (r.0 as f64, *d))
        .collect();
    let artifacts = vec![
        csv_artifact(
            "fig4d.csv",
            "l,mean_distance_cycle,mean_distance_chord,reduction",
            rows.iter()
                .zip(&reductions)
                .map(|(r, d)| format!("{},{},{},{d}", r.0, r.1, r.2))
                .collect::<Vec<_>>(),
        ),
        svg_artifact(
            "fig4d.svg",
            "mean-distance reduction from a midway chord",
            "cycle length",
            "reduction",
            vec![Series::new("C_l + chord", pts, SeriesStyle::Points)],
        ),
    ];
    report.results = json!({ "reductions": reductions });
    Ok(ExperimentOutput::new(report, artifacts))
}

#[derive(Debug, Clone, Serialize)]
struct SuiteRow {
    graph: usize,
    n: usize,
    lambda2: f64,
    lambda2_careful: f64,
    lambda2_awkward: f64,
    mean_distance: f64,
    mean_distance_careful: f64,
    mean_distance_awkward: f64,
}

pub(super) fn fig5(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut report = ExperimentReport::new(config);
    let kind = config.kind();
    report.meta(
        "suite",
        "cycle of length 7..=16 plus one node tied to two adjacent cycle nodes, labels shuffled",
    )?;
    report.meta(
        "careful",
        "relocate a tie of the smallest cycle to minimize mean distance",
    )?;
    report.meta(
        "awkward",
        "relocate the same tie to the chord that maximizes mean distance",
    )?;
    let rows: Vec<SuiteRow> = (0..config.reps())
        .into_par_iter()
        .map(|r| {
            let g = chord_suite_graph(child_seed(config.seed, 0, r as u64));
            let careful = relocate_chord(&g)?;
            let awkward = misplace_chord(&g)?;
            Ok(SuiteRow {
                graph: r,
                n: g.node_count(),
                lambda2: algebraic_connectivity(&g, kind)?,
                lambda2_careful: algebraic_connectivity(&careful.graph, kind)?,
                lambda2_awkward: algebraic_connectivity(&awkward.graph, kind)?,
                mean_distance: distance_summary(&g).mean_distance,
                mean_distance_careful: careful.mean_distance,
                mean_distance_awkward: awkward.mean_distance,
            })
        })
        .collect::<Result<_>>()?;
    let k = rows.len() as f64;
    let up = rows
        .iter()
        .filter(|r| r.lambda2_careful > r.lambda2)
        .count();
    let down = rows
        .iter()
        .filter(|r| r.lambda2_awkward < r.lambda2)
        .count();
    for (key, f) in [
        (
            "original",
            (|r: &SuiteRow| r.lambda2) as fn(&SuiteRow) -> f64,
        ),
        ("careful", |r| r.lambda2_careful),
        ("awkward", |r| r.lambda2_awkward),
    ] {
        report.cell(
            key,
            "lambda2",
            Estimate::of(&rows.iter().map(f).collect::<Vec<_>>()),
        );
    }
    report.check("fig5.careful_increases", up as f64 / k)?;
    report.check("fig5.awkward_decreases", down as f64 / k)?;
    let artifacts = vec![
        csv_artifact(
            "fig5.csv",
            "graph,n,lambda2,lambda2_careful,lambda2_awkward,mean_distance,mean_distance_careful,mean_distance_awkward",
            rows.iter()
                .map(|r| {
                    format!(
                        "{},{},{},{},{},{},{},{}",
                        r.graph,
                        r.n,
                        r.lambda2,
                        r.lambda2_careful,
                        r.lambda2_awkward,
                        r.mean_distance,
                        r.mean_distance_careful,
                        r.mean_distance_awkward
                    )
                })
                .collect::<Vec<_>>(),
        ),
        svg_artifact(
            "fig5.svg",
            "lambda2 after moving one tie",
            "lambda2 before",
            "lambda2 after",
            vec![
                Series::new("careful", rows.iter().map(|r| (r.lambda2, r.lambda2_careful)).collect(), SeriesStyle::Points),
                Series::new("awkward", rows.iter().map(|r| (r.lambda2, r.lambda2_awkward)).collect(), SeriesStyle::Points),
            ],
        ),
    ];
    report.results =
        json!({ "graphs": rows.len(), "careful_increases": up, "awkward_decreases": down });
    Ok(ExperimentOutput::new(report, artifacts))
}

pub(super) fn appendix(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut report = ExperimentReport::new(config);
    let mut protocol: MemoryProtocol = config.parsed_param("protocol", four_cluster_protocol())?;
    protocol.rule = config.parsed_param("rule", protocol.rule)?;
    protocol.treatment1.validate()?;
    protocol.treatment2.validate()?;
    let result = memory_experiment(config.reps(), config.seed, &protocol)?;
    report.meta("protocol", &protocol.description)?;
    report.meta("rule", protocol.rule)?;
    report.meta("start", "independent fair-coin 0/1 memories")?;
    report.meta("sd_convention", &result.sd_convention)?;
    report.cell(
        "difference",
        "sd2_minus_sd1",
        Estimate {
            mean: result.mean_difference,
            std_error: result.std_error,
            sd: result.std_error * (result.reps as f64).sqrt(),
            count: result.reps,
        },
    );
    report.check("appendix.significance", result.z_score)?;
    report.check("appendix.difference", result.mean_difference)?;
    report.results = serde_json::to_value(&result)?;
    Ok(ExperimentOutput::new(report, Vec::new()))
}
