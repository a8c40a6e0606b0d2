use cohesion::dynamics::{
    diffuse_spectral, run_rounds, spread, PositionVector, Round, RoundRule, RoundSchedule,
};
use cohesion::fitting::{fit_power_law, PowerLawMethod};
use cohesion::generators::{
    chord_suite_graph, kearns_base, relocate_chord, rewire, two_cliques_bridged, RewireConfig,
};
use cohesion::graph::{
    connected_components, distance_summary, is_connected, vertex_connectivity, Graph,
};
use cohesion::linalg::{eigen_sym, Matrix};
use cohesion::spectra::{
    algebraic_connectivity, bound_report, spectrum, tradeoff_metrics, LaplacianKind,
};
use proptest::prelude::*;

/// Random simple graph on `lo..=hi` nodes with tie probability `p`.
fn graph(lo: usize, hi: usize, p: f64) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(move |n| {
        prop::collection::vec(prop::bool::weighted(p), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in (u + 1)..n {
                    if bits[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn connected(lo: usize, hi: usize, p: f64) -> impl Strategy<Value = Graph> {
    graph(lo, hi, p).prop_filter("connected", is_connected)
}

fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let n = g.node_count();
    let mut d = vec![vec![None; n]; n];
    for u in 0..n {
        d[u][u] = Some(0);
        for v in g.neighbors(u) {
            d[u][v] = Some(1);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

fn connected_without(g: &Graph, removed: &[usize]) -> bool {
    is_connected(&g.without_nodes(removed))
}

/// Smallest set of nodes whose removal disconnects `g` (n - 1 for cliques).
fn brute_force_kappa(g: &Graph) -> usize {
    let n = g.node_count();
    for size in 0..n.saturating_sub(1) {
        let mut found = false;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let removed: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if !connected_without(g, &removed) {
                found = true;
                break;
            }
        }
        if found {
            return size;
        }
    }
    n - 1
}

fn positions(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn distances_match_floyd_warshall(g in graph(1, 30, 0.15)) {
        let d = floyd_warshall(&g);
        let n = g.node_count();
        let (mut sum, mut pairs, mut diam, mut finite) = (0usize, 0usize, 0usize, true);
        for u in 0..n {
            for v in (u + 1)..n {
                match d[u][v] {
                    Some(x) => {
                        sum += x;
                        pairs += 1;
                        diam = diam.max(x);
                    }
                    None => finite = false,
                }
            }
        }
        let s = distance_summary(&g);
        prop_assert_eq!(s.diameter, diam);
        prop_assert_eq!(s.finite, finite);
        if pairs > 0 {
            prop_assert_eq!(s.mean_distance, sum as f64 / pairs as f64);
        }
    }

    #[test]
    fn mean_distance_between_one_and_diameter(g in connected(2, 20, 0.3)) {
        let s = distance_summary(&g);
        prop_assert!(1.0 <= s.mean_distance && s.mean_distance <= s.diameter as f64);
    }

    #[test]
    fn zero_eigenvalues_count_components(g in graph(1, 16, 0.12)) {
        let s = spectrum(&g, LaplacianKind::Binary).unwrap();
        prop_assert_eq!(s.zero_multiplicity(), connected_components(&g).count);
    }

    #[test]
    fn adding_a_tie_never_lowers_lambda2(g in connected(3, 12, 0.35)) {
        let base = algebraic_connectivity(&g, LaplacianKind::Binary).unwrap();
        let n = g.node_count();
        for u in 0..n {
            for v in (u + 1)..n {
                if g.has_edge(u, v) {
                    continue;
                }
                let mut h = g.clone();
                h.add_edge(u, v).unwrap();
                let grown = algebraic_connectivity(&h, LaplacianKind::Binary).unwrap();
                prop_assert!(grown >= base - 1e-10, "({u},{v}): {base} -> {grown}");
            }
        }
    }

    #[test]
    fn bound_report_holds(g in connected(2, 25, 0.3)) {
        let r = bound_report(&g).unwrap();
        prop_assert!(r.satisfied.all(), "{:?}", r);
    }

    #[test]
    fn density_matrix_is_a_distribution(g in connected(2, 20, 0.3), t in 0.01f64..50.0) {
        for kind in LaplacianKind::ALL {
            let m = tradeoff_metrics(&g, kind, t).unwrap();
            prop_assert!(m.probabilities.iter().all(|p| *p >= 0.0));
            prop_assert!((m.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            prop_assert!(m.entropy >= -1e-12 && m.entropy <= (g.node_count() as f64).ln() + 1e-12);
        }
    }

    #[test]
    fn eigenpairs_reconstruct(rows in (2usize..12).prop_flat_map(|n| prop::collection::vec(-3.0f64..3.0, n * n).prop_map(move |v| (n, v)))) {
        let (n, v) = rows;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i * n + j] + v[j * n + i];
            }
        }
        let e = eigen_sym(&m).unwrap();
        for k in 0..n {
            let x = e.vector(k);
            let mx = m.mul_vec(&x);
            for i in 0..n {
                prop_assert!((mx[i] - e.values[k] * x[i]).abs() < 1e-9);
            }
            prop_assert!((x.iter().map(|a| a * a).sum::<f64>() - 1.0).abs() < 1e-10);
        }
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn whitney_and_exhaustive_cuts(g in connected(2, 11, 0.45)) {
        let kappa = vertex_connectivity(&g).unwrap();
        prop_assert!(kappa <= g.min_degree());
        prop_assert_eq!(kappa, brute_force_kappa(&g));
        // no (kappa - 1)-subset disconnects
        let n = g.node_count();
        if kappa >= 1 {
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize == kappa - 1 {
                    let removed: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
                    prop_assert!(connected_without(&g, &removed));
                }
            }
        }
    }

    #[test]
    fn diffusion_conserves_and_contracts(g in connected(2, 14, 0.3), seed_y in positions(14)) {
        let n = g.node_count();
        let y0 = PositionVector::new(seed_y[..n].to_vec()).unwrap();
        let times: Vec<f64> = (0..40).map(|i| 0.25 * i as f64).collect();
        for kind in [LaplacianKind::Binary, LaplacianKind::RowNormalized] {
            let tr = diffuse_spectral(&g, kind, &y0, &times).unwrap();
            let w: Vec<f64> = match kind {
                LaplacianKind::Binary => vec![1.0; n],
                _ => (0..n).map(|i| g.degree(i) as f64).collect(),
            };
            let total = |y: &[f64]| y.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
            let t0 = total(y0.as_slice());
            for y in &tr.samples {
                prop_assert!((total(y) - t0).abs() < 1e-10 * (1.0 + t0.abs()));
            }
            let s = tr.spread();
            prop_assert!(s.windows(2).all(|p| p[1] <= p[0] + 1e-10));
        }
    }

    #[test]
    fn round_rules_agree_in_the_limit(y in positions(8), perm in Just(()).prop_perturb(|_, mut rng| {
        let mut nodes: Vec<usize> = (0..8).collect();
        for i in (1..8).rev() {
            nodes.swap(i, (rng.next_u32() as usize) % (i + 1));
        }
        nodes
    })) {
        let pairs: Vec<(usize, usize)> = perm.chunks(2).map(|c| (c[0], c[1])).collect();
        let schedule = RoundSchedule::new(8, vec![Round::Matching(pairs.clone()), Round::Subgraph { subgraph: pairs }]).unwrap();
        let y0 = PositionVector::new(y).unwrap();
        let avg = run_rounds(&schedule, &y0, RoundRule::PairAverage).unwrap();
        let exp = run_rounds(&schedule, &y0, RoundRule::Exponential { t_round: 50.0 }).unwrap();
        for (a, b) in avg.samples.iter().zip(&exp.samples) {
            for (x, z) in a.iter().zip(b) {
                prop_assert!((x - z).abs() < 1e-8);
            }
        }
        prop_assert!(spread(avg.last().unwrap()) <= y0.spread() + 1e-12);
    }

    #[test]
    fn power_law_fits_scale(a in 0.5f64..200.0, b in 0.1f64..1.5, k in 0.01f64..100.0, noise in prop::collection::vec(0.9f64..1.1, 6)) {
        let pts: Vec<(f64, f64)> = [0.01, 0.05, 0.1, 0.2, 0.3, 0.5]
            .iter()
            .zip(&noise)
            .map(|(&x, e): (&f64, &f64)| (x, a * x.powf(-b) * e))
            .collect();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x, k * y)).collect();
        let f = fit_power_law(&pts, PowerLawMethod::LogLogOls).unwrap();
        let g = fit_power_law(&scaled, PowerLawMethod::LogLogOls).unwrap();
        prop_assert!((g.a / f.a - k).abs() < 1e-10 * k);
        prop_assert!((g.b - f.b).abs() < 1e-10);
        let nls = fit_power_law(&pts, PowerLawMethod::Nls).unwrap();
        prop_assert!(nls.rss <= f.rss * (1.0 + 1e-12));
    }

    #[test]
    fn density_preserving_generators(seed in any::<u64>(), p in 0.0f64..=1.0, k in 1usize..=8) {
        let base = kearns_base();
        let r = rewire(&base, RewireConfig::new(p), seed).unwrap();
        prop_assert_eq!(r.edge_count(), base.edge_count());
        prop_assert!(is_connected(&r));
        prop_assert_eq!(&r, &rewire(&base, RewireConfig::new(p), seed).unwrap());

        let two = two_cliques_bridged(10, k, seed).unwrap();
        prop_assert_eq!(two.edge_count(), 2 * 45);
        prop_assert_eq!(vertex_connectivity(&two).unwrap(), k);

        let g = chord_suite_graph(seed);
        let mv = relocate_chord(&g).unwrap();
        prop_assert_eq!(mv.graph.edge_count(), g.edge_count());
        for h in [&r, &two, &mv.graph] {
            for u in 0..h.node_count() {
                prop_assert!(!h.has_edge(u, u));
                for v in h.neighbors(u) {
                    prop_assert!(h.has_edge(v, u));
                }
            }
        }
    }
}
