//! Moving a tie from a short cycle onto a long chordless cycle.

use rand::Rng;

use super::{random_permutation, relabel, standard, StandardGraph};
use crate::error::{domain, Result};
use crate::graph::{
    distance_summary, is_connected, longest_chordless_cycle, smallest_cycle, Cycle, Graph,
};
use crate::rng::seeded;
use crate::spectra::{algebraic_connectivity, LaplacianKind};

/// Shortest chordless cycle a relocated tie may be placed on.
pub const CHORD_MIN_CYCLE: usize = 6;

/// Outcome of moving one tie.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordMove {
    pub removed: (usize, usize),
    pub added: (usize, usize),
    /// Longest chordless cycle of the graph after the removal.
    pub cycle: Cycle,
    pub graph: Graph,
    pub mean_distance: f64,
}

/// `C_l` plus the chord `(0, ⌊l/2⌋)`.
pub fn chord_midway(l: usize) -> Result<Graph> {
    if l < CHORD_MIN_CYCLE {
        return Err(domain(format!(
            "midway chords need l >= {CHORD_MIN_CYCLE}, got {l}"
        )));
    }
    let mut g = standard(StandardGraph::Cycle(l))?;
    g.add_edge(0, l / 2)?;
    Ok(g)
}

struct Plan {
    removed: (usize, usize),
    without: Graph,
    cycle: Cycle,
    best: ChordMove,
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn with_tie(h: &Graph, e: (usize, usize)) -> Graph {
    let mut g = h.clone();
    g.add_edge(e.0, e.1).expect("candidate is a non-tie");
    g
}

fn plan(g: &Graph) -> Result<Plan> {
    let g = g.undirected_view();
    let short = smallest_cycle(&g).ok_or_else(|| domain("graph has no cycle"))?;
    let mut best: Option<(f64, f64, Plan)> = None;
    for (u, v) in short.edges() {
        let removed = ordered(u, v);
        let mut h: Graph = (*g).clone();
        h.remove_edge(u, v);
        if !is_connected(&h) {
            continue;
        }
        let Some(cycle) = longest_chordless_cycle(&h, CHORD_MIN_CYCLE)? else {
            continue;
        };
        let l = cycle.len();
        let mut candidates: Vec<(usize, usize)> = (0..l)
            .map(|j| ordered(cycle.nodes[j], cycle.nodes[(j + l / 2) % l]))
            .filter(|&e| e != removed)
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        for e in candidates {
            let trial = with_tie(&h, e);
            let d = distance_summary(&trial).mean_distance;
            let l2 = algebraic_connectivity(&trial, LaplacianKind::Binary)?;
            let better = match &best {
                None => true,
                Some((bd, bl2, _)) => d < *bd || (d == *bd && l2 > *bl2),
            };
            if better {
                let mv = ChordMove {
                    removed,
                    added: e,
                    cycle: cycle.clone(),
                    graph: trial,
                    mean_distance: d,
                };
                best = Some((
                    d,
                    l2,
                    Plan {
                        removed,
                        without: h.clone(),
                        cycle: cycle.clone(),
                        best: mv,
                    },
                ));
            }
        }
    }
    best.map(|(_, _, p)| p).ok_or_else(|| {
        domain(format!(
            "no tie of the smallest cycle can be moved onto a chordless cycle of length >= {CHORD_MIN_CYCLE}"
        ))
    })
}

/// Removes one tie of a smallest cycle and re-inserts it midway across the
/// longest chordless cycle of what remains.
///
/// Every tie of the smallest cycle whose removal keeps the graph connected is
/// tried, with every midway position on the cycle. The choice minimizes the
/// resulting mean distance, then maximizes the binary λ₂, then keeps the
/// first candidate in order.
pub fn relocate_chord(g: &Graph) -> Result<ChordMove> {
    Ok(plan(g)?.best)
}

/// The same removal as [`relocate_chord`], but the tie goes to the chord of
/// that chordless cycle that leaves the mean distance largest.
pub fn misplace_chord(g: &Graph) -> Result<ChordMove> {
    let p = plan(g)?;
    let l = p.cycle.len();
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for j in 0..l {
        for s in 2..l - 1 {
            let e = ordered(p.cycle.nodes[j], p.cycle.nodes[(j + s) % l]);
            if e != p.removed && !p.without.has_edge(e.0, e.1) {
                candidates.push(e);
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    let mut worst: Option<ChordMove> = None;
    for e in candidates {
        let trial = with_tie(&p.without, e);
        let d = distance_summary(&trial).mean_distance;
        if worst.as_ref().is_none_or(|w| d > w.mean_distance) {
            worst = Some(ChordMove {
                removed: p.removed,
                added: e,
                cycle: p.cycle.clone(),
                graph: trial,
                mean_distance: d,
            });
        }
    }
    Ok(worst.expect("a chordless cycle of length >= 6 has chords to add"))
}

/// Test-suite graph: `C_l` (`l` in 7..=16) with one extra node tied to two
/// consecutive cycle nodes, labels shuffled.
pub fn chord_suite_graph(seed: u64) -> Graph {
    let mut rng = seeded(seed);
    let l = rng.gen_range(7..=16);
    let mut g = Graph::new(l + 1);
    for i in 0..l {
        g.add_edge(i, (i + 1) % l).expect("cycle tie");
    }
    let i = rng.gen_range(0..l);
    g.add_edge(l, i).expect("triad tie");
    g.add_edge(l, (i + 1) % l).expect("triad tie");
    relabel(&g, &random_permutation(l + 1, &mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c6_midway_chord_distance() {
        let c6 = standard(StandardGraph::Cycle(6)).unwrap();
        let g = chord_midway(6).unwrap();
        assert!((distance_summary(&c6).mean_distance - 1.8).abs() < 1e-15);
        // pair distances with the chord: 7 ones, 8 twos
        assert!((distance_summary(&g).mean_distance - 25.0 / 15.0).abs() < 1e-15);
        assert!(chord_midway(5).is_err());
    }

    #[test]
    fn relocation_preserves_tie_count() {
        for seed in 0..5 {
            let g = chord_suite_graph(seed);
            let careful = relocate_chord(&g).unwrap();
            let awkward = misplace_chord(&g).unwrap();
            assert_eq!(careful.removed, awkward.removed);
            for mv in [&careful, &awkward] {
                assert_eq!(mv.graph.edge_count(), g.edge_count());
                assert!(is_connected(&mv.graph));
                assert!(!g.has_edge(mv.added.0, mv.added.1) || mv.added == mv.removed);
            }
            assert!(careful.mean_distance <= awkward.mean_distance);
        }
    }

    #[test]
    fn needs_a_long_chordless_cycle() {
        let k4 = standard(StandardGraph::Clique(4)).unwrap();
        assert!(relocate_chord(&k4).is_err());
        let tree = standard(StandardGraph::Star(5)).unwrap();
        assert!(relocate_chord(&tree).is_err());
    }
}
