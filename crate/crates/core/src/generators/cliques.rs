use super::{clique_on, random_permutation, relabel};
use crate::error::{domain, Result};
use crate::graph::{is_connected, Graph};
use crate::rng::seeded;

/// Two `n_each`-cliques joined by `k` disjoint bridges, thinned so the tie
/// count stays that of the two separate cliques.
///
/// Bridge `i` joins node `i` of the first clique to node `i` of the second.
/// For each bridge one intra-clique tie is removed, alternating between the
/// cliques. The removed tie keeps every degree at or above `k` when
/// possible, then avoids bridge endpoints, then spreads removals evenly
/// (fewest prior removals at its ends);
/// remaining ties are tried in index order and a removal that would
/// disconnect the graph is skipped. The seed only shuffles node labels.
pub fn two_cliques_bridged(n_each: usize, k: usize, seed: u64) -> Result<Graph> {
    if n_each == 0 {
        return Err(domain("cliques need at least one node"));
    }
    if k > n_each {
        return Err(domain(format!(
            "{k} disjoint bridges do not fit between two {n_each}-cliques"
        )));
    }
    let n = n_each;
    let mut g = Graph::new(2 * n);
    let block = clique_on(n);
    for off in [0, n] {
        for (u, v, _) in block.edges() {
            g.add_edge(off + u, off + v).expect("valid clique edge");
        }
    }
    for i in 0..k {
        g.add_edge(i, n + i).expect("valid bridge");
    }
    let is_endpoint = |x: usize| (x % n) < k;
    let mut removed = vec![0usize; 2 * n];
    for i in 0..k {
        let off = if i % 2 == 0 { 0 } else { n };
        let mut candidates: Vec<(bool, usize, usize, usize, usize)> = Vec::new();
        for a in off..off + n {
            for b in (a + 1)..off + n {
                if g.has_edge(a, b) {
                    let thins = g.degree(a).min(g.degree(b)) <= k;
                    let touch = usize::from(is_endpoint(a)) + usize::from(is_endpoint(b));
                    candidates.push((thins, touch, removed[a] + removed[b], a, b));
                }
            }
        }
        candidates.sort_unstable();
        let mut done = false;
        for &(_, _, _, a, b) in &candidates {
            g.remove_edge(a, b);
            if is_connected(&g) {
                removed[a] += 1;
                removed[b] += 1;
                done = true;
                break;
            }
            g.add_edge(a, b).expect("restoring tie");
        }
        if !done {
            return Err(domain(format!(
                "cannot remove a tie from a {n}-clique for bridge {} without disconnecting",
                i + 1
            )));
        }
    }
    let mut rng = seeded(seed);
    Ok(relabel(&g, &random_permutation(2 * n, &mut rng)))
}
