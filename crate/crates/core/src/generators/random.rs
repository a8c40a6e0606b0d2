use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index;

use crate::error::{domain, Error, Result};
use crate::graph::{is_connected, Graph};
use crate::rng::seeded;

/// Consecutive disconnected draws tolerated before giving up.
pub const MAX_CONNECT_ATTEMPTS: usize = 1000;
/// Power-law exponent of the skewed expected-degree family.
pub const SKEWED_EXPONENT: f64 = 2.5;

fn edge_budget(n: usize, density: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&density) {
        return Err(domain(format!("density {density} outside [0, 1]")));
    }
    if n < 2 {
        return Err(domain(format!("random graphs need n >= 2, got {n}")));
    }
    let pairs = n * (n - 1) / 2;
    let m = (density * pairs as f64).round() as usize;
    if m < n - 1 {
        return Err(domain(format!(
            "{m} ties cannot connect {n} nodes (density {density})"
        )));
    }
    Ok(m)
}

fn until_connected<F>(seed: u64, mut draw: F) -> Result<Graph>
where
    F: FnMut(&mut rand_chacha::ChaCha8Rng) -> Option<Graph>,
{
    let mut rng = seeded(seed);
    for _ in 0..MAX_CONNECT_ATTEMPTS {
        if let Some(g) = draw(&mut rng) {
            if is_connected(&g) {
                return Ok(g);
            }
        }
    }
    Err(Error::Resource(format!(
        "{MAX_CONNECT_ATTEMPTS} consecutive samples were disconnected"
    )))
}

/// Uniform graph with exactly `round(density · n(n-1)/2)` ties, conditioned
/// on being connected.
pub fn random_poisson(n: usize, density: f64, seed: u64) -> Result<Graph> {
    let m = edge_budget(n, density)?;
    let pairs = n * (n - 1) / 2;
    until_connected(seed, |rng| {
        let mut g = Graph::new(n);
        for k in index::sample(rng, pairs, m).into_iter() {
            let (u, v) = unrank_pair(k, n);
            g.add_edge(u, v).expect("distinct pair");
        }
        Some(g)
    })
}

/// Index `k` of the pairs `(0,1), (0,2), ..., (n-2,n-1)`.
fn unrank_pair(mut k: usize, n: usize) -> (usize, usize) {
    let mut u = 0;
    while k >= n - 1 - u {
        k -= n - 1 - u;
        u += 1;
    }
    (u, u + 1 + k)
}

/// Expected-degree graph with power-law weights `w_i ∝ (i+1)^(-1/(γ-1))`,
/// `γ =` [`SKEWED_EXPONENT`], with the same tie count as
/// [`random_poisson`] and conditioned on being connected.
///
/// Ties are placed by drawing both ends proportionally to the weights and
/// rejecting self-loops and repeats until the tie count is reached.
pub fn random_skewed(n: usize, density: f64, seed: u64) -> Result<Graph> {
    let m = edge_budget(n, density)?;
    let exponent = -1.0 / (SKEWED_EXPONENT - 1.0);
    let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(exponent)).collect();
    let pick = WeightedIndex::new(&weights).expect("positive weights");
    let max_draws = 1000 * m.max(1);
    until_connected(seed, |rng| {
        let mut g = Graph::new(n);
        let mut draws = 0;
        while g.edge_count() < m {
            draws += 1;
            if draws > max_draws {
                return None;
            }
            let u = pick.sample(rng);
            let v = pick.sample(rng);
            if u != v {
                g.add_edge(u, v).expect("distinct pair");
            }
        }
        Some(g)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::density;

    #[test]
    fn unrank_covers_all_pairs() {
        let n = 7;
        let got: Vec<_> = (0..21).map(|k| unrank_pair(k, n)).collect();
        let want: Vec<_> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn exact_density_and_connected() {
        for n in [10, 23, 50] {
            let p = random_poisson(n, 0.3, n as u64).unwrap();
            let s = random_skewed(n, 0.3, n as u64).unwrap();
            let m = (0.3 * (n * (n - 1) / 2) as f64).round() as usize;
            assert_eq!(p.edge_count(), m);
            assert_eq!(s.edge_count(), m);
            assert!(is_connected(&p) && is_connected(&s));
            assert!((density(&p).unwrap() - density(&s).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn skewed_degrees_are_uneven() {
        let s = random_skewed(50, 0.3, 4).unwrap();
        assert!(s.max_degree() >= 2 * s.min_degree().max(1));
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            random_poisson(24, 0.2, 9).unwrap(),
            random_poisson(24, 0.2, 9).unwrap()
        );
        assert_ne!(
            random_poisson(24, 0.2, 9).unwrap(),
            random_poisson(24, 0.2, 10).unwrap()
        );
    }

    #[test]
    fn infeasible_density() {
        assert!(random_poisson(20, 0.01, 0).is_err());
        assert!(random_skewed(20, 1.5, 0).is_err());
    }
}
