//! Switching-topology dynamics: each round diffuses over its own matching
//! or subgraph, and its output is the next round's input.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{diffuse_spectral, Method, PositionVector, Trajectory};
use crate::error::{domain, invalid, Result};
use crate::graph::{connected_components, Graph};
use crate::rng::stream;
use crate::spectra::LaplacianKind;

/// One round of interaction.
///
/// In JSON a round is either a bare list of pairs (a matching) or
/// `{"subgraph": [[u, v], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Round {
    Matching(Vec<(usize, usize)>),
    Subgraph { subgraph: Vec<(usize, usize)> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundSchedule {
    pub n: usize,
    pub rounds: Vec<Round>,
}

impl RoundSchedule {
    pub fn new(n: usize, rounds: Vec<Round>) -> Result<Self> {
        let s = RoundSchedule { n, rounds };
        s.validate()?;
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: RoundSchedule = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (r, round) in self.rounds.iter().enumerate() {
            let (pairs, matching) = match round {
                Round::Matching(p) => (p, true),
                Round::Subgraph { subgraph } => (subgraph, false),
            };
            let mut used = vec![false; self.n];
            for &(u, v) in pairs {
                if u >= self.n || v >= self.n {
                    return Err(invalid(format!(
                        "round {r}: pair ({u}, {v}) outside 0..{}",
                        self.n
                    )));
                }
                if u == v {
                    return Err(invalid(format!("round {r}: node {u} paired with itself")));
                }
                if matching {
                    if used[u] || used[v] {
                        return Err(invalid(format!("round {r}: pairs overlap at ({u}, {v})")));
                    }
                    used[u] = true;
                    used[v] = true;
                }
            }
        }
        Ok(())
    }

    /// Same rounds in the opposite order.
    pub fn reversed(&self) -> Self {
        RoundSchedule {
            n: self.n,
            rounds: self.rounds.iter().rev().cloned().collect(),
        }
    }
}

/// How positions mix within a round.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundRule {
    /// Every interacting group settles on its mean (the long-time limit).
    #[default]
    PairAverage,
    /// Binary-Laplacian diffusion for `t_round` on the round's ties.
    Exponential { t_round: f64 },
}

fn apply_round(round: &Round, n: usize, y: &mut [f64], rule: RoundRule) -> Result<()> {
    match (round, rule) {
        (Round::Matching(pairs), RoundRule::PairAverage) => {
            for &(u, v) in pairs {
                let m = 0.5 * (y[u] + y[v]);
                y[u] = m;
                y[v] = m;
            }
        }
        (Round::Matching(pairs), RoundRule::Exponential { t_round }) => {
            let decay = (-2.0 * t_round).exp();
            for &(u, v) in pairs {
                let m = 0.5 * (y[u] + y[v]);
                y[u] = m + (y[u] - m) * decay;
                y[v] = m + (y[v] - m) * decay;
            }
        }
        (Round::Subgraph { subgraph }, RoundRule::PairAverage) => {
            let g = Graph::from_edges(n, subgraph)?;
            for group in connected_components(&g).groups {
                if group.len() < 2 {
                    continue;
                }
                let m = group.iter().map(|&i| y[i]).sum::<f64>() / group.len() as f64;
                for i in group {
                    y[i] = m;
                }
            }
        }
        (Round::Subgraph { subgraph }, RoundRule::Exponential { t_round }) => {
            let g = Graph::from_edges(n, subgraph)?;
            let y0 = PositionVector::new(y.to_vec())?;
            let tr = diffuse_spectral(&g, LaplacianKind::Binary, &y0, &[t_round])?;
            y.copy_from_slice(&tr.samples[0]);
        }
    }
    Ok(())
}

/// Applies the rounds in order; sample `r` is the state after `r` rounds.
pub fn run_rounds(
    schedule: &RoundSchedule,
    y0: &PositionVector,
    rule: RoundRule,
) -> Result<Trajectory> {
    if schedule.rounds.is_empty() {
        return Err(domain("schedule has no rounds"));
    }
    if y0.len() != schedule.n {
        return Err(invalid(format!(
            "position vector has {} entries for a {}-node schedule",
            y0.len(),
            schedule.n
        )));
    }
    if let RoundRule::Exponential { t_round } = rule {
        if !(t_round >= 0.0 && t_round.is_finite()) {
            return Err(domain(format!(
                "round duration {t_round} must be non-negative"
            )));
        }
    }
    schedule.validate()?;
    let mut y = y0.as_slice().to_vec();
    let mut times = vec![0.0];
    let mut samples = vec![y.clone()];
    for (r, round) in schedule.rounds.iter().enumerate() {
        apply_round(round, schedule.n, &mut y, rule)?;
        times.push((r + 1) as f64);
        samples.push(y.clone());
    }
    Ok(Trajectory {
        times,
        samples,
        method: Method::Rounds,
        coefficients: None,
        disconnected: false,
    })
}

/// Standard deviation dividing by `n`.
pub fn population_sd(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    (y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Two round orders over the same network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryProtocol {
    pub description: String,
    pub treatment1: RoundSchedule,
    pub treatment2: RoundSchedule,
    #[serde(default)]
    pub rule: RoundRule,
}

/// Sixteen nodes in four 4-node clusters (`4c..4c+4`).
///
/// Treatment 1 runs one between-cluster round and then the three-round
/// round-robin inside every cluster; treatment 2 runs the same rounds with
/// the between-cluster round last. Four members cannot cover three other
/// clusters evenly, so the between-cluster matching pairs clusters 0-1 and
/// 2-3 twice and every other cluster pair once.
pub fn four_cluster_protocol() -> MemoryProtocol {
    let inter = vec![
        (0, 4),
        (1, 8),
        (2, 12),
        (3, 5),
        (6, 9),
        (7, 13),
        (10, 14),
        (11, 15),
    ];
    let robin = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    let within: Vec<Round> = robin
        .iter()
        .map(|pairs| {
            Round::Matching(
                (0..4)
                    .flat_map(|c| pairs.iter().map(move |&(a, b)| (4 * c + a, 4 * c + b)))
                    .collect(),
            )
        })
        .collect();
    let mut first = vec![Round::Matching(inter.clone())];
    first.extend(within.iter().cloned());
    let mut last = within;
    last.push(Round::Matching(inter));
    MemoryProtocol {
        description: "four 4-cliques; between-cluster matching \
                      (0,4)(1,8)(2,12)(3,5)(6,9)(7,13)(10,14)(11,15); \
                      within-cluster round-robin (01)(23), (02)(13), (03)(12)"
            .to_string(),
        treatment1: RoundSchedule {
            n: 16,
            rounds: first,
        },
        treatment2: RoundSchedule {
            n: 16,
            rounds: last,
        },
        rule: RoundRule::PairAverage,
    }
}

/// `sd(treatment 2) - sd(treatment 1)` of the final positions from `y0`,
/// together with the two standard deviations.
pub fn sd_difference(protocol: &MemoryProtocol, y0: &PositionVector) -> Result<(f64, f64, f64)> {
    let a = run_rounds(&protocol.treatment1, y0, protocol.rule)?;
    let b = run_rounds(&protocol.treatment2, y0, protocol.rule)?;
    let sd1 = population_sd(a.last().unwrap_or(&[]));
    let sd2 = population_sd(b.last().unwrap_or(&[]));
    Ok((sd2 - sd1, sd1, sd2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryResult {
    pub reps: usize,
    pub mean_difference: f64,
    pub std_error: f64,
    /// `mean_difference / std_error`
    pub z_score: f64,
    pub mean_sd_treatment1: f64,
    pub mean_sd_treatment2: f64,
    pub sd_convention: String,
    pub protocol: String,
}

/// Monte-Carlo average of [`sd_difference`] over fair-coin 0/1 starts.
///
/// Replication `r` draws from RNG stream `(seed, 0, r)`, so the result does
/// not depend on the thread count.
pub fn memory_experiment(
    reps: usize,
    seed: u64,
    protocol: &MemoryProtocol,
) -> Result<MemoryResult> {
    if reps < 1 {
        return Err(domain("memory experiment needs at least one replication"));
    }
    let n = protocol.treatment1.n;
    if protocol.treatment2.n != n {
        return Err(invalid("treatments are defined on different node counts"));
    }
    let rows: Vec<(f64, f64, f64)> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, 0, r as u64);
            let y0: Vec<f64> = (0..n)
                .map(|_| if rng.gen::<bool>() { 1.0 } else { 0.0 })
                .collect();
            sd_difference(protocol, &PositionVector::new(y0)?)
        })
        .collect::<Result<_>>()?;
    let k = reps as f64;
    let mean = rows.iter().map(|r| r.0).sum::<f64>() / k;
    let var = if reps > 1 {
        rows.iter().map(|r| (r.0 - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    let std_error = (var / k).sqrt();
    Ok(MemoryResult {
        reps,
        mean_difference: mean,
        std_error,
        z_score: if std_error > 0.0 {
            mean / std_error
        } else {
            0.0
        },
        mean_sd_treatment1: rows.iter().map(|r| r.1).sum::<f64>() / k,
        mean_sd_treatment2: rows.iter().map(|r| r.2).sum::<f64>() / k,
        sd_convention: "population (divide by n)".to_string(),
        protocol: protocol.description.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(y: &[f64]) -> PositionVector {
        PositionVector::new(y.to_vec()).unwrap()
    }

    #[test]
    fn single_pair_average() {
        let s = RoundSchedule::new(2, vec![Round::Matching(vec![(0, 1)])]).unwrap();
        let tr = run_rounds(&s, &pv(&[0.0, 1.0]), RoundRule::PairAverage).unwrap();
        assert_eq!(tr.last().unwrap(), &[0.5, 0.5]);
    }

    #[test]
    fn round_robin_reaches_the_mean() {
        let s = RoundSchedule::new(
            4,
            vec![
                Round::Matching(vec![(0, 1), (2, 3)]),
                Round::Matching(vec![(0, 2), (1, 3)]),
            ],
        )
        .unwrap();
        let tr = run_rounds(&s, &pv(&[1.0, 0.0, 3.0, 0.0]), RoundRule::PairAverage).unwrap();
        assert_eq!(tr.last().unwrap(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn unmatched_nodes_are_untouched() {
        let s = RoundSchedule::new(3, vec![Round::Matching(vec![(0, 1)])]).unwrap();
        let tr = run_rounds(
            &s,
            &pv(&[0.0, 1.0, 0.123456789]),
            RoundRule::Exponential { t_round: 1.0 },
        )
        .unwrap();
        assert_eq!(tr.last().unwrap()[2], 0.123456789);
    }

    #[test]
    fn overlapping_pairs_rejected() {
        assert!(RoundSchedule::new(3, vec![Round::Matching(vec![(0, 1), (1, 2)])]).is_err());
        assert!(RoundSchedule::new(
            3,
            vec![Round::Subgraph {
                subgraph: vec![(0, 1), (1, 2)]
            }]
        )
        .is_ok());
    }

    #[test]
    fn exponential_limit_is_pair_average() {
        let p = four_cluster_protocol();
        let y0 = pv(&[
            1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0,
        ]);
        let a = run_rounds(&p.treatment1, &y0, RoundRule::PairAverage).unwrap();
        let b = run_rounds(&p.treatment1, &y0, RoundRule::Exponential { t_round: 50.0 }).unwrap();
        for (x, y) in a.last().unwrap().iter().zip(b.last().unwrap()) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn subgraph_rounds() {
        let s = RoundSchedule::new(
            4,
            vec![Round::Subgraph {
                subgraph: vec![(0, 1), (1, 2)],
            }],
        )
        .unwrap();
        let tr = run_rounds(&s, &pv(&[0.0, 3.0, 6.0, 9.0]), RoundRule::PairAverage).unwrap();
        assert_eq!(tr.last().unwrap(), &[3.0, 3.0, 3.0, 9.0]);
        let e = run_rounds(
            &s,
            &pv(&[0.0, 3.0, 6.0, 9.0]),
            RoundRule::Exponential { t_round: 60.0 },
        )
        .unwrap();
        assert!((e.last().unwrap()[0] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn schedule_json() {
        let text = r#"{"n": 4, "rounds": [[[0, 1], [2, 3]], {"subgraph": [[0, 2], [2, 3]]}]}"#;
        let s = RoundSchedule::from_json(text).unwrap();
        assert_eq!(s.rounds[0], Round::Matching(vec![(0, 1), (2, 3)]));
        assert!(matches!(s.rounds[1], Round::Subgraph { .. }));
        let back = RoundSchedule::from_json(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(RoundSchedule::from_json(r#"{"n": 2, "rounds": [[[0, 5]]]}"#).is_err());
    }

    #[test]
    fn protocol_shape() {
        let p = four_cluster_protocol();
        p.treatment1.validate().unwrap();
        assert_eq!(p.treatment1.rounds.len(), 4);
        assert_eq!(p.treatment1.rounds[0], p.treatment2.rounds[3]);
        assert_eq!(p.treatment1.reversed().rounds[3], p.treatment2.rounds[3]);
        for round in &p.treatment1.rounds {
            let Round::Matching(pairs) = round else {
                panic!()
            };
            assert_eq!(pairs.len(), 8);
        }
    }

    #[test]
    fn constant_start_contributes_nothing() {
        let (d, _, _) = sd_difference(&four_cluster_protocol(), &pv(&[1.0; 16])).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn memory_experiment_is_deterministic() {
        let p = four_cluster_protocol();
        let a = memory_experiment(200, 5, &p).unwrap();
        let b = memory_experiment(200, 5, &p).unwrap();
        assert_eq!(a, b);
        assert!(memory_experiment(0, 5, &p).is_err());
    }
}
