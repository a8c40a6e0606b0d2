use std::fmt;
use std::str::FromStr;

use super::{
    chord_midway, chord_suite_graph, kearns_network, random_poisson, random_skewed, rewire,
    standard, two_cliques_bridged, KearnsLayout, RewireConfig, StandardGraph,
};
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// Any generator addressable from a one-line spec such as `clique:24`,
/// `rewired:0.2` or `poisson:30,0.3`. Stochastic specs draw from the seed
/// passed to [`GraphSpec::build`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphSpec {
    Standard(StandardGraph),
    /// `kearns` or `kearns:<layout>`
    Kearns(KearnsLayout),
    /// `rewired:<p>`, the default cluster network with endpoint rewiring.
    Rewired(f64),
    /// `poisson:<n>,<density>`
    Poisson(usize, f64),
    /// `skewed:<n>,<density>`
    Skewed(usize, f64),
    /// `two_cliques:<clique size>,<bridges>`
    TwoCliques(usize, usize),
    /// `chord_midway:<l>`
    ChordMidway(usize),
    /// `chord_suite`
    ChordSuite,
}

impl GraphSpec {
    pub fn build(&self, seed: u64) -> Result<Graph> {
        match *self {
            GraphSpec::Standard(s) => standard(s),
            GraphSpec::Kearns(layout) => Ok(kearns_network(layout)),
            GraphSpec::Rewired(p) => rewire(
                &kearns_network(KearnsLayout::default()),
                RewireConfig::new(p),
                seed,
            ),
            GraphSpec::Poisson(n, d) => random_poisson(n, d, seed),
            GraphSpec::Skewed(n, d) => random_skewed(n, d, seed),
            GraphSpec::TwoCliques(n, k) => two_cliques_bridged(n, k, seed),
            GraphSpec::ChordMidway(l) => chord_midway(l),
            GraphSpec::ChordSuite => Ok(chord_suite_graph(seed)),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Standard(s) => s.fmt(f),
            GraphSpec::Kearns(layout) => {
                let v = serde_json::to_value(layout).map_err(|_| fmt::Error)?;
                write!(f, "kearns:{}", v.as_str().unwrap_or_default())
            }
            GraphSpec::Rewired(p) => write!(f, "rewired:{p}"),
            GraphSpec::Poisson(n, d) => write!(f, "poisson:{n},{d}"),
            GraphSpec::Skewed(n, d) => write!(f, "skewed:{n},{d}"),
            GraphSpec::TwoCliques(n, k) => write!(f, "two_cliques:{n},{k}"),
            GraphSpec::ChordMidway(l) => write!(f, "chord_midway:{l}"),
            GraphSpec::ChordSuite => f.write_str("chord_suite"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let parts: Vec<&str> = args
            .split(',')
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .collect();
        let arity = |k: usize| -> Result<()> {
            if parts.len() == k {
                Ok(())
            } else {
                Err(invalid(format!(
                    "{name} takes {k} argument(s), got {}",
                    parts.len()
                )))
            }
        };
        let int = |a: &str| {
            a.parse::<usize>()
                .map_err(|_| invalid(format!("bad integer {a:?} in {s:?}")))
        };
        let real = |a: &str| {
            a.parse::<f64>()
                .map_err(|_| invalid(format!("bad number {a:?} in {s:?}")))
        };
        match name {
            "kearns" => match parts.as_slice() {
                [] => Ok(GraphSpec::Kearns(KearnsLayout::default())),
                [layout] => serde_json::from_value(serde_json::Value::String(layout.to_string()))
                    .map(GraphSpec::Kearns)
                    .map_err(|_| invalid(format!("unknown layout {layout:?}"))),
                _ => Err(invalid("kearns takes at most one argument")),
            },
            "rewired" => arity(1).and_then(|_| Ok(GraphSpec::Rewired(real(parts[0])?))),
            "poisson" => {
                arity(2).and_then(|_| Ok(GraphSpec::Poisson(int(parts[0])?, real(parts[1])?)))
            }
            "skewed" => {
                arity(2).and_then(|_| Ok(GraphSpec::Skewed(int(parts[0])?, real(parts[1])?)))
            }
            "two_cliques" => {
                arity(2).and_then(|_| Ok(GraphSpec::TwoCliques(int(parts[0])?, int(parts[1])?)))
            }
            "chord_midway" => arity(1).and_then(|_| Ok(GraphSpec::ChordMidway(int(parts[0])?))),
            "chord_suite" => arity(0).map(|_| GraphSpec::ChordSuite),
            _ => s.parse().map(GraphSpec::Standard),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_parse_and_print() {
        for spec in [
            "clique:24",
            "ring_lattice:24,4",
            "kearns:chain_shared",
            "kearns:ring_distinct",
            "rewired:0.2",
            "poisson:30,0.3",
            "skewed:30,0.3",
            "two_cliques:30,5",
            "chord_midway:8",
            "chord_suite",
        ] {
            let g: GraphSpec = spec.parse().unwrap();
            assert_eq!(g.to_string(), spec);
            g.build(3).unwrap();
        }
        assert_eq!(
            "kearns".parse::<GraphSpec>().unwrap(),
            GraphSpec::Kearns(KearnsLayout::ChainShared)
        );
        assert!("kearns:spiral".parse::<GraphSpec>().is_err());
        assert!("poisson:30".parse::<GraphSpec>().is_err());
        assert!("nonsense".parse::<GraphSpec>().is_err());
    }

    #[test]
    fn seeded_specs_are_reproducible() {
        let spec: GraphSpec = "rewired:0.4".parse().unwrap();
        assert_eq!(spec.build(11).unwrap(), spec.build(11).unwrap());
    }
}
