//! Whitespace edge-list format.
//!
//! One edge per line as `u v [w]`; `#` starts a comment and blank lines are
//! skipped. Three comment directives make a serialized graph round-trip
//! exactly, isolated nodes included:
//!
//! ```text
//! # directed: true
//! # labels: a b c d
//! # nodes: 4
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Mapping between file labels and dense node indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap {
    labels: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl LabelMap {
    pub fn identity(n: usize) -> Self {
        let mut map = LabelMap::default();
        for i in 0..n {
            map.intern(&i.to_string());
        }
        map
    }

    fn intern(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        i
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.get(i).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    fn is_identity(&self) -> bool {
        self.labels
            .iter()
            .enumerate()
            .all(|(i, l)| *l == i.to_string())
    }
}

/// Parses an undirected edge list (unless it carries `# directed: true`).
pub fn from_edge_list(text: &str) -> Result<(Graph, LabelMap)> {
    parse_edge_list(text, false)
}

/// Parses an edge list; `directed` is the default when no directive is present.
pub fn parse_edge_list(text: &str, directed: bool) -> Result<(Graph, LabelMap)> {
    let mut directed = directed;
    let mut declared_nodes: Option<usize> = None;
    let mut labels = LabelMap::default();
    let mut edges: Vec<(usize, usize, f64, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(v) = comment.strip_prefix("directed:") {
                directed = parse_bool(v.trim(), line_no)?;
            } else if let Some(v) = comment.strip_prefix("nodes:") {
                let n = v.trim().parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad node count {:?}", v.trim()),
                })?;
                if labels.is_empty() {
                    labels = LabelMap::identity(n);
                }
                declared_nodes = Some(n);
            } else if let Some(v) = comment.strip_prefix("labels:") {
                for l in v.split_whitespace() {
                    labels.intern(l);
                }
            }
            continue;
        }
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `u v [w]`, found {} fields", fields.len()),
            });
        }
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad weight {s:?}"),
            })?,
            None => 1.0,
        };
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::Validation(format!(
                "line {line_no}: weight {w} must be positive"
            )));
        }
        if fields[0] == fields[1] {
            return Err(Error::Validation(format!(
                "line {line_no}: self-loop on {:?}",
                fields[0]
            )));
        }
        let u = labels.intern(fields[0]);
        let v = labels.intern(fields[1]);
        edges.push((u, v, w, line_no));
    }

    if let Some(n) = declared_nodes {
        if labels.len() > n {
            return Err(Error::Validation(format!(
                "{} labels used but `# nodes: {n}` declared",
                labels.len()
            )));
        }
        // unlabeled trailing nodes keep their numeric index as label
        while labels.len() < n {
            let next = labels.len().to_string();
            labels.intern(&next);
        }
    }

    let n = labels.len();
    let mut g = if directed {
        Graph::new_directed(n)
    } else {
        Graph::new(n)
    };
    for (u, v, w, line_no) in edges {
        g.add_weighted_edge(u, v, w).map_err(|e| match e {
            Error::Validation(m) => Error::Validation(format!("line {line_no}: {m}")),
            other => other,
        })?;
    }
    Ok((g, labels))
}

fn parse_bool(s: &str, line: usize) -> Result<bool> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Parse {
            line,
            message: format!("expected true/false, found {s:?}"),
        }),
    }
}

/// Byte-stable serialization: directives, then edges sorted by index.
pub fn to_edge_list(g: &Graph, labels: Option<&LabelMap>) -> String {
    let mut out = String::new();
    if g.is_directed() {
        out.push_str("# directed: true\n");
    }
    let name = |i: usize| -> String {
        labels
            .and_then(|l| l.label(i))
            .map(str::to_string)
            .unwrap_or_else(|| i.to_string())
    };
    if let Some(l) = labels {
        if !l.is_identity() {
            out.push_str("# labels:");
            for i in 0..g.node_count() {
                out.push(' ');
                out.push_str(&name(i));
            }
            out.push('\n');
        }
    }
    let _ = writeln!(out, "# nodes: {}", g.node_count());
    for (u, v, w) in g.edges() {
        if w == 1.0 {
            let _ = writeln!(out, "{} {}", name(u), name(v));
        } else {
            let _ = writeln!(out, "{} {} {}", name(u), name(v), w);
        }
    }
    out
}
