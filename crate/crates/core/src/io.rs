//! JSON evidence files and report serialisation.
//!
//! Vertex ids and path bit strings are one-based / leftmost-first on the wire;
//! everything in memory is zero-based.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fast::ConflictTable;
use crate::graph::EvidenceGraph;
use crate::oracle::PathBelief;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> LoadError {
    LoadError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: usize,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub from: usize,
    pub to: usize,
    pub q: f64,
}

/// On-disk form of an evidence graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceFile {
    pub vertices: Vec<VertexRecord>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

/// A validated graph with its vertex labels and any load warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedGraph {
    pub graph: EvidenceGraph,
    pub labels: Vec<Option<String>>,
    pub warnings: Vec<String>,
}

impl EvidenceFile {
    pub fn validate(self) -> Result<LoadedGraph, LoadError> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(invalid("vertices", "at least one vertex is required"));
        }
        if n > crate::graph::MAX_VERTICES {
            return Err(invalid(
                "vertices",
                format!(
                    "{n} vertices exceed the maximum of {}",
                    crate::graph::MAX_VERTICES
                ),
            ));
        }
        let mut p = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for (k, v) in self.vertices.into_iter().enumerate() {
            if v.id != k + 1 {
                return Err(invalid(
                    format!("vertices[{k}].id"),
                    format!("non-consecutive ids: expected {}, found {}", k + 1, v.id),
                ));
            }
            if !(0.0..=1.0).contains(&v.p) {
                return Err(invalid(
                    format!("vertices[{k}].p"),
                    format!("{} lies outside [0, 1]", v.p),
                ));
            }
            p.push(v.p);
            labels.push(v.label);
        }

        let mut q: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (k, e) in self.edges.iter().enumerate() {
            if e.from == 0 || e.to > n || e.from >= e.to {
                return Err(invalid(
                    format!("edges[{k}]"),
                    format!("edge ({}, {}) needs 1 <= from < to <= {n}", e.from, e.to),
                ));
            }
            if !(0.0..=1.0).contains(&e.q) {
                return Err(invalid(
                    format!("edges[{k}].q"),
                    format!("{} lies outside [0, 1]", e.q),
                ));
            }
            if q.insert((e.from - 1, e.to - 1), e.q).is_some() {
                return Err(invalid(
                    format!("edges[{k}]"),
                    format!("duplicate edge ({}, {})", e.from, e.to),
                ));
            }
        }

        let mut warnings = Vec::new();
        let graph = EvidenceGraph::from_fn(p, |i, j| match q.get(&(i, j)) {
            Some(&v) => v,
            None => {
                warnings.push(format!(
                    "edge ({}, {}) not listed; q defaulted to 0",
                    i + 1,
                    j + 1
                ));
                0.0
            }
        })
        .map_err(|e| invalid("graph", e.to_string()))?;
        Ok(LoadedGraph {
            graph,
            labels,
            warnings,
        })
    }

    /// Lists every vertex and every edge, including zero doubts.
    pub fn from_graph(g: &EvidenceGraph, labels: &[Option<String>]) -> Self {
        Self {
            vertices: (0..g.n())
                .map(|i| VertexRecord {
                    id: i + 1,
                    p: g.p(i),
                    label: labels.get(i).cloned().flatten(),
                })
                .collect(),
            edges: g
                .edges()
                .map(|(i, j)| EdgeRecord {
                    from: i + 1,
                    to: j + 1,
                    q: g.q(i, j),
                })
                .collect(),
        }
    }
}

pub fn parse(text: &str) -> Result<LoadedGraph, LoadError> {
    serde_json::from_str::<EvidenceFile>(text)?.validate()
}

pub fn load(path: impl AsRef<Path>) -> Result<LoadedGraph, LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)
}

pub fn emit_json(g: &EvidenceGraph, labels: &[Option<String>]) -> String {
    serde_json::to_string_pretty(&EvidenceFile::from_graph(g, labels))
        .expect("evidence files always serialise")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct PathRecord {
    pub path: String,
    pub support: f64,
    pub plausibility: f64,
    pub support_unnormalized: f64,
    pub plausibility_unnormalized: f64,
}

impl From<&PathBelief> for PathRecord {
    fn from(b: &PathBelief) -> Self {
        Self {
            path: b.path.to_string(),
            support: b.support,
            plausibility: b.plausibility,
            support_unnormalized: b.support_unnormalized,
            plausibility_unnormalized: b.plausibility_unnormalized,
        }
    }
}

/// Output of `rank` and `query`.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct PathReport {
    pub conflict: f64,
    pub paths: Vec<PathRecord>,
    pub warnings: Vec<String>,
}

impl PathReport {
    pub fn new(conflict: f64, beliefs: &[PathBelief], warnings: &[String]) -> Self {
        Self {
            conflict,
            paths: beliefs.iter().map(PathRecord::from).collect(),
            warnings: warnings.to_vec(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports always serialise");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::from(
                    "path,support,plausibility,support_unnormalized,plausibility_unnormalized,conflict\n",
                );
                for r in &self.paths {
                    let _ = writeln!(
                        s,
                        "{},{:?},{:?},{:?},{:?},{:?}",
                        r.path,
                        r.support,
                        r.plausibility,
                        r.support_unnormalized,
                        r.plausibility_unnormalized,
                        self.conflict
                    );
                }
                s
            }
            Format::Table => {
                let width = self.paths.first().map_or(4, |r| r.path.len().max(4));
                let mut s = format!(
                    "{:>4}  {:<width$}  {:>10}  {:>10}  {:>10}  {:>10}\n",
                    "rank", "path", "support", "plaus", "support*", "plaus*"
                );
                for (i, r) in self.paths.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "{:>4}  {:<width$}  {:>10.6}  {:>10.6}  {:>10.6}  {:>10.6}",
                        i + 1,
                        r.path,
                        r.support,
                        r.plausibility,
                        r.support_unnormalized,
                        r.plausibility_unnormalized
                    );
                }
                let _ = writeln!(s, "conflict k = {:.6}", self.conflict);
                s
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct EdgeConflict {
    pub from: usize,
    pub to: usize,
    pub k: f64,
}

/// Output of `conflict`.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ConflictReport {
    pub conflict: f64,
    pub edges: Vec<EdgeConflict>,
    pub warnings: Vec<String>,
}

impl ConflictReport {
    pub fn new(table: &ConflictTable, warnings: &[String]) -> Self {
        Self {
            conflict: table.k(),
            edges: table
                .contributions()
                .map(|(i, j, k)| EdgeConflict {
                    from: i + 1,
                    to: j + 1,
                    k,
                })
                .collect(),
            warnings: warnings.to_vec(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports always serialise");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::from("from,to,k\n");
                for e in &self.edges {
                    let _ = writeln!(s, "{},{},{:?}", e.from, e.to, e.k);
                }
                s
            }
            Format::Table => {
                let mut s = format!("{:>4}  {:>4}  {:>10}\n", "from", "to", "k_ij");
                for e in &self.edges {
                    let _ = writeln!(s, "{:>4}  {:>4}  {:>10.6}", e.from, e.to, e.k);
                }
                let _ = writeln!(s, "conflict k = {:.6}", self.conflict);
                s
            }
        }
    }
}
