//! Text and JSON formats for graphs, fields and boundary data.
//!
//! Edge lists hold one `u v [w]` triple per line (weight defaults to 1.0);
//! lines whose first non-blank character is `#` are comments. Graph JSON is
//! `{"vertex_count", "edges": [[u, v, w], ...], "labels"?, "frontier"?}`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build_graph, Graph, GraphError, VertexId};
use crate::harmonic::ScalarField;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {error}")]
    Io {
        path: PathBuf,
        error: std::io::Error,
    },
    #[error("{path}: {message}")]
    InFile { path: PathBuf, message: String },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("field has no value for vertex {0}")]
    MissingValue(VertexId),
    #[error("field references vertex {vertex} but the graph has {vertex_count} vertices")]
    UnknownVertex {
        vertex: VertexId,
        vertex_count: usize,
    },
}

impl IoError {
    fn in_file(self, path: &Path) -> Self {
        match self {
            e @ IoError::Io { .. } => e,
            other => IoError::InFile {
                path: path.to_path_buf(),
                message: other.to_string(),
            },
        }
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|error| IoError::Io {
        path: path.to_path_buf(),
        error,
    })
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), IoError> {
    fs::write(path, contents).map_err(|error| IoError::Io {
        path: path.to_path_buf(),
        error,
    })
}

pub fn parse_edge_list(text: &str) -> Result<Vec<(VertexId, VertexId, f64)>, IoError> {
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(IoError::Parse {
                line,
                message: format!("expected `u v [w]`, found {} fields", fields.len()),
            });
        }
        let vertex = |s: &str| {
            s.parse::<VertexId>().map_err(|_| IoError::Parse {
                line,
                message: format!("invalid vertex id `{s}`"),
            })
        };
        let u = vertex(fields[0])?;
        let v = vertex(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| IoError::Parse {
                line,
                message: format!("invalid weight `{s}`"),
            })?,
            None => 1.0,
        };
        edges.push((u, v, w));
    }
    Ok(edges)
}

pub fn edge_list_graph(text: &str) -> Result<Graph, IoError> {
    Ok(build_graph(parse_edge_list(text)?)?)
}

pub fn load_edge_list(path: &Path) -> Result<Graph, IoError> {
    edge_list_graph(&read(path)?).map_err(|e| e.in_file(path))
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<VertexId, String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    frontier: Vec<VertexId>,
}

pub fn graph_to_json(g: &Graph) -> String {
    let doc = GraphJson {
        vertex_count: g.vertex_count(),
        edges: g.edges().iter().map(|e| (e.u, e.v, e.w)).collect(),
        labels: g.labels().cloned(),
        frontier: g.frontier().to_vec(),
    };
    serde_json::to_string(&doc).expect("graph serialization cannot fail")
}

pub fn graph_from_json(text: &str) -> Result<Graph, IoError> {
    let doc: GraphJson = serde_json::from_str(text)?;
    let mut g = Graph::with_vertex_count(doc.vertex_count, doc.edges)?;
    if let Some(labels) = doc.labels {
        g.set_labels(labels)?;
    }
    g.set_frontier(doc.frontier)?;
    Ok(g)
}

/// Loads a graph from JSON (`.json` extension) or the edge-list format.
pub fn load_graph(path: &Path) -> Result<Graph, IoError> {
    if path.extension().is_some_and(|e| e == "json") {
        graph_from_json(&read(path)?).map_err(|e| e.in_file(path))
    } else {
        load_edge_list(path)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct FieldJson {
    values: BTreeMap<VertexId, f64>,
    interior: Vec<VertexId>,
    max_residual: Option<f64>,
}

pub fn field_to_json(f: &ScalarField) -> String {
    let doc = FieldJson {
        values: f.values.iter().copied().enumerate().collect(),
        interior: f.interior_vertices().collect(),
        max_residual: f.max_residual,
    };
    serde_json::to_string(&doc).expect("field serialization cannot fail")
}

/// Parses a field for a graph with `vertex_count` vertices; every vertex must
/// carry a value.
pub fn field_from_json(text: &str, vertex_count: usize) -> Result<ScalarField, IoError> {
    let doc: FieldJson = serde_json::from_str(text)?;
    let check = |v: VertexId| {
        if v < vertex_count {
            Ok(())
        } else {
            Err(IoError::UnknownVertex {
                vertex: v,
                vertex_count,
            })
        }
    };
    let mut values = vec![f64::NAN; vertex_count];
    for (&v, &x) in &doc.values {
        check(v)?;
        values[v] = x;
    }
    if let Some(v) = (0..vertex_count).find(|&v| !doc.values.contains_key(&v)) {
        return Err(IoError::MissingValue(v));
    }
    let mut interior = vec![false; vertex_count];
    for &v in &doc.interior {
        check(v)?;
        interior[v] = true;
    }
    Ok(ScalarField {
        values,
        interior,
        max_residual: doc.max_residual,
    })
}

pub fn load_field(path: &Path, vertex_count: usize) -> Result<ScalarField, IoError> {
    field_from_json(&read(path)?, vertex_count).map_err(|e| e.in_file(path))
}

/// Boundary data is a flat JSON object mapping vertex id to value.
pub fn boundary_from_json(text: &str) -> Result<BTreeMap<VertexId, f64>, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn boundary_to_json(boundary: &BTreeMap<VertexId, f64>) -> String {
    serde_json::to_string(boundary).expect("boundary serialization cannot fail")
}

pub fn load_boundary(path: &Path) -> Result<BTreeMap<VertexId, f64>, IoError> {
    boundary_from_json(&read(path)?).map_err(|e| e.in_file(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unweighted_edge_list() {
        let g = edge_list_graph("0 1\n1 2").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert!(g.edges().iter().all(|e| e.w == 1.0));
    }

    #[test]
    fn weighted_edge_list_with_comment() {
        let g = edge_list_graph("0 1 2.5\n# comment\n1 2 0.5").unwrap();
        assert_eq!(g.edge_weight(0, 1), Some(2.5));
        assert_eq!(g.edge_weight(1, 2), Some(0.5));
    }

    #[test]
    fn bad_weight_reports_line() {
        match edge_list_graph("0 1 x") {
            Err(IoError::Parse { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match edge_list_graph("0 1\n\n  # c\n1 2 3 4") {
            Err(IoError::Parse { line: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_edge_list(Path::new("/nonexistent/graph.txt")).unwrap_err();
        assert!(matches!(err, IoError::Io { .. }));
    }

    #[test]
    fn field_json_requires_every_vertex() {
        let text = r#"{"values": {"0": 1.0, "2": 3.0}, "interior": [0], "max_residual": null}"#;
        assert!(matches!(
            field_from_json(text, 3),
            Err(IoError::MissingValue(1))
        ));
        let text = r#"{"values": {"0": 1.0, "1": 2.0}, "interior": [5], "max_residual": null}"#;
        assert!(matches!(
            field_from_json(text, 2),
            Err(IoError::UnknownVertex { vertex: 5, .. })
        ));
    }

    #[test]
    fn boundary_json() {
        let b = boundary_from_json(r#"{"3": 1.5, "10": -2}"#).unwrap();
        assert_eq!(b.get(&3), Some(&1.5));
        assert_eq!(b.get(&10), Some(&-2.0));
        assert_eq!(boundary_to_json(&b), r#"{"3":1.5,"10":-2.0}"#);
    }
}
