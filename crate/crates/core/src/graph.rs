//! Weighted undirected graphs stored in compressed adjacency form.

use std::collections::BTreeMap;

use thiserror::Error;

/// Vertices are identified by dense nonnegative integers `0..vertex_count`.
pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has non-positive weight {w}")]
    NonPositiveWeight { u: VertexId, v: VertexId, w: f64 },
    #[error("edge ({u}, {v}) has non-finite weight {w}")]
    NonFiniteWeight { u: VertexId, v: VertexId, w: f64 },
    #[error("edge ({u}, {v}) appears more than once")]
    DuplicateEdge { u: VertexId, v: VertexId },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {vertex} is out of range (vertex_count = {vertex_count})")]
    InvalidVertex {
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("vertex {unreachable} is not reachable from vertex {from}")]
    Disconnected {
        from: VertexId,
        unreachable: VertexId,
    },
}

/// A single undirected edge. `u` and `v` carry no orientation at the graph level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphWarning {
    SelfLoopDropped { vertex: VertexId, w: f64 },
}

/// Weighted, undirected, simple graph.
///
/// Adjacency is kept in CSR layout with every neighbor list sorted by vertex
/// id, so iteration order never depends on how the edges were supplied.
pub(crate) const UNREACHED: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    weights: Vec<f64>,
    labels: Option<BTreeMap<VertexId, String>>,
    frontier: Vec<VertexId>,
    warnings: Vec<GraphWarning>,
}

/// Builds a graph whose vertex count is one more than the largest id seen.
pub fn build_graph<I>(edge_list: I) -> Result<Graph, GraphError>
where
    I: IntoIterator<Item = (VertexId, VertexId, f64)>,
{
    let edges: Vec<(VertexId, VertexId, f64)> = edge_list.into_iter().collect();
    let vertex_count = edges
        .iter()
        .map(|&(u, v, _)| u.max(v) + 1)
        .max()
        .unwrap_or(0);
    Graph::with_vertex_count(vertex_count, edges)
}

impl Graph {
    /// Builds a graph over exactly `vertex_count` vertices; ids not touched by any
    /// edge become isolated vertices.
    pub fn with_vertex_count<I>(vertex_count: usize, edge_list: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        if vertex_count == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let edge_list = edge_list.into_iter();
        let mut edges = Vec::with_capacity(edge_list.size_hint().0);
        let mut warnings = Vec::new();
        for (u, v, w) in edge_list {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(GraphError::InvalidVertex {
                        vertex: x,
                        vertex_count,
                    });
                }
            }
            if w.is_nan() || w <= 0.0 {
                return Err(GraphError::NonPositiveWeight { u, v, w });
            }
            if !w.is_finite() {
                return Err(GraphError::NonFiniteWeight { u, v, w });
            }
            if u == v {
                log::warn!("dropping self-loop at vertex {u}");
                warnings.push(GraphWarning::SelfLoopDropped { vertex: u, w });
                continue;
            }
            edges.push(Edge { u, v, w });
        }

        let mut offsets = vec![0usize; vertex_count + 1];
        for e in &edges {
            offsets[e.u + 1] += 1;
            offsets[e.v + 1] += 1;
        }
        for i in 0..vertex_count {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let total = offsets[vertex_count];
        let mut targets = vec![0usize; total];
        let mut weights = vec![0.0f64; total];
        for e in &edges {
            for (x, y) in [(e.u, e.v), (e.v, e.u)] {
                targets[cursor[x]] = y;
                weights[cursor[x]] = e.w;
                cursor[x] += 1;
            }
        }
        drop(cursor);
        let mut row_buf = Vec::new();
        for x in 0..vertex_count {
            let range = offsets[x]..offsets[x + 1];
            if targets[range.clone()].windows(2).all(|p| p[0] < p[1]) {
                continue;
            }
            row_buf.clear();
            row_buf.extend(
                targets[range.clone()]
                    .iter()
                    .copied()
                    .zip(weights[range.clone()].iter().copied()),
            );
            row_buf.sort_unstable_by_key(|&(y, _)| y);
            if let Some(pair) = row_buf.windows(2).find(|p| p[0].0 == p[1].0) {
                let y = pair[0].0;
                return Err(GraphError::DuplicateEdge {
                    u: x.min(y),
                    v: x.max(y),
                });
            }
            for (i, &(y, w)) in range.zip(row_buf.iter()) {
                targets[i] = y;
                weights[i] = w;
            }
        }

        Ok(Self {
            vertex_count,
            edges,
            offsets,
            targets,
            weights,
            labels: None,
            frontier: Vec::new(),
            warnings,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in input order, self-loops removed.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> impl ExactSizeIterator<Item = (VertexId, f64)> + '_ {
        let range = self.offsets[v]..self.offsets[v + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sum of incident edge weights.
    pub fn weighted_degree(&self, v: VertexId) -> f64 {
        self.weights[self.offsets[v]..self.offsets[v + 1]]
            .iter()
            .sum()
    }

    pub fn edge_weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.targets[range.clone()]
            .binary_search(&v)
            .ok()
            .map(|i| self.weights[range.start + i])
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.vertex_count
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex {
                vertex: v,
                vertex_count: self.vertex_count,
            })
        }
    }

    pub fn warnings(&self) -> &[GraphWarning] {
        &self.warnings
    }

    pub fn labels(&self) -> Option<&BTreeMap<VertexId, String>> {
        self.labels.as_ref()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.as_ref()?.get(&v).map(String::as_str)
    }

    pub fn set_labels(&mut self, labels: BTreeMap<VertexId, String>) -> Result<(), GraphError> {
        if let Some((&v, _)) = labels.iter().next_back() {
            self.check_vertex(v)?;
        }
        self.labels = Some(labels);
        Ok(())
    }

    /// Vertices whose neighborhoods were cut off when an infinite family was
    /// truncated to a finite graph. Their degrees are not those of the
    /// infinite graph.
    pub fn frontier(&self) -> &[VertexId] {
        &self.frontier
    }

    pub fn is_truncated(&self) -> bool {
        !self.frontier.is_empty()
    }

    pub fn set_frontier(&mut self, mut frontier: Vec<VertexId>) -> Result<(), GraphError> {
        frontier.sort_unstable();
        frontier.dedup();
        if let Some(&v) = frontier.last() {
            self.check_vertex(v)?;
        }
        self.frontier = frontier;
        Ok(())
    }

    /// Hop distances from `from`; `None` for unreachable vertices.
    pub fn hop_distances(&self, from: VertexId) -> Result<Vec<Option<usize>>, GraphError> {
        Ok(self
            .bfs(from)?
            .into_iter()
            .map(|d| (d != UNREACHED).then_some(d))
            .collect())
    }

    /// Breadth-first distances with `UNREACHED` for unreachable vertices.
    pub(crate) fn bfs(&self, from: VertexId) -> Result<Vec<usize>, GraphError> {
        self.check_vertex(from)?;
        let mut dist = vec![UNREACHED; self.vertex_count];
        let mut order = Vec::with_capacity(self.vertex_count);
        dist[from] = 0;
        order.push(from);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            let next = dist[x] + 1;
            for &y in &self.targets[self.offsets[x]..self.offsets[x + 1]] {
                if dist[y] == UNREACHED {
                    dist[y] = next;
                    order.push(y);
                }
            }
        }
        Ok(dist)
    }

    pub fn check_connected(&self) -> Result<(), GraphError> {
        let dist = self.hop_distances(0)?;
        match dist.iter().position(Option::is_none) {
            Some(unreachable) => Err(GraphError::Disconnected {
                from: 0,
                unreachable,
            }),
            None => Ok(()),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.check_connected().is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_on_three_vertices() {
        let g = build_graph([(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(g.vertex_count(), 3);
        let adj: Vec<_> = g.neighbors(1).map(|(y, _)| y).collect();
        assert_eq!(adj, vec![0, 2]);
        assert!(g.is_connected());
    }

    #[test]
    fn negative_weight_is_rejected() {
        let err = build_graph([(0, 1, -1.0)]).unwrap_err();
        assert!(matches!(err, GraphError::NonPositiveWeight { .. }));
        let err = build_graph([(0, 1, 0.0)]).unwrap_err();
        assert!(matches!(err, GraphError::NonPositiveWeight { .. }));
        let err = build_graph([(0, 1, f64::NAN)]).unwrap_err();
        assert!(matches!(err, GraphError::NonPositiveWeight { .. }));
        let err = build_graph([(0, 1, f64::INFINITY)]).unwrap_err();
        assert!(matches!(err, GraphError::NonFiniteWeight { .. }));
    }

    #[test]
    fn self_loop_dropped_with_warning() {
        let g = build_graph([(0, 0, 1.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(
            g.warnings(),
            &[GraphWarning::SelfLoopDropped { vertex: 0, w: 1.0 }]
        );
        assert_eq!(g.degree(0), 1);
    }

    #[test]
    fn duplicate_edge_either_orientation() {
        let err = build_graph([(0, 1, 1.0), (1, 2, 1.0), (1, 0, 2.0)]).unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge { u: 0, v: 1 });
    }

    #[test]
    fn empty_graph() {
        let empty: [(usize, usize, f64); 0] = [];
        assert_eq!(build_graph(empty).unwrap_err(), GraphError::EmptyGraph);
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = build_graph([(2, 0, 0.5), (0, 1, 3.0), (1, 2, 1.5), (3, 1, 2.0)]).unwrap();
        for x in 0..g.vertex_count() {
            for (y, w) in g.neighbors(x) {
                assert_eq!(g.edge_weight(y, x), Some(w));
            }
        }
        assert_eq!(g.weighted_degree(1), 6.5);
    }

    #[test]
    fn disconnected_detected() {
        let g = Graph::with_vertex_count(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(
            g.check_connected().unwrap_err(),
            GraphError::Disconnected {
                from: 0,
                unreachable: 2
            }
        );
    }

    #[test]
    fn out_of_range_vertex() {
        let err = Graph::with_vertex_count(2, [(0, 2, 1.0)]).unwrap_err();
        assert!(matches!(err, GraphError::InvalidVertex { vertex: 2, .. }));
    }
}
