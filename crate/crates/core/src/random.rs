//! Seeded random connected weighted graphs and Dirichlet scenarios on them.

use std::collections::BTreeMap;

use rand::Rng;

use crate::graph::{Graph, GraphError, VertexId};

#[derive(Debug, Clone, Copy)]
pub struct RandomGraphSpec {
    pub vertices: usize,
    /// Extra edges added on top of the spanning tree (duplicates skipped).
    pub extra_edges: usize,
    pub min_weight: f64,
    pub max_weight: f64,
}

impl Default for RandomGraphSpec {
    fn default() -> Self {
        Self {
            vertices: 30,
            extra_edges: 8,
            min_weight: 0.1,
            max_weight: 10.0,
        }
    }
}

/// Random spanning tree plus chords. Each new vertex attaches either to a
/// uniformly random earlier vertex or to one of the few most recent ones, so
/// graphs range from bushy to long and thin.
pub fn random_connected_graph<R: Rng + ?Sized>(
    rng: &mut R,
    spec: RandomGraphSpec,
) -> Result<Graph, GraphError> {
    let n = spec.vertices.max(1);
    let weight = |rng: &mut R| rng.gen_range(spec.min_weight..=spec.max_weight);
    let mut edges: Vec<(VertexId, VertexId, f64)> = Vec::new();
    let mut present = std::collections::HashSet::new();
    let recent_bias: f64 = rng.gen_range(0.0..1.0);
    for v in 1..n {
        let parent = if rng.gen_bool(recent_bias) {
            v - 1 - rng.gen_range(0..v.min(3))
        } else {
            rng.gen_range(0..v)
        };
        present.insert((parent, v));
        edges.push((parent, v, weight(rng)));
    }
    if n > 2 {
        for _ in 0..spec.extra_edges {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let key = (a.min(b), a.max(b));
            if a != b && present.insert(key) {
                edges.push((key.0, key.1, weight(rng)));
            }
        }
    }
    Graph::with_vertex_count(n, edges)
}

/// Boundary made of every vertex at hop distance `>= cutoff` from `base`,
/// with values drawn uniformly from `[-1, 1]`.
pub fn random_outer_boundary<R: Rng + ?Sized>(
    rng: &mut R,
    g: &Graph,
    base: VertexId,
    cutoff: usize,
) -> Result<BTreeMap<VertexId, f64>, GraphError> {
    let dist = g.hop_distances(base)?;
    Ok(dist
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_some_and(|d| d >= cutoff))
        .map(|(v, _)| (v, rng.gen_range(-1.0..=1.0)))
        .collect())
}
