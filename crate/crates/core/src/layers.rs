//! Distance layers around a base vertex, with weighted in/out/lateral degrees.

use crate::graph::{Edge, Graph, GraphError, VertexId, UNREACHED};
use crate::sum::{accurate_sum, NeumaierSum};

/// Breadth-first layering `V_0 = {base}, V_1, ..., V_K` of a connected graph.
///
/// Distances are hop counts; weights only enter the degrees. For a vertex in
/// `V_k`, `d_in` sums the weights of edges into `V_{k-1}`, `d_out` into
/// `V_{k+1}` and `d_lat` within `V_k`.
#[derive(Debug, Clone)]
pub struct LayerDecomposition {
    pub base: VertexId,
    /// Vertices of each layer, ascending by id.
    pub layers: Vec<Vec<VertexId>>,
    pub dist: Vec<usize>,
    pub d_in: Vec<f64>,
    pub d_out: Vec<f64>,
    pub d_lat: Vec<f64>,
    /// `interlayer_edges[k]` holds `E_k`, oriented so that `u` is in `V_k` and
    /// `v` in `V_{k+1}`.
    pub interlayer_edges: Vec<Vec<Edge>>,
    /// Whether the graph carries truncation frontier vertices.
    pub truncated: bool,
    /// First layer containing a frontier vertex, if any.
    pub frontier_layer: Option<usize>,
}

pub fn layer_decompose(g: &Graph, base: VertexId) -> Result<LayerDecomposition, GraphError> {
    let dist = g.bfs(base)?;
    if let Some(v) = dist.iter().position(|&d| d == UNREACHED) {
        return Err(GraphError::Disconnected {
            from: base,
            unreachable: v,
        });
    }

    let depth = dist.iter().copied().max().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth + 1];
    // Ascending scan keeps every layer sorted by id.
    for (v, &d) in dist.iter().enumerate() {
        layers[d].push(v);
    }

    let n = g.vertex_count();
    let mut d_in = vec![0.0; n];
    let mut d_out = vec![0.0; n];
    let mut d_lat = vec![0.0; n];
    let mut interlayer_edges = vec![Vec::new(); depth];
    for v in 0..n {
        let dv = dist[v];
        let (mut to_in, mut to_out, mut to_lat) =
            (NeumaierSum::new(), NeumaierSum::new(), NeumaierSum::new());
        for (y, w) in g.neighbors(v) {
            let dy = dist[y];
            if dy + 1 == dv {
                to_in.add(w);
            } else if dy == dv + 1 {
                to_out.add(w);
                interlayer_edges[dv].push(Edge { u: v, v: y, w });
            } else {
                debug_assert_eq!(dy, dv);
                to_lat.add(w);
            }
        }
        d_in[v] = to_in.value();
        d_out[v] = to_out.value();
        d_lat[v] = to_lat.value();
    }

    let frontier_layer = g.frontier().iter().map(|&v| dist[v]).min();
    Ok(LayerDecomposition {
        base,
        layers,
        dist,
        d_in,
        d_out,
        d_lat,
        interlayer_edges,
        truncated: g.is_truncated(),
        frontier_layer,
    })
}

impl LayerDecomposition {
    /// Index of the outermost layer.
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// Largest layer index whose degrees are those of the untruncated graph.
    /// Layers at or beyond the frontier have unreliable `d_out`.
    pub fn last_reliable_layer(&self) -> Option<usize> {
        match self.frontier_layer {
            Some(0) => None,
            Some(k) => Some(k - 1),
            None => Some(self.depth()),
        }
    }

    /// Total weight of `E_k`.
    pub fn interlayer_weight(&self, k: usize) -> f64 {
        self.interlayer_edges
            .get(k)
            .map_or(0.0, |es| accurate_sum(es.iter().map(|e| e.w)))
    }

    /// Largest relative mismatch between `sum d_out over V_k` and
    /// `sum d_in over V_{k+1}` across all `k`.
    pub fn flow_balance_defect(&self) -> f64 {
        (0..self.depth())
            .map(|k| {
                let out = accurate_sum(self.layers[k].iter().map(|&v| self.d_out[v]));
                let inc = accurate_sum(self.layers[k + 1].iter().map(|&v| self.d_in[v]));
                (out - inc).abs() / out.abs().max(inc.abs()).max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max)
    }
}
