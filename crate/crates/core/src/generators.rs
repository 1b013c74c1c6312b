//! Finite truncations of regular trees and integer lattices, plus edge-list ingestion.
//!
//! Vertex ids are assigned in breadth-first order from the root/origin, so
//! layer `k` of the generated graph is a contiguous id range. The outermost
//! layer is recorded as the graph's truncation frontier.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};
use crate::io::{self, IoError};

/// Default cap on the number of lattice vertices.
pub const DEFAULT_LATTICE_CAP: usize = 5_000_000;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("parameter `{name}` = {value} is out of range (minimum {min})")]
    ParameterOutOfRange {
        name: &'static str,
        value: usize,
        min: usize,
    },
    #[error("family would have {count} vertices, above the cap of {cap}")]
    SizeLimit { count: u128, cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] IoError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Tree { degree: usize, depth: usize },
    Lattice { dim: usize, radius: usize },
    EdgeList { path: PathBuf },
}

/// A generated graph together with its distinguished vertex (root or origin).
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    pub base: VertexId,
}

pub fn generate(spec: &FamilySpec) -> Result<Generated, GenerateError> {
    match spec {
        FamilySpec::Tree { degree, depth } => gen_tree(*degree, *depth),
        FamilySpec::Lattice { dim, radius } => gen_lattice(*dim, *radius),
        FamilySpec::EdgeList { path } => Ok(Generated {
            graph: io::load_edge_list(path)?,
            base: 0,
        }),
    }
}

fn check_min(name: &'static str, value: usize, min: usize) -> Result<(), GenerateError> {
    if value < min {
        Err(GenerateError::ParameterOutOfRange { name, value, min })
    } else {
        Ok(())
    }
}

/// Number of vertices of `gen_tree(degree, depth)`.
pub fn tree_size(degree: usize, depth: usize) -> u128 {
    let mut layer = 1u128;
    let mut total = 1u128;
    for k in 1..=depth {
        layer *= if k == 1 { degree } else { degree - 1 } as u128;
        total += layer;
    }
    total
}

/// Ball of radius `depth` in the `degree`-regular tree.
///
/// The root has `degree` children, every other internal vertex `degree - 1`.
pub fn gen_tree(degree: usize, depth: usize) -> Result<Generated, GenerateError> {
    check_min("degree", degree, 2)?;
    check_min("depth", depth, 1)?;
    let count = tree_size(degree, depth);
    if count > usize::MAX as u128 / 4 {
        return Err(GenerateError::SizeLimit {
            count,
            cap: usize::MAX / 4,
        });
    }
    let count = count as usize;

    // Breadth-first ids: the children of the i-th vertex of a layer are
    // consecutive and follow those of the (i-1)-th.
    let child_count = |v: usize| match v {
        0 => degree,
        _ => degree - 1,
    };
    let internal = tree_size(degree, depth - 1) as usize;
    let mut next = 1usize;
    let edges = (0..internal).flat_map(|parent| {
        let first = next;
        next += child_count(parent);
        (first..next).map(move |child| (parent, child, 1.0))
    });
    let mut graph = Graph::with_vertex_count(count, edges)?;
    graph.set_frontier((internal..count).collect())?;
    Ok(Generated { graph, base: 0 })
}

/// Number of points of `Z^dim` with l1 norm at most `radius`:
/// `sum_k 2^k C(dim, k) C(radius, k)`.
pub fn l1_ball_size(dim: usize, radius: usize) -> u128 {
    let mut total = 0u128;
    let mut c_dim = 1u128;
    let mut c_rad = 1u128;
    for k in 0..=dim.min(radius) {
        if k > 0 {
            c_dim = c_dim * (dim - k + 1) as u128 / k as u128;
            c_rad = c_rad * (radius - k + 1) as u128 / k as u128;
        }
        total += (1u128 << k) * c_dim * c_rad;
    }
    total
}

pub fn gen_lattice(dim: usize, radius: usize) -> Result<Generated, GenerateError> {
    gen_lattice_with_cap(dim, radius, DEFAULT_LATTICE_CAP)
}

/// l1 ball of radius `radius` in `Z^dim` with unit-weight nearest-neighbor edges.
/// Labels hold the coordinates as `(x1,...,xd)`.
pub fn gen_lattice_with_cap(
    dim: usize,
    radius: usize,
    cap: usize,
) -> Result<Generated, GenerateError> {
    check_min("dim", dim, 1)?;
    check_min("radius", radius, 1)?;
    let count = l1_ball_size(dim, radius);
    if count > cap as u128 {
        return Err(GenerateError::SizeLimit { count, cap });
    }

    let mut points = Vec::with_capacity(count as usize);
    let mut current = vec![0i64; dim];
    enumerate_ball(&mut current, 0, radius as i64, &mut points);
    points.sort_by(|a, b| l1(a).cmp(&l1(b)).then_with(|| a.cmp(b)));

    let index: HashMap<&[i64], VertexId> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let mut edges = Vec::new();
    let mut probe = vec![0i64; dim];
    for (i, p) in points.iter().enumerate() {
        for axis in 0..dim {
            probe.copy_from_slice(p);
            probe[axis] += 1;
            if let Some(&j) = index.get(probe.as_slice()) {
                edges.push((i, j, 1.0));
            }
        }
    }

    let mut graph = Graph::with_vertex_count(points.len(), edges)?;
    let labels: BTreeMap<VertexId, String> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (i, format_coordinates(p)))
        .collect();
    let frontier = points
        .iter()
        .enumerate()
        .filter(|(_, p)| l1(p) == radius as i64)
        .map(|(i, _)| i)
        .collect();
    graph.set_labels(labels)?;
    graph.set_frontier(frontier)?;
    Ok(Generated { graph, base: 0 })
}

fn l1(p: &[i64]) -> i64 {
    p.iter().map(|x| x.abs()).sum()
}

fn enumerate_ball(current: &mut Vec<i64>, axis: usize, budget: i64, out: &mut Vec<Vec<i64>>) {
    if axis == current.len() {
        out.push(current.clone());
        return;
    }
    for x in -budget..=budget {
        current[axis] = x;
        enumerate_ball(current, axis + 1, budget - x.abs(), out);
    }
    current[axis] = 0;
}

pub fn format_coordinates(p: &[i64]) -> String {
    let inner: Vec<String> = p.iter().map(i64::to_string).collect();
    format!("({})", inner.join(","))
}

/// Inverse of [`format_coordinates`].
pub fn parse_coordinates(label: &str) -> Option<Vec<i64>> {
    let inner = label.trim().strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|s| s.trim().parse().ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layers::layer_decompose;

    #[test]
    fn star_tree() {
        let t = gen_tree(3, 1).unwrap();
        assert_eq!(t.graph.vertex_count(), 4);
        assert_eq!(t.graph.edge_count(), 3);
        assert_eq!(t.graph.frontier(), &[1, 2, 3]);
    }

    #[test]
    fn ternary_tree_depth_three() {
        let t = gen_tree(3, 3).unwrap();
        assert_eq!(t.graph.vertex_count(), 22);
        let dec = layer_decompose(&t.graph, t.base).unwrap();
        assert_eq!(dec.layer_sizes(), vec![1, 3, 6, 12]);
        for &v in dec.layers[1].iter().chain(&dec.layers[2]) {
            assert_eq!((dec.d_in[v], dec.d_out[v]), (1.0, 2.0));
        }
        assert_eq!(dec.frontier_layer, Some(3));
        assert_eq!(dec.last_reliable_layer(), Some(2));
    }

    #[test]
    fn binary_tree_is_a_path() {
        let t = gen_tree(2, 4).unwrap();
        assert_eq!(t.graph.vertex_count(), 9);
        assert!((0..9).all(|v| t.graph.degree(v) <= 2));
        let dec = layer_decompose(&t.graph, t.base).unwrap();
        assert_eq!(dec.layer_sizes(), vec![1, 2, 2, 2, 2]);
    }

    #[test]
    fn tree_parameters_checked() {
        assert!(matches!(
            gen_tree(1, 3),
            Err(GenerateError::ParameterOutOfRange { name: "degree", .. })
        ));
        assert!(matches!(
            gen_tree(3, 0),
            Err(GenerateError::ParameterOutOfRange { name: "depth", .. })
        ));
    }

    #[test]
    fn tree_size_geometric_sum() {
        for d in 3..7usize {
            for depth in 1..8u32 {
                let closed = 1 + d as u128 * ((d as u128 - 1).pow(depth) - 1) / (d as u128 - 2);
                assert_eq!(tree_size(d, depth as usize), closed);
            }
        }
    }

    #[test]
    fn lattice_line() {
        let l = gen_lattice(1, 3).unwrap();
        assert_eq!(l.graph.vertex_count(), 7);
        assert_eq!(l.graph.edge_count(), 6);
        assert_eq!(l.graph.label(0), Some("(0)"));
    }

    #[test]
    fn lattice_diamond() {
        let l = gen_lattice(2, 2).unwrap();
        assert_eq!(l.graph.vertex_count(), 13);
        assert_eq!(l.graph.frontier().len(), 8);
    }

    #[test]
    fn lattice_degrees_on_box() {
        let l = gen_lattice(2, 5).unwrap();
        let dec = layer_decompose(&l.graph, l.base).unwrap();
        assert_eq!(dec.layer_sizes(), vec![1, 4, 8, 12, 16, 20]);
        let id = |c: &str| {
            l.graph
                .labels()
                .unwrap()
                .iter()
                .find(|(_, s)| s.as_str() == c)
                .map(|(&v, _)| v)
                .unwrap()
        };
        let a = id("(3,0)");
        assert_eq!((dec.d_in[a], dec.d_out[a]), (1.0, 3.0));
        let b = id("(2,1)");
        assert_eq!((dec.d_in[b], dec.d_out[b]), (2.0, 2.0));
    }

    #[test]
    fn lattice_size_limit() {
        assert!(matches!(
            gen_lattice_with_cap(3, 10, 100),
            Err(GenerateError::SizeLimit { cap: 100, .. })
        ));
    }

    #[test]
    fn coordinates_round_trip() {
        assert_eq!(parse_coordinates("(3,-2,0)"), Some(vec![3, -2, 0]));
        assert_eq!(format_coordinates(&[3, -2, 0]), "(3,-2,0)");
        assert_eq!(parse_coordinates("3,2"), None);
    }
}
