//! Independent reference computations shared by the integration suites.
//! Nothing here goes through the crate's layer or frequency code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use discrete_almgren::random::{random_connected_graph, random_outer_boundary, RandomGraphSpec};
use discrete_almgren::{Graph, VertexId};

/// Hop distances by Bellman-Ford style relaxation over the edge list.
pub fn oracle_distances(g: &Graph, base: VertexId) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.vertex_count()];
    dist[base] = Some(0usize);
    loop {
        let mut changed = false;
        for e in g.edges() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if let Some(da) = dist[a] {
                    if dist[b].is_none_or(|db| db > da + 1) {
                        dist[b] = Some(da + 1);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return dist;
        }
    }
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

/// `N(k)` for `k = 0..=k_max` as an exact sum over the edges between
/// distances `k` and `k + 1`: `sum w (u(far)^2 - u(near)^2)`.
pub fn oracle_frequency(g: &Graph, base: VertexId, values: &[f64], k_max: usize) -> Vec<f64> {
    let dist = oracle_distances(g, base);
    let mut n = vec![BigRational::zero(); k_max + 1];
    for e in g.edges() {
        let (Some(du), Some(dv)) = (dist[e.u], dist[e.v]) else {
            continue;
        };
        let (near, far, k) = match du.cmp(&dv) {
            std::cmp::Ordering::Less => (e.u, e.v, du),
            std::cmp::Ordering::Greater => (e.v, e.u, dv),
            std::cmp::Ordering::Equal => continue,
        };
        if k > k_max {
            continue;
        }
        let uf = exact(values[far]);
        let un = exact(values[near]);
        n[k] += exact(e.w) * (&uf * &uf - &un * &un);
    }
    n.iter().map(|x| x.to_f64().unwrap()).collect()
}

/// Dense LU solve of the interior equations.
pub fn dense_dirichlet(g: &Graph, boundary: &BTreeMap<VertexId, f64>) -> Vec<f64> {
    let n = g.vertex_count();
    let interior: Vec<VertexId> = (0..n).filter(|v| !boundary.contains_key(v)).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &v) in interior.iter().enumerate() {
        index[v] = i;
    }
    let m = interior.len();
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    for e in g.edges() {
        for (x, y) in [(e.u, e.v), (e.v, e.u)] {
            if index[x] == usize::MAX {
                continue;
            }
            let i = index[x];
            a[(i, i)] += e.w;
            match boundary.get(&y) {
                Some(b) => rhs[i] += e.w * b,
                None => a[(i, index[y])] -= e.w,
            }
        }
    }
    let sol = a.lu().solve(&rhs).expect("interior system is nonsingular");
    let mut values = vec![0.0; n];
    for (&v, &b) in boundary {
        values[v] = b;
    }
    for (i, &v) in interior.iter().enumerate() {
        values[v] = sol[i];
    }
    values
}

/// Largest eccentricity from `base` (connected graphs only).
pub fn eccentricity(g: &Graph, base: VertexId) -> usize {
    oracle_distances(g, base)
        .iter()
        .map(|d| d.unwrap())
        .max()
        .unwrap()
}

pub struct RandomScenario {
    pub graph: Graph,
    pub boundary: BTreeMap<VertexId, f64>,
}

/// The seeded Dirichlet suite: connected graphs with at most 60 vertices and
/// weights in `[0.1, 10]`, boundary values in `[-1, 1]` on every vertex at
/// distance `>= cutoff` from vertex 0, with `cutoff >= 2`.
pub fn random_suite(seed: u64, count: usize) -> Vec<RandomScenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let vertices = rng.gen_range(4..=60);
        let spec = RandomGraphSpec {
            vertices,
            extra_edges: rng.gen_range(0..=vertices),
            min_weight: 0.1,
            max_weight: 10.0,
        };
        let graph = random_connected_graph(&mut rng, spec).unwrap();
        let ecc = eccentricity(&graph, 0);
        if ecc < 2 {
            continue;
        }
        let cutoff = rng.gen_range(2..=ecc);
        let boundary = random_outer_boundary(&mut rng, &graph, 0, cutoff).unwrap();
        out.push(RandomScenario { graph, boundary });
    }
    out
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Relative difference against the larger of the two magnitudes, with an
/// absolute floor of `scale` for quantities that cancel to nearly zero.
pub fn rel_diff(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(scale).max(f64::MIN_POSITIVE)
}
