//! Discrete harmonic functions: residuals, Dirichlet solves and closed-form fields.
//!
//! A field `u` is harmonic at `x` when `sum_y w_xy (u(y) - u(x)) = 0`. Fields
//! carry an explicit `interior` set; only there is harmonicity claimed.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::generators::{self, parse_coordinates, GenerateError};
use crate::graph::{Graph, GraphError, VertexId};
use crate::polynomial::HarmonicPolynomial;
use crate::sum::NeumaierSum;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum HarmonicError {
    #[error("field has {found} values but the graph has {expected} vertices")]
    MissingValue { expected: usize, found: usize },
    #[error("boundary references vertex {vertex}, graph has {vertex_count} vertices")]
    InconsistentBoundary {
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("boundary is empty")]
    EmptyBoundary,
    #[error("boundary value at vertex {vertex} is not finite")]
    NonFiniteBoundary { vertex: VertexId },
    #[error(
        "no convergence after {iterations} iterations (residual {residual:e}, target {target:e})"
    )]
    NoConvergence {
        iterations: usize,
        residual: f64,
        target: f64,
    },
    #[error("parameter `{name}` = {value} is out of range (minimum {min})")]
    ParameterOutOfRange {
        name: &'static str,
        value: usize,
        min: usize,
    },
    #[error("vertex {vertex} has no lattice coordinate label")]
    MissingCoordinates { vertex: VertexId },
    #[error("lattice has dimension {lattice} but the polynomial has dimension {polynomial}")]
    DimensionMismatch { lattice: usize, polynomial: usize },
    #[error("polynomial is not lattice harmonic: discrete Laplacian is {residual} at {point:?}")]
    NotDiscreteHarmonic {
        point: Vec<i64>,
        vertex: Option<VertexId>,
        residual: f64,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
}

/// Real values on every vertex, with the set where harmonicity is asserted.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub values: Vec<f64>,
    pub interior: Vec<bool>,
    /// Largest `|residual|` over the interior, once [`residual`] has run.
    pub max_residual: Option<f64>,
}

impl ScalarField {
    pub fn new(values: Vec<f64>, interior: Vec<bool>) -> Self {
        assert_eq!(values.len(), interior.len());
        Self {
            values,
            interior,
            max_residual: None,
        }
    }

    pub fn constant(g: &Graph, c: f64) -> Self {
        let n = g.vertex_count();
        let mut interior = vec![true; n];
        for &v in g.frontier() {
            interior[v] = false;
        }
        Self::new(vec![c; n], interior)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.interior
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(v, _)| v)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `c * f`, keeping the interior.
    pub fn scaled(&self, c: f64) -> Self {
        Self::new(
            self.values.iter().map(|x| c * x).collect(),
            self.interior.clone(),
        )
    }

    /// `f + c`, keeping the interior.
    pub fn shifted(&self, c: f64) -> Self {
        Self::new(
            self.values.iter().map(|x| x + c).collect(),
            self.interior.clone(),
        )
    }

    pub(crate) fn check_len(&self, g: &Graph) -> Result<(), HarmonicError> {
        if self.values.len() == g.vertex_count() && self.interior.len() == g.vertex_count() {
            Ok(())
        } else {
            Err(HarmonicError::MissingValue {
                expected: g.vertex_count(),
                found: self.values.len().min(self.interior.len()),
            })
        }
    }
}

fn laplacian_at(g: &Graph, values: &[f64], v: VertexId) -> f64 {
    let mut acc = NeumaierSum::new();
    let here = values[v];
    for (y, w) in g.neighbors(v) {
        acc.add(w * (values[y] - here));
    }
    acc.value()
}

/// Weighted Laplacian defect `r(v) = sum_y w_vy (f(y) - f(v))` at every vertex.
/// Records the largest `|r|` over the interior in `f.max_residual`.
pub fn residual(g: &Graph, f: &mut ScalarField) -> Result<Vec<f64>, HarmonicError> {
    f.check_len(g)?;
    let r: Vec<f64> = (0..g.vertex_count())
        .map(|v| laplacian_at(g, &f.values, v))
        .collect();
    f.max_residual = Some(
        f.interior_vertices()
            .map(|v| r[v].abs())
            .fold(0.0, f64::max),
    );
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMethod {
    /// Jacobi-preconditioned conjugate gradients with restarts.
    #[default]
    ConjugateGradient,
    /// Gauss-Seidel sweeps in ascending vertex order.
    GaussSeidel,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Target for `max |residual|` relative to `1 + max |value|`.
    pub tol: f64,
    pub max_iter: usize,
    pub method: SolverMethod,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            method: SolverMethod::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DirichletSolution {
    pub field: ScalarField,
    pub iterations: usize,
}

/// Solves the Dirichlet problem: prescribed values on `boundary`, harmonic on
/// every other vertex.
pub fn solve_dirichlet(
    g: &Graph,
    boundary: &BTreeMap<VertexId, f64>,
    opts: SolveOptions,
) -> Result<DirichletSolution, HarmonicError> {
    let n = g.vertex_count();
    if boundary.is_empty() {
        return Err(HarmonicError::EmptyBoundary);
    }
    for (&v, x) in boundary {
        if v >= n {
            return Err(HarmonicError::InconsistentBoundary {
                vertex: v,
                vertex_count: n,
            });
        }
        if !x.is_finite() {
            return Err(HarmonicError::NonFiniteBoundary { vertex: v });
        }
    }
    g.check_connected()?;

    let mut values = vec![0.0; n];
    let mut interior = vec![true; n];
    for (&v, &x) in boundary {
        values[v] = x;
        interior[v] = false;
    }
    // Start from the boundary mean; exact for constant data.
    let mean = boundary.values().sum::<f64>() / boundary.len() as f64;
    for v in 0..n {
        if interior[v] {
            values[v] = mean;
        }
    }

    let boundary_max = boundary.values().fold(0.0f64, |m, x| m.max(x.abs()));
    let target = opts.tol * (1.0 + boundary_max);
    let iterations = match opts.method {
        SolverMethod::ConjugateGradient => {
            conjugate_gradient(g, &interior, &mut values, target, opts.max_iter)?
        }
        SolverMethod::GaussSeidel => {
            gauss_seidel(g, &interior, &mut values, target, opts.max_iter)?
        }
    };

    let mut field = ScalarField::new(values, interior);
    residual(g, &mut field)?;
    Ok(DirichletSolution { field, iterations })
}

fn max_interior_residual(g: &Graph, interior: &[bool], values: &[f64]) -> f64 {
    (0..g.vertex_count())
        .filter(|&v| interior[v])
        .map(|v| laplacian_at(g, values, v).abs())
        .fold(0.0, f64::max)
}

fn gauss_seidel(
    g: &Graph,
    interior: &[bool],
    values: &mut [f64],
    target: f64,
    max_iter: usize,
) -> Result<usize, HarmonicError> {
    let degrees: Vec<f64> = (0..g.vertex_count())
        .map(|v| g.weighted_degree(v))
        .collect();
    let mut res = max_interior_residual(g, interior, values);
    let mut sweeps = 0;
    while res > target {
        if sweeps == max_iter {
            return Err(HarmonicError::NoConvergence {
                iterations: sweeps,
                residual: res,
                target,
            });
        }
        for v in 0..g.vertex_count() {
            if interior[v] {
                let mut acc = NeumaierSum::new();
                for (y, w) in g.neighbors(v) {
                    acc.add(w * values[y]);
                }
                values[v] = acc.value() / degrees[v];
            }
        }
        sweeps += 1;
        res = max_interior_residual(g, interior, values);
    }
    Ok(sweeps)
}

/// CG on the reduced system `L_II x_I = -L_IB x_B`, restarted from the current
/// iterate whenever the recurrence residual has met the target but the true
/// residual has not.
fn conjugate_gradient(
    g: &Graph,
    interior: &[bool],
    values: &mut [f64],
    target: f64,
    max_iter: usize,
) -> Result<usize, HarmonicError> {
    let unknowns: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| interior[v]).collect();
    let m = unknowns.len();
    if m == 0 {
        return Ok(0);
    }
    let mut slot = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in unknowns.iter().enumerate() {
        slot[v] = i;
    }
    let diag: Vec<f64> = unknowns.iter().map(|&v| g.weighted_degree(v)).collect();

    // y = L_II p, with L = D - W restricted to the interior
    let apply = |p: &[f64], y: &mut [f64]| {
        for (i, &v) in unknowns.iter().enumerate() {
            let mut acc = NeumaierSum::new();
            acc.add(diag[i] * p[i]);
            for (u, w) in g.neighbors(v) {
                if slot[u] != usize::MAX {
                    acc.add(-w * p[slot[u]]);
                }
            }
            y[i] = acc.value();
        }
    };
    let dot = |a: &[f64], b: &[f64]| -> f64 {
        let mut acc = NeumaierSum::new();
        for (x, y) in a.iter().zip(b) {
            acc.add(x * y);
        }
        acc.value()
    };
    // True residual in the sign convention r = b - A x = sum_y w (u(y) - u(v)).
    let true_residual = |values: &[f64], r: &mut [f64]| -> f64 {
        let mut worst = 0.0f64;
        for (i, &v) in unknowns.iter().enumerate() {
            r[i] = laplacian_at(g, values, v);
            worst = worst.max(r[i].abs());
        }
        worst
    };

    let mut x: Vec<f64> = unknowns.iter().map(|&v| values[v]).collect();
    let mut r = vec![0.0; m];
    let mut z = vec![0.0; m];
    let mut p = vec![0.0; m];
    let mut ap = vec![0.0; m];
    let mut iterations = 0;
    let mut best = f64::INFINITY;
    let mut stalled_restarts = 0;

    loop {
        let res = true_residual(values, &mut r);
        if res <= target {
            return Ok(iterations);
        }
        if res < best * 0.5 {
            best = res;
            stalled_restarts = 0;
        } else {
            stalled_restarts += 1;
        }
        if iterations >= max_iter || stalled_restarts > 8 {
            return Err(HarmonicError::NoConvergence {
                iterations,
                residual: res,
                target,
            });
        }

        for i in 0..m {
            z[i] = r[i] / diag[i];
        }
        p.copy_from_slice(&z);
        let mut rz = dot(&r, &z);
        let inner_limit = (2 * m + 10).min(max_iter - iterations);
        for _ in 0..inner_limit {
            apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 || !pap.is_finite() {
                break;
            }
            let alpha = rz / pap;
            for i in 0..m {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            iterations += 1;
            let r_inf = r.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            if r_inf <= 0.25 * target {
                break;
            }
            for i in 0..m {
                z[i] = r[i] / diag[i];
            }
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..m {
                p[i] = z[i] + beta * p[i];
            }
        }
        for (i, &v) in unknowns.iter().enumerate() {
            values[v] = x[i];
        }
    }
}

/// Value of the branch sequence `a_n = 2 - 2^(1-n)` (with `a_0 = 0`).
pub fn tree_branch_value(n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        2.0 - 0.5f64.powi(n as i32 - 1)
    }
}

#[derive(Debug, Clone)]
pub struct TreeExample {
    pub graph: Graph,
    pub base: VertexId,
    pub field: ScalarField,
}

/// Bounded harmonic function on the 3-regular tree: zero at the root and on
/// the third branch, `+a_k` on the first branch and `-a_k` on the second,
/// where `k` is the distance to the root. Leaves are not interior.
pub fn tree_example_field(depth: usize) -> Result<TreeExample, HarmonicError> {
    if depth < 2 {
        return Err(HarmonicError::ParameterOutOfRange {
            name: "depth",
            value: depth,
            min: 2,
        });
    }
    let generated = generators::gen_tree(3, depth)?;
    let graph = generated.graph;
    let n = graph.vertex_count();

    // Breadth-first ids: layer k >= 1 is the contiguous range starting at
    // 1 + 3 (2^(k-1) - 1), split evenly between the three branches.
    let mut values = vec![0.0; n];
    let mut start = 1usize;
    for k in 1..=depth {
        let size = 3usize << (k - 1);
        let third = size / 3;
        let a = tree_branch_value(k);
        for (j, value) in values[start..start + size].iter_mut().enumerate() {
            *value = match j / third {
                0 => a,
                1 => -a,
                _ => 0.0,
            };
        }
        start += size;
    }

    let mut interior = vec![true; n];
    for &v in graph.frontier() {
        interior[v] = false;
    }
    Ok(TreeExample {
        base: generated.base,
        field: ScalarField::new(values, interior),
        graph,
    })
}

/// Samples a lattice-harmonic polynomial on a graph from `gen_lattice`.
/// Interior is everything off the truncation frontier.
pub fn lattice_polynomial_field(
    g: &Graph,
    p: &HarmonicPolynomial,
) -> Result<ScalarField, HarmonicError> {
    let mut coords = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        let c = g
            .label(v)
            .and_then(parse_coordinates)
            .ok_or(HarmonicError::MissingCoordinates { vertex: v })?;
        if c.len() != p.dim() {
            return Err(HarmonicError::DimensionMismatch {
                lattice: c.len(),
                polynomial: p.dim(),
            });
        }
        coords.push(c);
    }

    let lap = p.poly.discrete_laplacian();
    if !lap.is_zero() {
        return Err(discrete_witness(&lap, &coords, g));
    }

    let eval = p.poly.to_f64();
    let values = coords
        .iter()
        .map(|c| {
            let x: Vec<f64> = c.iter().map(|&t| t as f64).collect();
            eval.eval(&x)
        })
        .collect();
    let mut interior = vec![true; g.vertex_count()];
    for &v in g.frontier() {
        interior[v] = false;
    }
    Ok(ScalarField::new(values, interior))
}

/// First lattice point where a nonzero Laplacian polynomial does not vanish:
/// graph vertices first, then the grid `{0..=deg}^dim` (a nonzero polynomial
/// cannot vanish on all of it).
fn discrete_witness(
    lap: &crate::polynomial::Polynomial,
    coords: &[Vec<i64>],
    g: &Graph,
) -> HarmonicError {
    use num_traits::{ToPrimitive, Zero};
    let interior_first = (0..coords.len())
        .filter(|v| !g.frontier().contains(v))
        .chain(g.frontier().iter().copied());
    for v in interior_first {
        let r = lap.eval_integer(&coords[v]);
        if !r.is_zero() {
            return HarmonicError::NotDiscreteHarmonic {
                point: coords[v].clone(),
                vertex: Some(v),
                residual: r.to_f64().unwrap_or(f64::NAN),
            };
        }
    }
    let dim = lap.dim();
    let side = lap.max_axis_degree() as i64 + 1;
    let total = (side as usize).pow(dim as u32);
    for idx in 0..total {
        let mut rest = idx;
        let point: Vec<i64> = (0..dim)
            .map(|_| {
                let c = (rest % side as usize) as i64;
                rest /= side as usize;
                c
            })
            .collect();
        let r = lap.eval_integer(&point);
        if !r.is_zero() {
            return HarmonicError::NotDiscreteHarmonic {
                point,
                vertex: None,
                residual: r.to_f64().unwrap_or(f64::NAN),
            };
        }
    }
    unreachable!("nonzero polynomial vanishes on its full grid")
}
