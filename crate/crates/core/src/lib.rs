//! Discrete Almgren frequency for harmonic functions on weighted graphs.
//!
//! Fix a base vertex `x` of a connected, locally finite graph and split the
//! vertices into distance layers `V_k`. For a harmonic `u`, the frequency
//!
//! ```text
//! N(k) = sum_{V_{k+1}} d_in(y) u(y)^2 - sum_{V_k} d_out(y) u(y)^2
//! ```
//!
//! is nonnegative and nondecreasing in `k`. This crate builds the layer
//! structure ([`layers`]), produces harmonic inputs ([`harmonic`]), evaluates
//! and checks the frequency and its additive doubling bounds ([`almgren`]),
//! and numerically studies the continuum analogue: convexity of the boundary
//! energy of harmonic polynomials on cubes ([`cube_energy`]).
//!
//! ```
//! use discrete_almgren::{almgren, harmonic, layers};
//!
//! let ex = harmonic::tree_example_field(8).unwrap();
//! let dec = layers::layer_decompose(&ex.graph, ex.base).unwrap();
//! let series = almgren::frequency_series(&dec, &ex.field, 1e-8).unwrap();
//! assert_eq!(&series.n[..3], &[2.0, 5.0, 6.5]);
//! assert!(almgren::verify_monotone(&series).pass);
//! ```

pub mod almgren;
pub mod cube_energy;
pub mod generators;
pub mod graph;
pub mod harmonic;
pub mod io;
pub mod layers;
pub mod polynomial;
pub mod quadrature;
pub mod random;
pub mod sum;

pub use almgren::{
    classify_region, doubling_check, frequency_series, layer_energies, verify_monotone,
    DoublingReport, FrequencySeries, MonotonicityReport, Region,
};
pub use cube_energy::{boundary_energy, derivative_decomposition, energy_curve, EnergyCurve};
pub use generators::{gen_lattice, gen_tree, FamilySpec, Generated};
pub use graph::{build_graph, Edge, Graph, VertexId};
pub use harmonic::{
    lattice_polynomial_field, residual, solve_dirichlet, tree_example_field, ScalarField,
    SolveOptions,
};
pub use layers::{layer_decompose, LayerDecomposition};
pub use polynomial::{make_polynomial, HarmonicPolynomial, Polynomial};
