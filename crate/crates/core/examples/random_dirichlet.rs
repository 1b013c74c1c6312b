//! Seeded random weighted graphs, Dirichlet-solved, checked for monotonicity.
//!
//! $ cargo run --example random_dirichlet -- 42

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use discrete_almgren::random::{random_connected_graph, random_outer_boundary, RandomGraphSpec};
use discrete_almgren::{almgren, layers, solve_dirichlet, SolveOptions};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = RandomGraphSpec {
        vertices: 40,
        extra_edges: 20,
        ..RandomGraphSpec::default()
    };
    let g = random_connected_graph(&mut rng, spec).unwrap();
    let boundary = random_outer_boundary(&mut rng, &g, 0, 3).unwrap();
    let sol = solve_dirichlet(&g, &boundary, SolveOptions::default()).unwrap();
    println!(
        "{} vertices, {} edges, {} boundary vertices, {} iterations, residual {:e}",
        g.vertex_count(),
        g.edge_count(),
        boundary.len(),
        sol.iterations,
        sol.field.max_residual.unwrap()
    );

    let dec = layers::layer_decompose(&g, 0).unwrap();
    println!("layer sizes {:?}", dec.layer_sizes());
    match almgren::frequency_series(&dec, &sol.field, almgren::DEFAULT_TOL_MONO) {
        Ok(s) => {
            println!("N = {:?}", s.n);
            println!("{:?}", almgren::verify_monotone(&s));
        }
        Err(e) => println!("{e}"),
    }
}
