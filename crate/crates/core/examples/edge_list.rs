//! Frequency of a Dirichlet solution on a graph read from an edge-list file.
//! Without arguments a small weighted ladder is used.
//!
//! $ cargo run --example edge_list -- graph.txt 0

use std::collections::BTreeMap;

use discrete_almgren::{almgren, io, layers, solve_dirichlet, SolveOptions};

const LADDER: &str = "\
# u v weight
0 1 1.0
0 2 2.0
1 3 1.0
2 4 0.5
1 2 1.0
3 4 1.0
3 5 1.0
4 6 3.0
5 6 1.0
";

fn main() {
    let mut args = std::env::args().skip(1);
    let g = match args.next() {
        Some(path) => io::load_edge_list(path.as_ref()).unwrap_or_else(|e| panic!("{e}")),
        None => io::edge_list_graph(LADDER).unwrap(),
    };
    let base = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let dec = layers::layer_decompose(&g, base).unwrap();
    let outer = dec.depth();
    let boundary: BTreeMap<_, _> = dec.layers[outer]
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, if i % 2 == 0 { 1.0 } else { -1.0 }))
        .collect();
    let f = solve_dirichlet(&g, &boundary, SolveOptions::default())
        .unwrap()
        .field;
    let s = almgren::frequency_series(&dec, &f, almgren::DEFAULT_TOL_MONO).unwrap();
    s.write_csv(std::io::stdout()).unwrap();
}
