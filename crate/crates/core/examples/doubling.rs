//! Additive doubling bounds on expansive and contractive ranges.
//!
//! $ cargo run --example doubling

use discrete_almgren::{almgren, build_graph, harmonic, layers, ScalarField};

fn main() {
    let ex = harmonic::tree_example_field(8).unwrap();
    let dec = layers::layer_decompose(&ex.graph, ex.base).unwrap();
    let s = almgren::frequency_series(&dec, &ex.field, almgren::DEFAULT_TOL_MONO).unwrap();
    for (a, b) in [(0, 2), (1, 3), (2, 6)] {
        let r = almgren::doubling_check(&dec, &s, a, b).unwrap();
        println!(
            "tree [{a}, {b}] {:?}: S_in(b+1) = {} >= {} : {:?}",
            r.classification, r.lhs, r.lower_bound, r.lower_holds
        );
    }

    // On a 6-cycle the antipode has d_in = 2 > d_out = 0.
    let c6 = build_graph((0..6).map(|i| (i, (i + 1) % 6, 1.0))).unwrap();
    let dec = layers::layer_decompose(&c6, 0).unwrap();
    println!(
        "C6 [1, 3]: {:?}",
        almgren::classify_region(&dec, 1, 3).unwrap()
    );
    let s = almgren::frequency_series(&dec, &ScalarField::constant(&c6, 1.0), 1e-8).unwrap();
    let r = almgren::doubling_check(&dec, &s, 2, 2).unwrap();
    println!(
        "C6 [2, 2] {:?}: S_in(3) = {} <= {} : {:?}",
        r.classification, r.lhs, r.upper_bound, r.upper_holds
    );
}
