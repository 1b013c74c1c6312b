//! Frequency of the bounded harmonic function on the 3-regular tree.
//!
//! $ cargo run --example tree_example -- 12

use discrete_almgren::{almgren, harmonic, layers};

fn main() {
    let depth = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let ex = harmonic::tree_example_field(depth).expect("depth >= 2");
    let dec = layers::layer_decompose(&ex.graph, ex.base).unwrap();
    let series = almgren::frequency_series(&dec, &ex.field, almgren::DEFAULT_TOL_MONO).unwrap();

    println!("{:>3} {:>14} {:>14}", "k", "N(k)", "8 - 3/2^(k-1)");
    for (k, n) in series.n.iter().enumerate() {
        println!("{k:>3} {n:>14} {:>14}", 8.0 - 3.0 * 2f64.powi(1 - k as i32));
    }
    let report = almgren::verify_monotone(&series);
    println!(
        "monotone: {}, smallest increment {:?} at k = {:?}",
        report.pass, report.min_increment, report.min_increment_at
    );
}
