//! Frequency of lattice-harmonic polynomials on an l1 ball of `Z^d`.
//!
//! $ cargo run --example lattice_frequency

use discrete_almgren::{
    almgren, gen_lattice, lattice_polynomial_field, layers, HarmonicPolynomial,
};

fn main() {
    for (dim, text) in [
        (2, "x*y"),
        (2, "x^2 - y^2"),
        (2, "x^3 - 3*x*y^2"),
        (3, "x*y*z"),
    ] {
        let lattice = gen_lattice(dim, 8).unwrap();
        let p = HarmonicPolynomial::parse(dim, text).unwrap();
        let field = lattice_polynomial_field(&lattice.graph, &p).unwrap();
        let dec = layers::layer_decompose(&lattice.graph, lattice.base).unwrap();
        let s = almgren::frequency_series(&dec, &field, almgren::DEFAULT_TOL_MONO).unwrap();
        println!("d = {dim}, u = {text}: N = {:?}", s.n);
    }

    // Continuum-harmonic is not enough on the lattice.
    let lattice = gen_lattice(2, 4).unwrap();
    let quartic = HarmonicPolynomial::parse(2, "x^4 - 6*x^2*y^2 + y^4").unwrap();
    match lattice_polynomial_field(&lattice.graph, &quartic) {
        Ok(_) => println!("unexpectedly lattice-harmonic"),
        Err(e) => println!("x^4 - 6x^2y^2 + y^4: {e}"),
    }
}
