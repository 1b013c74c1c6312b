//! Boundary energy of harmonic polynomials on cubes: convexity and the two
//! parts of its derivative.
//!
//! $ cargo run --example cube_energy -- "x*y - 2*z^2 + x^2 + y^2" 3

use discrete_almgren::cube_energy::{derivative_decomposition, energy_curve, EnergyOptions};
use discrete_almgren::HarmonicPolynomial;

fn main() {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "x*y".to_string());
    let dim = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let p = HarmonicPolynomial::parse(dim, &text).expect("polynomial syntax");
    let opts = EnergyOptions::default();

    let curve = energy_curve(&p, 0.25, 4.0, 16, opts).expect("harmonic, dim 2..=4");
    for (t, e) in curve.t_grid.iter().zip(&curve.energy) {
        println!("E({t:.4}) = {e:.6}");
    }
    println!(
        "min second difference {:e}, convex: {}",
        curve.min_second_diff(),
        curve.is_convex(1e-8)
    );

    let d = derivative_decomposition(&p, 1.0, None, opts).unwrap();
    println!(
        "E'(1) = {:.9}  2 int |grad u|^2 = {:.9}  skeleton = {:.9}",
        d.e_prime_fd, d.dirichlet_term, d.skeleton_term
    );
}
