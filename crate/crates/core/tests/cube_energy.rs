mod common;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use discrete_almgren::cube_energy::{
    self, boundary_energy, decompose_with, CubeEnergy, CubeError, EnergyOptions, Stencil,
};
use discrete_almgren::polynomial::{rational, real_power_2d};
use discrete_almgren::{HarmonicPolynomial, Polynomial};

use common::big;

/// Exact `int_{-t}^{t} x^a dx`.
fn line_integral(a: u32, t: &BigRational) -> BigRational {
    if a % 2 == 1 {
        BigRational::zero()
    } else {
        big(2) * pow(t, a + 1) / big(a as i64 + 1)
    }
}

fn pow(t: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * t)
}

/// Exact surface integral of `u^2` over the boundary of `[-t, t]^dim`.
fn exact_energy(u: &Polynomial, t: &BigRational) -> BigRational {
    let sq = u * u;
    let dim = u.dim();
    let mut total = BigRational::zero();
    for (exps, c) in sq.terms() {
        for axis in 0..dim {
            let mut rest = c.clone();
            for (j, &e) in exps.iter().enumerate() {
                if j != axis {
                    rest *= line_integral(e, t);
                }
            }
            // Faces x_axis = t and x_axis = -t.
            let e = exps[axis];
            let face_values = pow(t, e) + pow(&-t.clone(), e);
            total += rest * face_values;
        }
    }
    total
}

fn family() -> Vec<HarmonicPolynomial> {
    let mut out: Vec<_> = (0..=5)
        .map(|m| HarmonicPolynomial::new(real_power_2d(m)))
        .collect();
    for text in ["x", "x*y", "x^2-y^2", "3/2*x - 2*y + 5"] {
        out.push(HarmonicPolynomial::parse(2, text).unwrap());
    }
    for text in ["1", "x", "x*y", "x^2-z^2", "x*y*z", "x^2+y^2-2*z^2"] {
        out.push(HarmonicPolynomial::parse(3, text).unwrap());
    }
    for text in ["x1*x2*x3*x4", "x1^2-x4^2"] {
        out.push(HarmonicPolynomial::parse(4, text).unwrap());
    }
    out
}

#[test]
fn quadrature_matches_exact_face_integrals() {
    for p in family() {
        assert!(p.is_continuum_harmonic, "{}", p.poly);
        // u^2 has per-axis degree 2m; n nodes integrate up to 2n - 1.
        let needed = p.poly.max_axis_degree() as usize + 1;
        let opts = EnergyOptions::with_order(needed.max(2));
        for (n, d) in [(1, 1), (3, 2), (1, 3), (7, 4)] {
            let t = rational(n, d);
            let exact = exact_energy(&p.poly, &t).to_f64().unwrap();
            let got = boundary_energy(&p, n as f64 / d as f64, opts).unwrap();
            assert!(
                (got - exact).abs() <= 1e-12 * exact.abs().max(1.0),
                "{} at t = {n}/{d}: {got} vs {exact}",
                p.poly
            );
        }
    }
}

#[test]
fn closed_forms_in_the_plane() {
    let x = HarmonicPolynomial::parse(2, "x").unwrap();
    let curve = cube_energy::energy_curve(&x, 0.5, 2.0, 16, EnergyOptions::default()).unwrap();
    for (t, e) in curve.t_grid.iter().zip(&curve.energy) {
        let exact = 16.0 * t.powi(3) / 3.0;
        assert!((e - exact).abs() <= 1e-12 * exact);
    }
    assert!(curve.second_diffs.iter().all(|&d| d > 0.0));

    let xy = HarmonicPolynomial::parse(2, "x*y").unwrap();
    let e1 = boundary_energy(&xy, 1.0, EnergyOptions::default()).unwrap();
    assert!((e1 - 8.0 / 3.0).abs() < 1e-14);
}

#[test]
fn homogeneous_scaling() {
    for p in family() {
        if !p.poly.is_homogeneous_of_degree(p.poly.degree()) {
            continue;
        }
        let power = 2 * p.poly.degree() as i32 + p.dim() as i32 - 1;
        let ce = CubeEnergy::new(&p, EnergyOptions::default()).unwrap();
        for t in [0.3, 1.0, 1.7] {
            let ratio = ce.energy(2.0 * t) / ce.energy(t);
            let expected = 2f64.powi(power);
            assert!(
                (ratio - expected).abs() <= 1e-10 * expected,
                "{}: {ratio}",
                p.poly
            );
        }
    }
}

#[test]
fn dirichlet_term_is_nonnegative_nondecreasing_and_undershoots() {
    for p in family() {
        let ce = CubeEnergy::new(&p, EnergyOptions::default()).unwrap();
        let grid = cube_energy::uniform_grid(0.25, 4.0, 32);
        let terms: Vec<f64> = grid.iter().map(|&t| ce.dirichlet_term(t)).collect();
        assert!(terms[0] >= 0.0);
        assert!(terms.windows(2).all(|w| w[1] >= w[0]), "{}", p.poly);

        let d = decompose_with(&ce, 1.0, 1e-3, Stencil::FivePoint).unwrap();
        assert!(
            (d.defect()).abs() <= 1e-6 * (1.0 + d.e_prime_fd.abs()),
            "{}",
            p.poly
        );
        if d.skeleton_term > 0.0 {
            assert!(d.dirichlet_shortfall() > 0.0);
        }
    }
}

#[test]
fn five_point_stencil_is_fourth_order() {
    let xy = HarmonicPolynomial::parse(2, "x*y").unwrap();
    let ce = CubeEnergy::new(&xy, EnergyOptions::default()).unwrap();
    let err = |h: f64| {
        let d = decompose_with(&ce, 1.0, h, Stencil::FivePoint).unwrap();
        (d.e_prime_fd - 40.0 / 3.0).abs()
    };
    for h in [0.2, 0.1] {
        let order = (err(h) / err(h / 2.0)).log2();
        assert!(order > 3.8, "h = {h}: order {order}");
    }
}

#[test]
fn rejects_bad_inputs() {
    let quad = HarmonicPolynomial::parse(2, "x^2").unwrap();
    assert!(matches!(
        boundary_energy(&quad, 1.0, EnergyOptions::default()),
        Err(CubeError::NotHarmonic)
    ));
    let opts = EnergyOptions {
        allow_non_harmonic: true,
        ..EnergyOptions::default()
    };
    // int over the square boundary of x^4: 2 * 2 + 2 * 2/5
    let e = boundary_energy(&quad, 1.0, opts).unwrap();
    assert!((e - 4.8).abs() < 1e-13);

    let one_d = HarmonicPolynomial::parse(1, "x").unwrap();
    assert!(matches!(
        boundary_energy(&one_d, 1.0, EnergyOptions::default()),
        Err(CubeError::DimensionOutOfRange(1))
    ));
    let x = HarmonicPolynomial::parse(2, "x").unwrap();
    assert!(boundary_energy(&x, 1.0, EnergyOptions::with_order(1)).is_err());
    assert!(cube_energy::energy_curve(&x, 1.0, 0.5, 10, EnergyOptions::default()).is_err());
    assert!(cube_energy::energy_curve(&x, 0.5, 1.0, 2, EnergyOptions::default()).is_err());
}
