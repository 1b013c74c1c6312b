//! Boundary energy of a harmonic polynomial on sup-norm spheres.
//!
//! `E(t)` integrates `u^2` over the boundary of the cube `[-t, t]^d`. For
//! harmonic `u` its derivative splits into a Dirichlet part and a contribution
//! from the codimension-two skeleton of the cube:
//!
//! ```text
//! E'(t) = 2 ∫_{[-t,t]^d} |∇u|^2 + 2 ∫_{skeleton} u^2
//! ```
//!
//! The skeleton is the set of `(d-2)`-faces (the four corners when `d = 2`),
//! each shared by two facets whose extent grows with `t`.

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::polynomial::{FloatPolynomial, HarmonicPolynomial};
use crate::quadrature::{for_each_cube_point, gauss_legendre};
use crate::sum::NeumaierSum;

pub const DEFAULT_QUAD_ORDER: usize = 12;
pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 4;

#[derive(Debug, Error)]
pub enum CubeError {
    #[error("polynomial is not harmonic (nonzero Laplacian)")]
    NotHarmonic,
    #[error("dimension {0} is outside {MIN_DIM}..={MAX_DIM}")]
    DimensionOutOfRange(usize),
    #[error("quadrature order {0} is below 2")]
    QuadOrder(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy)]
pub struct EnergyOptions {
    pub quad_order: usize,
    /// Evaluate non-harmonic polynomials too (diagnostics only).
    pub allow_non_harmonic: bool,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        Self {
            quad_order: DEFAULT_QUAD_ORDER,
            allow_non_harmonic: false,
        }
    }
}

impl EnergyOptions {
    pub fn with_order(quad_order: usize) -> Self {
        Self {
            quad_order,
            ..Self::default()
        }
    }
}

/// Precomputed evaluators for one polynomial and one quadrature rule.
#[derive(Debug, Clone)]
pub struct CubeEnergy {
    dim: usize,
    u: FloatPolynomial,
    gradient: Vec<FloatPolynomial>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    quad_order: usize,
}

impl CubeEnergy {
    pub fn new(p: &HarmonicPolynomial, opts: EnergyOptions) -> Result<Self, CubeError> {
        let dim = p.dim();
        if !(MIN_DIM..=MAX_DIM).contains(&dim) {
            return Err(CubeError::DimensionOutOfRange(dim));
        }
        if opts.quad_order < 2 {
            return Err(CubeError::QuadOrder(opts.quad_order));
        }
        if !p.is_continuum_harmonic && !opts.allow_non_harmonic {
            return Err(CubeError::NotHarmonic);
        }
        let (nodes, weights) = gauss_legendre(opts.quad_order);
        Ok(Self {
            dim,
            u: p.poly.to_f64(),
            gradient: p.poly.gradient().iter().map(|g| g.to_f64()).collect(),
            nodes,
            weights,
            quad_order: opts.quad_order,
        })
    }

    pub fn quad_order(&self) -> usize {
        self.quad_order
    }

    /// Integral of `u^2` over the cube faces where `fixed` coordinates sit at
    /// `±t` (all sign patterns) and the rest range over `[-t, t]`.
    fn face_family_integral(&self, fixed: &[usize], t: f64) -> f64 {
        let free: Vec<usize> = (0..self.dim).filter(|i| !fixed.contains(i)).collect();
        let mut acc = NeumaierSum::new();
        let mut x = vec![0.0; self.dim];
        for signs in 0..(1usize << fixed.len()) {
            for (j, &axis) in fixed.iter().enumerate() {
                x[axis] = if signs >> j & 1 == 1 { t } else { -t };
            }
            for_each_cube_point(&self.nodes, &self.weights, free.len(), t, |p, w| {
                for (&axis, &coord) in free.iter().zip(p) {
                    x[axis] = coord;
                }
                let u = self.u.eval(&x);
                acc.add(w * u * u);
            });
        }
        acc.value()
    }

    /// `E(t)`: sum over the `2 dim` facets of the cube.
    pub fn energy(&self, t: f64) -> f64 {
        let mut acc = NeumaierSum::new();
        for axis in 0..self.dim {
            acc.add(self.face_family_integral(&[axis], t));
        }
        acc.value()
    }

    /// `2 ∫_{[-t,t]^d} |∇u|^2`.
    pub fn dirichlet_term(&self, t: f64) -> f64 {
        let mut acc = NeumaierSum::new();
        for_each_cube_point(&self.nodes, &self.weights, self.dim, t, |x, w| {
            let g2: f64 = self
                .gradient
                .iter()
                .map(|g| {
                    let d = g.eval(x);
                    d * d
                })
                .sum();
            acc.add(w * g2);
        });
        2.0 * acc.value()
    }

    /// `2 ∫ u^2` over the `(dim - 2)`-skeleton of the cube.
    pub fn skeleton_term(&self, t: f64) -> f64 {
        let mut acc = NeumaierSum::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                acc.add(self.face_family_integral(&[i, j], t));
            }
        }
        2.0 * acc.value()
    }
}

pub fn boundary_energy(
    p: &HarmonicPolynomial,
    t: f64,
    opts: EnergyOptions,
) -> Result<f64, CubeError> {
    check_t(t)?;
    Ok(CubeEnergy::new(p, opts)?.energy(t))
}

fn check_t(t: f64) -> Result<(), CubeError> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(CubeError::InvalidGrid(format!("t = {t} must be positive")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyCurve {
    pub t_grid: Vec<f64>,
    pub energy: Vec<f64>,
    pub quad_order: usize,
    /// `E(t_{i+1}) - 2 E(t_i) + E(t_{i-1})` for interior grid points
    /// (`second_diffs[i - 1]` belongs to `t_grid[i]`).
    pub second_diffs: Vec<f64>,
}

impl EnergyCurve {
    pub fn max_energy(&self) -> f64 {
        self.energy.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    pub fn min_second_diff(&self) -> f64 {
        self.second_diffs
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// All second differences are at least `-rel_tol * max |E|`.
    pub fn is_convex(&self, rel_tol: f64) -> bool {
        self.min_second_diff() >= -rel_tol * self.max_energy()
    }
}

/// Uniform grid of `steps` points on `[t_min, t_max]`.
pub fn energy_curve(
    p: &HarmonicPolynomial,
    t_min: f64,
    t_max: f64,
    steps: usize,
    opts: EnergyOptions,
) -> Result<EnergyCurve, CubeError> {
    if !(t_min > 0.0 && t_min < t_max && t_max.is_finite()) {
        return Err(CubeError::InvalidGrid(format!(
            "need 0 < t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if steps < 3 {
        return Err(CubeError::InvalidGrid(format!(
            "steps = {steps} is below 3"
        )));
    }
    let ce = CubeEnergy::new(p, opts)?;
    let t_grid = uniform_grid(t_min, t_max, steps);
    let energy: Vec<f64> = t_grid.iter().map(|&t| ce.energy(t)).collect();
    let second_diffs = energy
        .windows(3)
        .map(|w| (w[2] - w[1]) - (w[1] - w[0]))
        .collect();
    Ok(EnergyCurve {
        t_grid,
        energy,
        quad_order: opts.quad_order,
        second_diffs,
    })
}

pub fn uniform_grid(t_min: f64, t_max: f64, steps: usize) -> Vec<f64> {
    let h = (t_max - t_min) / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                t_max
            } else {
                t_min + i as f64 * h
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// `(f(t+h) - f(t-h)) / 2h`, second order.
    ThreePoint,
    /// `(-f(t+2h) + 8f(t+h) - 8f(t-h) + f(t-2h)) / 12h`, fourth order.
    FivePoint,
}

pub fn central_difference<F: Fn(f64) -> f64>(f: F, t: f64, h: f64, stencil: Stencil) -> f64 {
    match stencil {
        Stencil::ThreePoint => (f(t + h) - f(t - h)) / (2.0 * h),
        Stencil::FivePoint => {
            (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeDecomposition {
    pub e_prime_fd: f64,
    pub dirichlet_term: f64,
    pub skeleton_term: f64,
}

impl DerivativeDecomposition {
    /// `E'_fd - (dirichlet + skeleton)`.
    pub fn defect(&self) -> f64 {
        self.e_prime_fd - (self.dirichlet_term + self.skeleton_term)
    }

    /// How far the Dirichlet term alone falls short of the measured derivative.
    pub fn dirichlet_shortfall(&self) -> f64 {
        self.e_prime_fd - self.dirichlet_term
    }
}

/// Finite-difference `E'(t)` (five-point central stencil) next to the two
/// closed-form parts of the derivative. `h` defaults to `t / 1000`.
pub fn derivative_decomposition(
    p: &HarmonicPolynomial,
    t: f64,
    h: Option<f64>,
    opts: EnergyOptions,
) -> Result<DerivativeDecomposition, CubeError> {
    let ce = CubeEnergy::new(p, opts)?;
    decompose_with(&ce, t, h.unwrap_or(t / 1000.0), Stencil::FivePoint)
}

pub fn decompose_with(
    ce: &CubeEnergy,
    t: f64,
    h: f64,
    stencil: Stencil,
) -> Result<DerivativeDecomposition, CubeError> {
    check_t(t)?;
    let reach = match stencil {
        Stencil::ThreePoint => h,
        Stencil::FivePoint => 2.0 * h,
    };
    if !(h > 0.0 && reach < t) {
        return Err(CubeError::InvalidGrid(format!(
            "step h = {h} must be positive and keep the stencil inside t > 0 (t = {t})"
        )));
    }
    Ok(DerivativeDecomposition {
        e_prime_fd: central_difference(|s| ce.energy(s), t, h, stencil),
        dirichlet_term: ce.dirichlet_term(t),
        skeleton_term: ce.skeleton_term(t),
    })
}

/// One CSV row per grid point: `t,E,second_diff,E_prime_fd,dirichlet_term,skeleton_term`.
/// `second_diff` is blank at the two endpoints.
pub fn write_curve_csv<W: Write>(
    p: &HarmonicPolynomial,
    curve: &EnergyCurve,
    opts: EnergyOptions,
    out: W,
) -> Result<(), CubeError> {
    let ce = CubeEnergy::new(p, opts)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "t",
        "E",
        "second_diff",
        "E_prime_fd",
        "dirichlet_term",
        "skeleton_term",
    ])?;
    let last = curve.t_grid.len() - 1;
    for (i, (&t, &e)) in curve.t_grid.iter().zip(&curve.energy).enumerate() {
        let sd = if i == 0 || i == last {
            String::new()
        } else {
            curve.second_diffs[i - 1].to_string()
        };
        let d = decompose_with(&ce, t, t / 1000.0, Stencil::FivePoint)?;
        w.write_record([
            t.to_string(),
            e.to_string(),
            sd,
            d.e_prime_fd.to_string(),
            d.dirichlet_term.to_string(),
            d.skeleton_term.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(dim: usize, s: &str) -> HarmonicPolynomial {
        HarmonicPolynomial::parse(dim, s).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn square_energies() {
        let o = EnergyOptions::default();
        assert!(close(
            boundary_energy(&hp(2, "1"), 1.0, o).unwrap(),
            8.0,
            1e-14
        ));
        assert!(close(
            boundary_energy(&hp(2, "x"), 1.0, o).unwrap(),
            16.0 / 3.0,
            1e-14
        ));
        assert!(close(
            boundary_energy(&hp(2, "x*y"), 1.0, o).unwrap(),
            8.0 / 3.0,
            1e-14
        ));
    }

    #[test]
    fn non_harmonic_needs_override() {
        let p = hp(2, "x^2");
        assert!(matches!(
            boundary_energy(&p, 1.0, EnergyOptions::default()),
            Err(CubeError::NotHarmonic)
        ));
        let o = EnergyOptions {
            allow_non_harmonic: true,
            ..EnergyOptions::default()
        };
        // faces x = ±1: 2 * 2; faces y = ±1: 2 * 2/5
        assert!(close(
            boundary_energy(&p, 1.0, o).unwrap(),
            4.0 + 0.8,
            1e-14
        ));
    }

    #[test]
    fn argument_checks() {
        let o = EnergyOptions::default();
        assert!(matches!(
            boundary_energy(&hp(5, "x"), 1.0, o),
            Err(CubeError::DimensionOutOfRange(5))
        ));
        assert!(matches!(
            boundary_energy(&hp(2, "x"), 1.0, EnergyOptions::with_order(1)),
            Err(CubeError::QuadOrder(1))
        ));
        assert!(boundary_energy(&hp(2, "x"), 0.0, o).is_err());
        assert!(energy_curve(&hp(2, "x"), 1.0, 0.5, 10, o).is_err());
        assert!(energy_curve(&hp(2, "x"), 0.5, 1.0, 2, o).is_err());
    }

    #[test]
    fn constant_curve_is_linear() {
        let c = energy_curve(&hp(2, "1"), 0.25, 4.0, 64, EnergyOptions::default()).unwrap();
        for (&t, &e) in c.t_grid.iter().zip(&c.energy) {
            assert!(close(e, 8.0 * t, 1e-14));
        }
        assert!(c.second_diffs.iter().all(|d| d.abs() <= 1e-10));
    }

    #[test]
    fn linear_field_cubic_energy() {
        let c = energy_curve(&hp(2, "x"), 0.5, 2.0, 31, EnergyOptions::default()).unwrap();
        for (&t, &e) in c.t_grid.iter().zip(&c.energy) {
            assert!(close(e, 16.0 * t.powi(3) / 3.0, 1e-12));
        }
        assert!(c.second_diffs.iter().all(|&d| d > 0.0));
    }

    #[test]
    fn decomposition_in_the_plane() {
        let o = EnergyOptions::default();
        let cases = [
            ("1", 8.0, 0.0, 8.0),
            ("x", 16.0, 8.0, 8.0),
            ("x*y", 40.0 / 3.0, 16.0 / 3.0, 8.0),
        ];
        for (poly, e_prime, dirichlet, skeleton) in cases {
            let d = derivative_decomposition(&hp(2, poly), 1.0, Some(1e-3), o).unwrap();
            assert!(close(d.dirichlet_term, dirichlet, 1e-13), "{poly}");
            assert!(close(d.skeleton_term, skeleton, 1e-13), "{poly}");
            assert!(
                (d.e_prime_fd - e_prime).abs() <= 1e-6,
                "{poly}: {}",
                d.e_prime_fd
            );
            assert!(d.defect().abs() <= 1e-6);
        }
    }

    #[test]
    fn csv_rows() {
        let p = hp(2, "x*y");
        let o = EnergyOptions::default();
        let c = energy_curve(&p, 0.5, 1.5, 3, o).unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&p, &c, o, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
        assert_eq!(
            rows[0],
            vec![
                "t",
                "E",
                "second_diff",
                "E_prime_fd",
                "dirichlet_term",
                "skeleton_term"
            ]
        );
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[1][2], "");
        assert_ne!(rows[2][2], "");
        assert_eq!(rows[3][2], "");
        let e: f64 = rows[2][1].parse().unwrap();
        assert!(close(e, 8.0 / 3.0, 1e-14));
    }
}
