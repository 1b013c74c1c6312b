//! Layer energies and the discrete Almgren frequency
//!
//! ```text
//! N(k) = sum_{y in V_{k+1}} d_in(y) u(y)^2 - sum_{y in V_k} d_out(y) u(y)^2
//! ```
//!
//! For `u` harmonic on `V_0 .. V_k`, `N` is nonnegative and nondecreasing up
//! to `k`. On finite graphs the series is only reported up to a validity
//! horizon: every vertex of layers `0..=K+1` must be interior to the field,
//! and layer `K+1` must lie strictly inside the truncation frontier.

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::harmonic::{HarmonicError, ScalarField};
use crate::layers::LayerDecomposition;
use crate::sum::{accurate_sum, two_product, two_sum, NeumaierSum};

pub const DEFAULT_TOL_MONO: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum AlmgrenError {
    #[error("field has {found} values but the decomposition covers {expected} vertices")]
    MissingValue { expected: usize, found: usize },
    #[error("no layer qualifies for the validity horizon")]
    EmptyHorizon,
    #[error("range [{a}, {b}] is out of bounds (limit {limit})")]
    RangeOutOfBounds { a: usize, b: usize, limit: usize },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
}

fn check_field(dec: &LayerDecomposition, f: &ScalarField) -> Result<(), AlmgrenError> {
    let n = dec.dist.len();
    if f.values.len() != n || f.interior.len() != n {
        return Err(AlmgrenError::MissingValue {
            expected: n,
            found: f.values.len().min(f.interior.len()),
        });
    }
    Ok(())
}

/// Degree-weighted spherical energies `(S_in, S_out)`, one entry per layer.
pub fn layer_energies(
    dec: &LayerDecomposition,
    f: &ScalarField,
) -> Result<(Vec<f64>, Vec<f64>), AlmgrenError> {
    check_field(dec, f)?;
    let weighted = |degree: &[f64]| -> Vec<f64> {
        dec.layers
            .iter()
            .map(|layer| {
                accurate_sum(layer.iter().map(|&v| {
                    let u = f.values[v];
                    degree[v] * u * u
                }))
            })
            .collect()
    };
    Ok((weighted(&dec.d_in), weighted(&dec.d_out)))
}

/// Largest `K` such that layers `0..=K+1` exist, are fully interior, and lie
/// before the frontier layer.
pub fn validity_horizon(dec: &LayerDecomposition, f: &ScalarField) -> Option<usize> {
    let mut certified = None;
    for (k, layer) in dec.layers.iter().enumerate() {
        if dec.frontier_layer.is_some_and(|fl| k >= fl) {
            break;
        }
        if !layer.iter().all(|&v| f.interior[v]) {
            break;
        }
        certified = Some(k);
    }
    // `certified` is the last good layer, i.e. K + 1.
    certified.and_then(|last| last.checked_sub(1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencySeries {
    pub base: usize,
    /// `S_in(k)` for every layer of the decomposition.
    pub s_in: Vec<f64>,
    /// `S_out(k)` for every layer of the decomposition.
    pub s_out: Vec<f64>,
    /// `N(k)` for `0 <= k <= horizon`.
    pub n: Vec<f64>,
    pub horizon: usize,
    /// `max_k S_in(k)` over layers `0..=horizon+1`; sets the tolerance scale.
    pub energy_scale: f64,
    pub tol_mono: f64,
}

impl FrequencySeries {
    /// Wraps precomputed values, e.g. for testing the reporters. Energies are
    /// left empty.
    pub fn from_values(n: Vec<f64>, energy_scale: f64, tol_mono: f64) -> Self {
        assert!(!n.is_empty(), "a series has at least N(0)");
        Self {
            base: 0,
            s_in: Vec::new(),
            s_out: Vec::new(),
            horizon: n.len() - 1,
            n,
            energy_scale,
            tol_mono,
        }
    }

    /// Additive slack used by every check: `tol_mono * (1 + energy_scale)`.
    pub fn threshold(&self) -> f64 {
        self.tol_mono * (1.0 + self.energy_scale)
    }

    /// `N(k) - N(k-1)` for `k >= 1`.
    pub fn increments(&self) -> Vec<f64> {
        self.n.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `sum_{k=a}^{b} N(k)`.
    pub fn telescoped_sum(&self, a: usize, b: usize) -> f64 {
        accurate_sum(self.n[a..=b].iter().copied())
    }

    /// CSV with columns `k,S_in_k,S_out_k,N_k,dN_k`; `dN_k` is blank at `k = 0`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), AlmgrenError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "S_in_k", "S_out_k", "N_k", "dN_k"])?;
        for (k, &nk) in self.n.iter().enumerate() {
            let dn = if k == 0 {
                String::new()
            } else {
                (nk - self.n[k - 1]).to_string()
            };
            w.write_record([
                k.to_string(),
                self.s_in[k].to_string(),
                self.s_out[k].to_string(),
                nk.to_string(),
                dn,
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// `N(k)` summed edge by edge over `E_k` as `w (u(y) - u(z)) (u(y) + u(z))`
/// with `z` in `V_k` and `y` in `V_{k+1}`. Equal to `S_in(k+1) - S_out(k)`,
/// but differencing before squaring keeps nearly constant fields accurate.
/// Each term is expanded error-free to first order before summation.
fn edge_frequency(dec: &LayerDecomposition, f: &ScalarField, k: usize) -> f64 {
    let mut acc = NeumaierSum::new();
    for e in &dec.interlayer_edges[k] {
        let (near, far) = (f.values[e.u], f.values[e.v]);
        let (d, dl) = two_sum(far, -near);
        let (s, sl) = two_sum(far, near);
        let (wd, wd_err) = two_product(e.w, d);
        let (p, p_err) = two_product(wd, s);
        acc.add(p);
        acc.add(p_err);
        acc.add(wd_err * s + e.w * (dl * s + d * sl + dl * sl));
    }
    acc.value()
}

/// `N(k)` for every `k` up to the validity horizon.
pub fn frequency_series(
    dec: &LayerDecomposition,
    f: &ScalarField,
    tol_mono: f64,
) -> Result<FrequencySeries, AlmgrenError> {
    let (s_in, s_out) = layer_energies(dec, f)?;
    let horizon = validity_horizon(dec, f).ok_or(AlmgrenError::EmptyHorizon)?;
    let n = (0..=horizon).map(|k| edge_frequency(dec, f, k)).collect();
    let energy_scale = s_in[..=horizon + 1].iter().copied().fold(0.0, f64::max);
    Ok(FrequencySeries {
        base: dec.base,
        s_in,
        s_out,
        n,
        horizon,
        energy_scale,
        tol_mono,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub pass: bool,
    pub threshold: f64,
    pub min_value: f64,
    pub min_value_at: usize,
    /// Smallest `N(k+1) - N(k)`; `None` when the horizon is 0.
    pub min_increment: Option<f64>,
    /// The `k` of the smallest increment `N(k+1) - N(k)`.
    pub min_increment_at: Option<usize>,
}

pub fn verify_monotone(s: &FrequencySeries) -> MonotonicityReport {
    let threshold = s.threshold();
    let argmin = |xs: &[f64]| -> Option<(usize, f64)> {
        xs.iter()
            .copied()
            .enumerate()
            .fold(None, |best, (i, x)| match best {
                Some((_, b)) if b <= x => best,
                _ => Some((i, x)),
            })
    };
    let (min_value_at, min_value) = argmin(&s.n).expect("series is nonempty");
    let increment = argmin(&s.increments());
    let pass = min_value >= -threshold && increment.is_none_or(|(_, d)| d >= -threshold);
    MonotonicityReport {
        pass,
        threshold,
        min_value,
        min_value_at,
        min_increment: increment.map(|(_, d)| d),
        min_increment_at: increment.map(|(k, _)| k),
    }
}

/// Lateral energy `sum_{(a,b) within V_k} w_ab (u(a) - u(b))^2` per layer.
pub fn lateral_energy(
    g: &Graph,
    dec: &LayerDecomposition,
    f: &ScalarField,
) -> Result<Vec<f64>, AlmgrenError> {
    check_field(dec, f)?;
    Ok(dec
        .layers
        .iter()
        .map(|layer| {
            let mut acc = NeumaierSum::new();
            for &a in layer {
                for (b, w) in g.neighbors(a) {
                    if b > a && dec.dist[b] == dec.dist[a] {
                        let d = f.values[a] - f.values[b];
                        acc.add(w * d * d);
                    }
                }
            }
            acc.value()
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    Expansive,
    Contractive,
    Both,
    Neither,
}

impl Region {
    pub fn is_expansive(self) -> bool {
        matches!(self, Region::Expansive | Region::Both)
    }

    pub fn is_contractive(self) -> bool {
        matches!(self, Region::Contractive | Region::Both)
    }
}

/// Compares `d_out` with `d_in` on every vertex with `a <= dist <= b`.
/// Equality vertices count toward both verdicts.
pub fn classify_region(
    dec: &LayerDecomposition,
    a: usize,
    b: usize,
) -> Result<Region, AlmgrenError> {
    let limit = dec
        .last_reliable_layer()
        .ok_or(AlmgrenError::RangeOutOfBounds { a, b, limit: 0 })?;
    if a > b || b > limit {
        return Err(AlmgrenError::RangeOutOfBounds { a, b, limit });
    }
    let (mut expansive, mut contractive) = (true, true);
    for layer in &dec.layers[a..=b] {
        for &v in layer {
            expansive &= dec.d_out[v] >= dec.d_in[v];
            contractive &= dec.d_out[v] <= dec.d_in[v];
        }
    }
    Ok(match (expansive, contractive) {
        (true, true) => Region::Both,
        (true, false) => Region::Expansive,
        (false, true) => Region::Contractive,
        (false, false) => Region::Neither,
    })
}

/// Both sides of the additive doubling bounds over `[a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoublingReport {
    pub a: usize,
    pub b: usize,
    pub classification: Region,
    /// `S_in(b+1)`.
    pub lhs: f64,
    /// `(b - a + 1) N(a) + S_out(a)`.
    pub lower_bound: f64,
    /// `(b - a + 1) N(b) + S_out(a)`.
    pub upper_bound: f64,
    pub telescoped_sum: f64,
    /// Checked only for expansive regions.
    pub lower_holds: Option<bool>,
    /// Checked only for contractive regions.
    pub upper_holds: Option<bool>,
}

impl DoublingReport {
    /// No asserted bound fails.
    pub fn holds(&self) -> bool {
        self.lower_holds != Some(false) && self.upper_holds != Some(false)
    }
}

pub fn doubling_check(
    dec: &LayerDecomposition,
    s: &FrequencySeries,
    a: usize,
    b: usize,
) -> Result<DoublingReport, AlmgrenError> {
    if a > b || b > s.horizon {
        return Err(AlmgrenError::RangeOutOfBounds {
            a,
            b,
            limit: s.horizon,
        });
    }
    let classification = classify_region(dec, a, b)?;
    let width = (b - a + 1) as f64;
    let lhs = s.s_in[b + 1];
    let lower_bound = width * s.n[a] + s.s_out[a];
    let upper_bound = width * s.n[b] + s.s_out[a];
    let slack = s.threshold();
    Ok(DoublingReport {
        a,
        b,
        classification,
        lhs,
        lower_bound,
        upper_bound,
        telescoped_sum: s.telescoped_sum(a, b),
        lower_holds: classification
            .is_expansive()
            .then_some(lhs >= lower_bound - slack),
        upper_holds: classification
            .is_contractive()
            .then_some(lhs <= upper_bound + slack),
    })
}
