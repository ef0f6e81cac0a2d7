//! Topological invariants and edge spectra of two-band lattices driven
//! between two Bloch Hamiltonians.

pub mod haldane;
pub mod kitaev;
pub mod nhssh;
pub mod twoband;

pub use haldane::{
    chern_number, closing_condition, edge_flow, min_gaps, ribbon_spectrum, ChernResult, DrivenHaldane, GapMinimum,
    HaldanePiece,
};
pub use kitaev::{kitaev_invariants, kitaev_open_pairs, kitaev_open_spectrum, DrivenKitaev};
pub use nhssh::{
    gbz_map, gbz_radius, nhssh_invariants, nhssh_open_pairs, nhssh_open_spectrum, DrivenNhssh, NhsshInvariants,
};
pub use twoband::{classify_closing, two_band_floquet, ClosingCondition, ClosingEnergy, TwoBandFloquet, Vec3};

use std::f64::consts::PI;

use faer::c64;

use crate::error::{Error, Result};

/// Thresholds that identify a boundary mode in an open spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCriteria {
    /// distance to 0 or π/T in units of 2π/T
    pub energy: f64,
    /// minimum weight on the outer `edge_fraction` of sites
    pub edge_weight: f64,
    pub edge_fraction: f64,
}

impl Default for EdgeCriteria {
    fn default() -> Self {
        Self { energy: 1e-3, edge_weight: 0.6, edge_fraction: 0.1 }
    }
}

/// Map onto (−π/T, π/T].
pub(crate) fn fold(e: f64, period: f64) -> f64 {
    crate::floquet::fold_quasienergy(e, period)
}

/// Total phase advance of a closed contour in units of 2π. Increments are
/// taken on the principal branch; a step beyond π/2 means the contour is too
/// coarse to follow the phase and is refused.
pub fn phase_winding(values: &[c64]) -> Result<f64> {
    let n = values.len();
    let mut total = 0.0;
    for j in 0..n {
        let (a, b) = (values[j], values[(j + 1) % n]);
        if a == c64::new(0.0, 0.0) || b == c64::new(0.0, 0.0) {
            return Err(Error::Gapless(format!("contour passes through zero at point {j}")));
        }
        let d = (b / a).arg();
        if d.abs() > 0.5 * PI {
            return Err(Error::InvalidParameter {
                name: "points",
                reason: format!("phase jumps by {d:.3} between contour points {j} and {}", (j + 1) % n),
            });
        }
        total += d;
    }
    Ok(total / (2.0 * PI))
}

/// Windings in the two time frames and the boundary-mode counts they imply,
/// N₀ = |W₁ + W₂|/2 and N_π = |W₁ − W₂|/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Windings {
    pub w1: f64,
    pub w2: f64,
    pub n_zero: f64,
    pub n_pi: f64,
}

impl Windings {
    pub fn new(w1: f64, w2: f64) -> Self {
        Self { w1, w2, n_zero: 0.5 * (w1 + w2).abs(), n_pi: 0.5 * (w1 - w2).abs() }
    }

    /// Integer counts, when both are within 1e−6 of integers.
    pub fn counts(&self) -> Option<ModeCount> {
        let int = |x: f64| ((x - x.round()).abs() < 1e-6).then_some(x.round() as usize);
        Some(ModeCount { zero: int(self.n_zero)?, pi: int(self.n_pi)? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeCount {
    pub zero: usize,
    pub pi: usize,
}

/// Quasienergies of an open chain (complex for non-Hermitian drives) with
/// the weight of each state on the chain ends.
#[derive(Debug, Clone)]
pub struct OpenSpectrum {
    pub period: f64,
    pub quasienergies: Vec<c64>,
    pub edge_weight: Vec<f64>,
}

/// States within `criteria.energy·2π/T` of 0 and of π/T, optionally also
/// requiring the edge weight.
pub fn count_modes(spec: &OpenSpectrum, criteria: &EdgeCriteria, require_edge: bool) -> ModeCount {
    let t = spec.period;
    let tol = criteria.energy * 2.0 * PI / t;
    let mut out = ModeCount { zero: 0, pi: 0 };
    for (e, &w) in spec.quasienergies.iter().zip(&spec.edge_weight) {
        if require_edge && w < criteria.edge_weight {
            continue;
        }
        let re = fold(e.re, t);
        if c64::new(re, e.im).norm() < tol {
            out.zero += 1;
        } else if c64::new(PI / t - re.abs(), e.im).norm() < tol {
            out.pi += 1;
        }
    }
    out
}
