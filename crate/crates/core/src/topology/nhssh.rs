//! Su-Schrieffer-Heeger chain with non-reciprocal intracell hopping
//! t₁ ± γ/2, whose intercell hopping alternates between f (for T₁) and qf
//! (for T₂).

use std::f64::consts::PI;

use faer::{c64, Mat};

use super::{count_modes, phase_winding, EdgeCriteria, ModeCount, OpenSpectrum, Windings};
use crate::error::{check_finite, check_positive, Error, Result};
use crate::linalg::{expm, general_eigen, general_eigenvalues};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenNhssh {
    pub t1: f64,
    pub gamma: f64,
    pub amplitude: f64,
    pub ratio: f64,
    pub durations: (f64, f64),
}

impl DrivenNhssh {
    pub fn period(&self) -> f64 {
        self.durations.0 + self.durations.1
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("T1", self.durations.0)?;
        check_positive("T2", self.durations.1)?;
        for (name, v) in [("t1", self.t1), ("gamma", self.gamma), ("f", self.amplitude), ("q", self.ratio)] {
            check_finite(name, v)?;
        }
        Ok(())
    }

    fn intercell(&self, piece: usize) -> f64 {
        if piece == 0 {
            self.amplitude
        } else {
            self.ratio * self.amplitude
        }
    }

    /// (R₊, R₋) of the piece Hamiltonian R₊σ₊ + R₋σ₋ at complex β.
    pub fn coefficients(&self, piece: usize, beta: c64) -> (c64, c64) {
        let t2 = self.intercell(piece);
        let h = 0.5 * self.gamma;
        (c64::new(self.t1 + h, 0.0) + t2 / beta, c64::new(self.t1 - h, 0.0) + t2 * beta)
    }
}

/// Radius of the generalized Brillouin zone, √|(t₁ − γ/2)/(t₁ + γ/2)|.
pub fn gbz_radius(t1: f64, gamma: f64) -> Result<f64> {
    let (a, b) = (t1 - 0.5 * gamma, t1 + 0.5 * gamma);
    if a == 0.0 || b == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t1",
            reason: format!("|t1| = gamma/2 makes the contour degenerate (t1 = {t1}, gamma = {gamma})"),
        });
    }
    Ok((a / b).abs().sqrt())
}

pub fn gbz_map(k: f64, t1: f64, gamma: f64) -> Result<c64> {
    Ok(c64::from_polar(gbz_radius(t1, gamma)?, k))
}

type M2 = [[c64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[c64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// e^{−iHt} for H = [[0, a], [b, 0]], using H² = ab·I.
fn off_diagonal_propagator(a: c64, b: c64, t: f64) -> M2 {
    let w = (a * b).sqrt();
    let wt = w * t;
    let sinc = if wt.norm() < 1e-8 { c64::new(t, 0.0) * (1.0 - wt * wt / 6.0) } else { wt.sin() / w };
    let c = wt.cos();
    let mi = c64::new(0.0, -1.0);
    [[c, mi * sinc * a], [mi * sinc * b, c]]
}

/// Ũ₁ = e^{−iH₁T₁/2}e^{−iH₂T₂}e^{−iH₁T₁/2} and
/// Ũ₂ = e^{−iH₂T₂/2}e^{−iH₁T₁}e^{−iH₂T₂/2} at β.
pub fn symmetrized_propagators(model: &DrivenNhssh, beta: c64) -> [M2; 2] {
    let (a1, b1) = model.coefficients(0, beta);
    let (a2, b2) = model.coefficients(1, beta);
    let (t1, t2) = model.durations;
    let half1 = off_diagonal_propagator(a1, b1, 0.5 * t1);
    let full2 = off_diagonal_propagator(a2, b2, t2);
    let half2 = off_diagonal_propagator(a2, b2, 0.5 * t2);
    let full1 = off_diagonal_propagator(a1, b1, t1);
    [mul(&half1, &mul(&full2, &half1)), mul(&half2, &mul(&full1, &half2))]
}

/// Windings of the two symmetrized frames on a circle of radius `radius`.
///
/// Each Ũ is chiral, Ũ = cos(θ)·I − i sin(θ)/(θ/T)·H̃_eff, so the off-diagonal
/// entries of Ũ are R̃± times one common scalar; that scalar cancels from
/// W = −(W₊ − W₋)/2 and the windings are taken from the entries directly.
fn windings_on(model: &DrivenNhssh, radius: f64, points: usize) -> Result<Windings> {
    let mut upper = [Vec::with_capacity(points), Vec::with_capacity(points)];
    let mut lower = [Vec::with_capacity(points), Vec::with_capacity(points)];
    for j in 0..points {
        let beta = c64::from_polar(radius, 2.0 * PI * j as f64 / points as f64);
        for (f, u) in symmetrized_propagators(model, beta).iter().enumerate() {
            upper[f].push(u[0][1]);
            lower[f].push(u[1][0]);
        }
    }
    let mut w = [0.0; 2];
    for f in 0..2 {
        let wp = phase_winding(&upper[f])?;
        let wm = phase_winding(&lower[f])?;
        w[f] = -0.5 * (wp - wm);
    }
    Ok(Windings::new(w[0], w[1]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NhsshInvariants {
    /// on the generalized Brillouin zone
    pub gbz: Windings,
    /// on the unit circle, for comparison
    pub conventional: Windings,
}

pub fn nhssh_invariants(model: &DrivenNhssh, points: usize) -> Result<NhsshInvariants> {
    model.validate()?;
    if points < 16 {
        return Err(Error::InvalidParameter { name: "points", reason: format!("need at least 16, got {points}") });
    }
    let r = gbz_radius(model.t1, model.gamma)?;
    Ok(NhsshInvariants { gbz: windings_on(model, r, points)?, conventional: windings_on(model, 1.0, points)? })
}

/// Real-space Hamiltonian of `cells` cells, basis (a₁, b₁, a₂, b₂, …).
pub fn chain_hamiltonian(model: &DrivenNhssh, piece: usize, cells: usize) -> Mat<c64> {
    let n = 2 * cells;
    let t2 = c64::new(model.intercell(piece), 0.0);
    let mut h = Mat::<c64>::zeros(n, n);
    for l in 0..cells {
        let (a, b) = (2 * l, 2 * l + 1);
        h[(a, b)] = c64::new(model.t1 + 0.5 * model.gamma, 0.0);
        h[(b, a)] = c64::new(model.t1 - 0.5 * model.gamma, 0.0);
        if l + 1 < cells {
            h[(b, a + 2)] = t2;
            h[(a + 2, b)] = t2;
        }
    }
    h
}

/// Complex quasienergies i·ln(λ)/T of the open chain (real part folded).
/// When the eigenvectors cannot be formed, the eigenvalues still come from
/// the Schur form and the edge weights are reported as NaN.
pub fn nhssh_open_spectrum(model: &DrivenNhssh, cells: usize, edge_fraction: f64) -> Result<OpenSpectrum> {
    model.validate()?;
    if cells < 2 {
        return Err(Error::InvalidParameter { name: "cells", reason: format!("need at least 2, got {cells}") });
    }
    let step = |piece: usize, dur: f64| {
        let h = chain_hamiltonian(model, piece, cells);
        let a = Mat::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)] * c64::new(0.0, -dur));
        expm(a.as_ref())
    };
    let u = &step(1, model.durations.1) * &step(0, model.durations.0);
    let t = model.period();
    let n = 2 * cells;
    let edge = ((cells as f64 * edge_fraction).ceil() as usize).max(1);
    let (vals, weights) = match general_eigen(u.as_ref()) {
        Ok((vals, vecs)) => {
            let w = (0..n)
                .map(|a| (0..n).filter(|&i| i / 2 < edge || i / 2 >= cells - edge).map(|i| vecs[(i, a)].norm_sqr()).sum())
                .collect();
            (vals, w)
        }
        Err(_) => (general_eigenvalues(u.as_ref())?, vec![f64::NAN; n]),
    };
    let quasienergies = vals
        .iter()
        .map(|z| c64::new(super::fold(-z.arg() / t, t), z.norm().ln() / t))
        .collect();
    Ok(OpenSpectrum { period: t, quasienergies, edge_weight: weights })
}

/// Boundary-mode pairs at 0 and π/T, identified by quasienergy alone: the
/// skin effect piles bulk states onto one end, so edge weight cannot tell
/// them apart.
pub fn nhssh_open_pairs(model: &DrivenNhssh, cells: usize, criteria: &EdgeCriteria) -> Result<ModeCount> {
    let spec = nhssh_open_spectrum(model, cells, criteria.edge_fraction)?;
    let c = count_modes(&spec, criteria, false);
    Ok(ModeCount { zero: c.zero / 2, pi: c.pi / 2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gbz_radius_values() {
        assert!((gbz_radius(2.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((gbz_radius(2.0, 1.0).unwrap() - (0.6f64).sqrt()).abs() < 1e-15);
        assert!(gbz_radius(0.5, 1.0).is_err());
        assert!((gbz_map(1.3, 2.0, 1.0).unwrap().norm() - (0.6f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn off_diagonal_propagator_matches_expm() {
        let (a, b, t) = (c64::new(1.3, 0.4), c64::new(-0.2, 0.9), 0.7);
        let m = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => a * c64::new(0.0, -t),
            (1, 0) => b * c64::new(0.0, -t),
            _ => c64::new(0.0, 0.0),
        });
        let e = expm(m.as_ref());
        let p = off_diagonal_propagator(a, b, t);
        for i in 0..2 {
            for j in 0..2 {
                assert!((e[(i, j)] - p[i][j]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn symmetrized_frames_are_chiral() {
        let m = DrivenNhssh { t1: 2.0, gamma: 1.0, amplitude: 1.7, ratio: 3.0, durations: (0.6, 0.6) };
        for u in symmetrized_propagators(&m, c64::from_polar(0.8, 0.4)) {
            assert!((u[0][0] - u[1][1]).norm() < 1e-12);
        }
    }

    #[test]
    fn static_phase_boundary() {
        // t₂ = 1, γ = 1: topological for |t₁| < √(1 + 1/4)
        let gamma = 1.0;
        let boundary = (1.0f64 + 0.25).sqrt();
        for &t1 in &[0.7, 1.0, 1.1, 1.15, 1.16, 1.3, 1.6] {
            let m = DrivenNhssh { t1, gamma, amplitude: 1.0, ratio: 1.0, durations: (0.1, 0.1) };
            let w = nhssh_invariants(&m, 4096).unwrap().gbz;
            let expect = if t1 < boundary { 1 } else { 0 };
            assert_eq!(w.counts().unwrap().zero, expect, "t1 = {t1}");
        }
    }
}
