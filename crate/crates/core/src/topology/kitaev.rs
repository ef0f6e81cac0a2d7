//! Spinless p-wave chain with nearest and next-nearest hopping and pairing,
//! driven by exchanging the two pairing phases every half period.

use std::f64::consts::PI;

use faer::{c64, Mat};

use super::twoband::{dot, two_band_floquet, TwoBandFloquet, Vec3};
use super::{count_modes, phase_winding, EdgeCriteria, ModeCount, OpenSpectrum, Windings};
use crate::error::{check_finite, check_positive, Error, Result};
use crate::linalg::{herm_propagator, unitary_eigen};

const GAPLESS_TOL: f64 = 1e-9;

/// Pairing Δ_a = |Δ_a| e^{iφ_a}; H₁ = H(φ₁, φ₂) for T/2, then H₂ = H(φ₂, φ₁).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenKitaev {
    pub mu: f64,
    pub t1: f64,
    pub t2: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub period: f64,
}

impl DrivenKitaev {
    /// μ = −10|Δ₁|, |Δ₂| = 2.5|Δ₁|, in units of |Δ₁|.
    pub fn reference(t1: f64, t2: f64, period: f64) -> Self {
        Self { mu: -10.0, t1, t2, delta1: 1.0, delta2: 2.5, phi1: 0.0, phi2: PI / 2.0, period }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("period", self.period)?;
        for (name, v) in [
            ("mu", self.mu),
            ("t1", self.t1),
            ("t2", self.t2),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("phi1", self.phi1),
            ("phi2", self.phi2),
        ] {
            check_finite(name, v)?;
        }
        Ok(())
    }

    /// (φ on the nearest, φ on the next-nearest pairing) during each piece.
    fn phases(&self, piece: usize) -> (f64, f64) {
        if piece == 0 {
            (self.phi1, self.phi2)
        } else {
            (self.phi2, self.phi1)
        }
    }

    /// BdG Bloch vector in the Nambu basis (c_k, c†_{−k}).
    pub fn bloch(&self, piece: usize, k: f64) -> Vec3 {
        let (p1, p2) = self.phases(piece);
        let (s1, s2) = (k.sin(), (2.0 * k).sin());
        let hx = 2.0 * (self.delta1 * p1.sin() * s1 + self.delta2 * p2.sin() * s2);
        let hy = 2.0 * (self.delta1 * p1.cos() * s1 + self.delta2 * p2.cos() * s2);
        let hz = -self.mu - 2.0 * self.t1 * k.cos() - 2.0 * self.t2 * (2.0 * k).cos();
        [hx, hy, hz]
    }

    /// One-period evolution starting at t = 0 (`frame` 0) or at t = T/2
    /// (`frame` 1).
    pub fn floquet(&self, frame: usize, k: f64) -> TwoBandFloquet {
        let (h1, h2) = (self.bloch(0, k), self.bloch(1, k));
        let half = 0.5 * self.period;
        if frame == 0 {
            two_band_floquet(h1, h2, half, half)
        } else {
            two_band_floquet(h2, h1, half, half)
        }
    }

    /// Unit vector n with n·σ H₁ n·σ = −H₂: it lies in the pairing plane
    /// perpendicular to the mirror that exchanges the two phase directions.
    pub fn chiral_axis(&self) -> Vec3 {
        let th = -0.5 * (self.phi1 + self.phi2);
        [th.cos(), th.sin(), 0.0]
    }
}

/// Winding of the one-period evolution in each of the two piece-boundary
/// frames, where n·σ U n·σ = U†, and the boundary-mode pairs they predict.
pub fn kitaev_invariants(model: &DrivenKitaev, points: usize) -> Result<Windings> {
    model.validate()?;
    if points < 16 {
        return Err(Error::InvalidParameter { name: "points", reason: format!("need at least 16, got {points}") });
    }
    let n = model.chiral_axis();
    let m = [-n[1], n[0], 0.0];
    let mut w = [0.0; 2];
    for (frame, slot) in w.iter_mut().enumerate() {
        let mut vals = Vec::with_capacity(points);
        for j in 0..points {
            let k = 2.0 * PI * j as f64 / points as f64;
            let f = model.floquet(frame, k);
            let r = f.r;
            if super::twoband::norm(r) < GAPLESS_TOL {
                return Err(Error::Gapless(format!("|r| = {:.2e} at k = {k:.5} in frame {frame}", super::twoband::norm(r))));
            }
            vals.push(c64::new(dot(r, [0.0, 0.0, 1.0]), dot(r, m)));
        }
        *slot = phase_winding(&vals)?;
    }
    Ok(Windings::new(w[0], w[1]))
}

/// Real-space BdG matrix for `sites` sites in the basis (c_1…c_L, c†_1…c†_L).
pub fn bdg_hamiltonian(model: &DrivenKitaev, piece: usize, sites: usize) -> Mat<c64> {
    let (p1, p2) = model.phases(piece);
    let n = sites;
    let mut h = Mat::<c64>::zeros(2 * n, 2 * n);
    let hop = [model.t1, model.t2];
    let pair = [c64::from_polar(model.delta1, p1), c64::from_polar(model.delta2, p2)];
    for l in 0..n {
        h[(l, l)] = c64::new(-model.mu, 0.0);
        h[(n + l, n + l)] = c64::new(model.mu, 0.0);
        for a in 0..2 {
            let r = l + a + 1;
            if r >= n {
                continue;
            }
            let t = c64::new(-hop[a], 0.0);
            h[(l, r)] = t;
            h[(r, l)] = t;
            h[(n + l, n + r)] = -t;
            h[(n + r, n + l)] = -t;
            // ½ Σ c†_i D_ij c†_j with D antisymmetric
            let d = -pair[a];
            h[(l, n + r)] = d;
            h[(r, n + l)] = -d;
            h[(n + r, l)] = d.conj();
            h[(n + l, r)] = -d.conj();
        }
    }
    h
}

/// Quasienergies of the open chain with the weight of each state on the
/// outer `edge_fraction` of sites at both ends.
pub fn kitaev_open_spectrum(model: &DrivenKitaev, sites: usize, edge_fraction: f64) -> Result<OpenSpectrum> {
    model.validate()?;
    if sites < 3 {
        return Err(Error::InvalidParameter { name: "sites", reason: format!("need at least 3, got {sites}") });
    }
    let half = 0.5 * model.period;
    let u1 = herm_propagator(bdg_hamiltonian(model, 0, sites).as_ref(), half)?;
    let u2 = herm_propagator(bdg_hamiltonian(model, 1, sites).as_ref(), half)?;
    let u = &u2 * &u1;
    let (vals, vecs) = unitary_eigen(u.as_ref(), 1e-10)?;
    let t = model.period;
    let edge = ((sites as f64 * edge_fraction).ceil() as usize).max(1);
    let is_edge = |i: usize| {
        let l = i % sites;
        l < edge || l >= sites - edge
    };
    let quasienergies = vals.iter().map(|z| c64::new(super::fold(-z.arg() / t, t), 0.0)).collect();
    let edge_weight = (0..2 * sites)
        .map(|a| (0..2 * sites).filter(|&i| is_edge(i)).map(|i| vecs[(i, a)].norm_sqr()).sum())
        .collect();
    Ok(OpenSpectrum { period: t, quasienergies, edge_weight })
}

/// Majorana pairs at 0 and π/T in the open chain: each pair contributes a
/// particle-hole doublet of BdG states.
pub fn kitaev_open_pairs(model: &DrivenKitaev, sites: usize, criteria: &EdgeCriteria) -> Result<ModeCount> {
    let spec = kitaev_open_spectrum(model, sites, criteria.edge_fraction)?;
    let c = count_modes(&spec, criteria, true);
    Ok(ModeCount { zero: c.zero / 2, pi: c.pi / 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::ModeCount;

    fn ring(model: &DrivenKitaev, piece: usize, sites: usize) -> Mat<c64> {
        // open chain plus the bonds that close it into a ring
        let mut h = bdg_hamiltonian(model, piece, sites);
        let (p1, p2) = model.phases(piece);
        let n = sites;
        let hop = [model.t1, model.t2];
        let pair = [c64::from_polar(model.delta1, p1), c64::from_polar(model.delta2, p2)];
        for l in 0..n {
            for a in 0..2 {
                let r = l + a + 1;
                if r < n {
                    continue;
                }
                let r = r - n;
                let t = c64::new(-hop[a], 0.0);
                h[(l, r)] += t;
                h[(r, l)] += t;
                h[(n + l, n + r)] -= t;
                h[(n + r, n + l)] -= t;
                let d = -pair[a];
                h[(l, n + r)] += d;
                h[(r, n + l)] -= d;
                h[(n + r, l)] += d.conj();
                h[(n + l, r)] -= d.conj();
            }
        }
        h
    }

    #[test]
    fn ring_matches_bloch_floquet_bands() {
        let m = DrivenKitaev { mu: 0.7, t1: 1.1, t2: 0.4, delta1: 0.8, delta2: 0.5, phi1: 0.3, phi2: 1.9, period: 1.7 };
        let n = 24;
        let half = 0.5 * m.period;
        let u = &herm_propagator(ring(&m, 1, n).as_ref(), half).unwrap()
            * &herm_propagator(ring(&m, 0, n).as_ref(), half).unwrap();
        let (vals, _) = unitary_eigen(u.as_ref(), 1e-10).unwrap();
        let mut got: Vec<f64> = vals.iter().map(|z| -z.arg() / m.period).collect();
        let mut want = Vec::new();
        for j in 0..n {
            let e = m.floquet(0, 2.0 * PI * j as f64 / n as f64).quasienergy();
            want.push(e);
            want.push(-e);
        }
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn boundary_frames_are_chiral() {
        let m = DrivenKitaev::reference(1.0, 0.5, 0.9);
        let n = m.chiral_axis();
        for frame in 0..2 {
            for j in 0..50 {
                let r = m.floquet(frame, 0.13 * j as f64).r;
                assert!(dot(r, n).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn deep_trivial_static_chain() {
        let mut m = DrivenKitaev::reference(1.0, 0.0, 0.05);
        m.phi2 = m.phi1;
        let w = kitaev_invariants(&m, 4096).unwrap();
        assert_eq!(w.counts(), Some(ModeCount { zero: 0, pi: 0 }));
        let c = kitaev_open_pairs(&m, 60, &EdgeCriteria::default()).unwrap();
        assert_eq!((c.zero, c.pi), (0, 0));
    }
}
