//! Honeycomb lattice with nearest (t₁), next-nearest (t₂, flux φ) and
//! third-neighbour (t₃) hopping, switched between two (t₃, φ) settings.
//!
//! Momenta are written as θ_i = k·a_i with a₁ = (√3/2, 3/2) and
//! a₂ = (−√3/2, 3/2); the map k → θ preserves orientation, so the Brillouin
//! zone is the torus [0, 2π)².

use std::collections::BTreeMap;
use std::f64::consts::PI;

use faer::{c64, Mat};

use super::twoband::{classify_closing, two_band_floquet, ClosingCondition, ClosingEnergy, TwoBandFloquet, Vec3};
use super::{fold, EdgeCriteria};
use crate::error::{check_finite, check_positive, Error, Result};
use crate::linalg::{herm_propagator, unitary_eigen};

/// Below this quasienergy gap a grid point counts as gapless.
pub const GAPLESS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaldanePiece {
    pub t3: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenHaldane {
    pub t1: f64,
    pub t2: f64,
    pub mass: f64,
    pub pieces: [HaldanePiece; 2],
    pub durations: (f64, f64),
}

impl DrivenHaldane {
    /// t₂ = 0.8t₁, M = 0, (t₃, φ) = (0.75t₁, −π/6) then (−0.75t₁, −π/2);
    /// durations in units of 1/t₁.
    pub fn reference(first: f64, second: f64) -> Self {
        Self {
            t1: 1.0,
            t2: 0.8,
            mass: 0.0,
            pieces: [HaldanePiece { t3: 0.75, phi: -PI / 6.0 }, HaldanePiece { t3: -0.75, phi: -PI / 2.0 }],
            durations: (first, second),
        }
    }

    pub fn period(&self) -> f64 {
        self.durations.0 + self.durations.1
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("T1", self.durations.0)?;
        check_positive("T2", self.durations.1)?;
        for (name, v) in [("t1", self.t1), ("t2", self.t2), ("mass", self.mass)] {
            check_finite(name, v)?;
        }
        for p in &self.pieces {
            check_finite("t3", p.t3)?;
            check_finite("phi", p.phi)?;
        }
        Ok(())
    }

    pub fn bloch(&self, piece: usize, th1: f64, th2: f64) -> Vec3 {
        let HaldanePiece { t3, phi } = self.pieces[piece];
        let t1 = self.t1;
        let hx = t1 * (1.0 + th1.cos() + th2.cos()) + t3 * (2.0 * (th1 - th2).cos() + (th1 + th2).cos());
        let hy = t1 * (th1.sin() + th2.sin()) + t3 * (th1 + th2).sin();
        let hz = 2.0 * self.t2 * phi.sin() * (th1.sin() - th2.sin() - (th1 - th2).sin()) + self.mass;
        [hx, hy, hz]
    }

    pub fn floquet(&self, th1: f64, th2: f64) -> TwoBandFloquet {
        two_band_floquet(self.bloch(0, th1, th2), self.bloch(1, th1, th2), self.durations.0, self.durations.1)
    }

    /// Real-space hopping blocks C_n with H(θ) = Σ_n C_n e^{−i n·θ} in the
    /// (A, B) sublattice basis.
    pub fn fourier_components(&self, piece: usize) -> BTreeMap<(i32, i32), [[c64; 2]; 2]> {
        let HaldanePiece { t3, phi } = self.pieces[piece];
        let mut out: BTreeMap<(i32, i32), [[c64; 2]; 2]> = BTreeMap::new();
        let mut add = |n: (i32, i32), i: usize, j: usize, v: c64| {
            out.entry(n).or_insert([[c64::new(0.0, 0.0); 2]; 2])[i][j] += v;
        };
        let re = |x: f64| c64::new(x, 0.0);
        add((0, 0), 0, 0, re(self.mass));
        add((0, 0), 1, 1, re(-self.mass));
        for (n, t) in [((0, 0), self.t1), ((1, 0), self.t1), ((0, 1), self.t1), ((-1, 1), t3), ((1, -1), t3), ((1, 1), t3)] {
            add(n, 0, 1, re(t));
            add((-n.0, -n.1), 1, 0, re(t));
        }
        // c·sin(n·θ) = (ic/2)e^{−in·θ} − (ic/2)e^{in·θ}
        let c = 2.0 * self.t2 * phi.sin();
        for (n, s) in [((1, 0), 1.0), ((0, 1), -1.0), ((1, -1), -1.0)] {
            let v = c64::new(0.0, 0.5 * c * s);
            add(n, 0, 0, v);
            add(n, 1, 1, -v);
            add((-n.0, -n.1), 0, 0, -v);
            add((-n.0, -n.1), 1, 1, v);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernResult {
    pub value: i64,
    /// smallest quasienergy gap (at 0 or π/T) seen on the grid
    pub min_gap: f64,
}

/// Lower eigenvector of d̂·σ for a unit vector d̂, picking the better
/// conditioned of two equivalent forms.
fn lower_state(d: Vec3) -> [c64; 2] {
    let (x, y, z) = (d[0], d[1], d[2]);
    let (a, b) = if z > 0.0 {
        (c64::new(x, -y), c64::new(-1.0 - z, 0.0))
    } else {
        (c64::new(z - 1.0, 0.0), c64::new(x, y))
    };
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    [a / n, b / n]
}

/// Chern number of the lower quasienergy band on an n×n grid by the
/// plaquette Berry-flux method, signed as (1/2π)∫Ω with the curvature of the
/// connection i⟨u|∇u⟩.
pub fn chern_number(model: &DrivenHaldane, n: usize) -> Result<ChernResult> {
    model.validate()?;
    if n < 3 {
        return Err(Error::InvalidParameter { name: "grid", reason: format!("need at least 3 points, got {n}") });
    }
    let step = 2.0 * PI / n as f64;
    let mut states = Vec::with_capacity(n * n);
    let mut min_gap = f64::INFINITY;
    let mut worst = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (i as f64 * step, j as f64 * step);
            let f = model.floquet(a, b);
            let (g0, gpi) = f.gaps();
            if g0.min(gpi) < min_gap {
                min_gap = g0.min(gpi);
                worst = (a, b);
            }
            // lower band of h_eff ∝ −r̂ is the +1 state of r̂·σ
            let r = super::twoband::norm(f.r);
            let d = if r > 0.0 { [-f.r[0] / r, -f.r[1] / r, -f.r[2] / r] } else { [0.0, 0.0, 1.0] };
            states.push(lower_state(d));
        }
    }
    if min_gap < GAPLESS_TOL {
        return Err(Error::Gapless(format!(
            "quasienergy gap {min_gap:.3e} at (k·a1, k·a2) = ({:.4}, {:.4})",
            worst.0, worst.1
        )));
    }
    let link = |p: usize, q: usize| {
        let (u, v) = (states[p], states[q]);
        u[0].conj() * v[0] + u[1].conj() * v[1]
    };
    let idx = |i: usize, j: usize| (i % n) * n + (j % n);
    let mut flux = 0.0;
    for i in 0..n {
        for j in 0..n {
            let w = link(idx(i, j), idx(i + 1, j))
                * link(idx(i + 1, j), idx(i + 1, j + 1))
                * link(idx(i + 1, j + 1), idx(i, j + 1))
                * link(idx(i, j + 1), idx(i, j));
            flux += w.arg();
        }
    }
    // the plaquette phases sum to the flux of ⟨u|∇u⟩, the opposite sign
    let c = -flux / (2.0 * PI);
    Ok(ChernResult { value: c.round() as i64, min_gap })
}

/// Quasienergies of a strip of `width` cells, finite along a₂ and periodic
/// along a₁ with momentum θ₁, and the weight of each state on the first
/// `edge_fraction` of cells.
pub fn ribbon_spectrum(model: &DrivenHaldane, width: usize, th1: f64, edge_fraction: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let dim = 2 * width;
    let mut u: Option<Mat<c64>> = None;
    for (piece, dur) in [(0, model.durations.0), (1, model.durations.1)] {
        let mut h = Mat::<c64>::zeros(dim, dim);
        for (&(n1, n2), block) in &model.fourier_components(piece) {
            let phase = c64::cis(-(n1 as f64) * th1);
            for j in 0..width as i32 {
                let jp = j + n2;
                if jp < 0 || jp >= width as i32 {
                    continue;
                }
                for s in 0..2 {
                    for sp in 0..2 {
                        h[(2 * j as usize + s, 2 * jp as usize + sp)] += block[s][sp] * phase;
                    }
                }
            }
        }
        let step = herm_propagator(h.as_ref(), dur)?;
        u = Some(match u {
            None => step,
            Some(prev) => &step * &prev,
        });
    }
    let t = model.period();
    let (vals, vecs) = unitary_eigen(u.expect("two pieces").as_ref(), 1e-10)?;
    let edge_cells = ((width as f64 * edge_fraction).ceil() as usize).max(1);
    let eps = vals.iter().map(|z| fold(-z.arg() / t, t)).collect();
    let weights = (0..dim).map(|a| (0..2 * edge_cells).map(|i| vecs[(i, a)].norm_sqr()).sum()).collect();
    Ok((eps, weights))
}

/// Net number of edge branches on the lower ribbon edge crossing the gap
/// centre `centre` (0 or π/T) upwards as θ₁ runs once round the zone.
pub fn edge_flow(
    model: &DrivenHaldane,
    width: usize,
    centre: f64,
    momenta: usize,
    criteria: &EdgeCriteria,
) -> Result<i64> {
    model.validate()?;
    let t = model.period();
    // window well inside the bulk gap at this centre
    let bulk_gap = {
        let n = 96;
        let mut g = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                let f = model.floquet(2.0 * PI * i as f64 / n as f64, 2.0 * PI * j as f64 / n as f64);
                let (g0, gpi) = f.gaps();
                g = g.min(if centre == 0.0 { g0 } else { gpi });
            }
        }
        g
    };
    if bulk_gap < GAPLESS_TOL {
        return Err(Error::Gapless(format!("bulk gap {bulk_gap:.3e} at quasienergy {centre}")));
    }
    let window = 0.25 * bulk_gap;
    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(momenta);
    for m in 0..momenta {
        // half-step offset keeps the grid off the mirror-symmetric momenta
        // where the two edges are degenerate
        let th = 2.0 * PI * (m as f64 + 0.5) / momenta as f64;
        let (eps, w) = ribbon_spectrum(model, width, th, criteria.edge_fraction)?;
        let mut near: Vec<f64> = eps
            .iter()
            .zip(&w)
            .filter(|(_, &w)| w >= criteria.edge_weight)
            .map(|(&e, _)| fold(e - centre, t))
            .filter(|d| d.abs() < window)
            .collect();
        near.sort_by(f64::total_cmp);
        levels.push(near);
    }
    let mut flow = 0;
    for m in 0..momenta {
        let (a, b) = (&levels[m], &levels[(m + 1) % momenta]);
        for &x in a {
            let Some(&y) = b.iter().min_by(|p, q| (*p - x).abs().total_cmp(&(*q - x).abs())) else {
                continue;
            };
            if (y - x).abs() > 0.5 * window {
                continue;
            }
            if x < 0.0 && y >= 0.0 {
                flow += 1;
            } else if x >= 0.0 && y < 0.0 {
                flow -= 1;
            }
        }
    }
    Ok(flow)
}

/// Smallest quasienergy gap at one of the two gap centres, with where it
/// occurs in the zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapMinimum {
    pub gap: f64,
    pub energy: ClosingEnergy,
    pub theta: (f64, f64),
}

/// Minimise the gap at 0 and at π/T over the zone: a coarse n×n scan followed
/// by repeated local zooming around the best point.
pub fn min_gaps(model: &DrivenHaldane, n: usize) -> Result<[GapMinimum; 2]> {
    model.validate()?;
    let gap = |a: f64, b: f64, which: ClosingEnergy| {
        let (g0, gpi) = model.floquet(a, b).gaps();
        if which == ClosingEnergy::Zero {
            g0
        } else {
            gpi
        }
    };
    let step = 2.0 * PI / n as f64;
    Ok([ClosingEnergy::Zero, ClosingEnergy::PiOverT].map(|which| {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (i as f64 * step, j as f64 * step);
                let g = gap(a, b, which);
                if g < best.0 {
                    best = (g, a, b);
                }
            }
        }
        let mut h = step;
        for _ in 0..40 {
            let (_, a0, b0) = best;
            for di in -2..=2 {
                for dj in -2..=2 {
                    let (a, b) = (a0 + 0.5 * h * di as f64, b0 + 0.5 * h * dj as f64);
                    let g = gap(a, b, which);
                    if g < best.0 {
                        best = (g, a, b);
                    }
                }
            }
            h *= 0.5;
        }
        GapMinimum { gap: best.0, energy: which, theta: (best.1.rem_euclid(2.0 * PI), best.2.rem_euclid(2.0 * PI)) }
    }))
}

/// Tag the closing at `theta` with the analytic condition it satisfies.
pub fn closing_condition(model: &DrivenHaldane, theta: (f64, f64), tol: f64) -> ClosingCondition {
    let h1 = model.bloch(0, theta.0, theta.1);
    let h2 = model.bloch(1, theta.0, theta.1);
    classify_closing(h1, h2, model.durations.0, model.durations.1, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_components_rebuild_bloch_vector() {
        let m = DrivenHaldane::reference(0.9, 1.2);
        for piece in 0..2 {
            let comps = m.fourier_components(piece);
            for &(a, b) in &[(0.3, 1.7), (2.9, -0.4), (5.0, 4.1)] {
                let mut h = [[c64::new(0.0, 0.0); 2]; 2];
                for (&(n1, n2), blk) in &comps {
                    let ph = c64::cis(-(n1 as f64 * a + n2 as f64 * b));
                    for i in 0..2 {
                        for j in 0..2 {
                            h[i][j] += blk[i][j] * ph;
                        }
                    }
                }
                let v = m.bloch(piece, a, b);
                assert!((h[0][0] - c64::new(v[2], 0.0)).norm() < 1e-13);
                assert!((h[1][1] + c64::new(v[2], 0.0)).norm() < 1e-13);
                assert!((h[0][1] - c64::new(v[0], -v[1])).norm() < 1e-13);
                assert!((h[1][0] - c64::new(v[0], v[1])).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn large_mass_is_trivial() {
        let mut m = DrivenHaldane::reference(0.3, 0.2);
        m.mass = 40.0;
        // keep the phases T|h| away from multiples of π
        m.durations = (0.01, 0.012);
        assert_eq!(chern_number(&m, 30).unwrap().value, 0);
    }

    #[test]
    fn static_haldane_has_unit_chern_number() {
        let mut m = DrivenHaldane::reference(0.1, 0.1);
        m.pieces = [HaldanePiece { t3: 0.0, phi: PI / 2.0 }; 2];
        m.t2 = 0.2;
        let c = chern_number(&m, 40).unwrap();
        assert_eq!(c.value.abs(), 1);
    }
}
