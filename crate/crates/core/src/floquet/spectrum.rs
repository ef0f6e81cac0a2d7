use std::f64::consts::PI;

use faer::{c64, Mat};

use super::PiecewiseModel;
use crate::error::{Error, Result};
use crate::linalg::{unitarity_defect, unitary_eigen};

const UNITARITY_TOL: f64 = 1e-8;
const CLUSTER_TOL: f64 = 1e-10;

/// Quasienergies in (−π/T, π/T] with the Floquet modes |φ_α(0)⟩ as columns.
#[derive(Debug, Clone)]
pub struct FloquetSpectrum {
    pub period: f64,
    pub quasienergies: Vec<f64>,
    pub modes: Mat<c64>,
}

/// Map onto (−π/T, π/T]; the lower boundary goes to the upper one.
pub fn fold_quasienergy(e: f64, period: f64) -> f64 {
    let w = 2.0 * PI / period;
    let mut x = (e + 0.5 * w).rem_euclid(w) - 0.5 * w;
    if x <= -0.5 * w {
        x += w;
    }
    x
}

fn circular_distance(a: f64, b: f64, period: f64) -> f64 {
    let w = 2.0 * PI / period;
    let d = (a - b).rem_euclid(w);
    d.min(w - d)
}

pub fn quasienergy_spectrum(u: faer::MatRef<'_, c64>, period: f64) -> Result<FloquetSpectrum> {
    let defect = unitarity_defect(u);
    if defect > UNITARITY_TOL {
        return Err(Error::InvalidParameter {
            name: "propagator",
            reason: format!("not unitary (defect {defect:.2e})"),
        });
    }
    let (vals, modes) = unitary_eigen(u, CLUSTER_TOL)?;
    let quasienergies = vals.iter().map(|z| fold_quasienergy(-z.arg() / period, period)).collect();
    Ok(FloquetSpectrum { period, quasienergies, modes })
}

impl FloquetSpectrum {
    pub fn len(&self) -> usize {
        self.quasienergies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quasienergies.is_empty()
    }

    /// C_α = ⟨φ_α(0)|ψ⟩
    pub fn overlaps(&self, psi: &[c64]) -> Vec<c64> {
        (0..self.len())
            .map(|a| {
                let col = self.modes.col(a);
                psi.iter().enumerate().map(|(i, &p)| col[i].conj() * p).sum()
            })
            .collect()
    }

    /// Σ_{s ∈ sites} |⟨s|φ_α⟩|² for every mode.
    pub fn weights(&self, sites: &[usize]) -> Vec<f64> {
        (0..self.len()).map(|a| sites.iter().map(|&s| self.modes[(s, a)].norm_sqr()).sum()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FbsCriteria {
    /// required gap to the band in units of the median level spacing
    pub gap_factor: f64,
    /// minimum weight on the system sites
    pub weight: f64,
}

impl Default for FbsCriteria {
    fn default() -> Self {
        Self { gap_factor: 5.0, weight: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    Band,
    Bound,
    /// localised, but its gap to the band is within `gap_factor` level spacings
    Ambiguous,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub classes: Vec<StateClass>,
    pub weights: Vec<f64>,
    /// distance of each state to the nearest band state (0 for band states)
    pub gaps: Vec<f64>,
    pub level_spacing: f64,
    /// (lower, upper) edges of the band; lower > upper when the band wraps
    /// through the zone boundary, `None` when it fills the zone
    pub band_edges: Option<(f64, f64)>,
}

impl Classification {
    pub fn bound(&self) -> Vec<usize> {
        self.indices(StateClass::Bound)
    }

    pub fn ambiguous(&self) -> Vec<usize> {
        self.indices(StateClass::Ambiguous)
    }

    fn indices(&self, c: StateClass) -> Vec<usize> {
        (0..self.classes.len()).filter(|&i| self.classes[i] == c).collect()
    }
}

pub fn detect_fbs(spec: &FloquetSpectrum, model: &PiecewiseModel, criteria: &FbsCriteria) -> Result<Classification> {
    let weights = spec.weights(&model.system_sites);
    let n = spec.len();
    let t = spec.period;
    let mut band: Vec<f64> = (0..n).filter(|&a| weights[a] <= criteria.weight).map(|a| spec.quasienergies[a]).collect();
    if band.len() < 2 {
        return Err(Error::Gapless(format!("only {} band states; cannot resolve a continuum", band.len())));
    }
    band.sort_by(f64::total_cmp);
    let zone = 2.0 * PI / t;
    let mut spacings: Vec<f64> = band.windows(2).map(|w| w[1] - w[0]).collect();
    let wrap = band[0] + zone - band[band.len() - 1];
    spacings.push(wrap);
    let (widest, widest_gap) = spacings
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least two spacings");
    let mut sorted = spacings.clone();
    sorted.sort_by(f64::total_cmp);
    let level_spacing = sorted[sorted.len() / 2].max(f64::MIN_POSITIVE);
    let band_edges = if widest_gap > criteria.gap_factor * level_spacing {
        let m = band.len();
        // the band runs from just above the widest gap round to just below it
        let lower = band[(widest + 1) % m];
        let upper = band[widest];
        Some((lower, upper))
    } else {
        None
    };
    let mut classes = vec![StateClass::Band; n];
    let mut gaps = vec![0.0; n];
    for a in 0..n {
        if weights[a] <= criteria.weight {
            continue;
        }
        let e = spec.quasienergies[a];
        let gap = band.iter().map(|&b| circular_distance(e, b, t)).fold(f64::INFINITY, f64::min);
        gaps[a] = gap;
        classes[a] = if gap > criteria.gap_factor * level_spacing {
            StateClass::Bound
        } else if gap > level_spacing {
            StateClass::Ambiguous
        } else {
            StateClass::Band
        };
    }
    Ok(Classification { classes, weights, gaps, level_spacing, band_edges })
}

/// Long-time state carried by the Floquet bound states alone.
#[derive(Debug, Clone)]
pub struct AsymptoticProjection {
    pub states: Vec<usize>,
    pub coefficients: Vec<c64>,
    /// Σ_j C_j |φ_j(0)⟩; evolving it exactly reproduces the bound-state part
    /// of the dynamics at all times
    pub projected: Vec<c64>,
    /// folded quasienergy difference of the first two bound states
    pub beat: Option<f64>,
}

pub fn asymptotic_projection(spec: &FloquetSpectrum, classes: &Classification, psi0: &[c64]) -> AsymptoticProjection {
    let states = classes.bound();
    let all = spec.overlaps(psi0);
    let coefficients: Vec<c64> = states.iter().map(|&a| all[a]).collect();
    let dim = psi0.len();
    let mut projected = vec![c64::new(0.0, 0.0); dim];
    for (&a, &c) in states.iter().zip(&coefficients) {
        let col = spec.modes.col(a);
        for i in 0..dim {
            projected[i] += c * col[i];
        }
    }
    let beat = (states.len() >= 2)
        .then(|| circular_distance(spec.quasienergies[states[0]], spec.quasienergies[states[1]], spec.period));
    AsymptoticProjection { states, coefficients, projected, beat }
}

impl AsymptoticProjection {
    /// Amplitude on `site` at t = nT.
    pub fn stroboscopic_amplitude(&self, spec: &FloquetSpectrum, n: u64, site: usize) -> c64 {
        let t = n as f64 * spec.period;
        self.states
            .iter()
            .zip(&self.coefficients)
            .map(|(&a, &c)| c * c64::cis(-spec.quasienergies[a] * t) * spec.modes[(site, a)])
            .sum()
    }

    /// Stroboscopic long-time average of |⟨site|ψ⟩|²; the cross terms between
    /// distinct bound states average out.
    pub fn mean_population(&self, spec: &FloquetSpectrum, site: usize) -> f64 {
        self.states
            .iter()
            .zip(&self.coefficients)
            .fold(0.0, |acc, (&a, &c)| acc + c.norm_sqr() * spec.modes[(site, a)].norm_sqr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{one_period_propagator, Piece};

    #[test]
    fn folding_is_periodic() {
        let t = 0.7;
        let w = 2.0 * PI / t;
        for &e in &[0.1, -3.0, 4.4, PI / t, -PI / t] {
            let f = fold_quasienergy(e, t);
            assert!(f > -PI / t && f <= PI / t + 1e-12);
            assert!((fold_quasienergy(e + w, t) - f).abs() < 1e-12);
        }
        assert!((fold_quasienergy(-PI / t, t) - PI / t).abs() < 1e-12);
    }

    #[test]
    fn static_model_folds_eigenvalues() {
        let n = 5;
        let h = Mat::from_fn(n, n, |i, j| if i == j { i as f64 * 1.3 } else if i.abs_diff(j) == 1 { 0.4 } else { 0.0 });
        let (vals, _) = crate::linalg::sym_eigen(h.as_ref()).unwrap();
        let t = 1.1;
        let m = PiecewiseModel::new(vec![Piece { hamiltonian: h, duration: t }], vec![0]).unwrap();
        let spec = quasienergy_spectrum(one_period_propagator(&m).unwrap().as_ref(), t).unwrap();
        let mut want: Vec<f64> = vals.iter().map(|&e| fold_quasienergy(e, t)).collect();
        let mut got = spec.quasienergies.clone();
        want.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        for (a, b) in want.iter().zip(&got) {
            assert!((a - b).abs() < 1e-12);
        }
        let psi = m.unit_vector(2);
        let total: f64 = spec.overlaps(&psi).iter().map(|c| c.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
