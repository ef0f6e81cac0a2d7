//! Floquet analysis of piecewise-constant drives in an excitation-conserving
//! sector: one-period propagators, quasienergies, Floquet bound states and
//! exact stroboscopic evolution.

mod evolve;
pub mod models;
mod spectrum;

pub use evolve::{dominant_frequency, stroboscopic_evolve, EvolutionRecord};
pub use models::{build_battery, build_spinchain, superposition_fidelity, BatteryParams, SpinChainParams};
pub use spectrum::{
    asymptotic_projection, detect_fbs, fold_quasienergy, quasienergy_spectrum, AsymptoticProjection, Classification,
    FbsCriteria, FloquetSpectrum, StateClass,
};

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::linalg::sym_propagator;

/// Largest sector dimension accepted by the model builders unless raised.
pub const DEFAULT_DIM_CAP: usize = 4096;

const SYMMETRY_TOL: f64 = 1e-12;

/// Constant real-symmetric Hamiltonian held for `duration`.
#[derive(Debug, Clone)]
pub struct Piece {
    pub hamiltonian: Mat<f64>,
    pub duration: f64,
}

#[derive(Debug, Clone)]
pub struct PiecewiseModel {
    pub pieces: Vec<Piece>,
    pub period: f64,
    /// sector indices of the system degrees of freedom
    pub system_sites: Vec<usize>,
}

impl PiecewiseModel {
    pub fn new(pieces: Vec<Piece>, system_sites: Vec<usize>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::InvalidParameter { name: "pieces", reason: "at least one piece is required".into() });
        };
        let dim = first.hamiltonian.nrows();
        for p in &pieces {
            if !(p.duration > 0.0) || !p.duration.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "duration",
                    reason: format!("piece durations must be positive, got {}", p.duration),
                });
            }
            let h = &p.hamiltonian;
            if h.nrows() != dim || h.ncols() != dim {
                return Err(Error::InvalidParameter { name: "hamiltonian", reason: "pieces differ in dimension".into() });
            }
            for i in 0..dim {
                for j in 0..i {
                    if (h[(i, j)] - h[(j, i)]).abs() > SYMMETRY_TOL * (1.0 + h[(i, j)].abs()) {
                        return Err(Error::InvalidParameter {
                            name: "hamiltonian",
                            reason: format!("not symmetric at ({i}, {j})"),
                        });
                    }
                }
            }
        }
        if let Some(&s) = system_sites.iter().find(|&&s| s >= dim) {
            return Err(Error::InvalidParameter { name: "system_sites", reason: format!("site {s} outside dimension {dim}") });
        }
        let period = pieces.iter().map(|p| p.duration).sum();
        Ok(Self { pieces, period, system_sites })
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].hamiltonian.nrows()
    }

    pub fn unit_vector(&self, site: usize) -> Vec<c64> {
        let mut v = vec![c64::new(0.0, 0.0); self.dim()];
        v[site] = c64::new(1.0, 0.0);
        v
    }
}

/// U_T = e^{−iH_m T_m} ⋯ e^{−iH_1 T_1}.
pub fn one_period_propagator(model: &PiecewiseModel) -> Result<Mat<c64>> {
    let mut u: Option<Mat<c64>> = None;
    for p in &model.pieces {
        let step = sym_propagator(p.hamiltonian.as_ref(), p.duration)?;
        u = Some(match u {
            None => step,
            Some(prev) => &step * &prev,
        });
    }
    Ok(u.expect("model has at least one piece"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;

    #[test]
    fn zero_hamiltonian_gives_identity() {
        let m = PiecewiseModel::new(vec![Piece { hamiltonian: Mat::zeros(3, 3), duration: 1.3 }], vec![0]).unwrap();
        let u = one_period_propagator(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((u[(i, j)] - c64::new(e, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn pauli_exponential() {
        let (a, b) = (0.7, 1.1);
        let h = Mat::from_fn(2, 2, |i, j| if i == j { 0.0 } else { a });
        let h2 = Mat::from_fn(2, 2, |i, j| if i == j { 0.0 } else { b });
        let m = PiecewiseModel::new(
            vec![Piece { hamiltonian: h, duration: 0.4 }, Piece { hamiltonian: h2, duration: 0.9 }],
            vec![0],
        )
        .unwrap();
        let u = one_period_propagator(&m).unwrap();
        // commuting pieces: total angle a·0.4 + b·0.9
        let th: f64 = a * 0.4 + b * 0.9;
        assert!((u[(0, 0)] - c64::new(th.cos(), 0.0)).norm() < 1e-14);
        assert!((u[(1, 0)] - c64::new(0.0, -th.sin())).norm() < 1e-14);
        assert!(unitarity_defect(u.as_ref()) < 1e-14);
    }

    #[test]
    fn rejects_bad_pieces() {
        let h = Mat::from_fn(2, 2, |i, j| (i + 2 * j) as f64);
        assert!(PiecewiseModel::new(vec![Piece { hamiltonian: h, duration: 1.0 }], vec![0]).is_err());
        assert!(PiecewiseModel::new(vec![Piece { hamiltonian: Mat::zeros(2, 2), duration: 0.0 }], vec![0]).is_err());
    }
}
