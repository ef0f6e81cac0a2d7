//! Reduced states along a trajectory, in closed form for qubit families and by
//! integrating the photon-number equation for an oscillator.

use faer::{c64, Mat};
use num_complex::Complex64;

use super::thermal::RateFunctions;
use super::volterra::AmplitudeTrajectory;
use crate::error::{Error, Result};

/// Initial states with a closed-form evolution in terms of u(t).
///
/// Qubit bases order |g⟩ before |e⟩; multi-qubit states use the tensor
/// product of that order, so |g…g⟩ is index 0.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// single qubit, ρ₀ given in the (g, e) basis
    Qubit([[Complex64; 2]; 2]),
    /// (|gg⟩ + |ee⟩)/√2 with each qubit in its own environment
    Bell,
    /// (|g⟩^⊗n + |e⟩^⊗n)/√2
    Ghz(usize),
    /// harmonic oscillator with initial mean photon number
    Oscillator { n0: f64 },
}

pub const MAX_GHZ_QUBITS: usize = 10;

#[derive(Debug, Clone)]
pub enum Propagation {
    States(Vec<Mat<c64>>),
    PhotonNumber(Vec<f64>),
}

fn qubit_factor(u: Complex64) -> [f64; 2] {
    let p = u.norm_sqr();
    [1.0 - p, p]
}

/// ½{[|u|²|e⟩⟨e| + (1−|u|²)|g⟩⟨g|]^⊗n + |g⟩⟨g|^⊗n + (uⁿ|e…e⟩⟨g…g| + h.c.)}
pub fn ghz_state(n: usize, u: Complex64) -> Result<Mat<c64>> {
    if n == 0 || n > MAX_GHZ_QUBITS {
        return Err(Error::Unsupported(format!("GHZ register of {n} qubits (1..={MAX_GHZ_QUBITS})")));
    }
    let dim = 1usize << n;
    let f = qubit_factor(u);
    let mut rho = Mat::<c64>::zeros(dim, dim);
    for idx in 0..dim {
        let mut p = 1.0;
        for q in 0..n {
            p *= f[(idx >> q) & 1];
        }
        rho[(idx, idx)] = c64::new(0.5 * p, 0.0);
    }
    rho[(0, 0)] += c64::new(0.5, 0.0);
    let c = 0.5 * u.powu(n as u32);
    rho[(dim - 1, 0)] += c;
    rho[(0, dim - 1)] += c.conj();
    Ok(rho)
}

pub fn qubit_state(rho0: &[[Complex64; 2]; 2], u: Complex64) -> Mat<c64> {
    let pe = u.norm_sqr() * rho0[1][1].re;
    let coh = u * rho0[1][0];
    let mut rho = Mat::<c64>::zeros(2, 2);
    rho[(0, 0)] = c64::new(1.0 - pe, 0.0);
    rho[(1, 1)] = c64::new(pe, 0.0);
    rho[(1, 0)] = coh;
    rho[(0, 1)] = coh.conj();
    rho
}

pub fn state_at(spec: &StateSpec, u: Complex64) -> Result<Mat<c64>> {
    match spec {
        StateSpec::Qubit(r) => Ok(qubit_state(r, u)),
        StateSpec::Bell => ghz_state(2, u),
        StateSpec::Ghz(n) => ghz_state(*n, u),
        StateSpec::Oscillator { .. } => {
            Err(Error::Unsupported("oscillator states are tracked by their photon number".into()))
        }
    }
}

pub fn propagate(traj: &AmplitudeTrajectory, rates: &RateFunctions, initial: &StateSpec) -> Result<Propagation> {
    match initial {
        StateSpec::Oscillator { n0 } => photon_number(traj, rates, *n0).map(Propagation::PhotonNumber),
        spec => traj.u.iter().map(|&u| state_at(spec, u)).collect::<Result<Vec<_>>>().map(Propagation::States),
    }
}

/// Integrates dN/dt = −2Γ(t)N + Γ_β(t) by the trapezoidal rule. Across nodes
/// where the rates are undefined the exact N = |u|²N₀ + v is used instead.
pub fn photon_number(traj: &AmplitudeTrajectory, rates: &RateFunctions, n0: f64) -> Result<Vec<f64>> {
    if !(n0 >= 0.0) {
        return Err(Error::InvalidParameter { name: "n0", reason: format!("must be >= 0, got {n0}") });
    }
    let zeros = vec![Some(0.0); traj.len()];
    let excitation = rates.excitation.as_ref().unwrap_or(&zeros);
    let v = traj.v.clone().unwrap_or_else(|| vec![0.0; traj.len()]);
    let gamma = rates.thermal_decay();
    let h = traj.step;
    let mut out = vec![n0; traj.len()];
    for k in 0..traj.len().saturating_sub(1) {
        out[k + 1] = match (gamma[k], gamma[k + 1], excitation[k], excitation[k + 1]) {
            (Some(g0), Some(g1), Some(b0), Some(b1)) => {
                (out[k] * (1.0 - h * g0) + 0.5 * h * (b0 + b1)) / (1.0 + h * g1)
            }
            _ => traj.u[k + 1].norm_sqr() * n0 + v[k + 1],
        };
    }
    Ok(out)
}
