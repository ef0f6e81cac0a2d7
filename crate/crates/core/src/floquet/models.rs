//! Driven models in their single-excitation sectors, with energies measured
//! from the all-ground (vacuum) state.

use std::f64::consts::PI;

use faer::{c64, Mat};

use super::{Piece, PiecewiseModel, DEFAULT_DIM_CAP};
use crate::error::{check_finite, check_positive, Error, Result};
use crate::metrics::fidelity;

/// Spin coupled to the end of an XX chain, with its Zeeman splitting switched
/// between λ + a₁ (for τ) and λ + a₂ (for T − τ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinChainParams {
    pub sites: usize,
    pub zeeman: f64,
    pub hopping: f64,
    pub coupling: f64,
    pub amplitudes: (f64, f64),
    pub first_duration: f64,
    pub period: f64,
}

impl SpinChainParams {
    /// Driving period, first-piece duration and a₂ in units of 1/J and J,
    /// with a₁ = 0, g = J and λ = 20J.
    pub fn reference(sites: usize, period: f64, first_duration: f64, a2: f64) -> Self {
        Self {
            sites,
            zeeman: 20.0,
            hopping: 1.0,
            coupling: 1.0,
            amplitudes: (0.0, a2),
            first_duration,
            period,
        }
    }
}

/// Sector basis: index 0 is the driven spin, 1..=L the chain sites.
pub fn build_spinchain(p: &SpinChainParams) -> Result<PiecewiseModel> {
    if p.sites < 2 {
        return Err(Error::InvalidParameter { name: "sites", reason: format!("need at least 2, got {}", p.sites) });
    }
    check_finite("zeeman", p.zeeman)?;
    check_finite("hopping", p.hopping)?;
    check_finite("coupling", p.coupling)?;
    check_finite("a1", p.amplitudes.0)?;
    check_finite("a2", p.amplitudes.1)?;
    check_positive("period", p.period)?;
    if !(p.first_duration > 0.0 && p.first_duration < p.period) {
        return Err(Error::InvalidParameter {
            name: "first_duration",
            reason: format!("must lie in (0, T) = (0, {}), got {}", p.period, p.first_duration),
        });
    }
    let dim = p.sites + 1;
    let build = |a: f64| {
        Mat::from_fn(dim, dim, |i, j| {
            if i == j {
                if i == 0 {
                    p.zeeman + a
                } else {
                    p.zeeman
                }
            } else if i.abs_diff(j) == 1 {
                if i.min(j) == 0 {
                    p.coupling
                } else {
                    p.hopping
                }
            } else {
                0.0
            }
        })
    };
    PiecewiseModel::new(
        vec![
            Piece { hamiltonian: build(p.amplitudes.0), duration: p.first_duration },
            Piece { hamiltonian: build(p.amplitudes.1), duration: p.period - p.first_duration },
        ],
        vec![0],
    )
}

/// F = ⟨φ|ρ_s|φ⟩ for φ = (|↑⟩ + |↓⟩)/√2 with the environment initially empty,
/// given the amplitude c₀ evolved from the excited spin alone.
pub fn superposition_fidelity(c0: c64) -> f64 {
    let pe = 0.5 * c0.norm_sqr();
    // basis (↓, ↑); the vacuum branch carries amplitude 1/√2 for all times
    let rho = Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => c64::new(1.0 - pe, 0.0),
        (1, 1) => c64::new(pe, 0.0),
        (1, 0) => 0.5 * c0,
        _ => 0.5 * c0.conj(),
    });
    let s = std::f64::consts::FRAC_1_SQRT_2;
    fidelity(rho.as_ref(), &[c64::new(s, 0.0), c64::new(s, 0.0)])
}

/// Battery and charger qubits, each coupled with g/N to every mode of its own
/// N×N square-lattice bath with ω_k = ϖ − 2q(cos k_x + cos k_y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryParams {
    pub lattice: usize,
    pub omega_b: f64,
    pub omega_c: f64,
    pub kappa: f64,
    pub coupling: f64,
    pub hopping: f64,
    pub mode_frequency: f64,
    pub charge: f64,
    pub store: f64,
    pub discharge: f64,
    /// merge degenerate lattice modes into their single bright combination
    pub lump_degenerate: bool,
    pub dim_cap: usize,
}

impl BatteryParams {
    /// Lattice of N×N modes, ω_b = ω_c = 2ϖ, g = q = ϖ/2 and equal protocol
    /// durations π/(2κ), in units of ϖ.
    pub fn reference(lattice: usize, kappa: f64) -> Self {
        let d = PI / (2.0 * kappa);
        Self {
            lattice,
            omega_b: 2.0,
            omega_c: 2.0,
            kappa,
            coupling: 0.5,
            hopping: 0.5,
            mode_frequency: 1.0,
            charge: d,
            store: d,
            discharge: d,
            lump_degenerate: true,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

/// (frequency, coupling) of the lattice modes seen by one qubit.
fn lattice_modes(p: &BatteryParams) -> Vec<(f64, f64)> {
    let n = p.lattice;
    let g = p.coupling / n as f64;
    let mut freqs = Vec::with_capacity(n * n);
    for mx in 0..n {
        for my in 0..n {
            let kx = 2.0 * PI * mx as f64 / n as f64;
            let ky = 2.0 * PI * my as f64 / n as f64;
            freqs.push(p.mode_frequency - 2.0 * p.hopping * (kx.cos() + ky.cos()));
        }
    }
    if !p.lump_degenerate {
        return freqs.into_iter().map(|w| (w, g)).collect();
    }
    freqs.sort_by(f64::total_cmp);
    let tol = 1e-10 * (p.mode_frequency.abs() + 4.0 * p.hopping.abs()).max(1.0);
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut start = 0;
    while start < freqs.len() {
        let mut end = start + 1;
        while end < freqs.len() && freqs[end] - freqs[start] < tol {
            end += 1;
        }
        let m = (end - start) as f64;
        let mean = freqs[start..end].iter().sum::<f64>() / m;
        out.push((mean, g * m.sqrt()));
        start = end;
    }
    out
}

/// Sector basis: 0 battery, 1 charger, then the battery bath modes, then the
/// charger bath modes. Pieces follow the charge / store / discharge protocol
/// with the qubit-qubit coupling κ switched on, off and on again; the bath
/// couplings stay on throughout. Zero-length pieces are skipped.
pub fn build_battery(p: &BatteryParams) -> Result<PiecewiseModel> {
    if p.lattice == 0 {
        return Err(Error::InvalidParameter { name: "lattice", reason: "must be >= 1".into() });
    }
    for (name, v) in [
        ("omega_b", p.omega_b),
        ("omega_c", p.omega_c),
        ("kappa", p.kappa),
        ("coupling", p.coupling),
        ("hopping", p.hopping),
        ("mode_frequency", p.mode_frequency),
    ] {
        check_finite(name, v)?;
    }
    for (name, v) in [("charge", p.charge), ("store", p.store), ("discharge", p.discharge)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter { name, reason: format!("must be >= 0, got {v}") });
        }
    }
    let modes = lattice_modes(p);
    let m = modes.len();
    let dim = 2 + 2 * m;
    if dim > p.dim_cap {
        return Err(Error::DimensionCap { dim, cap: p.dim_cap });
    }
    let build = |f: f64| {
        let mut h = Mat::<f64>::zeros(dim, dim);
        h[(0, 0)] = p.omega_b;
        h[(1, 1)] = p.omega_c;
        h[(0, 1)] = p.kappa * f;
        h[(1, 0)] = p.kappa * f;
        for (k, &(w, g)) in modes.iter().enumerate() {
            let (a, b) = (2 + k, 2 + m + k);
            h[(a, a)] = w;
            h[(b, b)] = w;
            h[(0, a)] = g;
            h[(a, 0)] = g;
            h[(1, b)] = g;
            h[(b, 1)] = g;
        }
        h
    };
    let on = build(1.0);
    let off = build(0.0);
    let pieces: Vec<Piece> = [(on.clone(), p.charge), (off, p.store), (on, p.discharge)]
        .into_iter()
        .filter(|(_, d)| *d > 0.0)
        .map(|(hamiltonian, duration)| Piece { hamiltonian, duration })
        .collect();
    if pieces.is_empty() {
        return Err(Error::InvalidParameter { name: "period", reason: "protocol has zero total duration".into() });
    }
    PiecewiseModel::new(pieces, vec![0, 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{one_period_propagator, quasienergy_spectrum, stroboscopic_evolve};
    use crate::linalg::unitarity_defect;

    #[test]
    fn undriven_chain_is_static() {
        let mut p = SpinChainParams::reference(40, 0.5, 0.2, 0.0);
        p.amplitudes = (1.3, 1.3);
        let m = build_spinchain(&p).unwrap();
        let u = one_period_propagator(&m).unwrap();
        let spec = quasienergy_spectrum(u.as_ref(), p.period).unwrap();
        let (vals, _) = crate::linalg::sym_eigen(m.pieces[0].hamiltonian.as_ref()).unwrap();
        let mut want: Vec<f64> = vals.iter().map(|&e| crate::floquet::fold_quasienergy(e, p.period)).collect();
        let mut got = spec.quasienergies.clone();
        want.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        for (a, b) in want.iter().zip(&got) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn chain_propagator_is_unitary() {
        let p = SpinChainParams::reference(200, 0.05 * PI, 0.02 * PI, 36.0);
        let u = one_period_propagator(&build_spinchain(&p).unwrap()).unwrap();
        assert!(unitarity_defect(u.as_ref()) < 1e-10);
    }

    #[test]
    fn fidelity_limits() {
        assert!((superposition_fidelity(c64::new(1.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!((superposition_fidelity(c64::new(0.0, 0.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lumping_conserves_total_coupling() {
        let p = BatteryParams::reference(30, 1.0);
        let modes = lattice_modes(&p);
        assert!(modes.len() < 200);
        let total: f64 = modes.iter().map(|(_, g)| g * g).sum();
        assert!((total - p.coupling * p.coupling).abs() < 1e-12);
    }

    #[test]
    fn closed_resonant_battery_cycles() {
        let mut p = BatteryParams::reference(4, 1.3);
        p.coupling = 0.0;
        let m = build_battery(&p).unwrap();
        let rec = stroboscopic_evolve(&m, &m.unit_vector(1), 3, 3).unwrap();
        let e = rec.population(0);
        for n in 0..3 {
            assert!((e[3 * n + 1] - 1.0).abs() < 1e-12, "charged");
            assert!((e[3 * n + 2] - 1.0).abs() < 1e-12, "stored");
            assert!(e[3 * n + 3] < 1e-12, "discharged");
        }
    }

    #[test]
    fn no_charging_without_qubit_coupling() {
        let p = BatteryParams::reference(6, 1.0);
        let mut q = p;
        q.kappa = 0.0;
        let m = build_battery(&q).unwrap();
        let rec = stroboscopic_evolve(&m, &m.unit_vector(1), 5, 4).unwrap();
        assert!(rec.population(0).iter().all(|&e| e < 1e-28));
    }

    #[test]
    fn dimension_cap() {
        let mut p = BatteryParams::reference(30, 1.0);
        p.lump_degenerate = false;
        p.dim_cap = 1000;
        assert!(matches!(build_battery(&p), Err(Error::DimensionCap { dim: 1802, .. })));
    }
}
