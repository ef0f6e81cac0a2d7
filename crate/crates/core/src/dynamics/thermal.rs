//! Time-local rates, finite-temperature noise function and the effective
//! temperature of the long-time state.

use num_complex::Complex64;

use super::volterra::{history_dot, AmplitudeTrajectory};
use crate::error::{Error, Result};
use crate::spectra::SpectralDensity;

/// Below this modulus the amplitude counts as zero and rates are undefined.
pub const ZERO_AMPLITUDE: f64 = 1e-12;

/// Per-node rates; `None` marks nodes where u vanishes.
///
/// `decay` is γ = −2Re(u̇/u), so that d|u|²/dt = −γ|u|². The thermal form of
/// the master equation uses Γ = γ/2.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFunctions {
    pub decay: Vec<Option<f64>>,
    pub frequency: Vec<Option<f64>>,
    pub excitation: Option<Vec<Option<f64>>>,
}

impl RateFunctions {
    /// Γ(t) = −Re(u̇/u)
    pub fn thermal_decay(&self) -> Vec<Option<f64>> {
        self.decay.iter().map(|g| g.map(|g| 0.5 * g)).collect()
    }
}

pub fn rates_from_u(traj: &AmplitudeTrajectory) -> RateFunctions {
    let mut decay = Vec::with_capacity(traj.len());
    let mut frequency = Vec::with_capacity(traj.len());
    for (u, du) in traj.u.iter().zip(&traj.du) {
        if u.norm() < ZERO_AMPLITUDE {
            decay.push(None);
            frequency.push(None);
        } else {
            let r = du / u;
            decay.push(Some(-2.0 * r.re));
            frequency.push(Some(-r.im));
        }
    }
    let excitation = match (&traj.v, &traj.dv) {
        (Some(v), Some(dv)) => Some(
            decay
                .iter()
                .zip(v.iter().zip(dv))
                .map(|(g, (v, dv))| g.map(|g| dv + v * g))
                .collect(),
        ),
        _ => None,
    };
    RateFunctions { decay, frequency, excitation }
}

/// Attach v(t) = ∬ u*(t₁)μ(t₁−t₂)u(t₂) over [0,t]² to a zero-temperature
/// trajectory and return the rates including Γ_β = v̇ + 2vΓ.
///
/// v̇ = 2Re[u*(t)m(t)] with m(t) = ∫₀ᵗ μ(t−τ)u(τ)dτ by trapezoid; v is the
/// cumulative trapezoid of v̇.
pub fn solve_thermal(
    sd: &SpectralDensity,
    beta: f64,
    traj: &AmplitudeTrajectory,
) -> Result<(AmplitudeTrajectory, RateFunctions)> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter { name: "beta", reason: format!("must be > 0, got {beta}") });
    }
    let n = traj.len();
    let h = traj.step;
    let mut out = traj.clone();
    if beta.is_infinite() {
        out.v = Some(vec![0.0; n]);
        out.dv = Some(vec![0.0; n]);
        let rates = rates_from_u(&out);
        return Ok((out, rates));
    }
    let mut mu = Vec::with_capacity(n);
    for k in 0..n {
        mu.push(sd.thermal_kernel(beta, k as f64 * h)?);
    }
    Ok(attach_noise(out, &mu))
}

/// Same as [`solve_thermal`] with the thermal kernel sampled at k·h.
pub fn attach_noise(mut traj: AmplitudeTrajectory, mu: &[Complex64]) -> (AmplitudeTrajectory, RateFunctions) {
    let n = traj.len();
    let h = traj.step;
    let last = n - 1;
    let mr: Vec<f64> = (0..n).map(|m| mu[last - m].re).collect();
    let mi: Vec<f64> = (0..n).map(|m| mu[last - m].im).collect();
    let ur: Vec<f64> = traj.u.iter().map(|z| z.re).collect();
    let ui: Vec<f64> = traj.u.iter().map(|z| z.im).collect();
    let mut dv = vec![0.0; n];
    for k in 1..n {
        // m_k = h[½μ_k u₀ + Σ_{j=1}^{k−1} μ_{k−j} u_j + ½μ₀ u_k]
        let (sr, si) = history_dot(&mr[last + 1 - k..last], &mi[last + 1 - k..last], &ur[1..k], &ui[1..k]);
        let m = h * (Complex64::new(sr, si) + 0.5 * mu[k] * traj.u[0] + 0.5 * mu[0] * traj.u[k]);
        dv[k] = 2.0 * (traj.u[k].conj() * m).re;
    }
    let mut v = vec![0.0; n];
    for k in 1..n {
        v[k] = v[k - 1] + 0.5 * h * (dv[k - 1] + dv[k]);
    }
    traj.v = Some(v);
    traj.dv = Some(dv);
    let rates = rates_from_u(&traj);
    (traj, rates)
}

/// Mean of the defined values over the final `fraction` of the grid.
pub fn tail_average(values: &[Option<f64>], fraction: f64) -> Option<f64> {
    let n = values.len();
    let start = n - ((n as f64 * fraction).ceil() as usize).clamp(1, n);
    let tail: Vec<f64> = values[start..].iter().flatten().copied().collect();
    if tail.is_empty() {
        None
    } else {
        Some(tail.iter().sum::<f64>() / tail.len() as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffectiveTemperature {
    Finite(f64),
    /// asymptotic rates vanish: no canonical long-time state
    Divergent,
    /// a negative asymptotic rate breaks detailed balance
    Undefined,
}

/// T_eff = ω₀ / ln(1 + 2Γ(∞)/Γ_β(∞)) (k_B = 1). `vanishing` is the scale
/// below which an asymptotic rate counts as zero.
pub fn effective_temperature(gamma_inf: f64, gamma_beta_inf: f64, omega0: f64, vanishing: f64) -> EffectiveTemperature {
    if gamma_inf.abs() < vanishing {
        return EffectiveTemperature::Divergent;
    }
    if gamma_inf < 0.0 || gamma_beta_inf < 0.0 {
        return EffectiveTemperature::Undefined;
    }
    if gamma_beta_inf == 0.0 {
        return EffectiveTemperature::Finite(0.0);
    }
    EffectiveTemperature::Finite(omega0 / (1.0 + 2.0 * gamma_inf / gamma_beta_inf).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_input_gives_constant_rates() {
        let (k, w) = (0.3, 1.7);
        let tr = AmplitudeTrajectory::from_fn(
            w,
            0.01,
            100,
            |t| Complex64::new(-k, -w).scale(t).exp(),
            |t| Complex64::new(-k, -w) * Complex64::new(-k, -w).scale(t).exp(),
        );
        let r = rates_from_u(&tr);
        for i in 0..tr.len() {
            assert!((r.decay[i].unwrap() - 2.0 * k).abs() < 1e-12);
            assert!((r.frequency[i].unwrap() - w).abs() < 1e-12);
        }
    }

    #[test]
    fn vanishing_amplitude_is_undefined() {
        let tr = AmplitudeTrajectory::from_fn(1.0, 0.1, 3, |t| Complex64::new(1.0 - t / 0.2, 0.0), |_| Complex64::new(-5.0, 0.0));
        let r = rates_from_u(&tr);
        assert!(r.decay[2].is_none());
        assert!(r.decay[1].is_some());
    }

    #[test]
    fn detailed_balance_returns_temperature() {
        let (w0, beta): (f64, f64) = (1.0, 0.1);
        let nbar = 1.0 / (beta * w0).exp_m1();
        let gamma = 0.02;
        match effective_temperature(gamma, 2.0 * gamma * nbar, w0, 1e-9) {
            EffectiveTemperature::Finite(t) => assert!((t * beta - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(effective_temperature(1e-12, 1e-12, w0, 1e-6), EffectiveTemperature::Divergent);
        assert_eq!(effective_temperature(0.1, -0.2, w0, 1e-6), EffectiveTemperature::Undefined);
    }

    #[test]
    fn zero_temperature_has_no_noise() {
        let sd = SpectralDensity::ohmic(0.1, 1.0, 5.0);
        let tr = super::super::volterra::solve_u(&sd, 1.0, 5.0, 0.01).unwrap();
        let (th, rates) = solve_thermal(&sd, f64::INFINITY, &tr).unwrap();
        assert!(th.v.unwrap().iter().all(|&v| v == 0.0));
        let zero_t = rates_from_u(&tr);
        assert_eq!(rates.decay, zero_t.decay);
        assert!(rates.excitation.unwrap().iter().flatten().all(|&g| g == 0.0));
    }
}
