//! Information backflow and the quantum speed limit of spontaneous decay.
//!
//! Both quantities use the pair |g⟩, |e⟩, whose trace distance is D(t) = |u(t)|².

use crate::dynamics::AmplitudeTrajectory;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonMarkovianity {
    /// ½[D(τ) − D(0) + ∫|Ḋ|]
    pub variation_form: f64,
    /// ∫ max(0, Ḋ)
    pub backflow_form: f64,
}

impl NonMarkovianity {
    pub fn value(&self) -> f64 {
        self.backflow_form
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslTime {
    pub time: f64,
    /// D never changed on [0, τ]; `time` is then reported as 0
    pub stationary: bool,
}

fn horizon_index(len: usize, step: f64, horizon: f64) -> Result<usize> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidParameter { name: "horizon", reason: format!("must be > 0, got {horizon}") });
    }
    let k = (horizon / step).round();
    if k as usize >= len || (k * step - horizon).abs() > 1e-9 * horizon.max(step) {
        return Err(Error::InvalidParameter {
            name: "horizon",
            reason: format!("{horizon} is not a grid node of a trajectory ending at {}", (len - 1) as f64 * step),
        });
    }
    Ok(k as usize)
}

/// Total variation of D below which the evolution counts as frozen.
pub const STATIONARY_VARIATION: f64 = 1e-12;

fn total_variation(d: &[f64]) -> f64 {
    d.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Non-Markovianity of a sampled trace distance, from its first to last node.
pub fn non_markovianity_from_distance(d: &[f64]) -> NonMarkovianity {
    let backflow = d.windows(2).map(|w| (w[1] - w[0]).max(0.0)).sum();
    let last = d[d.len() - 1];
    NonMarkovianity {
        variation_form: 0.5 * (last - d[0] + total_variation(d)),
        backflow_form: backflow,
    }
}

pub fn non_markovianity(traj: &AmplitudeTrajectory, horizon: f64) -> Result<NonMarkovianity> {
    let end = horizon_index(traj.len(), traj.step, horizon)?;
    let d: Vec<f64> = traj.u[..=end].iter().map(|z| z.norm_sqr()).collect();
    let n = non_markovianity_from_distance(&d);
    debug_assert!((n.variation_form - n.backflow_form).abs() <= 1e-9 * (1.0 + n.backflow_form));
    Ok(n)
}

/// τ_QSL for the excited-state population sampled on [0, τ].
pub fn qsl_from_population(pop: &[f64], tau: f64) -> QslTime {
    let tv = total_variation(pop);
    if tv <= STATIONARY_VARIATION {
        return QslTime { time: 0.0, stationary: true };
    }
    let last = pop[pop.len() - 1];
    QslTime { time: tau * (1.0 - last) / tv, stationary: false }
}

pub fn qsl_time(traj: &AmplitudeTrajectory, tau: f64) -> Result<QslTime> {
    let end = horizon_index(traj.len(), traj.step, tau)?;
    let pop: Vec<f64> = traj.u[..=end].iter().map(|z| z.norm_sqr()).collect();
    Ok(qsl_from_population(&pop, tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn monotone_decay_has_no_backflow_and_saturates_bound() {
        let tau = 4.0;
        let n = 400;
        let pop: Vec<f64> = (0..=n).map(|k| 1.0 - k as f64 / n as f64 * 0.7).collect();
        let nm = non_markovianity_from_distance(&pop);
        assert_eq!(nm.backflow_form, 0.0);
        assert!(nm.variation_form.abs() < 1e-15);
        let q = qsl_from_population(&pop, tau);
        assert!((q.time - tau).abs() < 1e-12);
    }

    #[test]
    fn single_rebound() {
        // down to 0.2, back up to 0.5, down to 0.1
        let mut pop = Vec::new();
        for k in 0..=80 {
            pop.push(1.0 - 0.01 * k as f64);
        }
        for k in 1..=30 {
            pop.push(0.2 + 0.01 * k as f64);
        }
        for k in 1..=40 {
            pop.push(0.5 - 0.01 * k as f64);
        }
        let nm = non_markovianity_from_distance(&pop);
        assert!((nm.backflow_form - 0.3).abs() < 1e-12);
        assert!((nm.variation_form - 0.3).abs() < 1e-12);
        let q = qsl_from_population(&pop, 1.0);
        let rhs = (1.0 - 0.1) / (1.0 - 0.1 + 2.0 * 0.3);
        assert!((q.time - rhs).abs() < 1e-12);
    }

    #[test]
    fn frozen_population_is_stationary() {
        let tr = AmplitudeTrajectory::from_fn(1.0, 0.1, 10, |t| Complex64::cis(-t), |t| Complex64::new(0.0, -1.0) * Complex64::cis(-t));
        let q = qsl_time(&tr, 1.0).unwrap();
        assert!(q.stationary);
        assert!(qsl_time(&tr, 1.05).is_err());
        assert!(qsl_time(&tr, 2.0).is_err());
    }
}
