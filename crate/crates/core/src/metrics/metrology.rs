//! Frequency estimation with a squeezed-light interferometer and with
//! entangled-atom Ramsey spectroscopy under dissipative encoding.
//!
//! Parameter derivatives are central differences over amplitudes recomputed
//! at shifted frequencies, so any [`AmplitudeModel`] can be plugged in.

use num_complex::Complex64;

use crate::dynamics::solve_u;
use crate::error::{check_positive, Error, Result};
use crate::spectra::SpectralDensity;

/// Relative step of the frequency derivative, in units of ω₀.
pub const DERIVATIVE_STEP: f64 = 1e-4;

/// Differences below this fraction of the signal scale are treated as a
/// vanishing slope.
const FLAT_SLOPE: f64 = 1e-13;

/// u(t) of an emitter with bare frequency `frequency`, sampled at `times`.
pub trait AmplitudeModel: Sync {
    fn amplitudes(&self, frequency: f64, times: &[f64]) -> Result<Vec<Complex64>>;
}

/// Lossless encoding, u = e^{−iωt}.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ideal;

impl AmplitudeModel for Ideal {
    fn amplitudes(&self, frequency: f64, times: &[f64]) -> Result<Vec<Complex64>> {
        Ok(times.iter().map(|&t| Complex64::cis(-frequency * t)).collect())
    }
}

/// u = e^{−[κ + i(ω + Δ)]t} with κ and Δ held fixed.
#[derive(Debug, Clone, Copy)]
pub struct Markovian {
    pub decay: f64,
    pub shift: f64,
}

impl AmplitudeModel for Markovian {
    fn amplitudes(&self, frequency: f64, times: &[f64]) -> Result<Vec<Complex64>> {
        let rate = Complex64::new(-self.decay, -(frequency + self.shift));
        Ok(times.iter().map(|&t| (rate * t).exp()).collect())
    }
}

/// Long-time bound-state amplitude u = Z e^{−iE_b t}, with the bound energy
/// linearised around `reference` as E_b(ω) = E + Z(ω − reference).
#[derive(Debug, Clone, Copy)]
pub struct BoundLongTime {
    pub residue: f64,
    pub energy: f64,
    pub reference: f64,
}

impl AmplitudeModel for BoundLongTime {
    fn amplitudes(&self, frequency: f64, times: &[f64]) -> Result<Vec<Complex64>> {
        let e = self.energy + self.residue * (frequency - self.reference);
        Ok(times.iter().map(|&t| Complex64::from_polar(self.residue, -e * t)).collect())
    }
}

/// Full Volterra solution, interpolated between grid nodes with cubic
/// Hermite polynomials built from u and u̇.
#[derive(Debug, Clone)]
pub struct Exact {
    pub density: SpectralDensity,
    pub step: f64,
}

impl AmplitudeModel for Exact {
    fn amplitudes(&self, frequency: f64, times: &[f64]) -> Result<Vec<Complex64>> {
        let t_max = times.iter().copied().fold(0.0, f64::max);
        if t_max == 0.0 {
            return Ok(vec![Complex64::new(1.0, 0.0); times.len()]);
        }
        let tr = solve_u(&self.density, frequency, t_max + 2.0 * self.step, self.step)?;
        let h = tr.step;
        Ok(times
            .iter()
            .map(|&t| {
                let k = ((t / h).floor() as usize).min(tr.len() - 2);
                let s = t / h - k as f64;
                let (s2, s3) = (s * s, s * s * s);
                tr.u[k] * (2.0 * s3 - 3.0 * s2 + 1.0)
                    + tr.du[k] * (h * (s3 - 2.0 * s2 + s))
                    + tr.u[k + 1] * (-2.0 * s3 + 3.0 * s2)
                    + tr.du[k + 1] * (h * (s3 - s2))
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Interferometer,
    Ramsey,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    ShotNoise,
    Zeno,
    Heisenberg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionCurve {
    pub scheme: Scheme,
    /// total photon number, or number of atoms
    pub resource: f64,
    pub times: Vec<f64>,
    /// `None` where the signal slope vanishes
    pub precision: Vec<Option<f64>>,
    pub limits: Vec<(Limit, Vec<f64>)>,
}

impl PrecisionCurve {
    pub fn limit(&self, kind: Limit) -> Option<&[f64]> {
        self.limits.iter().find(|(k, _)| *k == kind).map(|(_, v)| v.as_slice())
    }
}

/// Coherent beam in one port and squeezed vacuum in the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MziProbe {
    pub photons: f64,
    /// β = sinh²r / N
    pub squeeze_fraction: f64,
    /// phase of the coherent amplitude
    pub coherent_phase: f64,
    /// phase of the squeezing parameter
    pub squeeze_phase: f64,
}

impl MziProbe {
    /// Phase-matched probe with the squeezing fraction that optimises the
    /// large-N precision, β = 1/(2√N).
    pub fn optimal(photons: f64) -> Self {
        Self { photons, squeeze_fraction: 0.5 / photons.sqrt(), coherent_phase: 0.0, squeeze_phase: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("photons", self.photons)?;
        if !(0.0..1.0).contains(&self.squeeze_fraction) {
            return Err(Error::InvalidParameter {
                name: "squeeze_fraction",
                reason: format!("must lie in [0, 1), got {}", self.squeeze_fraction),
            });
        }
        if !self.coherent_phase.is_finite() || !self.squeeze_phase.is_finite() {
            return Err(Error::InvalidParameter { name: "phase", reason: "must be finite".into() });
        }
        Ok(())
    }

    pub fn squeezing(&self) -> f64 {
        (self.squeeze_fraction * self.photons).sqrt().asinh()
    }

    /// |α|²
    pub fn coherent_photons(&self) -> f64 {
        (1.0 - self.squeeze_fraction) * self.photons
    }

    fn contrast(&self) -> f64 {
        self.squeeze_fraction * self.photons - self.coherent_photons()
    }

    /// Mean and variance of the photon-number difference for the output
    /// amplitude `u` at time `t`.
    pub fn moments(&self, omega0: f64, t: f64, u: Complex64) -> (f64, f64) {
        let r = self.squeezing();
        let (sh, ch) = (r.sinh(), r.cosh());
        let alpha = Complex64::from_polar(self.coherent_photons().sqrt(), self.coherent_phase);
        let v = u * Complex64::cis(omega0 * t);
        let mean = v.re * self.contrast();
        let quad = (alpha * ch - alpha.conj() * sh * Complex64::cis(self.squeeze_phase)).norm_sqr();
        let var = v.im * v.im * (quad + sh * sh)
            + v.re * v.re * (alpha.norm_sqr() + 0.5 * (2.0 * r).sinh().powi(2))
            + 0.5 * (1.0 - u.norm_sqr()) * self.photons;
        (mean, var)
    }
}

/// δγ = δM / |∂M̄/∂γ| for the frequency shift γ imprinted on one arm.
pub fn mzi_precision(
    model: &dyn AmplitudeModel,
    omega0: f64,
    gamma: f64,
    probe: &MziProbe,
    times: &[f64],
) -> Result<PrecisionCurve> {
    check_positive("omega0", omega0)?;
    probe.validate()?;
    let d = DERIVATIVE_STEP * omega0;
    let w = omega0 + gamma;
    let u0 = model.amplitudes(w, times)?;
    let up = model.amplitudes(w + d, times)?;
    let um = model.amplitudes(w - d, times)?;
    let scale = probe.contrast().abs().max(1.0);
    let precision = times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let (_, var) = probe.moments(omega0, t, u0[k]);
            let diff = probe.moments(omega0, t, up[k]).0 - probe.moments(omega0, t, um[k]).0;
            if diff.abs() <= FLAT_SLOPE * scale {
                return None;
            }
            let slope = diff / (2.0 * d);
            Some(var.sqrt() / slope.abs()).filter(|x| x.is_finite() && *x > 0.0)
        })
        .collect();
    let n0 = probe.coherent_photons();
    let n = probe.photons;
    Ok(PrecisionCurve {
        scheme: Scheme::Interferometer,
        resource: n,
        times: times.to_vec(),
        precision,
        limits: vec![
            (Limit::ShotNoise, times.iter().map(|&t| shot_noise_limit(t, n0)).collect()),
            (Limit::Zeno, times.iter().map(|&t| zeno_limit(t, n)).collect()),
        ],
    })
}

/// δω₀ = {T[∂_{ω₀}Re uⁿ]² / (t[1 − (Re uⁿ)²])}^{−1/2} for n atoms in a GHZ
/// probe, repeated over a total time T.
pub fn ramsey_precision(
    model: &dyn AmplitudeModel,
    omega0: f64,
    atoms: u32,
    total_time: f64,
    times: &[f64],
) -> Result<PrecisionCurve> {
    check_positive("omega0", omega0)?;
    check_positive("total_time", total_time)?;
    if atoms == 0 {
        return Err(Error::InvalidParameter { name: "atoms", reason: "need at least one atom".into() });
    }
    let d = DERIVATIVE_STEP * omega0;
    let signal = |u: Complex64| u.powu(atoms).re;
    let u0 = model.amplitudes(omega0, times)?;
    let up = model.amplitudes(omega0 + d, times)?;
    let um = model.amplitudes(omega0 - d, times)?;
    let precision = times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let r = signal(u0[k]);
            let diff = signal(up[k]) - signal(um[k]);
            let spread = 1.0 - r * r;
            if diff.abs() <= FLAT_SLOPE || spread <= 0.0 || t <= 0.0 {
                return None;
            }
            let slope = diff / (2.0 * d);
            Some((t * spread / total_time).sqrt() / slope.abs()).filter(|x| x.is_finite() && *x > 0.0)
        })
        .collect();
    let n = atoms as f64;
    Ok(PrecisionCurve {
        scheme: Scheme::Ramsey,
        resource: n,
        times: times.to_vec(),
        precision,
        limits: vec![(Limit::Heisenberg, times.iter().map(|&t| heisenberg_limit(atoms, total_time, t)).collect())],
    })
}

/// (t√N₀)⁻¹
pub fn shot_noise_limit(t: f64, coherent_photons: f64) -> f64 {
    1.0 / (t * coherent_photons.sqrt())
}

/// (t N^{3/4})⁻¹
pub fn zeno_limit(t: f64, photons: f64) -> f64 {
    1.0 / (t * photons.powf(0.75))
}

/// Lossless interferometer at a phase-matched time, exact in N.
pub fn ideal_mzi(t: f64, probe: &MziProbe) -> f64 {
    let b = probe.squeeze_fraction;
    let e2r = (-2.0 * probe.squeezing()).exp();
    ((1.0 - b) * e2r + b).sqrt() / (t * probe.photons.sqrt() * (1.0 - 2.0 * b).abs())
}

/// Large-N precision under Markovian loss at amplitude decay rate κ:
/// [(e^{2κt} − 1)/(2Nt²)]^{1/2}.
pub fn markovian_mzi(decay: f64, photons: f64, t: f64) -> f64 {
    ((2.0 * decay * t).exp_m1() / (2.0 * photons * t * t)).sqrt()
}

/// eκ(2N)^{−1/2}, the minimum over t of e^{2κt}/(2Nt²), reached at t = 1/κ.
/// The −1 dropped there shifts the true minimum of [`markovian_mzi`] to
/// κt ≈ 0.797.
pub fn markovian_mzi_min(decay: f64, photons: f64) -> f64 {
    std::f64::consts::E * decay / (2.0 * photons).sqrt()
}

/// Large-N precision with a bound state of residue Z at phase-matched times.
pub fn bound_mzi(residue: f64, photons: f64, t: f64) -> f64 {
    let z2 = residue * residue;
    zeno_limit(t, photons) / residue * (1.0 + (1.0 - z2) / (2.0 * z2) * photons.sqrt()).sqrt()
}

/// Encoding times (2m+1)π/(2|Δ|), m = 0, 1, …, where Δ is the detuning of the
/// long-time oscillation from the reference frequency.
pub fn phase_matched_times(detuning: f64, count: usize) -> Vec<f64> {
    (0..count).map(|m| (2 * m + 1) as f64 * std::f64::consts::FRAC_PI_2 / detuning.abs()).collect()
}

/// (n²Tt)^{−1/2}
pub fn heisenberg_limit(atoms: u32, total_time: f64, t: f64) -> f64 {
    let n = atoms as f64;
    1.0 / (n * n * total_time * t).sqrt()
}

/// Best Ramsey precision under Markovian decay at amplitude rate κ,
/// (nT/(2κe))^{−1/2}, reached at t = 1/(2nκ).
pub fn ramsey_markovian_min(decay: f64, atoms: u32, total_time: f64) -> f64 {
    let n = atoms as f64;
    (2.0 * decay * std::f64::consts::E / (n * total_time)).sqrt()
}

/// Z^{−(n+1)}(n²Tt)^{−1/2}
pub fn ramsey_bound(residue: f64, atoms: u32, total_time: f64, t: f64) -> f64 {
    residue.powi(-(atoms as i32 + 1)) * heisenberg_limit(atoms, total_time, t)
}

/// Minimise a sampled objective: locate the best grid point, then refine by
/// golden-section search between its neighbours.
pub fn optimal_time(mut f: impl FnMut(f64) -> Option<f64>, grid: &[f64], tol: f64) -> Option<(f64, f64)> {
    let values: Vec<Option<f64>> = grid.iter().map(|&t| f(t)).collect();
    let (best, _) = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .min_by(|a, b| a.1.total_cmp(&b.1))?;
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(grid.len() - 1)];
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let obj = |f: &mut dyn FnMut(f64) -> Option<f64>, t: f64| f(t).unwrap_or(f64::INFINITY);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = obj(&mut f, c);
    let mut fd = obj(&mut f, d);
    while (b - a).abs() > tol * (a.abs() + b.abs()).max(1e-300) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = obj(&mut f, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = obj(&mut f, d);
        }
    }
    let t = 0.5 * (a + b);
    let v = obj(&mut f, t);
    let grid_best = values[best].unwrap();
    if v <= grid_best {
        Some((t, v))
    } else {
        Some((grid[best], grid_best))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn ideal_interferometer_hits_shot_noise() {
        let (w0, gamma) = (1.0, 0.5);
        let probe = MziProbe { photons: 400.0, squeeze_fraction: 0.0, coherent_phase: 0.0, squeeze_phase: 0.0 };
        let t = FRAC_PI_2 / gamma;
        let c = mzi_precision(&Ideal, w0, gamma, &probe, &[t]).unwrap();
        assert!(rel(c.precision[0].unwrap(), shot_noise_limit(t, 400.0)) < 1e-7);
    }

    #[test]
    fn squeezed_interferometer_matches_exact_form() {
        let (w0, gamma) = (1.0, 0.8);
        let probe = MziProbe::optimal(1e4);
        let t = FRAC_PI_2 / gamma;
        let c = mzi_precision(&Ideal, w0, gamma, &probe, &[t]).unwrap();
        assert!(rel(c.precision[0].unwrap(), ideal_mzi(t, &probe)) < 1e-7);
        // at γt = π the slope vanishes
        let c = mzi_precision(&Ideal, w0, gamma, &probe, &[2.0 * t]).unwrap();
        assert!(c.precision[0].is_none());
    }

    #[test]
    fn markovian_interferometer() {
        let (w0, kappa, shift) = (1.0, 0.3, -0.05);
        let n = 1e14;
        let t = 1.0 / kappa;
        let gamma = FRAC_PI_2 / t - shift;
        let model = Markovian { decay: kappa, shift };
        let c = mzi_precision(&model, w0, gamma, &MziProbe::optimal(n), &[t]).unwrap();
        assert!(rel(c.precision[0].unwrap(), markovian_mzi(kappa, n, t)) < 1e-6);
    }

    #[test]
    fn ramsey_ideal_and_bound() {
        let (w0, total) = (1.0, 1e4);
        for atoms in [1u32, 3, 6] {
            let t = 0.37;
            let c = ramsey_precision(&Ideal, w0, atoms, total, &[t]).unwrap();
            assert!(rel(c.precision[0].unwrap(), heisenberg_limit(atoms, total, t)) < 1e-7);

            let b = BoundLongTime { residue: 0.8, energy: 0.6, reference: w0 };
            let tb = FRAC_PI_2 / (atoms as f64 * b.energy);
            let c = ramsey_precision(&b, w0, atoms, total, &[tb]).unwrap();
            assert!(rel(c.precision[0].unwrap(), ramsey_bound(0.8, atoms, total, tb)) < 1e-7);
        }
    }

    #[test]
    fn ramsey_markovian_minimum() {
        let (w0, kappa, total, atoms) = (1.0, 0.2, 1e3, 2u32);
        let t_opt = 1.0 / (2.0 * atoms as f64 * kappa);
        // choose ω₀ + Δ so that the signal is phase matched at t_opt
        let shift = FRAC_PI_2 / (atoms as f64 * t_opt) - w0;
        let model = Markovian { decay: kappa, shift };
        let c = ramsey_precision(&model, w0, atoms, total, &[t_opt]).unwrap();
        assert!(rel(c.precision[0].unwrap(), ramsey_markovian_min(kappa, atoms, total)) < 1e-6);
    }

    #[test]
    fn golden_section_refines_grid_minimum() {
        let grid: Vec<f64> = (1..=20).map(|k| 0.25 * k as f64).collect();
        let (t, v) = optimal_time(|t| Some((t - 2.13).powi(2) + 1.0), &grid, 1e-10).unwrap();
        assert!((t - 2.13).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hermite_interpolation_of_exact_model() {
        let sd = SpectralDensity::ohmic(0.0, 1.0, 1.0);
        let m = Exact { density: sd, step: 0.01 };
        let u = m.amplitudes(1.0, &[0.005, 1.2345]).unwrap();
        assert!((u[0] - Complex64::cis(-0.005)).norm() < 1e-6);
        // the trapezoid phase error alone is about (ω₀h)²ω₀t/12 ≈ 1e-5
        assert!((u[1] - Complex64::cis(-1.2345)).norm() < 2e-5);
    }
}
