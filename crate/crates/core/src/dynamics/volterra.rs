//! Implicit trapezoidal solver for u̇ + iω₀u + ∫₀ᵗ f(t−τ)u(τ)dτ = 0, u(0) = 1.

use num_complex::Complex64;

use crate::error::{check_positive, Error, Result};
use crate::spectra::SpectralDensity;

/// Uniform-grid solution of the amplitude equation. `du` holds u̇ at every
/// node as given by the right-hand side, so rates need no differencing.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrajectory {
    pub step: f64,
    pub omega0: f64,
    pub u: Vec<Complex64>,
    pub du: Vec<Complex64>,
    /// thermal noise function and its derivative, when computed
    pub v: Option<Vec<f64>>,
    pub dv: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

impl AmplitudeTrajectory {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    pub fn population(&self) -> Vec<f64> {
        self.u.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Build a trajectory from a known closed-form amplitude and its
    /// derivative.
    pub fn from_fn(
        omega0: f64,
        step: f64,
        n_steps: usize,
        u: impl Fn(f64) -> Complex64,
        du: impl Fn(f64) -> Complex64,
    ) -> Self {
        let t = |i: usize| i as f64 * step;
        Self {
            step,
            omega0,
            u: (0..=n_steps).map(|i| u(t(i))).collect(),
            du: (0..=n_steps).map(|i| du(t(i))).collect(),
            v: None,
            dv: None,
            warnings: Vec::new(),
        }
    }
}

/// Warn when h²|f(0)| exceeds this; √|f(0)| is the fastest memory scale.
pub const KERNEL_STEP_WARN: f64 = 0.01;

pub fn validate_step(omega0: f64, t_end: f64, step: f64) -> Result<usize> {
    check_positive("omega0", omega0)?;
    check_positive("t_end", t_end)?;
    check_positive("step", step)?;
    if omega0 * step >= 0.5 {
        return Err(Error::StepSize(format!("omega0*h = {} must be < 0.5", omega0 * step)));
    }
    let n = (t_end / step).round();
    if n > 5e7 {
        return Err(Error::StepSize(format!("{n} steps exceeds the 5e7 budget")));
    }
    Ok((n as usize).max(1))
}

pub fn solve_u(sd: &SpectralDensity, omega0: f64, t_end: f64, step: f64) -> Result<AmplitudeTrajectory> {
    sd.validate()?;
    let n = validate_step(omega0, t_end, step)?;
    let mut kernel = Vec::with_capacity(n + 1);
    for k in 0..=n {
        kernel.push(sd.kernel_f(k as f64 * step)?);
    }
    Ok(solve_with_kernel(&kernel, omega0, step))
}

/// Solve on `kernel.len()` nodes with the kernel sampled at k·h.
pub fn solve_with_kernel(kernel: &[Complex64], omega0: f64, step: f64) -> AmplitudeTrajectory {
    let n_nodes = kernel.len();
    let h = step;
    let mut warnings = Vec::new();
    let stiffness = h * h * kernel[0].norm();
    if stiffness > KERNEL_STEP_WARN {
        warnings.push(format!("h^2*|f(0)| = {stiffness:.3e} is not small; the memory integral is under-resolved"));
    }
    // reversed kernel so that the history sum runs over contiguous slices
    let last = n_nodes - 1;
    let kr: Vec<f64> = (0..n_nodes).map(|m| kernel[last - m].re).collect();
    let ki: Vec<f64> = (0..n_nodes).map(|m| kernel[last - m].im).collect();
    let mut ur = vec![0.0; n_nodes];
    let mut ui = vec![0.0; n_nodes];
    let mut u = Vec::with_capacity(n_nodes);
    let mut du = Vec::with_capacity(n_nodes);
    ur[0] = 1.0;
    u.push(Complex64::new(1.0, 0.0));
    let iw = Complex64::new(0.0, omega0);
    du.push(-iw);
    let f0 = kernel[0];
    let denom = Complex64::new(1.0, 0.0) + 0.5 * h * (iw + 0.5 * h * f0);
    let inv_denom = denom.inv();
    for n in 0..last {
        // K_{n+1} = h[½ f_{n+1} u₀ + Σ_{j=1}^{n} f_{n+1−j} u_j]
        let (sr, si) = history_dot(&kr[last - n..last], &ki[last - n..last], &ur[1..=n], &ui[1..=n]);
        let hist = Complex64::new(sr, si) + 0.5 * kernel[n + 1] * u[0];
        let k_next = h * hist;
        let rhs = u[n] + 0.5 * h * du[n] - 0.5 * h * k_next;
        let un = rhs * inv_denom;
        let integral = k_next + 0.5 * h * f0 * un;
        let dun = -iw * un - integral;
        ur[n + 1] = un.re;
        ui[n + 1] = un.im;
        u.push(un);
        du.push(dun);
    }
    AmplitudeTrajectory { step, omega0, u, du, v: None, dv: None, warnings }
}

/// Σ_j k_j·u_j for complex sequences held as split real/imaginary parts.
pub(crate) fn history_dot(kr: &[f64], ki: &[f64], ur: &[f64], ui: &[f64]) -> (f64, f64) {
    let n = kr.len();
    let mut re = [0.0f64; 4];
    let mut im = [0.0f64; 4];
    let chunks = n / 4;
    for c in 0..chunks {
        for l in 0..4 {
            let j = 4 * c + l;
            re[l] += kr[j] * ur[j] - ki[j] * ui[j];
            im[l] += kr[j] * ui[j] + ki[j] * ur[j];
        }
    }
    let mut sr = re[0] + re[1] + re[2] + re[3];
    let mut si = im[0] + im[1] + im[2] + im[3];
    for j in 4 * chunks..n {
        sr += kr[j] * ur[j] - ki[j] * ui[j];
        si += kr[j] * ui[j] + ki[j] * ur[j];
    }
    (sr, si)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_condition_is_exact() {
        let sd = SpectralDensity::ohmic(0.1, 1.0, 1.0);
        let tr = solve_u(&sd, 0.1, 5.0, 0.01).unwrap();
        assert_eq!(tr.u[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn free_evolution_without_coupling() {
        let sd = SpectralDensity::ohmic(0.0, 1.0, 1.0);
        let w0 = 0.7;
        let tr = solve_u(&sd, w0, 20.0, 0.01).unwrap();
        let t = tr.time(tr.len() - 1);
        // trapezoid phase error ~ (ω₀h)²ω₀t/12
        assert!((tr.u[tr.len() - 1] - Complex64::cis(-w0 * t)).norm() < 1e-4);
    }

    #[test]
    fn single_mode_rabi_oscillation() {
        // a constant kernel g² is a single resonant mode at zero frequency;
        // with ω₀ = 0 the amplitude is cos(g t)
        let g = 0.8;
        let h = 0.002;
        let n = 5000;
        let kernel = vec![Complex64::new(g * g, 0.0); n + 1];
        let tr = solve_with_kernel(&kernel, 0.0, h);
        for i in (0..=n).step_by(500) {
            let t = i as f64 * h;
            assert!((tr.u[i] - Complex64::new((g * t).cos(), 0.0)).norm() < 1e-5, "t = {t}");
        }
    }

    #[test]
    fn rejects_coarse_step() {
        let sd = SpectralDensity::ohmic(0.1, 1.0, 1.0);
        assert!(matches!(solve_u(&sd, 1.0, 10.0, 0.6), Err(Error::StepSize(_))));
    }
}
