//! Emitter above a planar Drude-metal/dielectric interface.
//!
//! Energies in eV, lengths in nm; ħc converts frequency to wavevector.

use num_complex::Complex64;

use crate::error::{check_finite, check_positive, Error, Result};
use crate::quad::{integrate, QuadConfig};

pub const HBAR_C_EV_NM: f64 = 197.326_980_4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plasmonic {
    /// emitter distance from the interface (nm)
    pub distance: f64,
    pub omega0: f64,
    /// free-space decay rate
    pub gamma0: f64,
    pub eps_d: f64,
    pub eps_inf: f64,
    pub omega_p: f64,
    pub gamma_p: f64,
    /// integrals over the band are truncated here
    pub omega_max: f64,
}

impl Plasmonic {
    /// Silver-like Drude parameters with the given emitter geometry.
    pub fn silver(distance: f64, omega0: f64, gamma0: f64, eps_d: f64) -> Self {
        Self {
            distance,
            omega0,
            gamma0,
            eps_d,
            eps_inf: 6.0,
            omega_p: 7.90,
            gamma_p: 0.051,
            omega_max: 6.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("distance", self.distance)?;
        check_positive("omega0", self.omega0)?;
        check_finite("gamma0", self.gamma0)?;
        check_positive("eps_d", self.eps_d)?;
        check_positive("eps_inf", self.eps_inf)?;
        check_positive("omega_p", self.omega_p)?;
        check_finite("gamma_p", self.gamma_p)?;
        check_positive("omega_max", self.omega_max)
    }

    fn eps_m(&self, w: f64) -> Complex64 {
        drude_permittivity(self.eps_inf, self.omega_p, self.gamma_p, w)
    }

    fn integrand_parts(&self, w: f64) -> Result<(impl Fn(f64) -> f64 + '_, impl Fn(f64) -> f64 + '_)> {
        let eps_m = self.eps_m(w);
        let residual = eps_m + self.eps_d;
        if residual.norm() < 1e-12 * (eps_m.norm() + self.eps_d) {
            return Err(Error::PlasmonPole { omega: w, residual: residual.norm() });
        }
        let k0 = w / HBAR_C_EV_NM;
        let kd = k0 * self.eps_d.sqrt();
        let eps_d = self.eps_d;
        let dz = self.distance;
        let rp = move |s2: f64, kzd: Complex64| {
            let kzm = upper_sqrt(eps_m - eps_d * s2) * k0;
            (eps_d * kzm - eps_m * kzd) / (eps_d * kzm + eps_m * kzd)
        };
        // propagating part: s = sin θ, θ ∈ [0, π/2]
        let propagating = move |theta: f64| {
            let s = theta.sin();
            let kzd = Complex64::new(kd * theta.cos(), 0.0);
            let phase = Complex64::cis(2.0 * kzd.re * dz);
            let val = s.powi(3) * (Complex64::new(1.0, 0.0) - rp(s * s, kzd) * phase);
            val.re
        };
        // evanescent part: s = cosh χ, where ds/√(1−s²) = −i dχ
        let evanescent = move |chi: f64| {
            let s = chi.cosh();
            let kzd = Complex64::new(0.0, kd * chi.sinh());
            let decay = (-2.0 * kd * chi.sinh() * dz).exp();
            let val = Complex64::new(0.0, -1.0) * s.powi(3) * (Complex64::new(1.0, 0.0) - rp(s * s, kzd) * decay);
            val.re
        };
        Ok((propagating, evanescent))
    }

    /// Upper end of the evanescent χ range, where the interface factor has
    /// decayed below e^{-80}.
    fn chi_max(&self, w: f64) -> f64 {
        let kd = w / HBAR_C_EV_NM * self.eps_d.sqrt();
        (80.0 / (2.0 * kd * self.distance)).asinh().max(1.0)
    }

    pub fn j(&self, w: f64) -> Result<f64> {
        self.j_with(w, &QuadConfig { rel_tol: 1e-9, abs_tol: 1e-13, max_intervals: 5000 })
    }

    pub fn j_with(&self, w: f64, cfg: &QuadConfig) -> Result<f64> {
        if w <= 0.0 || self.gamma0 == 0.0 {
            return Ok(0.0);
        }
        let (prop, evan) = self.integrand_parts(w)?;
        let a = integrate(prop, 0.0, std::f64::consts::FRAC_PI_2, cfg)?.value;
        let cm = self.chi_max(w);
        let mut breaks = vec![0.0];
        let mut x = 0.5;
        while x < cm {
            breaks.push(x);
            x *= 2.0;
        }
        breaks.push(cm);
        let mut evan = evan;
        let b = crate::quad::integrate_panels(&mut evan, &breaks, cfg)?.value;
        let pref = 3.0 * self.gamma0 * self.eps_d.sqrt() * w.powi(3)
            / (4.0 * std::f64::consts::PI * self.omega0.powi(3));
        Ok(pref * (a + b))
    }
}

/// Drude permittivity ε_m(ω) = ε_∞ − ω_p²/[ω(ω + iγ_p)].
pub fn drude_permittivity(eps_inf: f64, omega_p: f64, gamma_p: f64, w: f64) -> Complex64 {
    Complex64::new(eps_inf, 0.0) - omega_p * omega_p / (w * Complex64::new(w, gamma_p))
}

/// Square root on the branch with non-negative imaginary part.
pub(crate) fn upper_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.im < 0.0 || (r.im == 0.0 && r.re < 0.0) {
        -r
    } else {
        r
    }
}

/// Surface-plasmon wavevector (nm⁻¹) at frequency `w` (eV), on the branch with
/// Im k ≥ 0.
pub fn spp_dispersion(p: &Plasmonic, w: f64) -> Result<Complex64> {
    check_positive("omega", w)?;
    let eps_m = p.eps_m(w);
    let den = eps_m + p.eps_d;
    if den.norm() < 1e-12 * (eps_m.norm() + p.eps_d) {
        return Err(Error::PlasmonPole { omega: w, residual: den.norm() });
    }
    Ok(upper_sqrt(eps_m * p.eps_d / den) * (w / HBAR_C_EV_NM))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn light_line_at_low_frequency() {
        let mut p = Plasmonic::silver(1.2, 1.2, 1e-4, 2.0);
        p.gamma_p = 0.0;
        let w = 1e-4;
        let k = spp_dispersion(&p, w).unwrap();
        let light = w / HBAR_C_EV_NM * p.eps_d.sqrt();
        assert!((k.re / light - 1.0).abs() < 1e-6);
    }

    #[test]
    fn lossless_resonance_is_a_pole() {
        let mut p = Plasmonic::silver(1.2, 1.2, 1e-4, 2.0);
        p.gamma_p = 0.0;
        let wsp = p.omega_p / (p.eps_inf + p.eps_d).sqrt();
        assert!(matches!(spp_dispersion(&p, wsp), Err(Error::PlasmonPole { .. })));
    }

    #[test]
    fn lossy_wavevector_decays() {
        let p = Plasmonic::silver(1.2, 1.2, 1e-4, 25.0);
        let k = spp_dispersion(&p, 1.2).unwrap();
        // direct complex arithmetic
        let eps_m = Complex64::new(6.0, 0.0) - 7.9 * 7.9 / (1.2 * Complex64::new(1.2, 0.051));
        let direct = (eps_m * 25.0 / (eps_m + 25.0)).sqrt() * (1.2 / HBAR_C_EV_NM);
        let direct = if direct.im < 0.0 { -direct } else { direct };
        assert!((k - direct).norm() < 1e-14);
        assert!(k.im > 0.0);
    }

    #[test]
    fn density_is_positive_and_finite() {
        let p = Plasmonic::silver(1.2, 1.2, 1e-4, 25.0);
        for &w in &[0.3, 0.8, 1.2, 2.0] {
            let j = p.j(w).unwrap();
            assert!(j.is_finite() && j > 0.0, "J({w}) = {j}");
        }
    }
}
