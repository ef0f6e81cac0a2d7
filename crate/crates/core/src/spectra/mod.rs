//! Spectral densities J(ω), memory kernels, level shifts and the bound-state
//! condition of an emitter coupled to a bosonic continuum on [0, ∞).

mod plasmonic;

pub use plasmonic::{drude_permittivity, spp_dispersion, Plasmonic};

use num_complex::Complex64;

use crate::error::{check_finite, check_positive, Error, Result};
use crate::quad::{integrate, integrate_semi_infinite, QuadConfig};

/// J(ω) = η ω^s ω_ref^{1−s} e^{−ω/ω_c}.
///
/// `reference` is ω_c for the usual normalisation; some setups scale the
/// prefactor with the emitter frequency instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ohmic {
    pub eta: f64,
    pub s: f64,
    pub cutoff: f64,
    pub reference: f64,
}

impl Ohmic {
    pub fn new(eta: f64, s: f64, cutoff: f64) -> Self {
        Self { eta, s, cutoff, reference: cutoff }
    }

    pub fn with_reference(eta: f64, s: f64, cutoff: f64, reference: f64) -> Self {
        Self { eta, s, cutoff, reference }
    }

    fn prefactor(&self) -> f64 {
        self.eta * self.reference.powf(1.0 - self.s)
    }

    pub fn j(&self, w: f64) -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        self.prefactor() * w.powf(self.s) * (-w / self.cutoff).exp()
    }

    /// Closed form of ∫₀^∞ J(ω) e^{−iωx} dω.
    pub fn kernel(&self, x: f64) -> Complex64 {
        let z = Complex64::new(1.0 / self.cutoff, x);
        self.prefactor() * libm::tgamma(self.s + 1.0) * z.powf(-(self.s + 1.0))
    }

    /// ∫₀^∞ J(ω)/ω dω, the value −(y(0) − ω₀).
    pub fn inverse_moment(&self) -> f64 {
        self.prefactor() * self.cutoff.powf(self.s) * libm::tgamma(self.s)
    }

    /// Closed-form existence test for a bound state below the band.
    pub fn binds(&self, omega0: f64) -> bool {
        omega0 < self.inverse_moment()
    }

    /// ∫₀^∞ n̄(ω) J(ω) e^{−iωx} dω with n̄ the Bose occupation at inverse
    /// temperature `beta`, summed over the geometric expansion of n̄.
    pub fn thermal_kernel(&self, beta: f64, x: f64) -> Complex64 {
        if beta.is_infinite() {
            return Complex64::new(0.0, 0.0);
        }
        let p = self.s + 1.0;
        let c = Complex64::new(1.0 / self.cutoff, x);
        const TERMS: usize = 200;
        let mut sum = Complex64::new(0.0, 0.0);
        for m in 1..=TERMS {
            sum += (c + m as f64 * beta).powf(-p);
        }
        // Euler–Maclaurin remainder for m > TERMS
        let zm = c + TERMS as f64 * beta;
        let f = zm.powf(-p);
        let integral = zm.powf(1.0 - p) / ((p - 1.0) * beta);
        let d1 = -p * beta * zm.powf(-p - 1.0);
        let d3 = -p * (p + 1.0) * (p + 2.0) * beta.powi(3) * zm.powf(-p - 3.0);
        sum += integral - 0.5 * f - d1 / 12.0 + d3 / 720.0;
        self.prefactor() * libm::tgamma(p) * sum
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub coupling: f64,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralDensity {
    Ohmic(Ohmic),
    Plasmonic(Plasmonic),
    Discrete(Vec<Mode>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    pub residue: f64,
}

impl SpectralDensity {
    pub fn ohmic(eta: f64, s: f64, cutoff: f64) -> Self {
        SpectralDensity::Ohmic(Ohmic::new(eta, s, cutoff))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpectralDensity::Ohmic(o) => {
                check_finite("eta", o.eta)?;
                if o.eta < 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "eta",
                        reason: format!("must be >= 0, got {}", o.eta),
                    });
                }
                check_positive("s", o.s)?;
                check_positive("cutoff", o.cutoff)?;
                check_positive("reference", o.reference)
            }
            SpectralDensity::Plasmonic(p) => p.validate(),
            SpectralDensity::Discrete(modes) => {
                for m in modes {
                    check_finite("coupling", m.coupling)?;
                    check_finite("frequency", m.frequency)?;
                    if m.frequency < 0.0 {
                        return Err(Error::InvalidParameter {
                            name: "frequency",
                            reason: format!("mode frequencies must be >= 0, got {}", m.frequency),
                        });
                    }
                }
                Ok(())
            }
        }
    }

    /// True when the density vanishes identically.
    pub fn is_decoupled(&self) -> bool {
        match self {
            SpectralDensity::Ohmic(o) => o.eta == 0.0,
            SpectralDensity::Plasmonic(p) => p.gamma0 == 0.0,
            SpectralDensity::Discrete(m) => m.iter().all(|m| m.coupling == 0.0),
        }
    }

    pub fn evaluate_j(&self, w: f64) -> Result<f64> {
        if !(w >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega",
                reason: format!("must be >= 0, got {w}"),
            });
        }
        match self {
            SpectralDensity::Ohmic(o) => Ok(o.j(w)),
            SpectralDensity::Plasmonic(p) => p.j(w),
            SpectralDensity::Discrete(_) => Err(Error::Unsupported(
                "a discrete mode set has no continuous density".into(),
            )),
        }
    }

    /// Upper edge of the band used for numerical integrals.
    fn band_top(&self) -> Option<f64> {
        match self {
            SpectralDensity::Ohmic(_) => None,
            SpectralDensity::Plasmonic(p) => Some(p.omega_max),
            SpectralDensity::Discrete(_) => None,
        }
    }

    /// Natural frequency scale for the semi-infinite map.
    fn scale(&self) -> f64 {
        match self {
            SpectralDensity::Ohmic(o) => o.cutoff,
            SpectralDensity::Plasmonic(p) => p.omega_max,
            SpectralDensity::Discrete(_) => 1.0,
        }
    }

    /// ∫ over the band of `g(ω)·J(ω)` for continuous densities.
    fn band_integral<T, G>(&self, mut g: G, cfg: &QuadConfig) -> Result<T>
    where
        T: crate::quad::QuadValue,
        G: FnMut(f64) -> T,
    {
        match self {
            SpectralDensity::Ohmic(o) => {
                Ok(integrate_semi_infinite(|w| g(w) * o.j(w), 0.0, o.cutoff, cfg)?.value)
            }
            SpectralDensity::Plasmonic(p) => {
                let mut err = None;
                let r = integrate(
                    |w| match p.j(w) {
                        Ok(j) => g(w) * j,
                        Err(e) => {
                            err.get_or_insert(e);
                            g(w) * 0.0
                        }
                    },
                    0.0,
                    p.omega_max,
                    cfg,
                )?;
                match err {
                    Some(e) => Err(e),
                    None => Ok(r.value),
                }
            }
            SpectralDensity::Discrete(_) => unreachable!("discrete densities are summed"),
        }
    }

    /// Memory kernel f(x) = ∫₀^∞ J(ω) e^{−iωx} dω.
    pub fn kernel_f(&self, x: f64) -> Result<Complex64> {
        check_finite("dt", x)?;
        match self {
            SpectralDensity::Ohmic(o) => Ok(o.kernel(x)),
            SpectralDensity::Discrete(modes) => Ok(modes
                .iter()
                .map(|m| m.coupling * m.coupling * Complex64::cis(-m.frequency * x))
                .sum()),
            SpectralDensity::Plasmonic(_) => {
                self.band_integral(|w| Complex64::cis(-w * x), &QuadConfig::default())
            }
        }
    }

    /// Thermal kernel μ(x) = ∫₀^∞ n̄(ω) J(ω) e^{−iωx} dω.
    pub fn thermal_kernel(&self, beta: f64, x: f64) -> Result<Complex64> {
        if !(beta > 0.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: format!("must be > 0, got {beta}"),
            });
        }
        if beta.is_infinite() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let nbar = |w: f64| 1.0 / (beta * w).exp_m1();
        match self {
            SpectralDensity::Ohmic(o) => Ok(o.thermal_kernel(beta, x)),
            SpectralDensity::Discrete(modes) => Ok(modes
                .iter()
                .filter(|m| m.frequency > 0.0)
                .map(|m| nbar(m.frequency) * m.coupling * m.coupling * Complex64::cis(-m.frequency * x))
                .sum()),
            SpectralDensity::Plasmonic(_) => self.band_integral(
                |w| if w > 0.0 { Complex64::cis(-w * x) * nbar(w) } else { Complex64::new(0.0, 0.0) },
                &QuadConfig::default(),
            ),
        }
    }

    pub fn level_shift(&self, e: f64) -> Result<f64> {
        self.level_shift_with(e, &QuadConfig::default())
    }

    /// Δ(E) = P∫₀^∞ J(ω)/(E−ω) dω.
    ///
    /// Inside the band the pole is removed by subtracting J(E) on the
    /// symmetric window [0, 2E] and integrating the regular remainder on
    /// panels that meet at E, so no quadrature node lands on the pole.
    pub fn level_shift_with(&self, e: f64, cfg: &QuadConfig) -> Result<f64> {
        check_finite("energy", e)?;
        if let SpectralDensity::Discrete(modes) = self {
            let mut sum = 0.0;
            for m in modes {
                if m.frequency == e {
                    return Err(Error::InvalidParameter {
                        name: "energy",
                        reason: format!("coincides with the mode at {}", m.frequency),
                    });
                }
                sum += m.coupling * m.coupling / (e - m.frequency);
            }
            return Ok(sum);
        }
        if self.is_decoupled() {
            return Ok(0.0);
        }
        if e <= 0.0 {
            return self.band_integral(|w| 1.0 / (e - w), cfg);
        }
        let top = self.band_top();
        if let Some(top) = top {
            if e >= top {
                return self.band_integral(|w| 1.0 / (e - w), cfg);
            }
        }
        let je = self.evaluate_j(e)?;
        let upper = match top {
            Some(top) => top.min(2.0 * e),
            None => 2.0 * e,
        };
        let lower_span = e.min(upper - e);
        let a = e - lower_span;
        let b = e + lower_span;
        let mut fail = None;
        let mut regular = |w: f64| match self.evaluate_j(w) {
            Ok(j) => (j - je) / (e - w),
            Err(err) => {
                fail.get_or_insert(err);
                0.0
            }
        };
        let near = crate::quad::integrate_panels(&mut regular, &[a, e, b], cfg)?.value;
        if let Some(err) = fail {
            return Err(err);
        }
        let mut rest = 0.0;
        if a > 0.0 {
            rest += integrate(|w| self.evaluate_j(w).unwrap_or(0.0) / (e - w), 0.0, a, cfg)?.value;
        }
        match top {
            Some(top) if b < top => {
                rest += integrate(|w| self.evaluate_j(w).unwrap_or(0.0) / (e - w), b, top, cfg)?.value;
            }
            Some(_) => {}
            None => {
                rest += integrate_semi_infinite(
                    |w| self.evaluate_j(w).unwrap_or(0.0) / (e - w),
                    b,
                    self.scale(),
                    cfg,
                )?
                .value;
            }
        }
        Ok(near + rest)
    }

    /// y(E) = ω₀ − ∫ J(ω)/(ω−E) dω for E ≤ 0.
    pub fn pole_function(&self, omega0: f64, e: f64, cfg: &QuadConfig) -> Result<f64> {
        debug_assert!(e <= 0.0);
        if e == 0.0 {
            if let SpectralDensity::Ohmic(o) = self {
                return Ok(omega0 - o.inverse_moment());
            }
        }
        Ok(omega0 + self.level_shift_with(e, cfg)?)
    }

    pub fn bound_state(&self, omega0: f64) -> Result<Option<BoundState>> {
        self.bound_state_with(omega0, &QuadConfig::default())
    }

    /// Root E_b < 0 of y(E) = E together with its residue, or `None` when
    /// y(0) ≥ 0.
    pub fn bound_state_with(&self, omega0: f64, cfg: &QuadConfig) -> Result<Option<BoundState>> {
        check_positive("omega0", omega0)?;
        self.validate()?;
        if self.is_decoupled() {
            return Ok(None);
        }
        if let SpectralDensity::Discrete(modes) = self {
            if modes.iter().any(|m| m.frequency == 0.0 && m.coupling != 0.0) {
                return Err(Error::Unsupported("discrete mode at zero frequency".into()));
            }
        }
        let g = |e: f64| -> Result<f64> { Ok(self.pole_function(omega0, e, cfg)? - e) };
        let g0 = g(0.0)?;
        if g0 >= 0.0 {
            return Ok(None);
        }
        let mut lo = -omega0;
        let mut glo = g(lo)?;
        let mut doublings = 0;
        while glo <= 0.0 {
            lo *= 2.0;
            glo = g(lo)?;
            doublings += 1;
            if doublings > 200 || !glo.is_finite() {
                return Err(Error::Bracketing(format!(
                    "y(0) - 0 = {g0:e} < 0 but no sign change found down to E = {lo:e} (g = {glo:e})"
                )));
            }
        }
        let mut hi = 0.0;
        let tol = 1e-12 * omega0;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if g(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let energy = 0.5 * (lo + hi);
        let residue = 1.0 / (1.0 + self.inverse_square_moment(energy, cfg)?);
        Ok(Some(BoundState { energy, residue }))
    }

    /// ∫ J(ω)/(E−ω)² dω for E below the band.
    pub fn inverse_square_moment(&self, e: f64, cfg: &QuadConfig) -> Result<f64> {
        match self {
            SpectralDensity::Discrete(modes) => Ok(modes
                .iter()
                .map(|m| m.coupling * m.coupling / (e - m.frequency).powi(2))
                .sum()),
            _ => self.band_integral(|w| 1.0 / (e - w).powi(2), cfg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ohmic_value_at_cutoff() {
        let sd = SpectralDensity::ohmic(0.1, 1.0, 2.0);
        let j = sd.evaluate_j(2.0).unwrap();
        assert!((j - 0.1 * 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(sd.evaluate_j(0.0).unwrap(), 0.0);
    }

    #[test]
    fn kernel_at_origin_is_eta_wc_squared() {
        let sd = SpectralDensity::ohmic(0.3, 1.0, 5.0);
        let f = sd.kernel_f(0.0).unwrap();
        assert!((f.re - 0.3 * 25.0).abs() < 1e-12 && f.im.abs() < 1e-15);
    }

    #[test]
    fn kernel_closed_form_matches_quadrature() {
        for &(s, x) in &[(0.5, 0.3), (1.0, 2.0), (3.0, 0.7), (1.7, 5.0)] {
            let o = Ohmic::new(0.2, s, 1.3);
            let q = integrate_semi_infinite(
                |w| Complex64::cis(-w * x) * o.j(w),
                0.0,
                1.3,
                &QuadConfig::tight(),
            )
            .unwrap()
            .value;
            assert!((o.kernel(x) - q).norm() < 1e-9 * q.norm().max(1e-3), "s={s} x={x}");
        }
    }

    #[test]
    fn thermal_kernel_matches_quadrature() {
        let o = Ohmic::new(0.1, 1.0, 5.0);
        let beta = 0.1;
        for &x in &[0.0, 0.4, 3.0] {
            let q = integrate_semi_infinite(
                |w| Complex64::cis(-w * x) * o.j(w) / (beta * w).exp_m1(),
                0.0,
                1.0,
                &QuadConfig::tight(),
            )
            .unwrap()
            .value;
            let c = o.thermal_kernel(beta, x);
            assert!((c - q).norm() < 1e-8 * q.norm(), "x={x}: {c} vs {q}");
        }
    }

    #[test]
    fn zero_coupling_has_no_shift_or_bound_state() {
        let sd = SpectralDensity::ohmic(0.0, 1.0, 1.0);
        assert_eq!(sd.level_shift(0.3).unwrap(), 0.0);
        assert!(sd.bound_state(0.1).unwrap().is_none());
    }

    #[test]
    fn bound_state_flags_threshold() {
        let below = SpectralDensity::ohmic(0.05, 1.0, 1.0);
        assert!(below.bound_state(0.1).unwrap().is_none());
        let above = SpectralDensity::ohmic(0.2, 1.0, 1.0);
        let b = above.bound_state(0.1).unwrap().unwrap();
        assert!(b.energy < 0.0);
        assert!(b.residue > 0.0 && b.residue <= 1.0);
    }

    #[test]
    fn discrete_level_shift_is_a_sum() {
        let sd = SpectralDensity::Discrete(vec![
            Mode { coupling: 0.5, frequency: 1.0 },
            Mode { coupling: 0.2, frequency: 3.0 },
        ]);
        let d = sd.level_shift(2.0).unwrap();
        assert!((d - (0.25 / 1.0 + 0.04 / -1.0)).abs() < 1e-15);
        assert!(sd.level_shift(1.0).is_err());
    }
}
