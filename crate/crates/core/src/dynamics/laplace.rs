//! Bound-state plus band-integral representation of the amplitude.

use num_complex::Complex64;

use crate::error::{check_positive, Error, Result};
use crate::quad::{adaptive_breaks, gk15_rule, QuadConfig};
use crate::spectra::{BoundState, SpectralDensity};

/// Precomputed band quadrature for u(t) = Z e^{−iE_b t} + ∫ A(E) e^{−iEt} dE,
/// A(E) = J(E)/([E−ω₀−Δ(E)]² + [πJ(E)]²), accurate for 0 ≤ t ≤ `t_max`.
#[derive(Debug, Clone)]
pub struct BandDecomposition {
    bound: Option<BoundState>,
    omega0: f64,
    nodes: Vec<f64>,
    kronrod: Vec<f64>,
    gauss: Vec<f64>,
    t_max: f64,
    free: bool,
}

impl BandDecomposition {
    pub fn new(sd: &SpectralDensity, omega0: f64, bound: Option<BoundState>, t_max: f64) -> Result<Self> {
        check_positive("omega0", omega0)?;
        if !(t_max >= 0.0) {
            return Err(Error::InvalidParameter { name: "t_max", reason: format!("{t_max}") });
        }
        sd.validate()?;
        if sd.is_decoupled() {
            return Ok(Self {
                bound: None,
                omega0,
                nodes: Vec::new(),
                kronrod: Vec::new(),
                gauss: Vec::new(),
                t_max,
                free: true,
            });
        }
        let top = match sd {
            SpectralDensity::Ohmic(o) => 60.0 * o.cutoff,
            SpectralDensity::Plasmonic(p) => p.omega_max,
            SpectralDensity::Discrete(_) => {
                return Err(Error::Unsupported("band decomposition needs a continuous density".into()))
            }
        };
        let weight = |e: f64| -> Result<f64> {
            let j = sd.evaluate_j(e)?;
            if j == 0.0 {
                return Ok(0.0);
            }
            let shift = sd.level_shift(e)?;
            let d = e - omega0 - shift;
            Ok(j / (d * d + (std::f64::consts::PI * j).powi(2)))
        };
        let mut seeds = vec![0.0];
        for frac in [0.25, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0, 4.0, 10.0] {
            let e = frac * omega0;
            if e < top {
                seeds.push(e);
            }
        }
        let mut e = 20.0 * omega0;
        while e < top {
            seeds.push(e);
            e *= 2.0;
        }
        seeds.push(top);
        seeds.sort_by(f64::total_cmp);
        seeds.dedup();
        let mut fail = None;
        let mut a = |e: f64| match weight(e) {
            Ok(v) => v,
            Err(err) => {
                fail.get_or_insert(err);
                0.0
            }
        };
        let cfg = QuadConfig { rel_tol: 1e-9, abs_tol: 1e-13, max_intervals: 4000 };
        let breaks = adaptive_breaks(&mut a, &seeds, &cfg)?;
        if let Some(err) = fail {
            return Err(err);
        }
        // cap panel width so that the 15-point rule resolves e^{−iEt}
        let max_width = if t_max > 0.0 { 2.0 / t_max } else { f64::INFINITY };
        let mut nodes = Vec::new();
        let mut kronrod = Vec::new();
        let mut gauss = Vec::new();
        for w in breaks.windows(2) {
            let pieces = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
            let dw = (w[1] - w[0]) / pieces as f64;
            for p in 0..pieces {
                let lo = w[0] + p as f64 * dw;
                let hi = if p + 1 == pieces { w[1] } else { lo + dw };
                for (x, wk, wg) in gk15_rule(lo, hi) {
                    let v = weight(x)?;
                    nodes.push(x);
                    kronrod.push(wk * v);
                    gauss.push(wg * v);
                }
            }
        }
        Ok(Self { bound, omega0, nodes, kronrod, gauss, t_max, free: false })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Band contribution and its embedded-rule error estimate.
    pub fn band(&self, t: f64) -> (Complex64, f64) {
        let mut k = Complex64::new(0.0, 0.0);
        let mut g = Complex64::new(0.0, 0.0);
        for i in 0..self.nodes.len() {
            let ph = Complex64::cis(-self.nodes[i] * t);
            k += ph * self.kronrod[i];
            g += ph * self.gauss[i];
        }
        (k, (k - g).norm())
    }

    pub fn bound_term(&self, t: f64) -> Complex64 {
        match self.bound {
            Some(b) => b.residue * Complex64::cis(-b.energy * t),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn amplitude(&self, t: f64) -> Result<Complex64> {
        if self.free {
            return Ok(Complex64::cis(-self.omega0 * t));
        }
        let (band, err) = self.band(t);
        let value = self.bound_term(t) + band;
        if err > 1e-6 {
            return Err(Error::Quadrature { value: value.norm(), error: err, evals: self.nodes.len() });
        }
        Ok(value)
    }
}

pub fn decompose_u(sd: &SpectralDensity, omega0: f64, bound: Option<BoundState>, t: f64) -> Result<Complex64> {
    BandDecomposition::new(sd, omega0, bound, t)?.amplitude(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupled_is_free_evolution() {
        let sd = SpectralDensity::ohmic(0.0, 1.0, 1.0);
        let u = decompose_u(&sd, 0.3, None, 7.0).unwrap();
        assert!((u - Complex64::cis(-2.1)).norm() < 1e-15);
    }

    #[test]
    fn unit_total_weight_at_t0() {
        // u(0) = 1 is a sum rule over the spectral weights
        for &eta in &[0.05, 0.2] {
            let sd = SpectralDensity::ohmic(eta, 1.0, 1.0);
            let b = sd.bound_state(0.1).unwrap();
            let u0 = decompose_u(&sd, 0.1, b, 0.0).unwrap();
            assert!((u0 - Complex64::new(1.0, 0.0)).norm() < 1e-6, "eta={eta}: {u0}");
        }
    }
}
