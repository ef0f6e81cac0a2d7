use faer::{c64, Mat};

use super::PiecewiseModel;
use crate::error::{Error, Result};
use crate::linalg::sym_eigen;

/// Amplitudes on the system sites sampled along an exact piecewise evolution.
#[derive(Debug, Clone)]
pub struct EvolutionRecord {
    pub times: Vec<f64>,
    /// one row per sample, ordered like `PiecewiseModel::system_sites`
    pub system_amplitudes: Vec<Vec<c64>>,
    /// largest |‖ψ‖² − ‖ψ₀‖²| seen
    pub max_norm_defect: f64,
    pub final_state: Vec<c64>,
}

impl EvolutionRecord {
    /// |c|² of the k-th system site at every sample.
    pub fn population(&self, k: usize) -> Vec<f64> {
        self.system_amplitudes.iter().map(|row| row[k].norm_sqr()).collect()
    }

    pub fn amplitude(&self, k: usize) -> Vec<c64> {
        self.system_amplitudes.iter().map(|row| row[k]).collect()
    }
}

struct Diagonal {
    energies: Vec<f64>,
    basis: Mat<f64>,
}

impl Diagonal {
    /// ψ ← V e^{−iEδ} Vᵀ ψ
    fn apply(&self, psi: &mut [c64], dt: f64, work: &mut [c64]) {
        let n = psi.len();
        for j in 0..n {
            let col = self.basis.col(j);
            let (mut re, mut im) = (0.0, 0.0);
            for i in 0..n {
                re += col[i] * psi[i].re;
                im += col[i] * psi[i].im;
            }
            work[j] = c64::new(re, im) * c64::cis(-self.energies[j] * dt);
        }
        psi.iter_mut().for_each(|p| *p = c64::new(0.0, 0.0));
        for j in 0..n {
            let col = self.basis.col(j);
            let y = work[j];
            for i in 0..n {
                psi[i] += y * col[i];
            }
        }
    }
}

/// Evolve ψ₀ through `n_periods` periods, recording the system amplitudes at
/// `samples_per_period` equally spaced times per period (plus t = 0).
pub fn stroboscopic_evolve(
    model: &PiecewiseModel,
    psi0: &[c64],
    n_periods: usize,
    samples_per_period: usize,
) -> Result<EvolutionRecord> {
    let dim = model.dim();
    if psi0.len() != dim {
        return Err(Error::InvalidParameter {
            name: "psi0",
            reason: format!("length {} does not match sector dimension {dim}", psi0.len()),
        });
    }
    if samples_per_period == 0 {
        return Err(Error::InvalidParameter { name: "samples_per_period", reason: "must be >= 1".into() });
    }
    let diag: Vec<Diagonal> = model
        .pieces
        .iter()
        .map(|p| sym_eigen(p.hamiltonian.as_ref()).map(|(energies, basis)| Diagonal { energies, basis }))
        .collect::<Result<_>>()?;

    // segments (piece, duration) leading to each sample within one period
    let period = model.period;
    let dt = period / samples_per_period as f64;
    let mut schedule: Vec<Vec<(usize, f64)>> = vec![Vec::new(); samples_per_period];
    let mut piece = 0;
    let mut piece_end = model.pieces[0].duration;
    let mut t = 0.0;
    for (k, segs) in schedule.iter_mut().enumerate() {
        let target = if k + 1 == samples_per_period { period } else { (k + 1) as f64 * dt };
        while t < target {
            let stop = piece_end.min(target);
            if stop > t {
                segs.push((piece, stop - t));
            }
            t = stop;
            if t >= piece_end && piece + 1 < model.pieces.len() {
                piece += 1;
                piece_end += model.pieces[piece].duration;
            }
        }
    }

    let norm0: f64 = psi0.iter().map(|z| z.norm_sqr()).sum();
    let mut psi = psi0.to_vec();
    let mut work = vec![c64::new(0.0, 0.0); dim];
    let pick = |psi: &[c64]| model.system_sites.iter().map(|&s| psi[s]).collect::<Vec<_>>();
    let mut times = vec![0.0];
    let mut amps = vec![pick(&psi)];
    let mut worst: f64 = 0.0;
    for n in 0..n_periods {
        for (k, segs) in schedule.iter().enumerate() {
            for &(p, d) in segs {
                diag[p].apply(&mut psi, d, &mut work);
            }
            times.push(n as f64 * period + (k + 1) as f64 * dt);
            amps.push(pick(&psi));
        }
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        worst = worst.max((norm - norm0).abs());
    }
    Ok(EvolutionRecord { times, system_amplitudes: amps, max_norm_defect: worst, final_state: psi })
}

/// Angular frequency of the strongest component of a uniformly sampled
/// series, searched on (0, π/dt] after removing the mean. A Hann window keeps
/// leakage from the mirror frequency out of the peak position.
pub fn dominant_frequency(series: &[f64], dt: f64) -> Option<f64> {
    let n = series.len();
    if n < 4 {
        return None;
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = series
        .iter()
        .enumerate()
        .map(|(k, v)| (v - mean) * (std::f64::consts::PI * k as f64 / (n - 1) as f64).sin().powi(2))
        .collect();
    let power = |w: f64| {
        let (mut c, mut s) = (0.0, 0.0);
        for (k, v) in x.iter().enumerate() {
            let ph = w * k as f64 * dt;
            c += v * ph.cos();
            s += v * ph.sin();
        }
        c * c + s * s
    };
    let w_max = std::f64::consts::PI / dt;
    let grid = 8 * n;
    let dw = w_max / grid as f64;
    let (best, _) = (1..=grid).map(|k| (k, power(k as f64 * dw))).max_by(|a, b| a.1.total_cmp(&b.1))?;
    // golden-section refinement of the peak
    let (mut a, mut b) = ((best as f64 - 1.0) * dw, ((best as f64 + 1.0) * dw).min(w_max));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut pc, mut pd) = (power(c), power(d));
    for _ in 0..80 {
        if pc > pd {
            b = d;
            d = c;
            pd = pc;
            c = b - g * (b - a);
            pc = power(c);
        } else {
            a = c;
            c = d;
            pc = pd;
            d = a + g * (b - a);
            pd = power(d);
        }
    }
    Some(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::Piece;

    #[test]
    fn two_level_rabi_across_pieces() {
        let g = 0.9;
        let h = Mat::from_fn(2, 2, |i, j| if i == j { 0.0 } else { g });
        let m = PiecewiseModel::new(
            vec![Piece { hamiltonian: h.clone(), duration: 0.3 }, Piece { hamiltonian: h, duration: 0.5 }],
            vec![0, 1],
        )
        .unwrap();
        let rec = stroboscopic_evolve(&m, &m.unit_vector(0), 7, 3).unwrap();
        for (t, row) in rec.times.iter().zip(&rec.system_amplitudes) {
            assert!((row[0].norm_sqr() - (g * t).cos().powi(2)).abs() < 1e-12, "t = {t}");
        }
        assert!(rec.max_norm_defect < 1e-13);
        assert_eq!(rec.times.len(), 22);
    }

    #[test]
    fn frequency_of_pure_tone() {
        let dt = 0.37;
        let w = 0.81;
        let s: Vec<f64> = (0..300).map(|k| 0.2 + (w * k as f64 * dt + 0.4).cos()).collect();
        let f = dominant_frequency(&s, dt).unwrap();
        assert!((f - w).abs() < 1e-6, "{f}");
    }
}
