//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Results cross the boundary as flat `Float64Array`s; entries that could not
//! be computed are NaN.

use boundfloq::dynamics::solve_u;
use boundfloq::spectra::SpectralDensity;
use boundfloq::topology::{chern_number, kitaev_invariants, DrivenHaldane, DrivenKitaev};
use wasm_bindgen::prelude::*;

fn js_err(e: boundfloq::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| (lo * (n - 1 - i) as f64 + hi * i as f64) / (n - 1) as f64).collect()
}

/// Emitter population |u(t)|² in an Ohmic bath, in units of ω₀.
///
/// Returns `[energy, residue, t₀, p₀, t₁, p₁, …]`; the first two are NaN
/// without a bound state. At most `points` samples are returned.
#[wasm_bindgen]
pub fn population(eta: f64, s: f64, cutoff: f64, t_end: f64, step: f64, points: usize) -> Result<Vec<f64>, JsError> {
    let sd = SpectralDensity::ohmic(eta, s, cutoff);
    sd.validate().map_err(js_err)?;
    let bound = sd.bound_state(1.0).map_err(js_err)?;
    let traj = solve_u(&sd, 1.0, t_end, step).map_err(js_err)?;
    let stride = traj.len().div_ceil(points.max(2));
    let mut out = vec![bound.map_or(f64::NAN, |b| b.energy), bound.map_or(f64::NAN, |b| b.residue)];
    for i in (0..traj.len()).step_by(stride.max(1)) {
        out.push(traj.time(i));
        out.push(traj.u[i].norm_sqr());
    }
    Ok(out)
}

/// Chern numbers of the two-step driven Haldane model over
/// T₁, T₂ ∈ [lo, hi], row-major with T₁ along rows.
#[wasm_bindgen]
pub fn chern_map(lo: f64, hi: f64, n: usize, grid: usize) -> Vec<f64> {
    let ts = axis(lo, hi, n);
    let mut out = Vec::with_capacity(n * n);
    for &a in &ts {
        for &b in &ts {
            let c = chern_number(&DrivenHaldane::reference(a, b), grid);
            out.push(c.map_or(f64::NAN, |c| c.value as f64));
        }
    }
    out
}

/// Majorana pair counts of the driven Kitaev chain on a (period, t₁) grid,
/// two entries per point: pairs at quasienergy 0, then at π/T.
#[wasm_bindgen]
pub fn kitaev_phase(t2: f64, period_max: f64, t1_max: f64, n: usize) -> Vec<f64> {
    let periods = axis(period_max / n as f64, period_max, n);
    let t1s = axis(-t1_max, t1_max, n);
    let mut out = Vec::with_capacity(2 * n * n);
    for &p in &periods {
        for &t1 in &t1s {
            let counts = kitaev_invariants(&DrivenKitaev::reference(t1, t2, p), 1024).ok().and_then(|w| w.counts());
            out.push(counts.map_or(f64::NAN, |c| c.zero as f64));
            out.push(counts.map_or(f64::NAN, |c| c.pi as f64));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn population_header_and_pairs() {
        let v = population(0.5, 1.0, 10.0, 5.0, 0.01, 50).unwrap();
        assert!(v[0].is_finite() && v[1] > 0.0 && v[1] < 1.0);
        assert_eq!((v.len() - 2) % 2, 0);
        assert!(v.len() - 2 <= 2 * 51);
        assert_eq!(v[2], 0.0);
        assert!((v[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chern_map_reproduces_known_points() {
        let v = chern_map(0.9, 1.3, 2, 40);
        assert_eq!(v[1], -4.0);
        assert_eq!(v[3], -7.0);
    }

    #[test]
    fn kitaev_phase_shape() {
        let v = kitaev_phase(2.5, 0.3, 3.0, 3);
        assert_eq!(v.len(), 18);
        assert!(v.iter().filter(|x| x.is_finite()).all(|x| *x >= 0.0 && x.fract() == 0.0));
    }
}
