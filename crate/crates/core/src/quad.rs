//! Adaptive Gauss–Kronrod (7/15) quadrature over finite and semi-infinite
//! ranges, for real and complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-14, max_intervals: 2000 }
    }
}

impl QuadConfig {
    pub fn tight() -> Self {
        Self { rel_tol: 1e-13, abs_tol: 1e-16, max_intervals: 20_000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd Kronrod nodes (indices 1, 3, 5, 7)
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Kronrod nodes on [a, b] as (x, Kronrod weight, embedded Gauss weight),
/// the Gauss weight being zero at nodes the 7-point rule does not use.
pub fn gk15_rule(a: f64, b: f64) -> [(f64, f64, f64); 15] {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let wg = if i % 2 == 1 { hw * WG[i / 2] } else { 0.0 };
        out[2 * i] = (c - hw * XGK[i], hw * WGK[i], wg);
        out[2 * i + 1] = (c + hw * XGK[i], hw * WGK[i], wg);
    }
    out[14] = (c, hw * WGK[7], hw * WG[3]);
    out
}

fn gk15<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = hw * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron = kron + s * WGK[i];
        if i % 2 == 1 {
            gauss = gauss + s * WG[i / 2];
        }
    }
    let value = kron * hw;
    let err = (kron - gauss).magnitude() * hw.abs();
    (value, err)
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive integral of `f` over the finite range [a, b].
pub fn integrate<T, F>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_panels(&mut f, &[a, b], cfg)
}

/// Same as [`integrate`] but seeded with the given breakpoints, which must be
/// increasing.
pub fn integrate_panels<T, F>(f: &mut F, breaks: &[f64], cfg: &QuadConfig) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let (panels, evals) = refine(f, breaks, cfg)?;
    let mut value = T::zero();
    let mut error = 0.0;
    for p in &panels {
        value = value + p.value;
        error += p.error;
    }
    Ok(Estimate { value, error, evals })
}

/// Final panel boundaries of an adaptive integration of `f`, sorted.
pub fn adaptive_breaks<T, F>(f: &mut F, breaks: &[f64], cfg: &QuadConfig) -> Result<Vec<f64>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let (panels, _) = refine(f, breaks, cfg)?;
    let mut out: Vec<f64> = panels.iter().map(|p| p.a).collect();
    out.extend(panels.iter().map(|p| p.b));
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

fn refine<T, F>(f: &mut F, breaks: &[f64], cfg: &QuadConfig) -> Result<(Vec<Panel<T>>, usize)>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut heap = BinaryHeap::new();
    let mut value = T::zero();
    let mut error = 0.0;
    let mut evals = 0;
    for w in breaks.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (v, e) = gk15(f, w[0], w[1]);
        evals += 15;
        value = value + v;
        error += e;
        heap.push(Panel { a: w[0], b: w[1], value: v, error: e });
    }
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.magnitude());
        if error <= tol {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Quadrature { value: value.magnitude(), error, evals });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) < 1e-14 * mid.abs().max(1e-300) {
            // interval cannot be refined further in floating point
            if worst.error > tol {
                return Err(Error::Quadrature { value: value.magnitude(), error, evals });
            }
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        evals += 30;
        value = value - worst.value + v1 + v2;
        error += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
    Ok((heap.into_vec(), evals))
}

/// Integral of `f` over [a, ∞) through the map ω = a + scale·x/(1−x).
pub fn integrate_semi_infinite<T, F>(
    mut f: F,
    a: f64,
    scale: f64,
    cfg: &QuadConfig,
) -> Result<Estimate<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let mut g = |x: f64| {
        let d = 1.0 - x;
        let w = a + scale * x / d;
        let jac = scale / (d * d);
        let v = f(w);
        if jac.is_finite() && w.is_finite() {
            v * jac
        } else {
            T::zero()
        }
    };
    integrate_panels(&mut g, &[0.0, 0.5, 0.9, 1.0], cfg)
}
