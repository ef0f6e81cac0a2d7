//! One-period evolution of a two-band model switched between h₁(k)·σ and
//! h₂(k)·σ, and the conditions under which its quasienergy gap closes.

use std::f64::consts::PI;

pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

fn unit(a: Vec3) -> Vec3 {
    let n = norm(a);
    if n == 0.0 {
        [0.0; 3]
    } else {
        [a[0] / n, a[1] / n, a[2] / n]
    }
}

/// U_T = e^{−iH₂T₂}e^{−iH₁T₁} = ε·I + i r·σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBandFloquet {
    pub eps: f64,
    pub r: Vec3,
    pub period: f64,
}

impl TwoBandFloquet {
    /// Positive quasienergy of the upper band, arccos(ε)/T ∈ [0, π/T].
    pub fn quasienergy(&self) -> f64 {
        self.eps.clamp(-1.0, 1.0).acos() / self.period
    }

    /// h_eff = −arccos(ε) r̂ / T; `None` where |r| = 0 and the direction is
    /// undefined.
    pub fn h_eff(&self) -> Option<Vec3> {
        let n = norm(self.r);
        if n == 0.0 {
            return None;
        }
        let s = -self.eps.clamp(-1.0, 1.0).acos() / (self.period * n);
        Some([s * self.r[0], s * self.r[1], s * self.r[2]])
    }

    /// Direct gap at quasienergy 0 and at π/T.
    pub fn gaps(&self) -> (f64, f64) {
        let e = self.quasienergy();
        (2.0 * e, 2.0 * (PI / self.period - e))
    }
}

pub fn two_band_floquet(h1: Vec3, h2: Vec3, t1: f64, t2: f64) -> TwoBandFloquet {
    let (a1, a2) = (norm(h1) * t1, norm(h2) * t2);
    let (u1, u2) = (unit(h1), unit(h2));
    let (c1, s1, c2, s2) = (a1.cos(), a1.sin(), a2.cos(), a2.sin());
    let eps = c1 * c2 - dot(u1, u2) * s1 * s2;
    let x = cross(u1, u2);
    let r = [0, 1, 2].map(|i| x[i] * s1 * s2 - u2[i] * c1 * s2 - u1[i] * c2 * s1);
    TwoBandFloquet { eps, r, period: t1 + t2 }
}

/// Where in the spectrum a closing happens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosingEnergy {
    Zero,
    PiOverT,
}

/// Which analytic condition explains a gap closing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosingCondition {
    /// T_j|h_j| = n_j π for both pieces
    Separate { n1: i64, n2: i64 },
    /// ĥ₁·ĥ₂ = sign·1 and T₁|h₁| + sign·T₂|h₂| = nπ
    Collinear { sign: i8, n: i64 },
    /// matches neither within tolerance
    Anomaly,
}

impl ClosingCondition {
    pub fn energy(&self) -> Option<ClosingEnergy> {
        let n = match *self {
            ClosingCondition::Separate { n1, n2 } => n1 + n2,
            ClosingCondition::Collinear { n, .. } => n,
            ClosingCondition::Anomaly => return None,
        };
        Some(if n.rem_euclid(2) == 0 { ClosingEnergy::Zero } else { ClosingEnergy::PiOverT })
    }
}

fn near_multiple_of_pi(x: f64, tol: f64) -> Option<i64> {
    let n = (x / PI).round();
    ((x - n * PI).abs() <= tol).then_some(n as i64)
}

/// Explain a closing found at h₁, h₂. `tol` applies to the phases T_j|h_j|
/// (in radians) and to 1 − |ĥ₁·ĥ₂|.
pub fn classify_closing(h1: Vec3, h2: Vec3, t1: f64, t2: f64, tol: f64) -> ClosingCondition {
    let (a1, a2) = (norm(h1) * t1, norm(h2) * t2);
    if let (Some(n1), Some(n2)) = (near_multiple_of_pi(a1, tol), near_multiple_of_pi(a2, tol)) {
        return ClosingCondition::Separate { n1, n2 };
    }
    let c = dot(unit(h1), unit(h2));
    if 1.0 - c.abs() <= tol {
        let sign: i8 = if c > 0.0 { 1 } else { -1 };
        if let Some(n) = near_multiple_of_pi(a1 + f64::from(sign) * a2, tol) {
            return ClosingCondition::Collinear { sign, n };
        }
    }
    ClosingCondition::Anomaly
}
