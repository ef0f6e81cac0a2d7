use faer::{c64, Mat, MatRef};

use crate::error::{Error, Result};
use crate::linalg::herm_eigen;

const PHYSICAL_TOL: f64 = 1e-10;

fn check_density(rho: MatRef<'_, c64>, dim: usize) -> Result<()> {
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::InvalidParameter {
            name: "rho",
            reason: format!("expected {dim}x{dim}, got {}x{}", rho.nrows(), rho.ncols()),
        });
    }
    let mut tr = c64::new(0.0, 0.0);
    for i in 0..dim {
        tr += rho[(i, i)];
        for j in 0..dim {
            if (rho[(i, j)] - rho[(j, i)].conj()).norm() > PHYSICAL_TOL {
                return Err(Error::InvalidParameter { name: "rho", reason: "not Hermitian".into() });
            }
        }
    }
    if (tr - c64::new(1.0, 0.0)).norm() > PHYSICAL_TOL {
        return Err(Error::InvalidParameter { name: "rho", reason: format!("trace {tr} != 1") });
    }
    Ok(())
}

/// Eigenvalues of ρ below this are treated as roundoff and dropped from the
/// factor ρ = WW†.
const RANK_CUTOFF: f64 = 1e-13;

/// Wootters concurrence of a two-qubit density matrix.
///
/// With ρ = WW† the decreasing λᵢ are the singular values of the symmetric
/// matrix Wᵀ(σ_y⊗σ_y)W, which avoids square roots of roundoff-level
/// eigenvalues for rank-deficient states.
pub fn concurrence(rho: MatRef<'_, c64>) -> Result<f64> {
    check_density(rho, 4)?;
    let (vals, v) = herm_eigen(rho)?;
    let min_eig = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig < -PHYSICAL_TOL {
        return Err(Error::InvalidParameter {
            name: "rho",
            reason: format!("negative eigenvalue {min_eig:e}"),
        });
    }
    let kept: Vec<usize> = (0..4).filter(|&k| vals[k] > RANK_CUTOFF).collect();
    let w = Mat::from_fn(4, kept.len(), |i, j| v[(i, kept[j])] * vals[kept[j]].sqrt());
    // σ_y⊗σ_y is real antidiagonal with signs (−1, 1, 1, −1) from top right
    let yy = |i: usize| if i == 0 || i == 3 { -1.0 } else { 1.0 };
    let yw = Mat::from_fn(4, kept.len(), |i, j| w[(3 - i, j)] * yy(i));
    let b = w.transpose() * &yw;
    let mut lambda = b.singular_values().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    lambda.resize(4, 0.0);
    lambda.sort_by(|a, b| b.total_cmp(a));
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).clamp(0.0, 1.0))
}

/// ⟨ψ|ρ|ψ⟩ for a normalised pure reference state.
pub fn fidelity(rho: MatRef<'_, c64>, psi: &[c64]) -> f64 {
    let n = psi.len();
    let mut acc = c64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += psi[i].conj() * rho[(i, j)] * psi[j];
        }
    }
    acc.re.clamp(0.0, 1.0)
}

/// ½‖ρ₁ − ρ₂‖₁
pub fn trace_distance(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> Result<f64> {
    let n = a.nrows();
    let d = Mat::from_fn(n, n, |i, j| a[(i, j)] - b[(i, j)]);
    let (vals, _) = herm_eigen(d.as_ref())?;
    Ok(0.5 * vals.iter().map(|x| x.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::states::ghz_state;
    use num_complex::Complex64;

    fn pure(psi: [c64; 4]) -> Mat<c64> {
        Mat::from_fn(4, 4, |i, j| psi[i] * psi[j].conj())
    }

    #[test]
    fn bell_and_product() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = c64::new(0.0, 0.0);
        let bell = pure([c64::new(s, 0.0), z, z, c64::new(s, 0.0)]);
        assert!((concurrence(bell.as_ref()).unwrap() - 1.0).abs() < 1e-12);
        let prod = pure([c64::new(0.6, 0.0), c64::new(0.0, 0.8), z, z]);
        assert!(concurrence(prod.as_ref()).unwrap() < 1e-14);
    }

    #[test]
    fn decayed_bell_state_follows_fourth_power() {
        for &r in &[1.0, 0.9, 0.6, 0.3, 0.05] {
            let u = Complex64::from_polar(r, 0.4);
            let rho = ghz_state(2, u).unwrap();
            let c = concurrence(rho.as_ref()).unwrap();
            assert!((c - r.powi(4)).abs() < 1e-12, "|u| = {r}: {c}");
        }
    }

    #[test]
    fn rejects_unnormalised() {
        let m = Mat::<c64>::identity(4, 4);
        assert!(concurrence(m.as_ref()).is_err());
    }

    #[test]
    fn fidelity_of_mixed_qubit() {
        let rho = Mat::from_fn(2, 2, |i, j| if i == j { c64::new(0.5, 0.0) } else { c64::new(0.0, 0.0) });
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [c64::new(s, 0.0), c64::new(s, 0.0)];
        assert!((fidelity(rho.as_ref(), &plus) - 0.5).abs() < 1e-15);
    }
}
