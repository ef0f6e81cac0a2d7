//! Dense eigendecompositions and matrix exponentials on top of faer.

use faer::{c64, Mat, MatRef, Side};

use crate::error::{Error, Result};

pub type CMat = Mat<c64>;

pub fn sym_eigen(h: MatRef<'_, f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let e = h.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let vals = (0..h.nrows()).map(|i| e.S()[i]).collect();
    Ok((vals, e.U().to_owned()))
}

pub fn herm_eigen(h: MatRef<'_, c64>) -> Result<(Vec<f64>, CMat)> {
    let e = h.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let vals = (0..h.nrows()).map(|i| e.S()[i].re).collect();
    Ok((vals, e.U().to_owned()))
}

pub fn to_complex(a: MatRef<'_, f64>) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| c64::new(a[(i, j)], 0.0))
}

/// exp(−iHt) for a real symmetric H.
pub fn sym_propagator(h: MatRef<'_, f64>, t: f64) -> Result<CMat> {
    let (vals, v) = sym_eigen(h)?;
    let n = h.nrows();
    let phases: Vec<c64> = vals.iter().map(|&e| c64::cis(-e * t)).collect();
    let left = Mat::from_fn(n, n, |i, j| phases[j] * v[(i, j)]);
    let vt = Mat::from_fn(n, n, |i, j| c64::new(v[(j, i)], 0.0));
    Ok(&left * &vt)
}

/// exp(−iHt) for a complex Hermitian H.
pub fn herm_propagator(h: MatRef<'_, c64>, t: f64) -> Result<CMat> {
    let (vals, v) = herm_eigen(h)?;
    let n = h.nrows();
    let left = Mat::from_fn(n, n, |i, j| c64::cis(-vals[j] * t) * v[(i, j)]);
    Ok(&left * v.adjoint())
}

fn norm1(a: MatRef<'_, c64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential of a general complex matrix by Taylor expansion with
/// scaling and squaring.
pub fn expm(a: MatRef<'_, c64>) -> CMat {
    let n = a.nrows();
    let nrm = norm1(a);
    let mut s = 0;
    if nrm > 0.25 {
        s = (nrm / 0.25).log2().ceil() as i32;
    }
    let scale = 0.5f64.powi(s);
    let x = Mat::from_fn(n, n, |i, j| a[(i, j)] * scale);
    let mut result = Mat::<c64>::identity(n, n);
    let mut term = Mat::<c64>::identity(n, n);
    // ‖x‖ ≤ 1/4, so 18 terms reach well below machine precision
    for k in 1..=18 {
        let next = &term * &x;
        let inv = 1.0 / k as f64;
        term = Mat::from_fn(n, n, |i, j| next[(i, j)] * inv);
        result = &result + &term;
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

pub fn general_eigen(a: MatRef<'_, c64>) -> Result<(Vec<c64>, CMat)> {
    let e = a.eigen().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let n = a.nrows();
    let vals: Vec<c64> = (0..n).map(|i| e.S()[i]).collect();
    let mut v = e.U().to_owned();
    for j in 0..n {
        let nrm = (0..n).map(|i| v[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if nrm > 0.0 {
            for i in 0..n {
                v[(i, j)] /= nrm;
            }
        }
    }
    Ok((vals, v))
}

pub fn general_eigenvalues(a: MatRef<'_, c64>) -> Result<Vec<c64>> {
    a.eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))
}

/// Eigenpairs of a unitary matrix with the eigenvectors of each cluster of
/// (numerically) degenerate eigenvalues re-orthonormalised. Output is sorted
/// by eigenphase.
pub fn unitary_eigen(u: MatRef<'_, c64>, cluster_tol: f64) -> Result<(Vec<c64>, CMat)> {
    let (vals, vecs) = general_eigen(u)?;
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].arg().total_cmp(&vals[b].arg()));
    let vals: Vec<c64> = order.iter().map(|&k| vals[k]).collect();
    let mut v = Mat::from_fn(n, n, |i, j| vecs[(i, order[j])]);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (vals[end] - vals[end - 1]).norm() < cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt(&mut v, start, end);
        }
        start = end;
    }
    // wrap-around cluster across the branch cut of arg
    if n > 1 && (vals[0] - vals[n - 1]).norm() < cluster_tol {
        let mut lo = 0;
        while lo + 1 < n && (vals[lo + 1] - vals[lo]).norm() < cluster_tol {
            lo += 1;
        }
        let mut hi = n - 1;
        while hi > lo + 1 && (vals[hi] - vals[hi - 1]).norm() < cluster_tol {
            hi -= 1;
        }
        let idx: Vec<usize> = (hi..n).chain(0..=lo).collect();
        gram_schmidt_indices(&mut v, &idx);
    }
    Ok((vals, v))
}

fn gram_schmidt(v: &mut CMat, start: usize, end: usize) {
    let idx: Vec<usize> = (start..end).collect();
    gram_schmidt_indices(v, &idx);
}

fn gram_schmidt_indices(v: &mut CMat, idx: &[usize]) {
    let n = v.nrows();
    for (a, &j) in idx.iter().enumerate() {
        for _pass in 0..2 {
            for &k in &idx[..a] {
                let mut dot = c64::new(0.0, 0.0);
                for i in 0..n {
                    dot += v[(i, k)].conj() * v[(i, j)];
                }
                for i in 0..n {
                    let vk = v[(i, k)];
                    v[(i, j)] -= dot * vk;
                }
            }
        }
        let nrm = (0..n).map(|i| v[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            v[(i, j)] /= nrm;
        }
    }
}

/// max |(U†U − I)ᵢⱼ|
pub fn unitarity_defect(u: MatRef<'_, c64>) -> f64 {
    let p = u.adjoint() * u;
    let n = u.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - c64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub fn matvec(a: MatRef<'_, c64>, x: &[c64]) -> Vec<c64> {
    let n = a.nrows();
    let mut out = vec![c64::new(0.0, 0.0); n];
    for j in 0..a.ncols() {
        let xj = x[j];
        if xj == c64::new(0.0, 0.0) {
            continue;
        }
        let col = a.col(j);
        for i in 0..n {
            out[i] += col[i] * xj;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> CMat {
        Mat::from_fn(2, 2, |i, j| if i != j { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) })
    }

    #[test]
    fn expm_matches_pauli_rotation() {
        let theta: f64 = 2.3;
        let a = Mat::from_fn(2, 2, |i, j| pauli_x()[(i, j)] * c64::new(0.0, -theta));
        let e = expm(a.as_ref());
        assert!((e[(0, 0)] - c64::new(theta.cos(), 0.0)).norm() < 1e-14);
        assert!((e[(0, 1)] - c64::new(0.0, -theta.sin())).norm() < 1e-14);
    }

    #[test]
    fn propagators_agree_with_expm() {
        let n = 6;
        let h = Mat::from_fn(n, n, |i, j| ((i * 7 + j * 7 + i * j) % 5) as f64 * 0.3);
        let t = 1.7;
        let u1 = sym_propagator(h.as_ref(), t).unwrap();
        let a = Mat::from_fn(n, n, |i, j| c64::new(0.0, -t * h[(i, j)]));
        let u2 = expm(a.as_ref());
        let u3 = herm_propagator(to_complex(h.as_ref()).as_ref(), t).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((u1[(i, j)] - u2[(i, j)]).norm() < 1e-12);
                assert!((u1[(i, j)] - u3[(i, j)]).norm() < 1e-12);
            }
        }
        assert!(unitarity_defect(u1.as_ref()) < 1e-12);
    }

    #[test]
    fn degenerate_unitary_gets_orthonormal_modes() {
        // block diag(1, 1, X rotation) has a doubly degenerate eigenvalue 1
        let n = 4;
        let mut u = Mat::<c64>::identity(n, n);
        let th: f64 = 0.9;
        u[(2, 2)] = c64::new(th.cos(), 0.0);
        u[(3, 3)] = c64::new(th.cos(), 0.0);
        u[(2, 3)] = c64::new(0.0, -th.sin());
        u[(3, 2)] = c64::new(0.0, -th.sin());
        let (_, v) = unitary_eigen(u.as_ref(), 1e-8).unwrap();
        assert!(unitarity_defect(v.as_ref()) < 1e-12);
    }
}
