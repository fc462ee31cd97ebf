//! One-sided Jacobi SVD for complex matrices.
//!
//! Columns of a working copy are rotated pairwise until they are mutually
//! orthogonal; the column norms are then the singular values and the
//! accumulated rotations form `V`. Wide matrices are handled by decomposing
//! the adjoint.

use num_complex::Complex64;

use super::Matrix;
use crate::error::{Error, Result};

/// Maximum number of Jacobi sweeps before giving up.
pub const JACOBI_MAX_SWEEPS: usize = 60;
/// A column pair is considered orthogonal once `|<a_p, a_q>| <= tol * |a_p| |a_q|`.
pub const JACOBI_TOLERANCE: f64 = 1e-13;

/// Thin singular value decomposition `M = U diag(s) V*`.
///
/// For an `m x n` input with `k = min(m, n)`, `u` is `m x k` and `v` is
/// `n x k`, both with orthonormal columns (unitary when `M` is square).
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: Matrix,
    pub v: Matrix,
}

impl Svd {
    /// `U diag(s) V*`.
    pub fn reconstruct(&self) -> Matrix {
        let k = self.singular_values.len();
        let us = Matrix::from_fn(self.u.rows(), k, |i, j| self.u.get(i, j) * self.singular_values[j]);
        &us * &self.v.adjoint()
    }
}

/// Full thin SVD with singular vectors.
pub fn svd(m: &Matrix) -> Result<Svd> {
    if m.rows() >= m.cols() {
        let (s, u, v) = jacobi_tall(m, true)?;
        Ok(Svd {
            singular_values: s,
            u: u.expect("vectors requested"),
            v: v.expect("vectors requested"),
        })
    } else {
        let (s, u, v) = jacobi_tall(&m.adjoint(), true)?;
        Ok(Svd {
            singular_values: s,
            u: v.expect("vectors requested"),
            v: u.expect("vectors requested"),
        })
    }
}

/// Singular values only, sorted non-increasing.
///
/// Larger inputs are first reduced to the triangular factor of a pivoted QR
/// decomposition; Jacobi sweeps on `R*` converge in far fewer sweeps.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    let wide;
    let tall = if m.rows() >= m.cols() {
        m
    } else {
        wide = m.adjoint();
        &wide
    };
    let (s, _, _) = if tall.cols() >= QR_THRESHOLD {
        jacobi_tall(&pivoted_r(tall).adjoint(), false)?
    } else {
        jacobi_tall(tall, false)?
    };
    Ok(s)
}

const QR_THRESHOLD: usize = 12;

/// `R` of `M P = Q R` (Householder, column pivoting by remaining norm) for
/// a tall `M`; `n x n`.
fn pivoted_r(m: &Matrix) -> Matrix {
    let (rows, n) = (m.rows(), m.cols());
    let zero = Complex64::new(0.0, 0.0);
    let mut a = vec![zero; rows * n];
    for i in 0..rows {
        for j in 0..n {
            a[j * rows + i] = m.get(i, j);
        }
    }
    let mut norms: Vec<f64> = (0..n).map(|j| col_norm_sqr(&a[j * rows..(j + 1) * rows])).collect();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| norms[i].total_cmp(&norms[j])).unwrap_or(k);
        if piv != k {
            for i in 0..rows {
                a.swap(k * rows + i, piv * rows + i);
            }
            norms.swap(k, piv);
        }
        let col = &a[k * rows + k..(k + 1) * rows];
        let alpha = col_norm_sqr(col).sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = col[0];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        // v = x + phase * alpha e_1, H = I - 2 v v* / (v* v)
        let mut v: Vec<Complex64> = col.to_vec();
        v[0] += phase * alpha;
        let vv = col_norm_sqr(&v);
        for j in k..n {
            let c = &mut a[j * rows + k..(j + 1) * rows];
            let dot: Complex64 = v.iter().zip(c.iter()).map(|(x, y)| x.conj() * y).sum();
            let f = dot * (2.0 / vv);
            for (y, x) in c.iter_mut().zip(&v) {
                *y -= f * x;
            }
        }
        for j in k + 1..n {
            norms[j] = col_norm_sqr(&a[j * rows + k + 1..(j + 1) * rows]);
        }
    }
    Matrix::from_fn(n, n, |i, j| if i <= j { a[j * rows + i] } else { zero })
}

type Decomposition = (Vec<f64>, Option<Matrix>, Option<Matrix>);

fn jacobi_tall(m: &Matrix, vectors: bool) -> Result<Decomposition> {
    let rows = m.rows();
    let n = m.cols();
    debug_assert!(rows >= n);
    let zero = Complex64::new(0.0, 0.0);

    // column-major working copies
    let mut a = vec![zero; rows * n];
    for i in 0..rows {
        for j in 0..n {
            a[j * rows + i] = m.get(i, j);
        }
    }
    let mut v = if vectors {
        let mut v = vec![zero; n * n];
        for j in 0..n {
            v[j * n + j] = Complex64::new(1.0, 0.0);
        }
        v
    } else {
        Vec::new()
    };
    let mut norms: Vec<f64> = (0..n).map(|j| col_norm_sqr(&a[j * rows..(j + 1) * rows])).collect();

    // columns below this squared norm are numerically zero and left alone
    let negligible = (f64::EPSILON * f64::EPSILON) * norms.iter().sum::<f64>() * 1e-4;
    let mut converged = n < 2;
    let mut worst = 0.0f64;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        worst = 0.0;
        for j in 0..n {
            norms[j] = col_norm_sqr(&a[j * rows..(j + 1) * rows]);
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (alpha, beta) = (norms[p], norms[q]);
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let (head, tail) = a.split_at_mut(q * rows);
                let ap = &mut head[p * rows..(p + 1) * rows];
                let aq = &mut tail[..rows];
                let gamma: Complex64 = ap.iter().zip(aq.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                let scale = (alpha * beta).sqrt();
                if g <= JACOBI_TOLERANCE * scale {
                    continue;
                }
                worst = worst.max(g / scale);
                rotated = true;

                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(ap, aq, phase, c, s);
                norms[p] = (alpha - t * g).max(0.0);
                norms[q] = (beta + t * g).max(0.0);
                if vectors {
                    let (vh, vt) = v.split_at_mut(q * n);
                    rotate(&mut vh[p * n..(p + 1) * n], &mut vt[..n], phase, c, s);
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::KernelFailure { residual: worst });
    }

    let sigma: Vec<f64> = (0..n).map(|j| col_norm_sqr(&a[j * rows..(j + 1) * rows]).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let sorted: Vec<f64> = order.iter().map(|&j| sigma[j]).collect();

    if !vectors {
        return Ok((sorted, None, None));
    }

    let mut u = Matrix::zeros(rows, n);
    let mut vm = Matrix::zeros(n, n);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut deficient = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        for i in 0..n {
            vm.set(i, k, v[j * n + i]);
        }
        if sigma[j] > 0.0 {
            let col: Vec<Complex64> = a[j * rows..(j + 1) * rows].iter().map(|z| z / sigma[j]).collect();
            basis.push(col);
        } else {
            basis.push(Vec::new());
            deficient.push(k);
        }
    }
    // exactly zero singular values: complete U with an orthonormal basis
    for &k in &deficient {
        let mut found = None;
        for e in 0..rows {
            let mut cand = vec![zero; rows];
            cand[e] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for b in basis.iter().filter(|b| !b.is_empty()) {
                    let proj: Complex64 = b.iter().zip(&cand).map(|(x, y)| x.conj() * y).sum();
                    for (c, x) in cand.iter_mut().zip(b) {
                        *c -= proj * x;
                    }
                }
            }
            let nrm = col_norm_sqr(&cand).sqrt();
            if nrm > 0.5 {
                found = Some(cand.into_iter().map(|z| z / nrm).collect());
                break;
            }
        }
        basis[k] = found.expect("orthonormal completion exists for k <= rows");
    }
    for (k, col) in basis.iter().enumerate() {
        for i in 0..rows {
            u.set(i, k, col[i]);
        }
    }
    Ok((sorted, Some(u), Some(vm)))
}

#[inline]
fn col_norm_sqr(col: &[Complex64]) -> f64 {
    col.iter().map(|z| z.norm_sqr()).sum()
}

/// Applies `[a_p a_q] <- [a_p a_q] diag(1, conj(phase)) [[c, s], [-s, c]]`.
#[inline]
fn rotate(ap: &mut [Complex64], aq: &mut [Complex64], phase: Complex64, c: f64, s: f64) {
    let back = phase.conj();
    for (x, y) in ap.iter_mut().zip(aq.iter_mut()) {
        let xp = *x;
        let yq = *y * back;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix() {
        let s = singular_values(&Matrix::zeros(2, 2)).unwrap();
        assert_eq!(s, vec![0.0, 0.0]);
        let d = svd(&Matrix::zeros(3, 2)).unwrap();
        let utu = &d.u.adjoint() * &d.u;
        assert!((&utu - &Matrix::identity(2)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn hermitian_pair() {
        // eigenvalues mu +- 1, so sigma = |mu +- 1|
        let m = Matrix::from_real_rows(&[&[0.25, 1.0], &[1.0, 0.25]]);
        let s = singular_values(&m).unwrap();
        assert!((s[0] - 1.25).abs() < 1e-14);
        assert!((s[1] - 0.75).abs() < 1e-14);
    }

    #[test]
    fn wide_matrix_roundtrip() {
        let m = Matrix::from_fn(2, 4, |i, j| Complex64::new((i + 2 * j) as f64, (i as f64) - 0.5 * j as f64));
        let d = svd(&m).unwrap();
        assert_eq!(d.u.rows(), 2);
        assert_eq!(d.v.rows(), 4);
        assert!((&d.reconstruct() - &m).frobenius_norm() <= 1e-12 * m.frobenius_norm());
    }
}

#[cfg(test)]
mod qr_tests {
    use super::*;

    #[test]
    fn preconditioned_values_match_plain_jacobi() {
        let m = Matrix::from_fn(41, 37, |i, j| {
            let x = ((i * 7 + j * 13) % 17) as f64 - 8.0;
            Complex64::new(x / (1.0 + (i as f64 - j as f64).abs()), ((i * j) % 5) as f64 * 0.1)
        });
        let fast = singular_values(&m).unwrap();
        let (plain, _, _) = jacobi_tall(&m, false).unwrap();
        for (a, b) in fast.iter().zip(&plain) {
            assert!((a - b).abs() <= 1e-12 * plain[0], "{a} vs {b}");
        }
    }

    #[test]
    fn rank_deficient_input_converges() {
        let big = Matrix::from_fn(202, 198, |i, j| {
            Complex64::new(((i * 31 + j * 17) % 23) as f64 - 11.0, ((i + 2 * j) % 7) as f64)
        });
        let s = singular_values(&big).unwrap();
        let (plain, _, _) = jacobi_tall(&big, false).unwrap();
        assert!((s[0] - plain[0]).abs() <= 1e-10 * plain[0]);
        assert!(s[197] <= 1e-10 * s[0]);
    }
}
