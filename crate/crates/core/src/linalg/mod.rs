//! Dense complex linear algebra.
//!
//! Everything downstream (window compressions, finite sections, symbol
//! evaluations) reduces to small dense matrices, so this module only needs a
//! row-major complex matrix, a one-sided Jacobi SVD and a handful of helpers
//! built on top of it.

mod svd;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use svd::{singular_values, svd, Svd, JACOBI_MAX_SWEEPS, JACOBI_TOLERANCE};

/// Relative threshold below which [`solve`] reports a singular matrix.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// The exponent `p` of the sequence space `l^p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    One,
    Two,
    Infinity,
}

impl Exponent {
    pub fn as_str(self) -> &'static str {
        match self {
            Exponent::One => "1",
            Exponent::Two => "2",
            Exponent::Infinity => "inf",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" => Some(Exponent::One),
            "2" => Some(Exponent::Two),
            "inf" | "infinity" | "∞" => Some(Exponent::Infinity),
            _ => None,
        }
    }

    /// `p`-norm of a vector of complex scalars.
    pub fn vector_norm(self, v: &[Complex64]) -> f64 {
        match self {
            Exponent::One => v.iter().map(|z| z.norm()).sum(),
            Exponent::Two => v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            Exponent::Infinity => v.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "entry ({}, {}) is not finite",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Complex64::new(1.0, 0.0))
    }

    /// `c` times the `n x n` identity.
    pub fn scalar(n: usize, c: Complex64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: Complex64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols]
                .copy_from_slice(&block.data[i * block.cols..(i + 1) * block.cols]);
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    /// Drops rows and columns that are identically zero. Singular values
    /// other than the extra zeros are unchanged.
    pub fn without_zero_lines(&self) -> Matrix {
        let keep_rows: Vec<usize> = (0..self.rows)
            .filter(|&i| (0..self.cols).any(|j| self.get(i, j) != Complex64::new(0.0, 0.0)))
            .collect();
        let keep_cols: Vec<usize> = (0..self.cols)
            .filter(|&j| (0..self.rows).any(|i| self.get(i, j) != Complex64::new(0.0, 0.0)))
            .collect();
        Matrix::from_fn(keep_rows.len(), keep_cols.len(), |i, j| {
            self.get(keep_rows[i], keep_cols[j])
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

/// Smallest of the `min(rows, cols)` singular values. For tall matrices this
/// is `min ||Mx||` over unit `x`.
pub fn sigma_min(m: &Matrix) -> Result<f64> {
    nonempty(m)?;
    Ok(singular_values(m)?.last().copied().unwrap_or(0.0))
}

/// Largest singular value, i.e. the induced 2-norm.
pub fn sigma_max(m: &Matrix) -> Result<f64> {
    nonempty(m)?;
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

fn nonempty(m: &Matrix) -> Result<()> {
    if m.rows == 0 || m.cols == 0 {
        Err(Error::EmptyInput("matrix has no entries".into()))
    } else {
        Ok(())
    }
}

/// Solves `M x = b` for square `M` through its SVD.
///
/// Fails with [`Error::Singular`] when `sigma_min < 1e-12 * sigma_max`.
pub fn solve(m: &Matrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::InvalidMatrix(format!(
            "solve needs a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if b.len() != m.rows {
        return Err(Error::InvalidMatrix(format!(
            "right-hand side has length {}, expected {}",
            b.len(),
            m.rows
        )));
    }
    nonempty(m)?;
    let dec = svd(m)?;
    let smax = dec.singular_values[0];
    let smin = *dec.singular_values.last().unwrap();
    if smax == 0.0 || smin < SINGULARITY_THRESHOLD * smax {
        return Err(Error::Singular { sigma_min: smin });
    }
    let n = m.rows;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for (k, c) in coeffs.iter_mut().enumerate() {
        let dot: Complex64 = (0..n).map(|i| dec.u.get(i, k).conj() * b[i]).sum();
        *c = dot / dec.singular_values[k];
    }
    Ok((0..n)
        .map(|i| (0..n).map(|k| dec.v.get(i, k) * coeffs[k]).sum())
        .collect())
}

/// Induced operator norm for `p` in {1, 2, inf}.
pub fn induced_p_norm(m: &Matrix, p: Exponent) -> Result<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Ok(0.0);
    }
    Ok(match p {
        Exponent::One => (0..m.cols)
            .map(|j| (0..m.rows).map(|i| m.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max),
        Exponent::Infinity => (0..m.rows)
            .map(|i| (0..m.cols).map(|j| m.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max),
        Exponent::Two => sigma_max(m)?,
    })
}

/// Hermitian inner product `<x, y> = sum conj(x_i) y_i`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pair(mu: f64) -> Matrix {
        Matrix::from_real_rows(&[&[mu, 1.0], &[1.0, mu]])
    }

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(Matrix::new(2, 2, vec![c(1.0); 3]).is_err());
        assert!(Matrix::new(1, 1, vec![Complex64::new(f64::NAN, 0.0)]).is_err());
        assert!(Matrix::new(1, 2, vec![c(1.0), Complex64::new(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn extreme_singular_values() {
        let i3 = Matrix::identity(3);
        assert!((sigma_min(&i3).unwrap() - 1.0).abs() < 1e-15);
        assert!((sigma_max(&i3).unwrap() - 1.0).abs() < 1e-15);
        assert!((sigma_min(&pair(0.5)).unwrap() - 0.5).abs() < 1e-14);
        let ones = Matrix::from_fn(4, 2, |_, _| c(1.0));
        assert!(sigma_min(&ones).unwrap().abs() < 1e-14);
        assert!(sigma_min(&Matrix::zeros(0, 3)).is_err());
    }

    #[test]
    fn solve_examples() {
        let x = solve(&Matrix::scalar(3, c(2.0)), &[c(1.0), c(0.0), c(0.0)]).unwrap();
        assert!((x[0] - c(0.5)).norm() < 1e-15 && x[1].norm() < 1e-15 && x[2].norm() < 1e-15);

        // B^{-1} = (mu^2 - 1)^{-1} [[mu, -1], [-1, mu]] at mu = 1/4.
        let x = solve(&pair(0.25), &[c(1.0), c(0.0)]).unwrap();
        assert!((x[0] - c(-4.0 / 15.0)).norm() < 1e-14);
        assert!((x[1] - c(16.0 / 15.0)).norm() < 1e-14);

        // Odd sections of the block example at mu = 0 contain a zero row.
        let singular = Matrix::from_real_rows(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
        match solve(&singular, &[c(1.0), c(1.0), c(1.0)]) {
            Err(Error::Singular { sigma_min }) => assert!(sigma_min < 1e-12),
            other => panic!("expected singular error, got {other:?}"),
        }
        assert!(solve(&Matrix::zeros(2, 3), &[c(1.0), c(1.0)]).is_err());
    }

    #[test]
    fn solve_residual_is_small() {
        let m = Matrix::from_fn(5, 5, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, (i as f64 - j as f64) * 0.3)
        });
        let b: Vec<_> = (0..5).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let x = solve(&m, &b).unwrap();
        let r: Vec<_> = m.mul_vec(&x).iter().zip(&b).map(|(a, b)| a - b).collect();
        let norm_m = sigma_max(&m).unwrap();
        let norm_x = Exponent::Two.vector_norm(&x);
        assert!(Exponent::Two.vector_norm(&r) <= 1e-10 * norm_m * norm_x);
    }

    #[test]
    fn induced_norms() {
        for p in [Exponent::One, Exponent::Two, Exponent::Infinity] {
            assert!((induced_p_norm(&Matrix::identity(3), p).unwrap() - 1.0).abs() < 1e-15);
        }
        let m = Matrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(induced_p_norm(&m, Exponent::Infinity).unwrap(), 2.0);
        assert_eq!(induced_p_norm(&m, Exponent::One).unwrap(), 1.0);
        assert!((induced_p_norm(&m, Exponent::Two).unwrap() - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!(Exponent::parse("inf"), Some(Exponent::Infinity));
        assert_eq!(Exponent::parse(" 2 "), Some(Exponent::Two));
        assert_eq!(Exponent::parse("3"), None);
    }

    #[test]
    fn zero_line_removal() {
        let m = Matrix::from_real_rows(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 2.0]]);
        let r = m.without_zero_lines();
        assert_eq!((r.rows(), r.cols()), (1, 2));
    }
}
