use num_complex::Complex64;

use super::BandOperator;
use crate::linalg::{Exponent, Matrix};

/// Closed integer interval `[lo, hi]`; empty when `hi < lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Self {
        Interval { lo, hi }
    }

    /// `[-n, n]`.
    pub fn centered(n: i64) -> Self {
        Interval { lo: -n, hi: n }
    }

    /// `len` consecutive integers starting at `start`.
    pub fn starting_at(start: i64, len: usize) -> Self {
        Interval {
            lo: start,
            hi: start + len as i64 - 1,
        }
    }

    pub fn len(&self) -> usize {
        if self.hi < self.lo {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn expand(&self, by: i64) -> Self {
        Interval {
            lo: self.lo - by,
            hi: self.hi + by,
        }
    }

    pub fn intersect(&self, other: &Interval) -> Self {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

/// A finitely supported vector `x` with `supp x` inside
/// `[start, start + len)`, stored as `len` blocks of size `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowVector {
    pub start: i64,
    pub block_dim: usize,
    pub data: Vec<Complex64>,
}

impl WindowVector {
    pub fn new(start: i64, block_dim: usize, data: Vec<Complex64>) -> Self {
        assert!(block_dim > 0 && data.len() % block_dim == 0, "data must hold whole blocks");
        WindowVector {
            start,
            block_dim,
            data,
        }
    }

    pub fn zeros(start: i64, block_dim: usize, len: usize) -> Self {
        Self::new(start, block_dim, vec![Complex64::new(0.0, 0.0); len * block_dim])
    }

    /// Unit vector `e_k` with a one in block component `component`.
    pub fn unit(k: i64, block_dim: usize, component: usize) -> Self {
        let mut v = Self::zeros(k, block_dim, 1);
        v.data[component] = Complex64::new(1.0, 0.0);
        v
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.data.len() / self.block_dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn window(&self) -> Interval {
        Interval::starting_at(self.start, self.len())
    }

    pub fn block(&self, k: i64) -> &[Complex64] {
        let idx = (k - self.start) as usize * self.block_dim;
        &self.data[idx..idx + self.block_dim]
    }

    /// Block at global position `k`, zero outside the window.
    pub fn value_at(&self, k: i64) -> Vec<Complex64> {
        if self.window().contains(k) {
            self.block(k).to_vec()
        } else {
            vec![Complex64::new(0.0, 0.0); self.block_dim]
        }
    }

    /// `l^p` norm of the sequence of block `l^p` norms.
    pub fn norm(&self, p: Exponent) -> f64 {
        let blocks: Vec<Complex64> = self
            .data
            .chunks(self.block_dim)
            .map(|b| Complex64::new(p.vector_norm(b), 0.0))
            .collect();
        p.vector_norm(&blocks)
    }

    /// Re-expresses the vector on a larger window.
    pub fn embed(&self, window: Interval) -> WindowVector {
        let mut out = WindowVector::zeros(window.lo, self.block_dim, window.len());
        for k in self.window().iter() {
            if window.contains(k) {
                let dst = (k - window.lo) as usize * self.block_dim;
                out.data[dst..dst + self.block_dim].copy_from_slice(self.block(k));
            }
        }
        out
    }

    /// `a x + b y` on the union of the windows.
    pub fn combine(a: Complex64, x: &WindowVector, b: Complex64, y: &WindowVector) -> WindowVector {
        assert_eq!(x.block_dim, y.block_dim);
        let window = Interval::new(x.start.min(y.start), x.window().hi.max(y.window().hi));
        let (xe, ye) = (x.embed(window), y.embed(window));
        let data = xe.data.iter().zip(&ye.data).map(|(u, v)| a * u + b * v).collect();
        WindowVector::new(window.lo, x.block_dim, data)
    }

    /// `sum conj(x_i) y_i` over all positions.
    pub fn inner(&self, other: &WindowVector) -> Complex64 {
        let window = Interval::new(self.start.min(other.start), self.window().hi.max(other.window().hi));
        let (a, b) = (self.embed(window), other.embed(window));
        crate::linalg::inner(&a.data, &b.data)
    }
}

/// The finite matrix of `A` restricted to `row_window x col_window`.
#[derive(Debug, Clone)]
pub struct WindowCompression {
    pub row_window: Interval,
    pub col_window: Interval,
    pub matrix: Matrix,
}

impl BandOperator {
    /// Dense matrix of the blocks `entry(i, j)` for `i` in `rows`, `j` in `cols`.
    pub fn compression(&self, rows: Interval, cols: Interval) -> Matrix {
        let d = self.block_dim();
        let w = self.band_width() as i64;
        let mut m = Matrix::zeros(rows.len() * d, cols.len() * d);
        for (r, i) in rows.iter().enumerate() {
            let near = cols.intersect(&Interval::new(i - w, i + w));
            for j in near.iter() {
                let block = self.entry(i, j);
                if !block.is_zero() {
                    m.set_block(r * d, (j - cols.lo) as usize * d, &block);
                }
            }
        }
        m
    }

    /// Columns `cols`, rows `cols` expanded by the band-width, so that the
    /// matrix captures `A chi_cols` completely.
    pub fn window_compression(&self, cols: Interval) -> WindowCompression {
        let rows = cols.expand(self.band_width() as i64);
        WindowCompression {
            row_window: rows,
            col_window: cols,
            matrix: self.compression(rows, cols),
        }
    }

    /// Finite section `P_n A P_n` as a `(2n+1)d` square matrix.
    pub fn truncate(&self, n: usize) -> Matrix {
        let window = Interval::centered(n as i64);
        self.compression(window, window)
    }

    /// Exact product `A x`; the output window is the input window expanded by
    /// the band-width.
    pub fn apply(&self, x: &WindowVector) -> WindowVector {
        assert_eq!(x.block_dim, self.block_dim(), "block dimension mismatch");
        let cols = x.window();
        let comp = self.window_compression(cols);
        WindowVector::new(comp.row_window.lo, self.block_dim(), comp.matrix.mul_vec(&x.data))
    }
}
