//! Matrix symbols of periodic band operators and certified extremum search
//! over `theta in [0, 2 pi)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{singular_values, Matrix};

/// Trigonometric matrix polynomial `a(theta) = sum_k coeffs_k e^{i k theta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    dim: usize,
    coeffs: Vec<(i64, Matrix)>,
}

impl Symbol {
    pub fn new(dim: usize, coeffs: Vec<(i64, Matrix)>) -> Self {
        debug_assert!(coeffs.iter().all(|(_, m)| m.rows() == dim && m.cols() == dim));
        Symbol { dim, coeffs }
    }

    /// Folds a `q`-periodic band operator, given through its entries, into a
    /// `(dq) x (dq)` block Laurent symbol. Block `(s, t)` of the coefficient
    /// `k` is `entry(base + s, base + t - k q)`.
    pub fn fold(
        block_dim: usize,
        period: usize,
        band_width: usize,
        base: i64,
        entry: impl Fn(i64, i64) -> Matrix,
    ) -> Symbol {
        let q = period as i64;
        let d = block_dim;
        let reach = (band_width as i64 + q - 1) / q;
        let mut coeffs = Vec::new();
        for k in -reach..=reach {
            let mut m = Matrix::zeros(d * period, d * period);
            for s in 0..q {
                for t in 0..q {
                    let i = base + s;
                    let j = base + t - k * q;
                    if (i - j).unsigned_abs() as usize > band_width {
                        continue;
                    }
                    let block = entry(i, j);
                    if !block.is_zero() {
                        m.set_block(s as usize * d, t as usize * d, &block);
                    }
                }
            }
            if !m.is_zero() {
                coeffs.push((k, m));
            }
        }
        Symbol::new(d * period, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficients(&self) -> &[(i64, Matrix)] {
        &self.coeffs
    }

    pub fn eval(&self, theta: f64) -> Matrix {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim * self.dim];
        for (k, m) in &self.coeffs {
            let phase = Complex64::from_polar(1.0, *k as f64 * theta);
            for (o, z) in out.iter_mut().zip(m.data()) {
                *o += z * phase;
            }
        }
        Matrix::new(self.dim, self.dim, out).expect("square symbol")
    }

    /// `a(theta) - lambda I`.
    pub fn eval_shifted(&self, theta: f64, lambda: Complex64) -> Matrix {
        let mut m = self.eval(theta);
        for i in 0..self.dim {
            m.set(i, i, m.get(i, i) - lambda);
        }
        m
    }

    /// Upper bound on the Lipschitz constant of `theta -> a(theta)` in the
    /// operator norm, hence of every singular value of `a(theta)`.
    pub fn lipschitz(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, m)| k.unsigned_abs() as f64 * m.frobenius_norm())
            .sum()
    }
}

/// Parameters of the extremum search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Uniform grid size.
    pub grid: usize,
    /// Number of grid-local extrema refined by golden-section search.
    pub refine: usize,
    /// Requested certification gap.
    pub cert_tol: f64,
    /// Maximum number of extra evaluations spent on certification.
    pub cert_budget: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            grid: 1024,
            refine: 8,
            cert_tol: 1e-7,
            cert_budget: 1 << 13,
        }
    }
}

impl SearchOptions {
    /// Coarser grid plus local refinement only; used for per-node grid work.
    pub fn uncertified() -> Self {
        SearchOptions {
            grid: 128,
            refine: 4,
            cert_budget: 0,
            ..Self::default()
        }
    }
}

/// Result of a minimization over the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub theta: f64,
    pub value: f64,
    /// `value - certified_gap` is a proven lower bound for a minimum (upper
    /// bound for a maximum) given the Lipschitz constant.
    pub certified_gap: f64,
}

/// Minimizes a `lipschitz`-Lipschitz function on the circle.
///
/// The value comes from a uniform grid refined by golden-section search
/// around the best grid-local minima. A Lipschitz branch-and-bound then
/// tries to certify it within `cert_tol` using at most `cert_budget`
/// further evaluations; the achieved gap is reported.
pub fn minimize_on_circle(
    f: impl Fn(f64) -> Result<f64>,
    lipschitz: f64,
    opts: &SearchOptions,
) -> Result<Extremum> {
    let n = opts.grid.max(8);
    let h = 2.0 * PI / n as f64;
    let values: Vec<f64> = (0..n).map(|i| f(i as f64 * h)).collect::<Result<_>>()?;

    let mut best_theta = 0.0;
    let mut best = f64::INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v < best {
            best = v;
            best_theta = i as f64 * h;
        }
    }

    let mut minima: Vec<usize> = (0..n)
        .filter(|&i| {
            let prev = values[(i + n - 1) % n];
            let next = values[(i + 1) % n];
            values[i] <= prev && values[i] <= next
        })
        .collect();
    minima.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    for &i in minima.iter().take(opts.refine) {
        let center = i as f64 * h;
        let (theta, value) = golden_section(&f, center - h, center + h)?;
        if value < best {
            best = value;
            best_theta = theta;
        }
    }

    if lipschitz == 0.0 {
        return Ok(Extremum {
            theta: best_theta,
            value: best,
            certified_gap: 0.0,
        });
    }

    // branch and bound over cells (center, half width, value at center)
    let mut cells: Vec<(f64, f64, f64)> = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (i as f64 * h, h / 2.0, v))
        .collect();
    let mut budget = opts.cert_budget;
    loop {
        cells.retain(|&(_, half, v)| v - lipschitz * half < best - opts.cert_tol);
        if cells.is_empty() || budget < 2 * cells.len() {
            break;
        }
        let mut next = Vec::with_capacity(2 * cells.len());
        for &(center, half, _) in &cells {
            let q = half / 2.0;
            for theta in [center - q, center + q] {
                let v = f(theta)?;
                if v < best {
                    best = v;
                    best_theta = theta;
                }
                next.push((theta, q, v));
            }
        }
        budget -= next.len();
        cells = next;
    }
    let lower = cells
        .iter()
        .map(|&(_, half, v)| v - lipschitz * half)
        .fold(best - opts.cert_tol, f64::min);
    let certified_gap = (best - lower).max(0.0);
    Ok(Extremum {
        theta: best_theta.rem_euclid(2.0 * PI),
        value: best,
        certified_gap,
    })
}

/// Maximizes a `lipschitz`-Lipschitz function on the circle.
pub fn maximize_on_circle(
    f: impl Fn(f64) -> Result<f64>,
    lipschitz: f64,
    opts: &SearchOptions,
) -> Result<Extremum> {
    let m = minimize_on_circle(|t| f(t).map(|v| -v), lipschitz, opts)?;
    Ok(Extremum {
        theta: m.theta,
        value: -m.value,
        certified_gap: m.certified_gap,
    })
}

fn golden_section(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > 1e-10 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// `min_theta sigma_min(a(theta) - lambda I)`.
pub fn min_sigma_min(symbol: &Symbol, lambda: Complex64, opts: &SearchOptions) -> Result<Extremum> {
    minimize_on_circle(
        |t| Ok(*singular_values(&symbol.eval_shifted(t, lambda))?.last().unwrap()),
        symbol.lipschitz(),
        opts,
    )
}

/// `max_theta sigma_max(a(theta))`.
pub fn max_sigma_max(symbol: &Symbol, opts: &SearchOptions) -> Result<Extremum> {
    maximize_on_circle(
        |t| Ok(singular_values(&symbol.eval(t))?[0]),
        symbol.lipschitz(),
        opts,
    )
}
