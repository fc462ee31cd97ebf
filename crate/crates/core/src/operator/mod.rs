//! Band operators `A = sum_a a_a V_a` on `l^p(Z, C^d)`.
//!
//! A diagonal with offset `a` stores the sequence `a_a(i)`, and contributes the
//! block `entry(i, i - a) = a_a(i)`. So `V_1` (the forward shift, mapping
//! `x_i` to position `i + 1`) is the single diagonal at offset 1 with value `I`.

mod algebra;
mod window;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Exponent, Matrix};
use crate::util::{lcm, splitmix64, unit_interval};

pub use window::{Interval, WindowCompression, WindowVector};

/// Radius of the sample window `[-R, R]` used for operators with
/// seeded-random diagonals. Global quantities of such an operator `A` are
/// reported for `A chi_F` with `F = [-R, R]`.
pub const RANDOM_SAMPLE_RADIUS: i64 = 32;

/// A periodic tail `k -> values[(k - anchor) mod q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tail {
    pub values: Vec<Matrix>,
    pub anchor: i64,
}

impl Tail {
    pub fn new(values: Vec<Matrix>, anchor: i64) -> Self {
        Tail { values, anchor }
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn at(&self, k: i64) -> &Matrix {
        let q = self.values.len() as i64;
        &self.values[(k - self.anchor).rem_euclid(q) as usize]
    }
}

/// The sequence law of one diagonal.
#[derive(Debug, Clone, PartialEq)]
pub enum Law {
    Constant(Matrix),
    /// `k -> values[k mod q]`.
    Periodic(Vec<Matrix>),
    /// Explicit values on `[-radius, radius]` (`core[k + radius]`), periodic
    /// tails outside.
    EventuallyPeriodic {
        radius: i64,
        core: Vec<Matrix>,
        left: Tail,
        right: Tail,
    },
    /// Real entries uniform in `[-bound, bound]`, generated by SplitMix64
    /// from `(seed, position, component)`.
    SeededRandom { bound: f64, seed: u64 },
}

impl Law {
    /// Value at position `k` for block size `d`.
    pub fn at(&self, k: i64, d: usize) -> Matrix {
        match self {
            Law::Constant(m) => m.clone(),
            Law::Periodic(values) => values[k.rem_euclid(values.len() as i64) as usize].clone(),
            Law::EventuallyPeriodic {
                radius,
                core,
                left,
                right,
            } => {
                if k > *radius {
                    right.at(k).clone()
                } else if k < -*radius {
                    left.at(k).clone()
                } else {
                    core[(k + radius) as usize].clone()
                }
            }
            Law::SeededRandom { bound, seed } => random_block(*bound, *seed, k, d),
        }
    }

    /// Value of the periodic extension of the right tail at `k`.
    pub(crate) fn right_tail_at(&self, k: i64, d: usize) -> Matrix {
        match self {
            Law::EventuallyPeriodic { right, .. } => right.at(k).clone(),
            other => other.at(k, d),
        }
    }

    /// Value of the periodic extension of the left tail at `k`.
    pub(crate) fn left_tail_at(&self, k: i64, d: usize) -> Matrix {
        match self {
            Law::EventuallyPeriodic { left, .. } => left.at(k).clone(),
            other => other.at(k, d),
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Law::SeededRandom { .. })
    }

    pub(crate) fn core_radius(&self) -> i64 {
        match self {
            Law::EventuallyPeriodic { radius, .. } => *radius,
            _ => 0,
        }
    }

    pub(crate) fn periods(&self) -> (usize, usize) {
        match self {
            Law::Constant(_) | Law::SeededRandom { .. } => (1, 1),
            Law::Periodic(v) => (v.len(), v.len()),
            Law::EventuallyPeriodic { left, right, .. } => (left.period(), right.period()),
        }
    }

    fn blocks(&self) -> Vec<&Matrix> {
        match self {
            Law::Constant(m) => vec![m],
            Law::Periodic(v) => v.iter().collect(),
            Law::EventuallyPeriodic {
                core, left, right, ..
            } => core.iter().chain(&left.values).chain(&right.values).collect(),
            Law::SeededRandom { .. } => Vec::new(),
        }
    }

    pub(crate) fn kind(&self) -> &'static str {
        match self {
            Law::Constant(_) => "constant",
            Law::Periodic(_) => "periodic",
            Law::EventuallyPeriodic { .. } => "eventually_periodic",
            Law::SeededRandom { .. } => "seeded_random",
        }
    }
}

fn random_block(bound: f64, seed: u64, k: i64, d: usize) -> Matrix {
    let base = splitmix64(seed ^ splitmix64(k as u64));
    Matrix::from_fn(d, d, |i, j| {
        let bits = splitmix64(base.wrapping_add((i * d + j) as u64));
        Complex64::new(bound * (2.0 * unit_interval(bits) - 1.0), 0.0)
    })
}

/// One diagonal `a_offset V_offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSymbol {
    pub offset: i64,
    pub law: Law,
}

impl DiagonalSymbol {
    pub fn new(offset: i64, law: Law) -> Self {
        DiagonalSymbol { offset, law }
    }
}

/// Large-scale shape of an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    /// Every diagonal is periodic outside `[-core_radius, core_radius]`.
    EventuallyPeriodic {
        core_radius: i64,
        left_period: usize,
        right_period: usize,
    },
    /// At least one diagonal is seeded-random.
    Sampled { radius: i64 },
}

/// Which end of `Z` a tail lives at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Left => "-inf",
            Side::Right => "+inf",
        }
    }
}

/// A band operator with `d x d` blocks acting on `l^p(Z, C^d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandOperator {
    block_dim: usize,
    exponent: Exponent,
    diagonals: Vec<DiagonalSymbol>,
}

impl BandOperator {
    /// Validates and builds an operator. Diagonals are sorted by offset.
    pub fn new(block_dim: usize, exponent: Exponent, mut diagonals: Vec<DiagonalSymbol>) -> Result<Self> {
        if block_dim == 0 {
            return Err(Error::InvalidOperator("block_dim must be at least 1".into()));
        }
        diagonals.sort_by_key(|d| d.offset);
        for pair in diagonals.windows(2) {
            if pair[0].offset == pair[1].offset {
                return Err(Error::InvalidOperator(format!(
                    "duplicate diagonal offset {}",
                    pair[0].offset
                )));
            }
        }
        for diag in &diagonals {
            validate_law(&diag.law, block_dim).map_err(|msg| {
                Error::InvalidOperator(format!("diagonal at offset {}: {msg}", diag.offset))
            })?;
        }
        Ok(BandOperator {
            block_dim,
            exponent,
            diagonals,
        })
    }

    pub fn zero(block_dim: usize, exponent: Exponent) -> Self {
        BandOperator {
            block_dim,
            exponent,
            diagonals: Vec::new(),
        }
    }

    pub fn identity(block_dim: usize, exponent: Exponent) -> Self {
        Self::scalar(block_dim, exponent, Complex64::new(1.0, 0.0))
    }

    /// `c I`.
    pub fn scalar(block_dim: usize, exponent: Exponent, c: Complex64) -> Self {
        Self::constant_diagonals(block_dim, exponent, &[(0, Matrix::scalar(block_dim, c))])
    }

    /// The shift `V_k`: `(V_k x)_{i+k} = x_i`.
    pub fn shift(block_dim: usize, exponent: Exponent, k: i64) -> Self {
        Self::constant_diagonals(block_dim, exponent, &[(k, Matrix::identity(block_dim))])
    }

    /// Laurent operator with the given constant diagonals.
    pub fn constant_diagonals(block_dim: usize, exponent: Exponent, diags: &[(i64, Matrix)]) -> Self {
        let diagonals = diags
            .iter()
            .map(|(offset, m)| DiagonalSymbol::new(*offset, Law::Constant(m.clone())))
            .collect();
        BandOperator::new(block_dim, exponent, diagonals).expect("valid constant diagonals")
    }

    /// Block multiplication operator `(Ax)_i = a(i) x_i`.
    pub fn multiplication(block_dim: usize, exponent: Exponent, law: Law) -> Result<Self> {
        BandOperator::new(block_dim, exponent, vec![DiagonalSymbol::new(0, law)])
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn exponent(&self) -> Exponent {
        self.exponent
    }

    pub fn with_exponent(&self, exponent: Exponent) -> Self {
        BandOperator {
            exponent,
            ..self.clone()
        }
    }

    pub fn diagonals(&self) -> &[DiagonalSymbol] {
        &self.diagonals
    }

    pub fn offsets(&self) -> Vec<i64> {
        self.diagonals.iter().map(|d| d.offset).collect()
    }

    /// Largest `|offset|` over the stored diagonals.
    pub fn band_width(&self) -> usize {
        self.diagonals
            .iter()
            .map(|d| d.offset.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.diagonals.iter().all(|d| match &d.law {
            Law::SeededRandom { bound, .. } => *bound == 0.0,
            law => law.blocks().iter().all(|m| m.is_zero()),
        })
    }

    pub fn has_random(&self) -> bool {
        self.diagonals.iter().any(|d| d.law.is_random())
    }

    pub fn structure(&self) -> Structure {
        if self.has_random() {
            return Structure::Sampled {
                radius: RANDOM_SAMPLE_RADIUS,
            };
        }
        let mut core_radius = 0;
        let (mut left_period, mut right_period) = (1, 1);
        for d in &self.diagonals {
            core_radius = core_radius.max(d.law.core_radius());
            let (l, r) = d.law.periods();
            left_period = lcm(left_period, l);
            right_period = lcm(right_period, r);
        }
        Structure::EventuallyPeriodic {
            core_radius,
            left_period,
            right_period,
        }
    }

    /// Core radius, tail periods; errors for seeded-random operators.
    pub fn periodic_structure(&self) -> Result<(i64, usize, usize)> {
        match self.structure() {
            Structure::EventuallyPeriodic {
                core_radius,
                left_period,
                right_period,
            } => Ok((core_radius, left_period, right_period)),
            Structure::Sampled { .. } => Err(Error::UnsupportedClass(
                "seeded-random diagonals have no periodic structure".into(),
            )),
        }
    }

    /// True when every diagonal is constant or periodic.
    pub fn is_periodic(&self) -> bool {
        self.diagonals
            .iter()
            .all(|d| matches!(d.law, Law::Constant(_) | Law::Periodic(_)))
    }

    fn diagonal(&self, offset: i64) -> Option<&DiagonalSymbol> {
        self.diagonals
            .binary_search_by_key(&offset, |d| d.offset)
            .ok()
            .map(|i| &self.diagonals[i])
    }

    /// The `(i, j)` block; zero outside the band.
    pub fn entry(&self, i: i64, j: i64) -> Matrix {
        match self.diagonal(i - j) {
            Some(d) => d.law.at(i, self.block_dim),
            None => Matrix::zeros(self.block_dim, self.block_dim),
        }
    }

    /// The `(i, j)` block of the periodic extension of one tail.
    pub fn tail_entry(&self, side: Side, i: i64, j: i64) -> Matrix {
        match self.diagonal(i - j) {
            Some(d) => match side {
                Side::Left => d.law.left_tail_at(i, self.block_dim),
                Side::Right => d.law.right_tail_at(i, self.block_dim),
            },
            None => Matrix::zeros(self.block_dim, self.block_dim),
        }
    }

    /// Entrywise equality. Eventually periodic operators are compared on a
    /// window covering both cores plus one common period and the band.
    pub fn entrywise_eq(&self, other: &BandOperator) -> bool {
        if self.block_dim != other.block_dim || self.exponent != other.exponent {
            return false;
        }
        if self.has_random() || other.has_random() {
            return self == other;
        }
        let (m1, l1, r1) = self.periodic_structure().expect("checked");
        let (m2, l2, r2) = other.periodic_structure().expect("checked");
        let period = lcm(lcm(l1, r1), lcm(l2, r2)) as i64;
        let reach = m1.max(m2) + period + 1;
        let w = self.band_width().max(other.band_width()) as i64;
        for i in -reach..=reach {
            for j in i - w..=i + w {
                let a = self.entry(i, j);
                let b = other.entry(i, j);
                if a != b {
                    return false;
                }
            }
        }
        true
    }
}

fn validate_law(law: &Law, d: usize) -> std::result::Result<(), String> {
    let check = |m: &Matrix, what: &str| -> std::result::Result<(), String> {
        if m.rows() != d || m.cols() != d {
            return Err(format!("{what} is {}x{}, expected {d}x{d}", m.rows(), m.cols()));
        }
        Ok(())
    };
    match law {
        Law::Constant(m) => check(m, "value"),
        Law::Periodic(values) => {
            if values.is_empty() {
                return Err("periodic law needs at least one value".into());
            }
            values.iter().try_for_each(|m| check(m, "periodic value"))
        }
        Law::EventuallyPeriodic {
            radius,
            core,
            left,
            right,
        } => {
            if *radius < 0 {
                return Err("core radius must be non-negative".into());
            }
            if core.len() as i64 != 2 * radius + 1 {
                return Err(format!(
                    "core has {} values, expected 2*radius+1 = {}",
                    core.len(),
                    2 * radius + 1
                ));
            }
            if left.values.is_empty() || right.values.is_empty() {
                return Err("tails need at least one value".into());
            }
            core.iter()
                .chain(&left.values)
                .chain(&right.values)
                .try_for_each(|m| check(m, "value"))
        }
        Law::SeededRandom { bound, .. } => {
            if bound.is_finite() && *bound >= 0.0 {
                Ok(())
            } else {
                Err("bound must be finite and non-negative".into())
            }
        }
    }
}
