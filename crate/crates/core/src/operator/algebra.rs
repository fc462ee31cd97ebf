//! Symbol-level algebra. Every operation on eventually periodic operators is
//! carried out by re-tabulating the result: its core is sampled on
//! `[-R, R]` and its tails over one period just outside, where `R` and the
//! tail periods are chosen so that the result is provably periodic beyond
//! the core.

use std::collections::BTreeSet;

use num_complex::Complex64;

use super::{BandOperator, DiagonalSymbol, Law, Tail};
use crate::error::{Error, Result};
use crate::linalg::{Exponent, Matrix};
use crate::util::lcm;

impl BandOperator {
    /// Builds an eventually periodic operator from a law function
    /// `f(i, offset) = entry(i, i - offset)`.
    ///
    /// The caller guarantees that, for every offset, `f(., offset)` is
    /// periodic with period `left_period` on `(-inf, -radius)` and with
    /// `right_period` on `(radius, inf)`. Zero diagonals are dropped and laws
    /// are reduced to their simplest form.
    pub fn tabulate(
        block_dim: usize,
        exponent: Exponent,
        offsets: impl IntoIterator<Item = i64>,
        radius: i64,
        left_period: usize,
        right_period: usize,
        f: impl Fn(i64, i64) -> Matrix,
    ) -> BandOperator {
        let offsets: BTreeSet<i64> = offsets.into_iter().collect();
        let radius = radius.max(0);
        let mut diagonals = Vec::new();
        for offset in offsets {
            let core: Vec<Matrix> = (-radius..=radius).map(|k| f(k, offset)).collect();
            let right_anchor = radius + 1;
            let right = Tail::new(
                (0..right_period as i64).map(|t| f(right_anchor + t, offset)).collect(),
                right_anchor,
            );
            let left_anchor = -radius - left_period as i64;
            let left = Tail::new(
                (0..left_period as i64).map(|t| f(left_anchor + t, offset)).collect(),
                left_anchor,
            );
            let law = simplify(Law::EventuallyPeriodic {
                radius,
                core,
                left,
                right,
            });
            if let Some(law) = law {
                diagonals.push(DiagonalSymbol::new(offset, law));
            }
        }
        BandOperator::new(block_dim, exponent, diagonals).expect("tabulated laws are consistent")
    }

    fn require_structured(&self, what: &str) -> Result<(i64, usize, usize)> {
        self.periodic_structure().map_err(|_| {
            Error::UnsupportedClass(format!("{what} is not available for seeded-random diagonals"))
        })
    }

    fn require_compatible(&self, other: &BandOperator) -> Result<()> {
        if self.exponent() != other.exponent() {
            return Err(Error::ExponentMismatch {
                left: self.exponent().to_string(),
                right: other.exponent().to_string(),
            });
        }
        if self.block_dim() != other.block_dim() {
            return Err(Error::DimensionMismatch {
                left: self.block_dim(),
                right: other.block_dim(),
            });
        }
        Ok(())
    }

    /// `A*`: blocks `entry*(i, j) = entry(j, i)^H`, offsets negated.
    pub fn adjoint(&self) -> Result<BandOperator> {
        let (m, l, r) = self.require_structured("adjoint")?;
        let w = self.band_width() as i64;
        Ok(BandOperator::tabulate(
            self.block_dim(),
            self.exponent(),
            self.offsets().into_iter().map(|a| -a),
            m + w,
            l,
            r,
            |i, a| self.entry(i - a, i).adjoint(),
        ))
    }

    pub fn add(&self, other: &BandOperator) -> Result<BandOperator> {
        self.require_compatible(other)?;
        let (m1, l1, r1) = self.require_structured("add")?;
        let (m2, l2, r2) = other.require_structured("add")?;
        let offsets: Vec<i64> = self.offsets().into_iter().chain(other.offsets()).collect();
        Ok(BandOperator::tabulate(
            self.block_dim(),
            self.exponent(),
            offsets,
            m1.max(m2),
            lcm(l1, l2),
            lcm(r1, r2),
            |i, a| &self.entry(i, i - a) + &other.entry(i, i - a),
        ))
    }

    pub fn sub(&self, other: &BandOperator) -> Result<BandOperator> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0))?)
    }

    /// `A - lambda I`.
    pub fn shifted_by(&self, lambda: Complex64) -> Result<BandOperator> {
        self.sub(&BandOperator::scalar(self.block_dim(), self.exponent(), lambda))
    }

    pub fn scale(&self, c: Complex64) -> Result<BandOperator> {
        let (m, l, r) = self.require_structured("scale")?;
        Ok(BandOperator::tabulate(
            self.block_dim(),
            self.exponent(),
            self.offsets(),
            m,
            l,
            r,
            |i, a| self.entry(i, i - a).scale(c),
        ))
    }

    /// Product `A B`; band-width is at most `w_A + w_B`.
    pub fn compose(&self, other: &BandOperator) -> Result<BandOperator> {
        self.require_compatible(other)?;
        let (m1, l1, r1) = self.require_structured("compose")?;
        let (m2, l2, r2) = other.require_structured("compose")?;
        let mut offsets = BTreeSet::new();
        for a in self.offsets() {
            for b in other.offsets() {
                offsets.insert(a + b);
            }
        }
        let wa = self.band_width() as i64;
        let d = self.block_dim();
        Ok(BandOperator::tabulate(
            d,
            self.exponent(),
            offsets,
            m1.max(m2 + wa),
            lcm(l1, l2),
            lcm(r1, r2),
            |i, a| {
                let j = i - a;
                let mut acc = Matrix::zeros(d, d);
                for k in (i - wa)..=(i + wa) {
                    let left = self.entry(i, k);
                    if left.is_zero() {
                        continue;
                    }
                    let right = other.entry(k, j);
                    if right.is_zero() {
                        continue;
                    }
                    acc = &acc + &(&left * &right);
                }
                acc
            },
        ))
    }

    /// `V_{-k} A V_k`, i.e. `entry'(i, j) = entry(i + k, j + k)`.
    pub fn shift_conjugate(&self, k: i64) -> Result<BandOperator> {
        let (m, l, r) = self.require_structured("shift_conjugate")?;
        Ok(BandOperator::tabulate(
            self.block_dim(),
            self.exponent(),
            self.offsets(),
            m + k.abs(),
            l,
            r,
            |i, a| self.entry(i + k, i + k - a),
        ))
    }

    /// `A (+) B` acting on `l^p(Z, C^{d_A + d_B})`.
    pub fn direct_sum(&self, other: &BandOperator) -> Result<BandOperator> {
        if self.exponent() != other.exponent() {
            return Err(Error::ExponentMismatch {
                left: self.exponent().to_string(),
                right: other.exponent().to_string(),
            });
        }
        let (m1, l1, r1) = self.require_structured("direct_sum")?;
        let (m2, l2, r2) = other.require_structured("direct_sum")?;
        let offsets: Vec<i64> = self.offsets().into_iter().chain(other.offsets()).collect();
        Ok(BandOperator::tabulate(
            self.block_dim() + other.block_dim(),
            self.exponent(),
            offsets,
            m1.max(m2),
            lcm(l1, l2),
            lcm(r1, r2),
            |i, a| self.entry(i, i - a).direct_sum(&other.entry(i, i - a)),
        ))
    }

    /// `A Q_m`: all columns `j` with `|j| <= m` set to zero.
    pub fn column_truncate(&self, m: usize) -> Result<BandOperator> {
        let (core, l, r) = self.require_structured("column_truncate")?;
        let m = m as i64;
        let w = self.band_width() as i64;
        let d = self.block_dim();
        Ok(BandOperator::tabulate(
            d,
            self.exponent(),
            self.offsets(),
            core.max(m + w),
            l,
            r,
            |i, a| {
                let j = i - a;
                if j.abs() <= m {
                    Matrix::zeros(d, d)
                } else {
                    self.entry(i, j)
                }
            },
        ))
    }

    /// Replaces every block by the same block with `c` added on the diagonal
    /// positions `i` where `keep(i)` is false, zeroing all couplings that
    /// touch such positions. Used for half-line truncations padded by `c I`.
    pub fn pad_outside(
        &self,
        keep: impl Fn(i64) -> bool,
        c: Complex64,
        radius: i64,
    ) -> Result<BandOperator> {
        let (core, l, r) = self.require_structured("pad_outside")?;
        let w = self.band_width() as i64;
        let d = self.block_dim();
        let offsets: Vec<i64> = self.offsets().into_iter().chain(std::iter::once(0)).collect();
        Ok(BandOperator::tabulate(
            d,
            self.exponent(),
            offsets,
            core.max(radius + w),
            l,
            r,
            |i, a| {
                let j = i - a;
                match (keep(i), keep(j)) {
                    (true, true) => self.entry(i, j),
                    (false, false) if i == j => Matrix::scalar(d, c),
                    _ => Matrix::zeros(d, d),
                }
            },
        ))
    }
}

/// Reduces an eventually periodic law: shrinks the core, collapses to a
/// periodic or constant law when possible and returns `None` for the zero law.
fn simplify(law: Law) -> Option<Law> {
    let Law::EventuallyPeriodic {
        radius,
        core,
        left,
        right,
    } = law
    else {
        return Some(law);
    };
    let core_at = |k: i64| &core[(k + radius) as usize];

    // A single periodic sequence across both tails and the core?
    let q = lcm(left.period(), right.period()) as i64;
    let bi_infinite = (-radius - q..-radius).all(|k| left.at(k) == right.at(k))
        && (-radius..=radius).all(|k| core_at(k) == right.at(k));
    if bi_infinite {
        let values: Vec<Matrix> = (0..right.period() as i64).map(|k| right.at(k).clone()).collect();
        return reduce_periodic(values);
    }

    let mut new_radius = radius;
    while new_radius > 0
        && core_at(new_radius) == right.at(new_radius)
        && core_at(-new_radius) == left.at(-new_radius)
    {
        new_radius -= 1;
    }
    let core = (-new_radius..=new_radius).map(|k| core_at(k).clone()).collect();
    Some(Law::EventuallyPeriodic {
        radius: new_radius,
        core,
        left: minimal_tail(left),
        right: minimal_tail(right),
    })
}

fn minimal_period(values: &[Matrix]) -> usize {
    let q = values.len();
    (1..=q)
        .find(|&p| q % p == 0 && (0..q).all(|k| values[k] == values[k % p]))
        .unwrap_or(q)
}

fn minimal_tail(tail: Tail) -> Tail {
    let p = minimal_period(&tail.values);
    Tail::new(tail.values[..p].to_vec(), tail.anchor)
}

fn reduce_periodic(values: Vec<Matrix>) -> Option<Law> {
    let p = minimal_period(&values);
    if p == 1 {
        if values[0].is_zero() {
            None
        } else {
            Some(Law::Constant(values[0].clone()))
        }
    } else {
        Some(Law::Periodic(values[..p].to_vec()))
    }
}
