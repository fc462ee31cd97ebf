//! The operator spectrum of eventually periodic band operators and exact
//! evaluation of its members through their matrix symbols.
//!
//! For an eventually periodic `A` with tail periods `q_-` and `q_+`, every
//! translate sequence `V_{-h_n} A V_{h_n}` with `h_n -> +inf` eventually sees
//! only the periodic extension of the right tail, and converges exactly when
//! `h_n mod q_+` is eventually constant. The limit operators are therefore
//! the `q_+` shifts of the right tail operator and the `q_-` shifts of the
//! left one, up to coincidences.

mod symbol;

use num_complex::Complex64;

pub use symbol::{
    max_sigma_max, maximize_on_circle, min_sigma_min, minimize_on_circle, Extremum, SearchOptions,
    Symbol,
};

use crate::error::{Error, Result};
use crate::linalg::Exponent;
use crate::operator::{BandOperator, Side};
use crate::util::lcm;

/// A member of the operator spectrum.
#[derive(Debug, Clone)]
pub struct LimitOperator {
    /// Purely periodic operator.
    pub operator: BandOperator,
    /// Common period of all diagonals.
    pub period: usize,
    /// Every `(direction, residue)` producing this operator; the first entry
    /// is the canonical tag.
    pub sources: Vec<(Side, usize)>,
}

impl LimitOperator {
    pub fn direction(&self) -> Side {
        self.sources[0].0
    }

    pub fn residue(&self) -> usize {
        self.sources[0].1
    }
}

/// Periodic extension of one tail of `A` to all of `Z`.
pub fn tail_operator(a: &BandOperator, side: Side) -> Result<BandOperator> {
    let (_, left, right) = a.periodic_structure().map_err(|_| {
        Error::UnsupportedClass("limit operators are not computed for seeded-random diagonals".into())
    })?;
    let q = match side {
        Side::Left => left,
        Side::Right => right,
    };
    Ok(BandOperator::tabulate(
        a.block_dim(),
        a.exponent(),
        a.offsets(),
        0,
        q,
        q,
        |i, off| a.tail_entry(side, i, i - off),
    ))
}

/// Common period of a purely periodic operator.
pub fn common_period(a: &BandOperator) -> Result<usize> {
    if !a.is_periodic() {
        return Err(Error::UnsupportedClass("operator is not purely periodic".into()));
    }
    let (_, l, r) = a.periodic_structure()?;
    Ok(lcm(l, r))
}

/// All limit operators of `A`, right tail first, deduplicated entrywise.
pub fn operator_spectrum(a: &BandOperator) -> Result<Vec<LimitOperator>> {
    let mut out: Vec<LimitOperator> = Vec::new();
    for side in [Side::Right, Side::Left] {
        let tail = tail_operator(a, side)?;
        let q = common_period(&tail)?;
        let (_, l, r) = a.periodic_structure()?;
        let side_period = if side == Side::Right { r } else { l };
        for residue in 0..side_period {
            let candidate = tail.shift_conjugate(residue as i64)?;
            match out.iter_mut().find(|lo| lo.operator.entrywise_eq(&candidate)) {
                Some(existing) => existing.sources.push((side, residue)),
                None => out.push(LimitOperator {
                    operator: candidate,
                    period: q,
                    sources: vec![(side, residue)],
                }),
            }
        }
    }
    Ok(out)
}

/// Folds a purely periodic operator into its `(dq) x (dq)` symbol.
pub fn periodic_symbol(a: &BandOperator) -> Result<Symbol> {
    let q = common_period(a)?;
    Ok(Symbol::fold(a.block_dim(), q, a.band_width(), 0, |i, j| a.entry(i, j)))
}

pub fn fold_symbol(l: &LimitOperator) -> Result<Symbol> {
    periodic_symbol(&l.operator)
}

fn require_hilbert(a: &BandOperator) -> Result<()> {
    if a.exponent() != Exponent::Two {
        return Err(Error::UnsupportedExponent(format!(
            "symbol evaluation needs p = 2, got p = {}",
            a.exponent()
        )));
    }
    Ok(())
}

/// `max_theta sigma_max(a(theta))` with its certificate.
pub fn laurent_norm_certified(l: &LimitOperator) -> Result<Extremum> {
    require_hilbert(&l.operator)?;
    max_sigma_max(&fold_symbol(l)?, &SearchOptions::default())
}

/// `min_theta sigma_min(a(theta) - lambda I)` with its certificate.
pub fn laurent_resolvent_certified(l: &LimitOperator, lambda: Complex64) -> Result<Extremum> {
    require_hilbert(&l.operator)?;
    min_sigma_min(&fold_symbol(l)?, lambda, &SearchOptions::default())
}

/// `||L||`.
pub fn laurent_norm(l: &LimitOperator) -> Result<f64> {
    Ok(laurent_norm_certified(l)?.value)
}

/// `nu(L)`.
pub fn laurent_lower_norm(l: &LimitOperator) -> Result<f64> {
    laurent_resolvent_recip(l, Complex64::new(0.0, 0.0))
}

/// `||(L - lambda I)^{-1}||^{-1}`.
pub fn laurent_resolvent_recip(l: &LimitOperator, lambda: Complex64) -> Result<f64> {
    Ok(laurent_resolvent_certified(l, lambda)?.value)
}

/// Wraps a purely periodic operator as a limit operator of itself.
pub fn as_limit_operator(a: &BandOperator) -> Result<LimitOperator> {
    Ok(LimitOperator {
        period: common_period(a)?,
        operator: a.clone(),
        sources: vec![(Side::Right, 0)],
    })
}

#[cfg(test)]
mod tests;
