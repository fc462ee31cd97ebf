//! Norm-type functionals: localized and full operator norms, essential norms,
//! lower norms, the compression limits `mu~` and `mu`, and reciprocal
//! resolvent norms.
//!
//! Eventually periodic operators are handled through representative
//! windows plus the symbols of their periodic tails; both are exact
//! ingredients, and window sequences are declared converged after three
//! consecutive increments `D -> D + 2q` each changing the value by less than
//! the tolerance. Operators with seeded-random diagonals are evaluated on the
//! sample window `F`: norms are those of `A chi_F`, lower norms are infima
//! over vectors supported in `F`.

mod localizer;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limitops::{laurent_norm, laurent_resolvent_recip, operator_spectrum, SearchOptions};
use crate::linalg::Exponent;
use crate::operator::{BandOperator, Interval};
use crate::util::CauchyTracker;

pub(crate) use localizer::{Localizer, Shape};

/// Default tolerance of the convergent sequences.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

const CAUCHY_STEPS: usize = 3;

/// A limit computed from a sequence of window sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergedValue {
    pub value: f64,
    pub window_size_used: usize,
    pub cauchy_gap: f64,
    pub converged: bool,
}

impl ConvergedValue {
    fn exact(value: f64, window_size_used: usize) -> Self {
        ConvergedValue {
            value,
            window_size_used,
            cauchy_gap: 0.0,
            converged: true,
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::PreconditionViolated(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

fn require_hilbert(a: &BandOperator, what: &str) -> Result<()> {
    if a.exponent() != Exponent::Two {
        return Err(Error::UnsupportedExponent(format!(
            "{what} is only provided for p = 2 (operator has p = {})",
            a.exponent()
        )));
    }
    Ok(())
}

fn require_periodic(loc: &Localizer, what: &str) -> Result<()> {
    if loc.sample_window().is_some() {
        return Err(Error::UnsupportedClass(format!(
            "{what} is not available for seeded-random diagonals"
        )));
    }
    Ok(())
}

pub(crate) fn window_cap(loc: &Localizer) -> usize {
    (2 * loc.core() + 2 * loc.w) as usize + 16 * loc.period() + 64
}

/// Smallest odd `D = 2n + 1` with `4 w / D < (delta / 4)^2`, the window size
/// for which the localization bracket holds with relative error `delta`.
pub fn localization_window(band_width: usize, delta: f64) -> usize {
    if band_width == 0 {
        return 1;
    }
    let bound = 4.0 * band_width as f64 / (delta / 4.0).powi(2);
    let mut n = (bound.floor() as usize).saturating_sub(1) / 2;
    while (2 * n + 1) as f64 <= bound {
        n += 1;
    }
    2 * n + 1
}

/// Relative error `delta(D) = 4 sqrt(4 w / D)` guaranteed by the window size
/// `D`; meaningful when below 1.
pub fn localization_delta(band_width: usize, window: usize) -> f64 {
    4.0 * (4.0 * band_width as f64 / window.max(1) as f64).sqrt()
}

/// `|||A|||_D`: the largest norm of `A chi_W` over column windows `|W| = D`.
pub fn norm_localized(a: &BandOperator, window: usize) -> Result<f64> {
    if window == 0 {
        return Err(Error::PreconditionViolated("window size D must be at least 1".into()));
    }
    if a.is_zero() {
        return Ok(0.0);
    }
    Localizer::new(a).norm_at(window)
}

/// `||A||`.
///
/// For `p` in `{1, inf}` the value `|||A|||_{2w+1}` is exact. For `p = 2` the
/// sequence `max(N_D, tail norm)` is run until it stabilizes, where `N_D`
/// is the largest norm over the half-overlapping core windows of length `D`
/// (so `|||A|||_{D/2} <= N_D <= |||A|||_D`) and the tail norm is the largest
/// symbol norm of the periodic tails, a lower bound for `||A||`.
pub fn op_norm(a: &BandOperator, tol: f64) -> Result<ConvergedValue> {
    check_tol(tol)?;
    if a.is_zero() {
        return Ok(ConvergedValue::exact(0.0, 0));
    }
    let loc = Localizer::new(a);
    let w = loc.w as usize;
    if a.exponent() != Exponent::Two {
        return Ok(ConvergedValue::exact(loc.norm_at(2 * w + 1)?, 2 * w + 1));
    }
    if let Some(f) = loc.sample_window() {
        return Ok(ConvergedValue::exact(loc.norm_at(f.len())?, f.len()));
    }
    let (tail, _) = loc.tail_norm(&SearchOptions::default())?;
    let step = 2 * loc.period();
    let cap = window_cap(&loc);
    let mut tracker = CauchyTracker::new(tol, CAUCHY_STEPS);
    let mut len = 2 * w + 1;
    loop {
        let value = loc.norm_over(&loc.core_windows(len))?.max(tail);
        let done = tracker.push(value);
        if done || len + step > cap {
            return Ok(ConvergedValue {
                value,
                window_size_used: len,
                cauchy_gap: tracker.last_gap,
                converged: done,
            });
        }
        len += step;
    }
}

/// `lim_m ||A Q_m||`, evaluated for `m = M + w + k q`, `k = 0, 1, ...`,
/// where the sequence is already constant. `window_size_used` reports `m`.
pub fn essential_norm_q(a: &BandOperator, tol: f64) -> Result<ConvergedValue> {
    check_tol(tol)?;
    if a.is_zero() {
        return Ok(ConvergedValue::exact(0.0, 0));
    }
    let loc = Localizer::new(a);
    require_periodic(&loc, "the essential norm")?;
    let step = loc.period();
    let mut m = (loc.core() + loc.w) as usize;
    let mut tracker = CauchyTracker::new(tol, CAUCHY_STEPS);
    for _ in 0..=4 * CAUCHY_STEPS {
        let value = op_norm(&a.column_truncate(m)?, tol)?.value;
        if tracker.push(value) {
            return Ok(ConvergedValue {
                value,
                window_size_used: m,
                cauchy_gap: tracker.last_gap,
                converged: true,
            });
        }
        m += step;
    }
    let value = op_norm(&a.column_truncate(m)?, tol)?.value;
    Ok(ConvergedValue {
        value,
        window_size_used: m,
        cauchy_gap: tracker.last_gap,
        converged: false,
    })
}

/// `max ||A_h||` over the operator spectrum.
pub fn essential_norm_via_limops(a: &BandOperator) -> Result<f64> {
    let mut best: f64 = 0.0;
    for l in operator_spectrum(a)? {
        best = best.max(laurent_norm(&l)?);
    }
    Ok(best)
}

/// `nu_D(A)`: the smallest `sigma_min(A chi_W)` over windows `|W| = D`.
pub fn lower_norm_localized(a: &BandOperator, window: usize) -> Result<f64> {
    require_hilbert(a, "the lower norm")?;
    if a.is_zero() {
        return Ok(0.0);
    }
    Localizer::new(a).lower_at(window, Complex64::new(0.0, 0.0), false)
}

/// Decreasing window sequence for `nu(A - lambda I)` (or its adjoint),
/// capped by the tail value `min_theta sigma_min(a(theta) - lambda)`.
pub(crate) fn lower_sequence(
    loc: &Localizer,
    lambda: Complex64,
    adjoint: bool,
    tol: f64,
    opts: &SearchOptions,
) -> Result<ConvergedValue> {
    if loc.a.is_zero() && lambda == Complex64::new(0.0, 0.0) {
        return Ok(ConvergedValue::exact(0.0, 0));
    }
    if let Some(f) = loc.sample_window() {
        return Ok(ConvergedValue::exact(loc.lower_at(f.len(), lambda, adjoint)?, f.len()));
    }
    let (tail, _) = loc.tail_lower(lambda, opts)?;
    let step = 2 * loc.period();
    let cap = window_cap(loc);
    let mut tracker = CauchyTracker::new(tol, CAUCHY_STEPS);
    let mut len = 2 * loc.w as usize + 1;
    loop {
        let value = loc.lower_over(&loc.core_windows(len), lambda, adjoint)?.min(tail);
        let done = tracker.push(value);
        if done || len + step > cap {
            return Ok(ConvergedValue {
                value,
                window_size_used: len,
                cauchy_gap: tracker.last_gap,
                converged: done,
            });
        }
        len += step;
    }
}

/// `nu(A) = inf ||Ax||` over unit vectors.
pub fn lower_norm(a: &BandOperator, tol: f64) -> Result<ConvergedValue> {
    check_tol(tol)?;
    require_hilbert(a, "the lower norm")?;
    lower_sequence(
        &Localizer::new(a),
        Complex64::new(0.0, 0.0),
        false,
        tol,
        &SearchOptions::default(),
    )
}

/// `nu(A*)`, computed from the adjoint compressions of `A`.
pub fn lower_norm_adjoint(a: &BandOperator, tol: f64) -> Result<ConvergedValue> {
    check_tol(tol)?;
    require_hilbert(a, "the lower norm")?;
    lower_sequence(
        &Localizer::new(a),
        Complex64::new(0.0, 0.0),
        true,
        tol,
        &SearchOptions::default(),
    )
}

/// `mu~(A) = lim_m nu(A|_{im Q_m})`.
///
/// For eventually periodic `A` the limit is the smallest lower norm of the
/// periodic tail operators, `min_theta sigma_min` of their symbols; the
/// reported gap is the certification gap of the `theta` search. The windowed
/// definition is available as [`mu_tilde_windowed`].
pub fn mu_tilde(a: &BandOperator, tol: f64) -> Result<ConvergedValue> {
    check_tol(tol)?;
    require_hilbert(a, "mu")?;
    if a.is_zero() {
        return Ok(ConvergedValue::exact(0.0, 0));
    }
    let loc = Localizer::new(a);
    require_periodic(&loc, "mu")?;
    let (value, gap) = loc.tail_lower(Complex64::new(0.0, 0.0), &SearchOptions::default())?;
    Ok(ConvergedValue {
        value,
        window_size_used: 0,
        cauchy_gap: gap,
        converged: gap <= tol,
    })
}

/// Windowed approximation of `nu(A|_{im Q_m})`: the smallest
/// `sigma_min(A chi_W)` over windows `W` of length `window` outside `[-m, m]`.
/// Rows are all of `W` expanded by the band-width. Non-decreasing in `m`,
/// non-increasing in `window`, and bounded below by [`mu_tilde`].
pub fn mu_tilde_windowed(a: &BandOperator, m: usize, window: usize) -> Result<f64> {
    require_hilbert(a, "mu")?;
    let loc = Localizer::new(a);
    require_periodic(&loc, "mu")?;
    let localizer::Shape::Periodic { core, left, right } = loc.shape else {
        unreachable!("checked above")
    };
    let m = m as i64;
    let len = window.max(1);
    let reach = m.max(core + loc.w);
    let mut windows: Vec<Interval> = (m + 1..=reach + right as i64)
        .map(|s| Interval::starting_at(s, len))
        .collect();
    windows.extend(
        (-reach - left as i64..=-m - 1).map(|e| Interval::new(e - len as i64 + 1, e)),
    );
    let mut best = f64::INFINITY;
    for cols in windows {
        let rows = cols.expand(loc.w);
        best = best.min(crate::linalg::sigma_min(&a.compression(rows, cols))?);
    }
    Ok(best)
}

/// `mu(A) = min(mu~(A), mu~(A*))`.
pub fn mu(a: &BandOperator, tol: f64) -> Result<ConvergedValue> {
    let direct = mu_tilde(a, tol)?;
    let adjoint = mu_tilde(&a.adjoint()?, tol)?;
    Ok(if adjoint.value < direct.value { adjoint } else { direct })
}

/// `||A^{-1}||^{-1} = min(nu(A), nu(A*))`; zero signals non-invertibility.
pub fn inverse_norm_recip(a: &BandOperator, tol: f64) -> Result<f64> {
    Ok(lower_norm(a, tol)?.value.min(lower_norm_adjoint(a, tol)?.value))
}

/// Both routes to the reciprocal essential resolvent norm at `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssentialResolvent {
    /// `mu(A - lambda I)`.
    pub via_mu: f64,
    /// `min ||(A_h - lambda I)^{-1}||^{-1}` over the operator spectrum.
    pub via_limops: f64,
    pub discrepancy: f64,
}

pub fn essential_resolvent_recip(a: &BandOperator, lambda: Complex64, tol: f64) -> Result<EssentialResolvent> {
    let via_mu = mu(&a.shifted_by(lambda)?, tol)?.value;
    let mut via_limops = f64::INFINITY;
    for l in operator_spectrum(a)? {
        via_limops = via_limops.min(laurent_resolvent_recip(&l, lambda)?);
    }
    Ok(EssentialResolvent {
        via_mu,
        via_limops,
        discrepancy: (via_mu - via_limops).abs(),
    })
}
