//! Rank-one perturbations moving `lambda` into the spectrum.
//!
//! If `||(A - lambda)x|| < eps` for a finitely supported unit `x`, then with
//! `B = A - lambda` the operator `K u = -<u, x> Bx` has `||K|| = ||Bx|| < eps`
//! and `(B + K)x = 0`. When only the adjoint has a small lower norm the
//! same construction is applied to `B*` and transposed:
//! `K = -y (B*y)^H` gives `(B + K)* y = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limitops::{min_sigma_min, SearchOptions};
use crate::linalg::{sigma_min, svd, Exponent, Matrix};
use crate::norms::{inverse_norm_recip, window_cap, Localizer, Shape};
use crate::operator::{BandOperator, Interval, WindowVector};

/// Largest admissible `sigma_min` of the verification truncation.
pub const WITNESS_SINGULARITY_TOL: f64 = 1e-8;
/// Truncations up to this many rows are checked with a full SVD; larger
/// ones use the residual bound `sigma_min(T) <= ||T u||`.
const DENSE_CHECK_LIMIT: usize = 160;
const TAIL_MAX_BLOCKS: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `u` is an approximate kernel vector of `A - lambda`.
    Kernel,
    /// `u` is an approximate kernel vector of `(A - lambda)*`.
    Cokernel,
}

#[derive(Debug, Clone)]
pub struct PerturbationWitness {
    pub lambda: Complex64,
    pub epsilon: f64,
    pub kind: WitnessKind,
    /// Unit vector `x` (kernel) or `y` (cokernel).
    pub u: WindowVector,
    /// `(A - lambda) x` or `(A - lambda)* y`.
    pub image: WindowVector,
    /// Position of the largest block of `u`.
    pub functional_index: i64,
    pub k_norm: f64,
    /// `sigma_min` (or its residual bound) of `A - lambda + K` truncated to
    /// the support of `u` widened by `3w`.
    pub truncated_sigma_min: f64,
}

impl PerturbationWitness {
    /// The two factors of `K = -l r^H`.
    fn factors(&self) -> (&WindowVector, &WindowVector) {
        match self.kind {
            WitnessKind::Kernel => (&self.image, &self.u),
            WitnessKind::Cokernel => (&self.u, &self.image),
        }
    }

    /// `K v`.
    pub fn apply(&self, v: &WindowVector) -> WindowVector {
        let (l, r) = self.factors();
        let c = -r.inner(v);
        WindowVector::new(l.start, l.block_dim, l.data.iter().map(|z| c * z).collect())
    }

    /// `K` compressed to `rows x cols`.
    pub fn matrix(&self, rows: Interval, cols: Interval) -> Matrix {
        let (l, r) = self.factors();
        let (l, r) = (l.embed(rows), r.embed(cols));
        Matrix::from_fn(l.data.len(), r.data.len(), |i, j| -l.data[i] * r.data[j].conj())
    }
}

/// Builds a rank-one `K` with `||K|| < eps` and `lambda` in the spectrum of
/// `A + K`. Requires `||(A - lambda)^{-1}||^{-1} < eps`.
pub fn witness_perturbation(
    a: &BandOperator,
    lambda: Complex64,
    eps: f64,
    tol: f64,
) -> Result<PerturbationWitness> {
    if a.exponent() != Exponent::Two {
        return Err(Error::UnsupportedExponent(format!(
            "witnesses need p = 2, got p = {}",
            a.exponent()
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::PreconditionViolated(format!("eps must be positive, got {eps}")));
    }
    let b = a.shifted_by(lambda)?;
    let recip = inverse_norm_recip(&b, tol)?;
    if !(recip < eps) {
        return Err(Error::PreconditionViolated(format!(
            "lambda = {lambda} is not in the {eps}-pseudospectrum (||(A - lambda)^-1||^-1 = {recip})"
        )));
    }

    // short windows first, then tail plane waves, then the full window sequence
    let found = match window_search(a, lambda, eps, Some(1))? {
        Some(found) => Some(found),
        None => match tail_search(a, lambda, eps)? {
            Some(found) => Some(found),
            None => window_search(a, lambda, eps, None)?,
        },
    };
    let (kind, u, image) = found.ok_or_else(|| {
        Error::PreconditionViolated(format!(
            "no vector with ||(A - lambda)x|| < {eps} found (reciprocal resolvent norm {recip})"
        ))
    })?;
    let k_norm = image.norm(Exponent::Two);
    let functional_index = u
        .window()
        .iter()
        .max_by(|&i, &j| {
            let n = |k| Exponent::Two.vector_norm(u.block(k));
            n(i).total_cmp(&n(j))
        })
        .unwrap_or(u.start);

    let mut witness = PerturbationWitness {
        lambda,
        epsilon: eps,
        kind,
        u,
        image,
        functional_index,
        k_norm,
        truncated_sigma_min: f64::NAN,
    };
    witness.truncated_sigma_min = verify(&b, &witness)?;
    Ok(witness)
}

fn smallest_right_vector(m: &Matrix) -> Result<(f64, Vec<Complex64>)> {
    let dec = svd(m)?;
    let k = dec.singular_values.len() - 1;
    let v = (0..dec.v.rows()).map(|i| dec.v.get(i, k)).collect();
    Ok((dec.singular_values[k], v))
}

type Candidate = (WitnessKind, WindowVector, WindowVector);

/// Best column window of the lower-norm sequence, for `B` and for `B*`.
fn window_search(
    a: &BandOperator,
    lambda: Complex64,
    eps: f64,
    max_steps: Option<usize>,
) -> Result<Option<Candidate>> {
    let loc = Localizer::new(a);
    let d = a.block_dim();
    let lengths: Vec<usize> = match loc.sample_window() {
        Some(f) => vec![f.len()],
        None => {
            let step = 2 * loc.period();
            (0..)
                .map(|k| 2 * loc.w as usize + 1 + k * step)
                .take_while(|&len| len <= window_cap(&loc))
                .take(max_steps.unwrap_or(usize::MAX))
                .collect()
        }
    };
    for len in lengths {
        let windows = match loc.sample_window() {
            Some(_) => loc.windows(len),
            None => loc.core_windows(len),
        };
        let mut best: Option<(f64, WitnessKind, Interval)> = None;
        for &cols in &windows {
            let rows = cols.expand(loc.w);
            for kind in [WitnessKind::Kernel, WitnessKind::Cokernel] {
                let m = match kind {
                    WitnessKind::Kernel => loc.shifted(rows, cols, lambda),
                    WitnessKind::Cokernel => loc.shifted(cols, rows, lambda).adjoint(),
                };
                let s = sigma_min(&m)?;
                if best.map_or(true, |(b, _, _)| s < b) {
                    best = Some((s, kind, cols));
                }
            }
        }
        let Some((s, kind, cols)) = best else { continue };
        if s >= eps {
            continue;
        }
        let rows = cols.expand(loc.w);
        let m = match kind {
            WitnessKind::Kernel => loc.shifted(rows, cols, lambda),
            WitnessKind::Cokernel => loc.shifted(cols, rows, lambda).adjoint(),
        };
        let (_, v) = smallest_right_vector(&m)?;
        let image = WindowVector::new(rows.lo, d, m.mul_vec(&v));
        let u = WindowVector::new(cols.lo, d, v);
        if image.norm(Exponent::Two) < eps {
            return Ok(Some((kind, u, image)));
        }
    }
    Ok(None)
}

/// Tapered plane waves `x_{s0 + nq + t} = h_n e^{-i n theta} v_t` in a
/// periodic tail, where `v` is a minimizing singular vector of the symbol.
fn tail_search(a: &BandOperator, lambda: Complex64, eps: f64) -> Result<Option<Candidate>> {
    let adjoint = a.adjoint()?;
    let opts = SearchOptions::uncertified();
    let mut best: Option<(f64, Candidate)> = None;
    for (kind, op, mu) in [
        (WitnessKind::Kernel, a, lambda),
        (WitnessKind::Cokernel, &adjoint, lambda.conj()),
    ] {
        let loc = Localizer::new(op);
        let Shape::Periodic { core, left, right } = loc.shape else {
            return Ok(None);
        };
        let shifted = op.shifted_by(mu)?;
        for (side, symbol) in loc.tails.iter().enumerate() {
            let q = if side == 0 { right } else { left } as i64;
            let e = min_sigma_min(symbol, mu, &opts)?;
            if e.value >= eps {
                continue;
            }
            let theta = e.theta;
            let (_, v) = smallest_right_vector(&symbol.eval_shifted(theta, mu))?;
            let margin = (loc.w + q - 1) / q * q;
            let mut blocks = 16usize;
            while blocks <= TAIL_MAX_BLOCKS {
                let s0 = if side == 0 {
                    core + 1 + margin
                } else {
                    -core - q - margin - (blocks as i64 - 1) * q
                };
                let x = plane_wave(s0, op.block_dim(), &v, theta, blocks);
                let image = shifted.apply(&x);
                let r = image.norm(Exponent::Two);
                if r < eps {
                    if best.as_ref().map_or(true, |(b, _)| r < *b) {
                        best = Some((r, (kind, x, image)));
                    }
                    break;
                }
                blocks *= 2;
            }
        }
    }
    Ok(best.map(|(_, c)| c))
}

fn plane_wave(s0: i64, d: usize, v: &[Complex64], theta: f64, blocks: usize) -> WindowVector {
    let mut data = Vec::with_capacity(blocks * v.len());
    for n in 0..blocks {
        let h = (std::f64::consts::PI * (n + 1) as f64 / (blocks + 1) as f64).sin();
        let phase = Complex64::from_polar(h, -(n as f64) * theta);
        data.extend(v.iter().map(|z| z * phase));
    }
    let norm = Exponent::Two.vector_norm(&data);
    for z in &mut data {
        *z /= norm;
    }
    WindowVector::new(s0, d, data)
}

/// `sigma_min` of `B + K` truncated around the support of `u`.
fn verify(b: &BandOperator, w: &PerturbationWitness) -> Result<f64> {
    let margin = 3 * b.band_width() as i64;
    let win = w.u.window().expand(margin);
    let d = b.block_dim();
    let t = &b.compression(win, win) + &w.matrix(win, win);
    if t.rows() <= DENSE_CHECK_LIMIT {
        return sigma_min(&t);
    }
    let u = w.u.embed(win);
    let r = t.mul_vec(&u.data);
    debug_assert_eq!(r.len(), win.len() * d);
    Ok(Exponent::Two.vector_norm(&r))
}
