//! Grids of reciprocal resolvent norms, their level sets, Hausdorff
//! diagnostics and rank-one perturbation witnesses.
//!
//! A grid stores `||(A - lambda)^{-1}||^{-1}` (plain) or its essential
//! variant at every node, so one grid serves every `eps`: the
//! `eps`-pseudospectrum is the strict level set `{value < eps}`.

mod witness;

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limitops::{fold_symbol, min_sigma_min, operator_spectrum, LimitOperator, SearchOptions, Symbol};
use crate::linalg::Exponent;
use crate::norms::{lower_sequence, Localizer};
use crate::operator::BandOperator;

pub use witness::{witness_perturbation, PerturbationWitness, WitnessKind, WITNESS_SINGULARITY_TOL};

/// Rectangle `[re0, re1] x [im0, im1]` of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridBox {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
}

impl GridBox {
    pub fn new(re0: f64, re1: f64, im0: f64, im1: f64) -> Result<Self> {
        let ok = [re0, re1, im0, im1].iter().all(|v| v.is_finite()) && re0 <= re1 && im0 <= im1;
        if !ok {
            return Err(Error::PreconditionViolated(format!(
                "invalid box {re0},{re1},{im0},{im1}: need finite re0 <= re1 and im0 <= im1"
            )));
        }
        Ok(GridBox { re0, re1, im0, im1 })
    }

    /// `[-r, r]^2`.
    pub fn square(r: f64) -> Self {
        GridBox {
            re0: -r,
            re1: r,
            im0: -r,
            im1: r,
        }
    }
}

impl FromStr for GridBox {
    type Err = Error;

    /// Parses `re0,re1,im0,im1`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::PreconditionViolated(format!("invalid box '{s}': {e}")))?;
        if parts.len() != 4 {
            return Err(Error::PreconditionViolated(format!(
                "invalid box '{s}': expected re0,re1,im0,im1"
            )));
        }
        GridBox::new(parts[0], parts[1], parts[2], parts[3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Plain,
    Essential,
}

/// Route to the essential resolvent values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EssentialMethod {
    /// `mu(A - lambda)`.
    Mu,
    /// `min ||(A_h - lambda)^{-1}||^{-1}` over the operator spectrum.
    Limitops,
    /// Both; the limit-operator values go to `values_alt`.
    Both,
}

impl FromStr for EssentialMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mu" => Ok(EssentialMethod::Mu),
            "limitops" => Ok(EssentialMethod::Limitops),
            "both" => Ok(EssentialMethod::Both),
            other => Err(Error::PreconditionViolated(format!(
                "unknown method '{other}' (expected mu, limitops or both)"
            ))),
        }
    }
}

/// Reciprocal resolvent norms on an `nx x ny` grid of nodes.
#[derive(Debug, Clone)]
pub struct PseudospectrumGrid {
    pub bounds: GridBox,
    pub nx: usize,
    pub ny: usize,
    pub kind: GridKind,
    /// Node values, `values[iy * nx + ix]`.
    pub values: Vec<f64>,
    pub values_alt: Option<Vec<f64>>,
}

fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n <= 1 {
        lo
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

impl PseudospectrumGrid {
    pub fn node(&self, ix: usize, iy: usize) -> Complex64 {
        Complex64::new(
            axis(self.bounds.re0, self.bounds.re1, self.nx, ix),
            axis(self.bounds.im0, self.bounds.im1, self.ny, iy),
        )
    }

    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.ny).flat_map(move |iy| (0..self.nx).map(move |ix| (ix, iy, self.node(ix, iy))))
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    /// Node spacing `(dx, dy)`.
    pub fn spacing(&self) -> (f64, f64) {
        let step = |lo: f64, hi: f64, n: usize| if n <= 1 { 0.0 } else { (hi - lo) / (n - 1) as f64 };
        (
            step(self.bounds.re0, self.bounds.re1, self.nx),
            step(self.bounds.im0, self.bounds.im1, self.ny),
        )
    }

    pub fn cell_diagonal(&self) -> f64 {
        let (dx, dy) = self.spacing();
        dx.hypot(dy)
    }

    /// `max |value - value_alt|` when both routes were computed.
    pub fn max_discrepancy(&self) -> Option<f64> {
        self.values_alt.as_ref().map(|alt| {
            self.values
                .iter()
                .zip(alt)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }

    /// CSV with header `re,im,value[,value_alt]`, one row per node with the
    /// real part varying fastest.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(if self.values_alt.is_some() {
            "re,im,value,value_alt\n"
        } else {
            "re,im,value\n"
        });
        for (ix, iy, z) in self.nodes() {
            let _ = write!(out, "{},{},{}", z.re, z.im, self.value(ix, iy));
            if let Some(alt) = &self.values_alt {
                let _ = write!(out, ",{}", alt[iy * self.nx + ix]);
            }
            out.push('\n');
        }
        out
    }
}

fn check_grid(a: &BandOperator, nx: usize, ny: usize, tol: f64) -> Result<()> {
    if a.exponent() != Exponent::Two {
        return Err(Error::UnsupportedExponent(format!(
            "pseudospectra need p = 2, got p = {}",
            a.exponent()
        )));
    }
    if nx == 0 || ny == 0 {
        return Err(Error::PreconditionViolated("grid needs nx, ny >= 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::PreconditionViolated(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

fn evaluate(
    bounds: GridBox,
    nx: usize,
    ny: usize,
    f: impl Fn(Complex64) -> Result<f64> + Sync,
) -> Result<Vec<f64>> {
    (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let (ix, iy) = (k % nx, k / nx);
            f(Complex64::new(
                axis(bounds.re0, bounds.re1, nx, ix),
                axis(bounds.im0, bounds.im1, ny, iy),
            ))
        })
        .collect()
}

/// `min(nu(A - lambda), nu((A - lambda)*))` at every node.
pub fn pseudospectrum_grid(
    a: &BandOperator,
    bounds: GridBox,
    nx: usize,
    ny: usize,
    tol: f64,
) -> Result<PseudospectrumGrid> {
    check_grid(a, nx, ny, tol)?;
    let loc = Localizer::new(a);
    let opts = SearchOptions::uncertified();
    let values = evaluate(bounds, nx, ny, |lambda| {
        let direct = lower_sequence(&loc, lambda, false, tol, &opts)?.value;
        let adjoint = lower_sequence(&loc, lambda, true, tol, &opts)?.value;
        Ok(direct.min(adjoint))
    })?;
    Ok(PseudospectrumGrid {
        bounds,
        nx,
        ny,
        kind: GridKind::Plain,
        values,
        values_alt: None,
    })
}

/// Essential reciprocal resolvent norms at every node.
pub fn essential_pseudospectrum_grid(
    a: &BandOperator,
    bounds: GridBox,
    nx: usize,
    ny: usize,
    tol: f64,
    method: EssentialMethod,
) -> Result<PseudospectrumGrid> {
    check_grid(a, nx, ny, tol)?;
    let opts = SearchOptions::uncertified();

    let adjoint = a.adjoint()?;
    let (direct_loc, adjoint_loc) = (Localizer::new(a), Localizer::new(&adjoint));
    let via_mu = |lambda: Complex64| -> Result<f64> {
        let (x, _) = direct_loc.tail_lower(lambda, &opts)?;
        let (y, _) = adjoint_loc.tail_lower(lambda.conj(), &opts)?;
        Ok(x.min(y))
    };

    // shifted limit operators are unitarily equivalent: one per class
    let mut classes: Vec<LimitOperator> = Vec::new();
    for l in operator_spectrum(a)? {
        let mut seen = false;
        for c in &classes {
            for k in 0..l.period as i64 {
                if c.operator.shift_conjugate(k)?.entrywise_eq(&l.operator) {
                    seen = true;
                    break;
                }
            }
        }
        if !seen {
            classes.push(l);
        }
    }
    let symbols: Vec<Symbol> = classes.iter().map(fold_symbol).collect::<Result<_>>()?;
    let via_limops = |lambda: Complex64| -> Result<f64> {
        let mut best = f64::INFINITY;
        for s in &symbols {
            best = best.min(min_sigma_min(s, lambda, &opts)?.value);
        }
        Ok(best)
    };

    let (values, values_alt) = match method {
        EssentialMethod::Mu => (evaluate(bounds, nx, ny, via_mu)?, None),
        EssentialMethod::Limitops => (evaluate(bounds, nx, ny, via_limops)?, None),
        EssentialMethod::Both => (
            evaluate(bounds, nx, ny, via_mu)?,
            Some(evaluate(bounds, nx, ny, via_limops)?),
        ),
    };
    Ok(PseudospectrumGrid {
        bounds,
        nx,
        ny,
        kind: GridKind::Essential,
        values,
        values_alt,
    })
}

/// Nodes `(ix, iy)` with `value < eps`.
pub fn level_set(grid: &PseudospectrumGrid, eps: f64) -> Vec<(usize, usize)> {
    grid.nodes()
        .filter(|&(ix, iy, _)| grid.value(ix, iy) < eps)
        .map(|(ix, iy, _)| (ix, iy))
        .collect()
}

/// Hausdorff distance between a level set and the zero-level set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HausdorffGap {
    pub epsilon: f64,
    /// `None` when either set is empty on the grid.
    pub distance: Option<f64>,
    /// The distance is meaningful up to this grid resolution.
    pub resolution: f64,
}

/// Hausdorff distances between `level_set(eps)` and `{value <= tol}` for a
/// decreasing list of `eps`.
pub fn hausdorff_gap(grid: &PseudospectrumGrid, eps_list: &[f64], tol: f64) -> Result<Vec<HausdorffGap>> {
    if eps_list.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::PreconditionViolated("eps list must be decreasing".into()));
    }
    let points = |set: &[(usize, usize)]| -> Vec<Complex64> {
        set.iter().map(|&(ix, iy)| grid.node(ix, iy)).collect()
    };
    let zero: Vec<Complex64> = grid
        .nodes()
        .filter(|&(ix, iy, _)| grid.value(ix, iy) <= tol)
        .map(|(_, _, z)| z)
        .collect();
    Ok(eps_list
        .iter()
        .map(|&eps| {
            let level = points(&level_set(grid, eps));
            let distance = if level.is_empty() || zero.is_empty() {
                None
            } else {
                Some(directed(&level, &zero).max(directed(&zero, &level)))
            };
            HausdorffGap {
                epsilon: eps,
                distance,
                resolution: grid.cell_diagonal(),
            }
        })
        .collect())
}

fn directed(from: &[Complex64], to: &[Complex64]) -> f64 {
    from.iter()
        .map(|p| to.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}
