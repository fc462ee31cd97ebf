//! Window enumeration shared by the norm-type functionals.
//!
//! For an eventually periodic operator only finitely many column windows of
//! a given length produce distinct compressions: those meeting the core
//! (plus the band) and one window per tail residue on either side. For an
//! operator with seeded-random diagonals the windows are those inside the
//! sample window `F = [-R, R]`.

use num_complex::Complex64;

use crate::error::Result;
use crate::limitops::{max_sigma_max, min_sigma_min, SearchOptions, Symbol};
use crate::linalg::{induced_p_norm, sigma_min, Matrix};
use crate::operator::{BandOperator, Interval, Structure};

#[derive(Debug, Clone, Copy)]
pub(crate) enum Shape {
    Periodic { core: i64, left: usize, right: usize },
    Sampled { radius: i64 },
}

#[derive(Debug, Clone)]
pub(crate) struct Localizer<'a> {
    pub(crate) a: &'a BandOperator,
    pub(crate) shape: Shape,
    pub(crate) w: i64,
    /// Symbols of the right and left tails, folded from far-out entries.
    pub(crate) tails: Vec<Symbol>,
    /// The tails folded at a canonical base, duplicates removed. Same
    /// extrema as `tails`, since moving the fold base only conjugates the
    /// symbol by a unitary.
    distinct: Vec<Symbol>,
}

impl<'a> Localizer<'a> {
    pub(crate) fn new(a: &'a BandOperator) -> Self {
        let w = a.band_width() as i64;
        let d = a.block_dim();
        let mut distinct: Vec<Symbol> = Vec::new();
        let (shape, tails) = match a.structure() {
            Structure::EventuallyPeriodic {
                core_radius,
                left_period,
                right_period,
            } => {
                let bw = a.band_width();
                let right = Symbol::fold(d, right_period, bw, core_radius + 1, |i, j| a.entry(i, j));
                let left = Symbol::fold(d, left_period, bw, -core_radius - left_period as i64, |i, j| {
                    a.entry(i, j)
                });
                let (ql, qr) = (left_period as i64, right_period as i64);
                // fold base with the smallest Lipschitz bound, scanning one
                // period from a multiple of it
                let canonical = |q: usize, start: i64| {
                    (0..q as i64)
                        .map(|s| Symbol::fold(d, q, bw, start + s, |i, j| a.entry(i, j)))
                        .min_by(|x, y| x.lipschitz().total_cmp(&y.lipschitz()))
                        .expect("period >= 1")
                };
                let aligned = [
                    canonical(right_period, (core_radius + qr) / qr * qr),
                    canonical(left_period, -(core_radius + 3 * ql - 1) / ql * ql),
                ];
                for s in aligned {
                    if !distinct.contains(&s) {
                        distinct.push(s);
                    }
                }
                (
                    Shape::Periodic {
                        core: core_radius,
                        left: left_period,
                        right: right_period,
                    },
                    vec![right, left],
                )
            }
            Structure::Sampled { radius } => (Shape::Sampled { radius }, Vec::new()),
        };
        Localizer {
            a,
            shape,
            w,
            tails,
            distinct,
        }
    }

    pub(crate) fn sample_window(&self) -> Option<Interval> {
        match self.shape {
            Shape::Sampled { radius } => Some(Interval::centered(radius)),
            Shape::Periodic { .. } => None,
        }
    }

    /// Least common period of both tails (1 for sampled operators).
    pub(crate) fn period(&self) -> usize {
        match self.shape {
            Shape::Periodic { left, right, .. } => crate::util::lcm(left, right),
            Shape::Sampled { .. } => 1,
        }
    }

    pub(crate) fn core(&self) -> i64 {
        match self.shape {
            Shape::Periodic { core, .. } => core,
            Shape::Sampled { radius } => radius,
        }
    }

    /// Representative column windows of length `len`.
    pub(crate) fn windows(&self, len: usize) -> Vec<Interval> {
        let len = len.max(1);
        match self.shape {
            Shape::Periodic { core, left, right } => {
                let lo = -core - self.w - len as i64 - left as i64 + 1;
                let hi = core + self.w + right as i64;
                (lo..=hi).map(|s| Interval::starting_at(s, len)).collect()
            }
            Shape::Sampled { radius } => {
                let f = Interval::centered(radius);
                if len >= f.len() {
                    vec![f]
                } else {
                    (f.lo..=f.hi - len as i64 + 1)
                        .map(|s| Interval::starting_at(s, len))
                        .collect()
                }
            }
        }
    }

    /// Windows of length `len` whose rows meet the core, at stride
    /// `len / 2`. Every window of length `len / 2` meeting the core lies in
    /// one of them; windows seeing only a tail are left out since their
    /// norms and lower norms are dominated by those of the tail operator.
    pub(crate) fn core_windows(&self, len: usize) -> Vec<Interval> {
        let len = len.max(1);
        let core = self.core();
        let lo = -core - self.w - len as i64 + 1;
        let hi = core + self.w;
        let stride = (len / 2).max(1);
        let mut out: Vec<Interval> = (0..)
            .map(|k| lo + k * stride as i64)
            .take_while(|&s| s <= hi)
            .map(|s| Interval::starting_at(s, len))
            .collect();
        if out.last().map(|w| w.lo) != Some(hi) {
            out.push(Interval::starting_at(hi, len));
        }
        out
    }

    /// Compression of `A - lambda I` to `rows x cols`.
    pub(crate) fn shifted(&self, rows: Interval, cols: Interval, lambda: Complex64) -> Matrix {
        let mut m = self.a.compression(rows, cols);
        if lambda != Complex64::new(0.0, 0.0) {
            let d = self.a.block_dim();
            for k in rows.intersect(&cols).iter() {
                let (r, c) = ((k - rows.lo) as usize * d, (k - cols.lo) as usize * d);
                for t in 0..d {
                    m.set(r + t, c + t, m.get(r + t, c + t) - lambda);
                }
            }
        }
        m
    }

    /// `|||A|||_D` in the operator's exponent.
    pub(crate) fn norm_at(&self, len: usize) -> Result<f64> {
        self.norm_over(&self.windows(len))
    }

    pub(crate) fn norm_over(&self, windows: &[Interval]) -> Result<f64> {
        let p = self.a.exponent();
        let mut best: f64 = 0.0;
        for &cols in windows {
            let m = self.a.compression(cols.expand(self.w), cols);
            best = best.max(induced_p_norm(&m, p)?);
        }
        Ok(best)
    }

    /// Smallest `sigma_min` of `(A - lambda I) chi_W` (or of
    /// `(A - lambda I)* chi_W` when `adjoint`) over windows of length `len`.
    pub(crate) fn lower_at(&self, len: usize, lambda: Complex64, adjoint: bool) -> Result<f64> {
        self.lower_over(&self.windows(len), lambda, adjoint)
    }

    pub(crate) fn lower_over(&self, windows: &[Interval], lambda: Complex64, adjoint: bool) -> Result<f64> {
        let mut best = f64::INFINITY;
        for &cols in windows {
            let rows = cols.expand(self.w);
            let s = if adjoint {
                sigma_min(&self.shifted(cols, rows, lambda).adjoint())?
            } else {
                sigma_min(&self.shifted(rows, cols, lambda))?
            };
            best = best.min(s);
        }
        Ok(best)
    }

    /// `min` over both tails of `min_theta sigma_min(a(theta) - lambda)`;
    /// infinite when there are no tails.
    pub(crate) fn tail_lower(&self, lambda: Complex64, opts: &SearchOptions) -> Result<(f64, f64)> {
        let mut best = (f64::INFINITY, 0.0);
        for t in &self.distinct {
            let e = min_sigma_min(t, lambda, opts)?;
            if e.value < best.0 {
                best = (e.value, e.certified_gap);
            }
        }
        Ok(best)
    }

    /// `max` over both tails of `max_theta sigma_max(a(theta))`.
    pub(crate) fn tail_norm(&self, opts: &SearchOptions) -> Result<(f64, f64)> {
        let mut best = (0.0, 0.0);
        for t in &self.distinct {
            let e = max_sigma_max(t, opts)?;
            if e.value > best.0 {
                best = (e.value, e.certified_gap);
            }
        }
        Ok(best)
    }
}
