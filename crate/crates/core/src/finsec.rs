//! Finite sections `A_n = P_n A P_n` with `P_n` the projection onto
//! `[-n, n]`, their stability, and the identities linking
//! `limsup ||A_n^{-1}||` and `limsup kappa(A_n)` to the stability spectrum:
//! `A` itself together with the half-line truncations of its limit
//! operators, padded by `c I`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limitops::operator_spectrum;
use crate::linalg::{singular_values, Exponent, Matrix};
use crate::norms::{inverse_norm_recip, op_norm};
use crate::operator::{BandOperator, Interval, Side, Structure};

/// Sections with `sigma_min` at or below this value count as singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-10;
/// Tail inverse norms above this bound make the sequence unstable.
pub const STABILITY_BOUND: f64 = 1e6;
pub const DEFAULT_NMAX: usize = 40;

#[derive(Debug, Clone)]
pub struct FinSecReport {
    pub n_list: Vec<usize>,
    pub sigma_min_list: Vec<f64>,
    pub sigma_max_list: Vec<f64>,
    /// `||A_n^{-1}||`, infinite for singular sections.
    pub inv_norm_list: Vec<f64>,
    pub cond_list: Vec<f64>,
    pub c: f64,
    /// Set when `c < ||A||`.
    pub c_below_norm: bool,
    pub stable: bool,
    /// Sections are required to be invertible from here on.
    pub n0: usize,
    pub limsup_inv_norm: f64,
    pub limsup_cond: f64,
}

impl FinSecReport {
    /// `||A_{n,c}^{-1}|| = max(||A_n^{-1}||, 1/c)`.
    pub fn padded_inv_norm(&self, k: usize) -> f64 {
        self.inv_norm_list[k].max(1.0 / self.c)
    }

    /// CSV `n,sigma_min,inv_norm,cond`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,sigma_min,inv_norm,cond\n");
        for k in 0..self.n_list.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.n_list[k], self.sigma_min_list[k], self.inv_norm_list[k], self.cond_list[k]
            ));
        }
        out
    }
}

fn require_hilbert(a: &BandOperator) -> Result<()> {
    if a.exponent() != Exponent::Two {
        return Err(Error::UnsupportedExponent(format!(
            "finite sections are analysed for p = 2, got p = {}",
            a.exponent()
        )));
    }
    Ok(())
}

fn core_radius(a: &BandOperator) -> usize {
    match a.structure() {
        Structure::EventuallyPeriodic { core_radius, .. } => core_radius as usize,
        Structure::Sampled { .. } => 0,
    }
}

/// Finite sections for `n = 1..=n_max`. Singular sections are recorded with
/// an infinite inverse norm.
pub fn finite_sections(a: &BandOperator, n_max: usize, c: f64) -> Result<FinSecReport> {
    require_hilbert(a)?;
    if n_max == 0 {
        return Err(Error::PreconditionViolated("n_max must be at least 1".into()));
    }
    if !(c > 0.0) {
        return Err(Error::PreconditionViolated(format!("c must be positive, got {c}")));
    }
    let norm = op_norm(a, crate::norms::DEFAULT_TOLERANCE)?.value;

    let n_list: Vec<usize> = (1..=n_max).collect();
    let sv: Vec<(f64, f64)> = n_list
        .par_iter()
        .map(|&n| {
            let s = singular_values(&a.truncate(n))?;
            Ok((*s.last().expect("non-empty section"), s[0]))
        })
        .collect::<Result<_>>()?;
    let sigma_min_list: Vec<f64> = sv.iter().map(|p| p.0).collect();
    let sigma_max_list: Vec<f64> = sv.iter().map(|p| p.1).collect();
    let inv_norm_list: Vec<f64> = sigma_min_list
        .iter()
        .map(|&s| if s > SINGULAR_THRESHOLD { 1.0 / s } else { f64::INFINITY })
        .collect();
    let cond_list: Vec<f64> = inv_norm_list.iter().zip(&sigma_max_list).map(|(i, s)| i * s).collect();

    let tail = n_max - n_max.div_ceil(2);
    let limsup_inv_norm = inv_norm_list[tail..].iter().copied().fold(0.0, f64::max);
    let limsup_cond = cond_list[tail..].iter().copied().fold(0.0, f64::max);
    let n0 = core_radius(a) + a.band_width();
    let stable = n_list
        .iter()
        .zip(&inv_norm_list)
        .all(|(&n, &inv)| n < n0 || inv.is_finite())
        && limsup_inv_norm <= STABILITY_BOUND;

    Ok(FinSecReport {
        n_list,
        sigma_min_list,
        sigma_max_list,
        inv_norm_list,
        cond_list,
        c,
        c_below_norm: c < norm - 1e-9,
        stable,
        n0,
        limsup_inv_norm,
        limsup_cond,
    })
}

/// `A_{n,c} = P_n A P_n + c Q_n` on `[-n - margin, n + margin]`.
pub fn padded_section(a: &BandOperator, n: usize, c: f64, margin: usize) -> Matrix {
    let n = n as i64;
    let outer = Interval::centered(n + margin as i64);
    let inner = Interval::centered(n);
    let d = a.block_dim();
    let mut m = Matrix::zeros(outer.len() * d, outer.len() * d);
    m.set_block(margin * d, margin * d, &a.compression(inner, inner));
    for k in outer.iter().filter(|k| !inner.contains(*k)) {
        let r = (k - outer.lo) as usize * d;
        for t in 0..d {
            m.set(r + t, r + t, Complex64::new(c, 0.0));
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberTag {
    /// `A` itself.
    Operator,
    /// `chi_H A_h chi_H + c chi_{Z \ H}` for a limit operator `A_h` and a
    /// half-line `H`.
    HalfLineTruncation,
}

impl MemberTag {
    pub fn label(self) -> &'static str {
        match self {
            MemberTag::Operator => "A",
            MemberTag::HalfLineTruncation => "half_line_truncation",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StabilityMember {
    pub tag: MemberTag,
    pub description: String,
    pub operator: BandOperator,
    /// `||S^{-1}||^{-1}`.
    pub inverse_norm_recip: f64,
    /// `||S^{-1}||`; infinite when `S` is not invertible within tolerance.
    pub inverse_norm: f64,
}

#[derive(Debug, Clone)]
pub struct StabilitySpectrum {
    pub c: f64,
    pub members: Vec<StabilityMember>,
}

impl StabilitySpectrum {
    /// `max ||S^{-1}||` over the members.
    pub fn max_inverse_norm(&self) -> f64 {
        self.members.iter().map(|m| m.inverse_norm).fold(0.0, f64::max)
    }
}

/// `A` and the padded half-line truncations of its limit operators, up to
/// shifts. A limit operator at `+inf` is kept on `(-inf, 0]`, one at `-inf`
/// on `[0, inf)`; every residue shift is enumerated by the operator
/// spectrum, so cutting at 0 covers all cut positions.
pub fn stability_spectrum(a: &BandOperator, c: f64, tol: f64) -> Result<StabilitySpectrum> {
    require_hilbert(a)?;
    if !(c > 0.0) {
        return Err(Error::PreconditionViolated(format!("c must be positive, got {c}")));
    }
    let pad = Complex64::new(c, 0.0);
    let mut candidates = vec![(MemberTag::Operator, "A".to_string(), a.clone())];
    for l in operator_spectrum(a)? {
        let mut sides: Vec<(Side, usize)> = Vec::new();
        for &(side, r) in &l.sources {
            if !sides.iter().any(|(s, _)| *s == side) {
                sides.push((side, r));
            }
        }
        for (side, r) in sides {
            let (s, half) = match side {
                Side::Right => (l.operator.pad_outside(|i| i <= 0, pad, 0)?, "(-inf, 0]"),
                Side::Left => (l.operator.pad_outside(|i| i >= 0, pad, 0)?, "[0, +inf)"),
            };
            let description = format!("limit operator at {} (residue {r}) on {half}", side.label());
            candidates.push((MemberTag::HalfLineTruncation, description, s));
        }
    }

    let mut unique: Vec<(MemberTag, String, BandOperator)> = Vec::new();
    for cand in candidates {
        if !unique.iter().any(|u| u.2.entrywise_eq(&cand.2)) {
            unique.push(cand);
        }
    }
    let members = unique
        .into_par_iter()
        .map(|(tag, description, operator)| {
            let recip = inverse_norm_recip(&operator, tol)?;
            Ok(StabilityMember {
                tag,
                description,
                operator,
                inverse_norm_recip: recip,
                inverse_norm: if recip > tol { 1.0 / recip } else { f64::INFINITY },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilitySpectrum { c, members })
}

/// Both sides of `limsup ||A_n^{-1}|| = max_S ||S^{-1}||`.
#[derive(Debug, Clone)]
pub struct Q1Check {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub report: FinSecReport,
    pub spectrum: StabilitySpectrum,
}

pub fn q1_check(a: &BandOperator, c: f64, n_max: usize, tol: f64) -> Result<Q1Check> {
    let report = finite_sections(a, n_max, c)?;
    if !report.stable {
        return Err(Error::NotStable(format!(
            "singular or unbounded sections up to n = {n_max} (limsup estimate {})",
            report.limsup_inv_norm
        )));
    }
    let spectrum = stability_spectrum(a, c, tol)?;
    let (lhs, rhs) = (report.limsup_inv_norm, spectrum.max_inverse_norm());
    Ok(Q1Check {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
        report,
        spectrum,
    })
}

/// `limsup kappa(A_n)` against `||A|| max_S ||S^{-1}||`, together with
/// `lim ||A_n|| = ||A||`.
#[derive(Debug, Clone)]
pub struct Q3Check {
    pub limsup_cond: f64,
    pub identity_value: f64,
    pub gap: f64,
    pub op_norm: f64,
    /// `||A_{n_max}||`.
    pub section_norm: f64,
    pub norm_gap: f64,
}

pub fn q3_check(a: &BandOperator, c: f64, n_max: usize, tol: f64) -> Result<Q3Check> {
    let q1 = q1_check(a, c, n_max, tol)?;
    let norm = op_norm(a, tol)?.value;
    let section_norm = *q1.report.sigma_max_list.last().expect("n_max >= 1");
    let identity_value = norm * q1.rhs;
    Ok(Q3Check {
        limsup_cond: q1.report.limsup_cond,
        identity_value,
        gap: (q1.report.limsup_cond - identity_value).abs(),
        op_norm: norm,
        section_norm,
        norm_gap: (section_norm - norm).abs(),
    })
}

/// `||diag(A_1, ..., A_k)|| = max_n ||A_n||`.
pub fn stacked_norm(list: &[Matrix]) -> Result<f64> {
    if list.is_empty() {
        return Err(Error::EmptyInput("stacked_norm needs at least one matrix".into()));
    }
    let mut best: f64 = 0.0;
    for m in list {
        best = best.max(crate::linalg::sigma_max(m)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::linalg::sigma_min;

    #[test]
    fn block_example_sections() {
        let r = finite_sections(&corpus::block_diag_example(0.25), 12, 2.0).unwrap();
        for (k, &n) in r.n_list.iter().enumerate() {
            let expected = if n % 2 == 0 { 4.0 / 3.0 } else { 4.0 };
            assert!((r.inv_norm_list[k] - expected).abs() < 1e-9, "n = {n}");
        }
        assert!(r.stable);
        assert!((r.limsup_inv_norm - 4.0).abs() < 1e-9);

        let r = finite_sections(&corpus::block_diag_example(0.0), 12, 2.0).unwrap();
        assert!(!r.stable);
        assert!(r.n_list.iter().zip(&r.inv_norm_list).all(|(n, i)| n % 2 == 0 || i.is_infinite()));
    }

    #[test]
    fn identity_sections() {
        let r = finite_sections(&BandOperator::identity(1, Exponent::Two), 6, 1.0).unwrap();
        assert!(r.inv_norm_list.iter().chain(&r.cond_list).all(|v| (v - 1.0).abs() < 1e-12));
        assert!(r.stable);
        let s = stability_spectrum(&BandOperator::identity(1, Exponent::Two), 1.0, 1e-8).unwrap();
        assert_eq!(s.members.len(), 1);
        assert!((s.members[0].inverse_norm - 1.0).abs() < 1e-9);
    }

    #[test]
    fn block_example_stability_spectrum() {
        for mu in [0.1, 0.25, 0.75] {
            let s = stability_spectrum(&corpus::block_diag_example(mu), 2.0, 1e-8).unwrap();
            assert_eq!(s.members.len(), 5);
            let mut norms: Vec<f64> = s.members.iter().map(|m| m.inverse_norm).collect();
            norms.sort_by(f64::total_cmp);
            let (a, e) = (1.0 / (1.0 - mu), 1.0 / mu.min(1.0 - mu));
            let mut expected = vec![a, a, a, e, e];
            expected.sort_by(f64::total_cmp);
            for (x, y) in norms.iter().zip(&expected) {
                assert!((x - y).abs() < 1e-6, "mu = {mu}: {norms:?}");
            }
        }
        let s = stability_spectrum(&corpus::block_diag_example(0.0), 2.0, 1e-8).unwrap();
        assert_eq!(s.members.iter().filter(|m| m.inverse_norm.is_infinite()).count(), 2);
    }

    #[test]
    fn q1_and_q3_on_block_example() {
        let q = q1_check(&corpus::block_diag_example(0.25), 2.0, 40, 1e-8).unwrap();
        assert!((q.lhs - 4.0).abs() < 1e-9 && q.gap <= 1e-6);
        let q = q1_check(&corpus::block_diag_example(0.5), 2.0, 40, 1e-8).unwrap();
        assert!((q.rhs - 2.0).abs() < 1e-6 && q.gap <= 1e-6);
        let q3 = q3_check(&corpus::block_diag_example(0.25), 2.0, 40, 1e-8).unwrap();
        assert!((q3.limsup_cond - 5.0).abs() < 1e-5 && q3.gap <= 1e-5);
        assert!(q3.norm_gap <= 1e-6);
        assert!(matches!(
            q1_check(&corpus::block_diag_example(0.0), 2.0, 40, 1e-8),
            Err(Error::NotStable(_))
        ));
        let two = BandOperator::scalar(1, Exponent::Two, Complex64::new(2.0, 0.0));
        let q = q1_check(&two, 2.0, 10, 1e-8).unwrap();
        assert!((q.lhs - 0.5).abs() < 1e-12 && (q.rhs - 0.5).abs() < 1e-9);
    }

    #[test]
    fn padded_sections_match_inverse_norm() {
        let a = corpus::block_diag_example(0.25);
        let r = finite_sections(&a, 8, 2.0).unwrap();
        for (k, &n) in r.n_list.iter().enumerate() {
            let m = padded_section(&a, n, 2.0, 2);
            let inv = 1.0 / sigma_min(&m).unwrap();
            assert!((inv - r.padded_inv_norm(k)).abs() < 1e-9);
        }
    }

    #[test]
    fn stacked_norm_examples() {
        let a = corpus::block_diag_example(0.25);
        let sections: Vec<Matrix> = (1..=6).map(|n| a.truncate(n)).collect();
        assert!((stacked_norm(&sections).unwrap() - 1.25).abs() < 1e-12);
        assert!((stacked_norm(&[Matrix::identity(3)]).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(stacked_norm(&[]), Err(Error::EmptyInput(_))));
    }
}
