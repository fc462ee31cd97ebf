use num_complex::Complex64;

use super::*;
use crate::corpus;
use crate::linalg::{Matrix, singular_values};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn laurent_operator_is_its_own_limit() {
    let a = corpus::laurent_example();
    let ops = operator_spectrum(&a).unwrap();
    assert_eq!(ops.len(), 1);
    assert!(ops[0].operator.entrywise_eq(&a));
    assert_eq!(ops[0].sources, vec![(Side::Right, 0), (Side::Left, 0)]);
}

#[test]
fn decaying_multiplication_has_zero_limit() {
    let ops = operator_spectrum(&corpus::decaying_multiplication(10)).unwrap();
    assert_eq!(ops.len(), 1);
    assert!(ops[0].operator.is_zero());
    assert_eq!(laurent_norm(&ops[0]).unwrap(), 0.0);
    assert!((laurent_resolvent_recip(&ops[0], Complex64::new(0.3, 0.4)).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn block_example_has_two_limit_operators() {
    let a = corpus::block_diag_example(0.25);
    let ops = operator_spectrum(&a).unwrap();
    assert_eq!(ops.len(), 2);
    let e = |l: &LimitOperator, i, j| l.operator.entry(i, j).get(0, 0).re;
    // residue 0 at +inf keeps the pairs (2k+1, 2k+2)
    assert_eq!(ops[0].sources[0], (Side::Right, 0));
    assert_eq!(e(&ops[0], 1, 2), 1.0);
    assert_eq!(e(&ops[0], 0, 1), 0.0);
    assert_eq!(e(&ops[0], -1, 0), 1.0);
    assert_eq!(e(&ops[1], 0, 1), 1.0);
    for l in &ops {
        assert_eq!(l.period, 2);
        assert_eq!(l.sources.len(), 2);
        assert!(l.operator.shift_conjugate(2).unwrap().entrywise_eq(&l.operator));
        assert!((laurent_norm(l).unwrap() - 1.25).abs() < 1e-10);
        assert!((laurent_lower_norm(l).unwrap() - 0.75).abs() < 1e-10);
    }
}

#[test]
fn periodic_operator_returns_its_shifts() {
    let a = corpus::periodic_example();
    let ops = operator_spectrum(&a).unwrap();
    assert_eq!(ops.len(), 6);
    assert!(ops[0].operator.entrywise_eq(&a));
    for (k, l) in ops.iter().enumerate() {
        assert!(l.operator.entrywise_eq(&a.shift_conjugate(k as i64).unwrap()));
    }
}

#[test]
fn random_diagonals_are_rejected() {
    let a = corpus::seeded_random_band(1, 1, 1, 1.0, Exponent::Two);
    assert!(matches!(operator_spectrum(&a), Err(Error::UnsupportedClass(_))));
}

#[test]
fn symbol_examples() {
    let shift = as_limit_operator(&corpus::bilateral_shift()).unwrap();
    let s = fold_symbol(&shift).unwrap();
    for theta in [0.0, 0.7, 2.5] {
        let v = s.eval(theta).get(0, 0);
        assert!((v - Complex64::from_polar(1.0, theta)).norm() < 1e-14);
    }
    let id = as_limit_operator(&BandOperator::identity(2, Exponent::Two)).unwrap();
    assert_eq!(fold_symbol(&id).unwrap().eval(1.0), Matrix::identity(2));

    let ops = operator_spectrum(&corpus::block_diag_example(0.25)).unwrap();
    let aligned = ops.iter().find(|l| l.operator.entry(0, 1).get(0, 0).re == 1.0).unwrap();
    let s = fold_symbol(aligned).unwrap();
    let b = Matrix::from_real_rows(&[&[0.25, 1.0], &[1.0, 0.25]]);
    for theta in [0.0, 1.0, 3.0] {
        assert!((&s.eval(theta) - &b).max_abs() < 1e-14);
    }
}

#[test]
fn shift_norms_and_resolvent() {
    let l = as_limit_operator(&corpus::bilateral_shift()).unwrap();
    assert!((laurent_norm(&l).unwrap() - 1.0).abs() < 1e-12);
    assert!((laurent_lower_norm(&l).unwrap() - 1.0).abs() < 1e-12);
    assert!((laurent_resolvent_recip(&l, c(0.0)).unwrap() - 1.0).abs() < 1e-12);
    assert!((laurent_resolvent_recip(&l, c(0.5)).unwrap() - 0.5).abs() < 1e-12);
    let cert = laurent_resolvent_certified(&l, c(0.5)).unwrap();
    assert!(cert.certified_gap < 1e-2);
    let opts = SearchOptions {
        cert_budget: 1 << 17,
        ..SearchOptions::default()
    };
    let full = min_sigma_min(&fold_symbol(&l).unwrap(), c(0.5), &opts).unwrap();
    assert!(full.certified_gap <= 1.001e-7);
}

#[test]
fn non_hilbert_exponent_is_rejected() {
    let l = as_limit_operator(&corpus::bilateral_shift().with_exponent(Exponent::One)).unwrap();
    assert!(matches!(laurent_norm(&l), Err(Error::UnsupportedExponent(_))));
}

#[test]
fn folded_symbol_matches_window_compression_limit() {
    // sigma_max of a long section approaches the symbol norm from below
    let a = corpus::block_laurent_example();
    let l = as_limit_operator(&a).unwrap();
    let norm = laurent_norm(&l).unwrap();
    let section = singular_values(&a.truncate(60)).unwrap()[0];
    assert!(section <= norm + 1e-10);
    assert!(norm - section < 1e-2);
}

#[test]
fn limit_operators_respect_algebra() {
    let a = corpus::block_diag_example(0.25);
    let b = corpus::periodic_example();
    let sum = a.add(&b).unwrap();
    let prod = a.compose(&b).unwrap();
    for side in [Side::Right, Side::Left] {
        let (ta, tb) = (tail_operator(&a, side).unwrap(), tail_operator(&b, side).unwrap());
        for r in 0..6 {
            let ah = ta.shift_conjugate(r).unwrap();
            let bh = tb.shift_conjugate(r).unwrap();
            let sh = tail_operator(&sum, side).unwrap().shift_conjugate(r).unwrap();
            let ph = tail_operator(&prod, side).unwrap().shift_conjugate(r).unwrap();
            assert!(sh.entrywise_eq(&ah.add(&bh).unwrap()));
            assert!(ph.entrywise_eq(&ah.compose(&bh).unwrap()));
        }
    }
}
