//! Named operators used throughout the tests, the acceptance suite and the
//! shipped specification files.

use num_complex::Complex64;

use crate::linalg::{Exponent, Matrix};
use crate::operator::{BandOperator, DiagonalSymbol, Law, Tail};
use crate::util::{splitmix64, unit_interval};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn scalar_block(z: Complex64) -> Matrix {
    Matrix::scalar(1, z)
}

/// Partner of position `i` in the pairing `..., (-2, -1), 0, (1, 2), (3, 4), ...`.
fn pair_partner(i: i64) -> Option<i64> {
    match i {
        0 => None,
        i if i > 0 => Some(if i % 2 == 1 { i + 1 } else { i - 1 }),
        i => Some(if i % 2 == 0 { i + 1 } else { i - 1 }),
    }
}

/// `diag(..., B, B, center, B, B, ...)` with `B = [[mu, 1], [1, mu]]` and the
/// single `center` entry at position `(0, 0)`.
pub fn block_diag_with_center(mu: f64, center: f64) -> BandOperator {
    BandOperator::tabulate(1, Exponent::Two, [-1, 0, 1], 1, 2, 2, |i, a| {
        let value = match a {
            0 if i == 0 => center,
            0 => mu,
            _ if pair_partner(i) == Some(i - a) => 1.0,
            _ => 0.0,
        };
        scalar_block(c(value))
    })
}

/// The block example `diag(..., B, B, 1, B, B, ...)`.
pub fn block_diag_example(mu: f64) -> BandOperator {
    block_diag_with_center(mu, 1.0)
}

/// The forward shift `V_1` on `l^2(Z)`.
pub fn bilateral_shift() -> BandOperator {
    BandOperator::shift(1, Exponent::Two, 1)
}

/// Laurent operator with symbol `e^{i theta} + 0.5 e^{-i theta}`.
pub fn laurent_example() -> BandOperator {
    BandOperator::constant_diagonals(
        1,
        Exponent::Two,
        &[(1, scalar_block(c(1.0))), (-1, scalar_block(c(0.5)))],
    )
}

/// Multiplication by `1 / (1 + |k|)` on `[-radius, radius]`, zero outside.
pub fn decaying_multiplication(radius: i64) -> BandOperator {
    let zero = Tail::new(vec![scalar_block(c(0.0))], 0);
    let law = Law::EventuallyPeriodic {
        radius,
        core: (-radius..=radius).map(|k| scalar_block(c(1.0 / (1.0 + k.abs() as f64)))).collect(),
        left: zero.clone(),
        right: zero,
    };
    BandOperator::multiplication(1, Exponent::Two, law).expect("valid law")
}

/// A band operator whose diagonals `-w..=w` are all seeded-random.
pub fn seeded_random_band(seed: u64, block_dim: usize, w: usize, bound: f64, exponent: Exponent) -> BandOperator {
    let diagonals = (-(w as i64)..=w as i64)
        .map(|offset| {
            DiagonalSymbol::new(
                offset,
                Law::SeededRandom {
                    bound,
                    seed: splitmix64(seed ^ (offset as u64).wrapping_mul(0x2545_F491_4F6C_DD1D)),
                },
            )
        })
        .collect();
    BandOperator::new(block_dim, exponent, diagonals).expect("valid random operator")
}

/// Deterministic pseudo-random complex blocks in `[-1, 1]^2`.
struct BlockSource {
    state: u64,
}

impl BlockSource {
    fn next_f64(&mut self) -> f64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        2.0 * unit_interval(splitmix64(self.state)) - 1.0
    }

    fn block(&mut self, d: usize, complex: bool) -> Matrix {
        Matrix::from_fn(d, d, |_, _| {
            let re = self.next_f64();
            let im = if complex { self.next_f64() } else { 0.0 };
            Complex64::new(re, im)
        })
    }
}

/// Random eventually periodic operator: every diagonal in `-w..=w` gets a
/// random core of the given radius and random tails of the given periods.
pub fn random_eventually_periodic(
    seed: u64,
    block_dim: usize,
    w: usize,
    core_radius: i64,
    left_period: usize,
    right_period: usize,
) -> BandOperator {
    let mut src = BlockSource { state: seed };
    let diagonals = (-(w as i64)..=w as i64)
        .map(|offset| {
            let core = (0..2 * core_radius + 1).map(|_| src.block(block_dim, true)).collect();
            let left = Tail::new((0..left_period).map(|_| src.block(block_dim, true)).collect(), 0);
            let right = Tail::new((0..right_period).map(|_| src.block(block_dim, true)).collect(), 0);
            DiagonalSymbol::new(
                offset,
                Law::EventuallyPeriodic {
                    radius: core_radius,
                    core,
                    left,
                    right,
                },
            )
        })
        .collect();
    BandOperator::new(block_dim, Exponent::Two, diagonals).expect("valid random operator")
}

/// `2x2` Laurent operator with complex constant blocks on offsets -1, 0, 1.
pub fn block_laurent_example() -> BandOperator {
    let m = |rows: [[(f64, f64); 2]; 2]| {
        Matrix::from_fn(2, 2, |i, j| Complex64::new(rows[i][j].0, rows[i][j].1))
    };
    BandOperator::constant_diagonals(
        2,
        Exponent::Two,
        &[
            (-1, m([[(0.5, 0.0), (0.0, 0.0)], [(0.2, 0.1), (0.0, 0.0)]])),
            (0, m([[(1.0, 0.0), (0.3, 0.0)], [(0.0, -0.3), (-1.0, 0.5)]])),
            (1, m([[(0.0, 0.0), (0.4, 0.0)], [(0.0, 0.0), (0.25, 0.0)]])),
        ],
    )
}

/// Period-3 operator: periodic main diagonal plus a period-2 forward shift.
pub fn periodic_example() -> BandOperator {
    let diagonals = vec![
        DiagonalSymbol::new(
            0,
            Law::Periodic(vec![
                scalar_block(c(2.0)),
                scalar_block(Complex64::new(-1.0, 0.5)),
                scalar_block(c(0.5)),
            ]),
        ),
        DiagonalSymbol::new(1, Law::Periodic(vec![scalar_block(c(1.0)), scalar_block(c(0.3))])),
    ];
    BandOperator::new(1, Exponent::Two, diagonals).expect("valid periodic operator")
}

/// The ten eventually periodic operators of the acceptance corpus.
pub fn eventually_periodic_corpus() -> Vec<(&'static str, BandOperator)> {
    vec![
        ("block_diag_mu_0.25", block_diag_example(0.25)),
        ("block_diag_mu_0.75", block_diag_example(0.75)),
        ("block_diag_center_mu_0.25", block_diag_with_center(0.25, 0.125)),
        ("bilateral_shift", bilateral_shift()),
        ("laurent_shift_plus_half_backward", laurent_example()),
        ("decaying_multiplication", decaying_multiplication(40)),
        ("identity", BandOperator::identity(1, Exponent::Two)),
        ("block_laurent_d2", block_laurent_example()),
        ("periodic_q3", periodic_example()),
        ("random_eventually_periodic", random_eventually_periodic(7, 2, 1, 2, 2, 3)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_example_entries() {
        let a = block_diag_example(0.25);
        let e = |i, j| a.entry(i, j).get(0, 0).re;
        assert_eq!(e(1, 2), 1.0);
        assert_eq!(e(2, 1), 1.0);
        assert_eq!(e(0, 0), 1.0);
        assert_eq!(e(1, 1), 0.25);
        assert_eq!(e(-2, -1), 1.0);
        assert_eq!(e(-1, -2), 1.0);
        assert_eq!(e(0, 1), 0.0);
        assert_eq!(e(-1, 0), 0.0);
        assert_eq!(e(2, 3), 0.0);
        assert_eq!(e(40, 39), 1.0);
        assert_eq!(e(41, 42), 1.0);
        assert_eq!(e(-41, -42), 1.0);
        assert_eq!(e(-42, -43), 0.0);
        assert_eq!(e(-42, -41), 1.0);
    }

    #[test]
    fn random_operators_are_reproducible() {
        let a = seeded_random_band(3, 2, 2, 1.0, Exponent::Two);
        let b = seeded_random_band(3, 2, 2, 1.0, Exponent::Two);
        for k in -5..5 {
            assert_eq!(a.entry(k, k + 1), b.entry(k, k + 1));
            assert!(a.entry(k, k).max_abs() <= 1.0);
        }
        let other = seeded_random_band(4, 2, 2, 1.0, Exponent::Two);
        assert_ne!(a.entry(0, 0), other.entry(0, 0));
    }
}
