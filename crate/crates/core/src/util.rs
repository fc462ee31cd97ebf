pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        a.max(b)
    } else {
        a / gcd(a, b) * b
    }
}

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
#[inline]
pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform double in `[0, 1)` from the top 53 bits.
#[inline]
pub(crate) fn unit_interval(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Tracks a sequence of approximations and declares convergence once
/// `needed` consecutive increments each moved the value by less than `tol`.
#[derive(Debug, Clone)]
pub(crate) struct CauchyTracker {
    tol: f64,
    needed: usize,
    streak: usize,
    last: Option<f64>,
    pub(crate) last_gap: f64,
}

impl CauchyTracker {
    pub(crate) fn new(tol: f64, needed: usize) -> Self {
        CauchyTracker {
            tol,
            needed,
            streak: 0,
            last: None,
            last_gap: f64::INFINITY,
        }
    }

    /// Feeds the next value; returns true once converged.
    pub(crate) fn push(&mut self, value: f64) -> bool {
        if let Some(prev) = self.last {
            let gap = (value - prev).abs();
            self.last_gap = gap;
            if gap < self.tol {
                self.streak += 1;
            } else {
                self.streak = 0;
            }
        }
        self.last = Some(value);
        self.streak >= self.needed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcm_gcd() {
        assert_eq!(lcm(4, 6), 12);
        assert_eq!(lcm(1, 5), 5);
        assert_eq!(gcd(12, 18), 6);
    }

    #[test]
    fn splitmix_reference_values() {
        // first outputs of the reference generator seeded with 0
        let mut state = 0u64;
        let mut next = || {
            let out = splitmix64(state);
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            out
        };
        assert_eq!(next(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(next(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn cauchy_needs_consecutive_small_steps() {
        let mut t = CauchyTracker::new(1e-3, 3);
        assert!(!t.push(1.0));
        assert!(!t.push(1.0));
        assert!(!t.push(1.1));
        assert!(!t.push(1.1));
        assert!(!t.push(1.1));
        assert!(t.push(1.1));
    }
}
