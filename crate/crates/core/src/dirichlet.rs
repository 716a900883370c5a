//! Squared magnitude of the partial Dirichlet-kernel sum
//! `D_L(f) = sum_{l=0}^{L-1} exp(j 2 pi l f / N)`.
//!
//! `|D_L(f)|^2 = sin^2(pi L f / N) / sin^2(pi f / N)`. Both sines are
//! evaluated after an exact reduction of their argument modulo `N`, so
//! orthogonality nulls (`L f / N` integer, `f / N` not) come out as exact
//! zeros instead of `1e-32`-sized residue.

use crate::math::{self, PI};
use crate::numerology::BASE_GRID;

/// Below this `|sin(pi f / N)|` the sinc-ratio limit form is used.
const NEAR_SINGULAR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelQuery {
    /// Number of summed samples `L`.
    pub length: u64,
    /// Frequency `f` in bins of the grid.
    pub freq_bins: f64,
    /// Grid size `N`.
    pub grid: u64,
}

impl KernelQuery {
    /// Query on the 4096-point base grid.
    pub fn base(length: u64, freq_bins: f64) -> Self {
        Self {
            length,
            freq_bins,
            grid: BASE_GRID,
        }
    }

    pub fn power(&self) -> f64 {
        dirichlet_power(self.length, self.freq_bins, self.grid)
    }
}

/// `|D_L(f)|^2` on an `N`-point grid. Returns `L^2` at `f = 0 (mod N)` and
/// `0` for `L = 0`.
pub fn dirichlet_power(length: u64, freq_bins: f64, grid: u64) -> f64 {
    debug_assert!(grid >= 1);
    if length == 0 {
        return 0.0;
    }
    let n = grid as f64;
    let l = length as f64;

    let den = abs_sin_pi_over(freq_bins, n);
    if den < NEAR_SINGULAR {
        let t = centered_rem(freq_bins, n) / n;
        let ratio = sinc(l * t) / sinc(t);
        return l * l * ratio * ratio;
    }
    let num = abs_sin_pi_over(l * freq_bins, n);
    let r = num / den;
    r * r
}

/// `|sin(pi x / n)|`, reducing `x` modulo `n` first.
fn abs_sin_pi_over(x: f64, n: f64) -> f64 {
    let mut r = x % n;
    if r < 0.0 {
        r += n;
    }
    // |sin| is symmetric about n/2 within one period
    if r > 0.5 * n {
        r = n - r;
    }
    if r == 0.0 {
        return 0.0;
    }
    math::sin(PI * r / n)
}

/// `x` reduced into `(-n/2, n/2]`.
fn centered_rem(x: f64, n: f64) -> f64 {
    let mut r = x % n;
    if r > 0.5 * n {
        r -= n;
    } else if r <= -0.5 * n {
        r += n;
    }
    r
}

/// `sin(pi u) / (pi u)`.
fn sinc(u: f64) -> f64 {
    let x = PI * u;
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        math::sin(x) / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::vec::Vec;

    /// Literal complex sum, the reference for the closed form.
    fn brute(length: u64, f: f64, grid: u64) -> f64 {
        let step = 2.0 * std::f64::consts::PI * f / grid as f64;
        let s: Complex64 = (0..length)
            .map(|l| {
                let a = step * l as f64;
                Complex64::new(a.cos(), a.sin())
            })
            .sum();
        s.norm_sqr()
    }

    #[test]
    fn in_phase_sum() {
        assert_eq!(dirichlet_power(7, 0.0, 4096), 49.0);
        assert_eq!(dirichlet_power(7, 4096.0, 4096), 49.0);
        assert_eq!(dirichlet_power(7, -8192.0, 4096), 49.0);
    }

    #[test]
    fn full_period_null() {
        assert_eq!(dirichlet_power(4096, 1.0, 4096), 0.0);
        for f in 1..64 {
            assert_eq!(dirichlet_power(2048, 2.0 * f as f64, 4096), 0.0);
        }
    }

    #[test]
    fn quarter_turn() {
        assert!((dirichlet_power(2, 2.0, 8) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn empty_sum() {
        assert_eq!(dirichlet_power(0, 3.5, 4096), 0.0);
    }

    #[test]
    fn near_singular_branch_is_continuous() {
        let l = 1904;
        let tiny = 1e-7; // sin(pi * 1e-7 / 4096) ~ 7.7e-11
        let v = dirichlet_power(l, tiny, 4096);
        let b = brute(l, tiny, 4096);
        assert!(((v - b) / b).abs() < 1e-10, "{v} vs {b}");
        let v = dirichlet_power(l, 4096.0 - tiny, 4096);
        assert!(((v - b) / b).abs() < 1e-10);
    }

    #[test]
    fn matches_direct_summation() {
        use rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for grid in [8u64, 64, 4096] {
            for length in 1..=64u64 {
                for _ in 0..1000 {
                    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
                    let f = (u - 0.5) * 4.0 * grid as f64;
                    let v = dirichlet_power(length, f, grid);
                    let b = brute(length, f, grid);
                    let scale = b.max(1e-6 * (length * length) as f64);
                    assert!((v - b).abs() / scale < 1e-10, "L={length} f={f} N={grid}: {v} vs {b}");
                }
            }
        }
    }

    #[test]
    fn long_lengths_match_direct_summation() {
        // lengths past one period arise for the literal formula with Q < 1
        for (length, f) in [(4384u64, 3.0), (6400, 17.25), (8192, 1.5), (1904, 255.0)] {
            let v = dirichlet_power(length, f, 4096);
            let b = brute(length, f, 4096);
            assert!((v - b).abs() <= 1e-9 * b.max(1.0), "L={length} f={f}: {v} vs {b}");
        }
    }

    proptest! {
        #[test]
        fn even(length in 0u64..8192, f in -8192.0f64..8192.0) {
            let a = dirichlet_power(length, f, 4096);
            let b = dirichlet_power(length, -f, 4096);
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }

        #[test]
        fn periodic(length in 0u64..8192, f in -4096.0f64..4096.0) {
            let a = dirichlet_power(length, f, 4096);
            let b = dirichlet_power(length, f + 4096.0, 4096);
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{} vs {}", a, b);
        }

        #[test]
        fn bounded(length in 0u64..8192, f in -8192.0f64..8192.0) {
            let v = dirichlet_power(length, f, 4096);
            let l2 = (length * length) as f64;
            prop_assert!(v >= 0.0);
            prop_assert!(v <= l2 * (1.0 + 1e-12));
        }

        #[test]
        fn integer_nulls_are_exact(k in 1u64..4096, m in 1u64..16) {
            // L f / N = m with f not a multiple of N
            let length = 4096 / m.next_power_of_two().min(4096);
            let f = (k * (4096 / length)) as f64;
            if f % 4096.0 != 0.0 {
                prop_assert_eq!(dirichlet_power(length, f, 4096), 0.0);
            }
        }
    }

    #[test]
    fn sample_grid_helpers() {
        let xs: Vec<f64> = (0..5).map(|k| centered_rem(k as f64 * 1000.0, 4096.0)).collect();
        assert_eq!(xs, [0.0, 1000.0, 2000.0, -1096.0, 4000.0 - 4096.0]);
        assert_eq!(KernelQuery::base(7, 0.0).power(), 49.0);
    }
}
