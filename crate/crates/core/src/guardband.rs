//! Minimal guard band meeting a rejection target.
//!
//! The multi-tone MSE oscillates with the guard band, so it cannot be
//! inverted directly. The search evaluates it on a grid `step, 2 step, ...,
//! horizon` and returns the smallest grid point from which the target holds
//! at every grid point up to the horizon.
//!
//! The horizon is also capped at the alias-free limit `(N - span) / 2`,
//! where `span` is the interferer block width in bins: past it, the far edge
//! of the block folded by the 61.44 MHz sampling sits closer to the victim
//! than the near edge, and "guard band" no longer measures a distance.

use alloc::vec::Vec;

use crate::analytic::{multi_tone_unchecked, Evaluator, InterferencePair, ToneAllocation};
use crate::error::{Error, Result};
use crate::math;
use crate::numerology::{FrequencyOffset, BASE_GRID};
use crate::{mse_from_rejection_db, rejection_db};

/// Default search horizon, in base-grid bins (30.72 MHz).
pub const DEFAULT_HORIZON_BINS: f64 = 2048.0;
const REFINE_POINTS: u32 = 64;
const REFINE_ITERS: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Grid step in bins; `None` means one victim subcarrier.
    pub step: Option<FrequencyOffset>,
    pub horizon: FrequencyOffset,
    /// Bisect inside the last grid cell for a fractional-bin result.
    pub refine: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            step: None,
            horizon: FrequencyOffset::from_bins(DEFAULT_HORIZON_BINS).unwrap(),
            refine: false,
        }
    }
}

impl SearchOptions {
    pub fn with_horizon_bins(bins: f64) -> Result<Self> {
        Ok(Self {
            horizon: FrequencyOffset::from_bins(bins)?,
            ..Self::default()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuardBandRequirement {
    pub pair: InterferencePair,
    pub n_int: u64,
    pub target_rejection_db: f64,
    pub min_gb: FrequencyOffset,
    /// Horizon actually searched (the requested one, capped at the
    /// alias-free limit).
    pub search_horizon: FrequencyOffset,
    /// Worst rejection over the grid points from `min_gb` to the horizon.
    pub achieved_rejection_db: f64,
}

impl GuardBandRequirement {
    /// `min_gb` in subcarriers of the victim numerology.
    pub fn victim_subcarriers(&self) -> f64 {
        self.min_gb.subcarriers(self.pair.mu_u())
    }

    pub fn victim_rbs(&self) -> f64 {
        self.min_gb.rbs(self.pair.mu_u())
    }
}

fn grid_step(pair: &InterferencePair, options: &SearchOptions) -> Result<f64> {
    let step = match options.step {
        Some(s) => s.bins(),
        None => pair.victim().bins_per_subcarrier() as f64,
    };
    if step <= 0.0 || math::floor(step) != step {
        return Err(Error::InvalidSearch("step must be a positive whole number of bins"));
    }
    if options.horizon.bins() < step {
        return Err(Error::InvalidSearch("horizon must be at least one step"));
    }
    Ok(step)
}

/// Smallest tail-safe guard band for an `n_int`-tone interferer and a
/// rejection target in dB, using the exact evaluator.
pub fn min_guard_band(
    pair: &InterferencePair,
    n_int: u64,
    target_rejection_db: f64,
    options: &SearchOptions,
) -> Result<GuardBandRequirement> {
    ToneAllocation::new(pair.mu_i(), 0, n_int)?;
    let step = grid_step(pair, options)?;
    let threshold = mse_from_rejection_db(target_rejection_db);
    let mse = |bins: f64| multi_tone_unchecked(pair, n_int, bins, Evaluator::Exact);

    let span = (n_int - 1) as f64 * pair.interferer().bins_per_subcarrier() as f64;
    let horizon = options.horizon.bins().min(0.5 * (BASE_GRID as f64 - span));
    let points = math::floor(horizon / step) as u64;
    if points == 0 {
        return Err(Error::HorizonExceeded {
            target_db: target_rejection_db,
            horizon_bins: horizon,
            best_rejection_db: rejection_db(mse(step)),
        });
    }
    let mut min_k = None;
    let mut worst = 0.0f64;
    for k in (1..=points).rev() {
        let m = mse(k as f64 * step);
        if m > threshold {
            break;
        }
        worst = worst.max(m);
        min_k = Some(k);
    }
    let Some(k) = min_k else {
        return Err(Error::HorizonExceeded {
            target_db: target_rejection_db,
            horizon_bins: horizon,
            best_rejection_db: rejection_db(mse(points as f64 * step)),
        });
    };

    let mut gb = k as f64 * step;
    if options.refine && k > 1 {
        let (refined, cell_worst) = refine_cell(&mse, threshold, gb - step, gb);
        gb = refined;
        worst = worst.max(cell_worst);
    }
    Ok(GuardBandRequirement {
        pair: *pair,
        n_int,
        target_rejection_db,
        min_gb: FrequencyOffset::from_bins(gb)?,
        search_horizon: FrequencyOffset::from_bins(horizon)?,
        achieved_rejection_db: rejection_db(worst),
    })
}

/// `lo` fails and `hi` passes. Scans a fine subgrid down from `hi` and
/// bisects across the first failing sub-cell.
fn refine_cell(mse: &impl Fn(f64) -> f64, threshold: f64, lo: f64, hi: f64) -> (f64, f64) {
    let h = (hi - lo) / REFINE_POINTS as f64;
    let mut pass = hi;
    let mut worst = 0.0f64;
    let mut fail = lo;
    for j in (0..REFINE_POINTS).rev() {
        let x = lo + j as f64 * h;
        let m = mse(x);
        if m > threshold || j == 0 {
            fail = x;
            break;
        }
        worst = worst.max(m);
        pass = x;
    }
    for _ in 0..REFINE_ITERS {
        let mid = 0.5 * (fail + pass);
        let m = mse(mid);
        if m > threshold {
            fail = mid;
        } else {
            worst = worst.max(m);
            pass = mid;
        }
    }
    (pass, worst)
}

/// [`min_guard_band`] for each interferer width in `n_int_list` (ascending).
pub fn guard_band_vs_interferer_curve(
    pair: &InterferencePair,
    target_rejection_db: f64,
    n_int_list: &[u64],
    options: &SearchOptions,
) -> Result<Vec<GuardBandRequirement>> {
    if n_int_list.is_empty() {
        return Err(Error::InvalidSearch("interferer width list is empty"));
    }
    if n_int_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSearch("interferer widths must be strictly ascending"));
    }
    n_int_list
        .iter()
        .map(|&n| min_guard_band(pair, n, target_rejection_db, options))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(i: u32, u: u32) -> InterferencePair {
        InterferencePair::new(i, u).unwrap()
    }

    #[test]
    fn same_numerology_needs_one_subcarrier() {
        for mu in 0..=2 {
            for target in [25.0, 40.0, 80.0] {
                let r = min_guard_band(&pair(mu, mu), 12, target, &SearchOptions::default()).unwrap();
                assert_eq!(r.victim_subcarriers(), 1.0);
                assert!(r.achieved_rejection_db.is_infinite());
            }
        }
    }

    #[test]
    fn post_conditions_hold() {
        let opts = SearchOptions::default();
        for (i, u) in [(1, 0), (2, 0), (0, 1), (2, 1)] {
            let p = pair(i, u);
            let step = p.victim().bins_per_subcarrier() as f64;
            for target in [25.0, 30.0, 35.0] {
                let r = min_guard_band(&p, 24, target, &opts).unwrap();
                let thr = mse_from_rejection_db(target);
                let m = |b: f64| multi_tone_unchecked(&p, 24, b, Evaluator::Exact);
                let g = r.min_gb.bins();
                assert!(m(g) <= thr);
                assert!(m(g + step) <= thr);
                if g > step {
                    assert!(m(g - step) > thr, "{p} {target}: {g} not minimal");
                }
                assert!(r.achieved_rejection_db >= target);
            }
        }
    }

    #[test]
    fn horizon_exceeded_reports_best() {
        let opts = SearchOptions::with_horizon_bins(8.0).unwrap();
        match min_guard_band(&pair(2, 0), 12, 60.0, &opts) {
            Err(Error::HorizonExceeded {
                best_rejection_db,
                horizon_bins,
                ..
            }) => {
                assert_eq!(horizon_bins, 8.0);
                assert!(best_rejection_db < 60.0 && best_rejection_db > 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn refinement_stays_inside_last_cell() {
        let p = pair(1, 0);
        let coarse = min_guard_band(&p, 24, 30.0, &SearchOptions::default()).unwrap();
        let fine = min_guard_band(
            &p,
            24,
            30.0,
            &SearchOptions {
                refine: true,
                ..SearchOptions::default()
            },
        )
        .unwrap();
        assert!(fine.min_gb.bins() <= coarse.min_gb.bins());
        assert!(fine.min_gb.bins() > coarse.min_gb.bins() - 1.0);
        assert!(fine.achieved_rejection_db >= 30.0);
    }

    #[test]
    fn invalid_search_inputs() {
        let p = pair(1, 0);
        let bad_step = SearchOptions {
            step: Some(FrequencyOffset::from_bins(1.5).unwrap()),
            ..SearchOptions::default()
        };
        assert!(matches!(
            min_guard_band(&p, 12, 25.0, &bad_step),
            Err(Error::InvalidSearch(_))
        ));
        let short = SearchOptions {
            step: Some(FrequencyOffset::from_bins(4.0).unwrap()),
            horizon: FrequencyOffset::from_bins(2.0).unwrap(),
            refine: false,
        };
        assert!(matches!(
            min_guard_band(&p, 12, 25.0, &short),
            Err(Error::InvalidSearch(_))
        ));
        let opts = SearchOptions::default();
        assert!(guard_band_vs_interferer_curve(&p, 25.0, &[], &opts).is_err());
        assert!(guard_band_vs_interferer_curve(&p, 25.0, &[24, 12], &opts).is_err());
        assert_eq!(min_guard_band(&p, 0, 25.0, &opts).unwrap_err(), Error::EmptyAllocation);
    }

    #[test]
    fn single_entry_curve_matches_direct_call() {
        let p = pair(2, 1);
        let opts = SearchOptions::default();
        let curve = guard_band_vs_interferer_curve(&p, 30.0, &[1], &opts).unwrap();
        assert_eq!(curve, [min_guard_band(&p, 1, 30.0, &opts).unwrap()]);
    }
}
