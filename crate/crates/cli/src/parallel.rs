//! Multi-threaded Monte Carlo runs.

use ini_core::waveform::BatchStats;
use ini_core::{MonteCarlo, MonteCarloEstimate};
use rayon::prelude::*;

/// Runs every batch on the rayon pool and reduces them in batch order, so
/// the estimate is identical to [`MonteCarlo::run`] for any thread count.
pub fn run_monte_carlo(mc: &MonteCarlo) -> MonteCarloEstimate {
    let batches: Vec<BatchStats> = (0..mc.n_batches()).into_par_iter().map(|b| mc.run_batch(b)).collect();
    mc.finish(&batches)
}
