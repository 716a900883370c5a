//! Inter-numerology interference (INI) between CP-OFDM streams of different
//! 5G NR numerologies.
//!
//! The crate is `no_std` (with `alloc`) and contains only pure computations:
//!
//! * [`numerology`]: symbol lengths, subcarrier spacings and unit conversions.
//! * [`dirichlet`]: squared magnitude of the partial Dirichlet-kernel sum.
//! * [`analytic`]: closed-form MSE of an interferer seen by a victim tone.
//! * [`waveform`]: time-domain CP-OFDM transmitter/receiver and the Monte
//!   Carlo estimator used to check the closed forms.
//! * [`guardband`]: minimal guard band meeting a rejection target.
//! * [`scenario`]: multi-service band planning and bandwidth-use efficiency.
//!
//! Frequency offsets are measured in base-grid bins of 15 kHz throughout
//! (see [`FrequencyOffset`]). MSE values are normalized to unit constellation
//! power; a rejection of `X` dB means `-10 log10(MSE) >= X`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod dirichlet;
mod error;
pub mod guardband;
pub(crate) mod math;
pub mod numerology;
pub mod scenario;
pub mod waveform;

pub use analytic::{Evaluator, InterferencePair, MseCurve, ToneAllocation};
pub use dirichlet::{dirichlet_power, KernelQuery};
pub use error::{Error, Result};
pub use guardband::{GuardBandRequirement, SearchOptions};
pub use numerology::{FrequencyOffset, NumerologyParams};
pub use scenario::{GuardConvention, GuardScaling, PlanOptions, ScenarioPlan, ServiceSpec};
pub use waveform::{Constellation, MonteCarlo, MonteCarloEstimate, SampleBuffer, SymbolStream};

/// Converts a linear MSE into rejection in dB, `-10 log10(mse)`.
///
/// A zero MSE maps to `+inf`.
pub fn rejection_db(mse: f64) -> f64 {
    -10.0 * math::log10(mse)
}

/// Inverse of [`rejection_db`].
pub fn mse_from_rejection_db(rejection_db: f64) -> f64 {
    math::pow10(-rejection_db / 10.0)
}
