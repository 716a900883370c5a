use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("numerology index {mu} out of range (valid: 0..={max})")]
    NumerologyOutOfRange { mu: u32, max: u32 },

    #[error("interferer numerology {mu_i} -> victim {mu_u}: first overlap segment is {first_segment} samples, must be positive")]
    UnsupportedPair { mu_i: u32, mu_u: u32, first_segment: i64 },

    #[error("allocation of {n_tones} tones starting at subcarrier {start} does not fit the {grid}-subcarrier grid of numerology {mu}")]
    AllocationOverflow {
        mu: u32,
        start: u64,
        n_tones: u64,
        grid: u64,
    },

    #[error("allocation must contain at least one tone")]
    EmptyAllocation,

    #[error("allocation numerology {found} does not match the expected numerology {expected}")]
    NumerologyMismatch { expected: u32, found: u32 },

    #[error("guard band must be finite and non-negative, got {0} bins")]
    InvalidGuardBand(f64),

    #[error("guard band {bins} bins cannot be realized between numerologies {mu_i} and {mu_u} (must be a multiple of {granularity} bins)")]
    UnrealizableGuardBand {
        bins: f64,
        mu_i: u32,
        mu_u: u32,
        granularity: u64,
    },

    #[error("need at least {min} victim symbols, got {requested}")]
    InsufficientSymbols { requested: u64, min: u64 },

    #[error("receive window for symbol {symbol} ends at sample {end}, buffer holds {len}")]
    WindowOutOfBounds { symbol: u64, end: u64, len: u64 },

    #[error("tone {tone} is outside the {grid}-point grid")]
    ToneOutOfRange { tone: u64, grid: u64 },

    #[error("invalid search grid: {0}")]
    InvalidSearch(&'static str),

    #[error("rejection target {target_db} dB not met up to the {horizon_bins}-bin horizon (best achieved {best_rejection_db:.2} dB)")]
    HorizonExceeded {
        target_db: f64,
        horizon_bins: f64,
        best_rejection_db: f64,
    },

    #[error("boundary {boundary} (numerology {mu_i} interfering on {mu_u}): rejection target {target_db} dB not met up to the {horizon_bins}-bin horizon (best {best_rejection_db:.2} dB)")]
    BoundaryHorizonExceeded {
        boundary: usize,
        mu_i: u32,
        mu_u: u32,
        target_db: f64,
        horizon_bins: f64,
        best_rejection_db: f64,
    },

    #[error("scenario needs at least one service")]
    EmptyScenario,

    #[error("service must allocate at least one resource block")]
    EmptyService,

    #[error("scale shift {alpha} moves pair ({mu_i}, {mu_u}) outside 0..=5")]
    ShiftOutOfRange { mu_i: u32, mu_u: u32, alpha: i32 },

    #[error("curve guard bands must be strictly increasing")]
    NonMonotoneCurve,
}
