//! 5G NR numerology parameters and frequency-unit conversions.
//!
//! All numerologies share the 61.44 MHz sampling rate, so a numerology `mu`
//! has `4096 >> mu` samples per useful symbol and `288 >> mu` samples of
//! cyclic prefix. One subcarrier of numerology `mu` spans `2^mu` bins of the
//! 15 kHz base grid.

use crate::error::{Error, Result};

/// Common sampling rate of every numerology.
pub const SAMPLE_RATE_HZ: f64 = 61.44e6;
/// Size of the base (mu = 0) FFT grid.
pub const BASE_GRID: u64 = 4096;
/// Cyclic prefix length of the base numerology, in samples.
pub const BASE_CP: u64 = 288;
/// Width of one base-grid bin, `SAMPLE_RATE_HZ / BASE_GRID`, in kHz.
pub const BIN_KHZ: f64 = 15.0;
pub const SUBCARRIERS_PER_RB: u64 = 12;
/// Largest admitted numerology index.
pub const MAX_MU: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumerologyParams {
    pub mu: u32,
    /// Samples per useful symbol.
    pub n_fft: u64,
    /// Samples per cyclic prefix.
    pub n_cp: u64,
    /// Samples per complete symbol, `n_fft + n_cp`.
    pub n_sym: u64,
    pub scs_khz: f64,
    pub rb_khz: f64,
}

impl NumerologyParams {
    pub fn new(mu: u32) -> Result<Self> {
        check_mu(mu)?;
        let n_fft = BASE_GRID >> mu;
        let n_cp = BASE_CP >> mu;
        let scs_khz = BIN_KHZ * (1u64 << mu) as f64;
        Ok(Self {
            mu,
            n_fft,
            n_cp,
            n_sym: n_fft + n_cp,
            scs_khz,
            rb_khz: SUBCARRIERS_PER_RB as f64 * scs_khz,
        })
    }

    /// Base-grid bins spanned by one subcarrier, `2^mu`.
    pub fn bins_per_subcarrier(&self) -> u64 {
        1 << self.mu
    }
}

pub(crate) fn check_mu(mu: u32) -> Result<()> {
    if mu > MAX_MU {
        return Err(Error::NumerologyOutOfRange { mu, max: MAX_MU });
    }
    Ok(())
}

/// A frequency distance in base-grid bins (15 kHz each).
///
/// Real-valued so that fractional offsets can be evaluated by the analytic
/// formulas; integer subcarrier and RB counts convert exactly.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct FrequencyOffset {
    bins: f64,
}

impl FrequencyOffset {
    pub const ZERO: Self = Self { bins: 0.0 };

    pub fn from_bins(bins: f64) -> Result<Self> {
        if !bins.is_finite() || bins < 0.0 {
            return Err(Error::InvalidGuardBand(bins));
        }
        Ok(Self { bins })
    }

    /// `k` subcarriers of numerology `mu`, i.e. `k * 2^mu` bins.
    pub fn from_subcarriers(k: u64, mu: u32) -> Result<Self> {
        check_mu(mu)?;
        Ok(Self { bins: (k << mu) as f64 })
    }

    /// `n` resource blocks of numerology `mu`.
    pub fn from_rbs(n: u64, mu: u32) -> Result<Self> {
        Self::from_subcarriers(n * SUBCARRIERS_PER_RB, mu)
    }

    pub fn from_khz(khz: f64) -> Result<Self> {
        Self::from_bins(khz / BIN_KHZ)
    }

    pub fn bins(self) -> f64 {
        self.bins
    }

    pub fn khz(self) -> f64 {
        self.bins * BIN_KHZ
    }

    /// Offset expressed in subcarriers of numerology `mu` (may be fractional).
    pub fn subcarriers(self, mu: u32) -> f64 {
        self.bins / (1u64 << mu) as f64
    }

    pub fn rbs(self, mu: u32) -> f64 {
        self.subcarriers(mu) / SUBCARRIERS_PER_RB as f64
    }
}

impl core::ops::Add for FrequencyOffset {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            bins: self.bins + rhs.bins,
        }
    }
}

/// Free-function form of [`FrequencyOffset::from_subcarriers`].
pub fn offset_from_subcarriers(k: u64, mu: u32) -> Result<FrequencyOffset> {
    FrequencyOffset::from_subcarriers(k, mu)
}

/// Free-function form of [`FrequencyOffset::khz`].
pub fn offset_to_khz(off: FrequencyOffset) -> f64 {
    off.khz()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        let p0 = NumerologyParams::new(0).unwrap();
        assert_eq!((p0.n_fft, p0.n_cp, p0.n_sym), (4096, 288, 4384));
        assert_eq!(p0.scs_khz, 15.0);
        assert_eq!(p0.rb_khz, 180.0);

        let p2 = NumerologyParams::new(2).unwrap();
        assert_eq!((p2.n_fft, p2.n_cp), (1024, 72));
        assert_eq!(p2.scs_khz, 60.0);
        assert_eq!(p2.rb_khz, 720.0);

        let rows = [
            (1, 2048, 144, 30.0, 360.0),
            (3, 512, 36, 120.0, 1440.0),
            (4, 256, 18, 240.0, 2880.0),
        ];
        for (mu, n, cp, scs, rb) in rows {
            let p = NumerologyParams::new(mu).unwrap();
            assert_eq!((p.n_fft, p.n_cp, p.scs_khz, p.rb_khz), (n, cp, scs, rb));
        }
    }

    #[test]
    fn mu5_extends_exactly() {
        let p = NumerologyParams::new(5).unwrap();
        assert_eq!((p.n_fft, p.n_cp, p.n_sym), (128, 9, 137));
        assert_eq!(p.scs_khz, 480.0);
        // 288 / 32 has no remainder
        assert_eq!(p.n_cp << 5, BASE_CP);
    }

    #[test]
    fn out_of_range_mu() {
        let err = NumerologyParams::new(6).unwrap_err();
        assert_eq!(err, Error::NumerologyOutOfRange { mu: 6, max: 5 });
        assert!(FrequencyOffset::from_subcarriers(1, 9).is_err());
    }

    #[test]
    fn cp_overhead_is_scale_free() {
        for mu in 0..=MAX_MU {
            let p = NumerologyParams::new(mu).unwrap();
            assert_eq!(p.n_sym * 4096, 4384 * p.n_fft);
            // symbol duration times subcarrier spacing is the same ratio
            let ratio = p.n_sym as f64 * p.scs_khz * 1000.0 / SAMPLE_RATE_HZ;
            assert!((ratio - 4384.0 / 4096.0).abs() < 1e-12);
        }
    }

    #[test]
    fn subcarrier_offsets() {
        assert_eq!(offset_from_subcarriers(1, 0).unwrap().bins(), 1.0);
        assert_eq!(offset_from_subcarriers(12, 1).unwrap().bins(), 24.0);
        assert_eq!(offset_from_subcarriers(3, 2).unwrap().bins(), 12.0);
    }

    #[test]
    fn khz_conversion() {
        let khz = |b: f64| offset_to_khz(FrequencyOffset::from_bins(b).unwrap());
        assert_eq!(khz(1.0), 15.0);
        assert_eq!(khz(12.0), 180.0);
        assert_eq!(khz(24.0), 360.0);
        for mu in 0..=MAX_MU {
            for k in [0u64, 1, 7, 12, 300] {
                let off = offset_from_subcarriers(k, mu).unwrap();
                assert_eq!(off.khz(), k as f64 * 15.0 * (1u64 << mu) as f64);
                assert_eq!(off.subcarriers(mu), k as f64);
            }
        }
        assert_eq!(FrequencyOffset::from_rbs(1, 1).unwrap().khz(), 360.0);
    }

    #[test]
    fn rejects_negative_offsets() {
        assert!(FrequencyOffset::from_bins(-1.0).is_err());
        assert!(FrequencyOffset::from_bins(f64::NAN).is_err());
    }
}
