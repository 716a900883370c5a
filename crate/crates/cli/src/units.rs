//! Frequency quantities given on the command line with a unit suffix.

use std::fmt;
use std::str::FromStr;

use ini_core::numerology::SUBCARRIERS_PER_RB;
use ini_core::FrequencyOffset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    /// 15 kHz base-grid bins.
    Bins,
    /// Victim subcarriers.
    Subcarriers,
    /// Victim resource blocks.
    ResourceBlocks,
    Khz,
}

impl Unit {
    pub fn suffix(self) -> &'static str {
        match self {
            Unit::Bins => "bins",
            Unit::Subcarriers => "sc",
            Unit::ResourceBlocks => "rb",
            Unit::Khz => "khz",
        }
    }
}

/// A value such as `36sc`, `3rb`, `540khz` or `72bins`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    /// Resolves the quantity against the victim numerology.
    pub fn to_offset(self, mu_u: u32) -> ini_core::Result<FrequencyOffset> {
        let per_sc = (1u64 << mu_u) as f64;
        let bins = match self.unit {
            Unit::Bins => self.value,
            Unit::Subcarriers => self.value * per_sc,
            Unit::ResourceBlocks => self.value * per_sc * SUBCARRIERS_PER_RB as f64,
            Unit::Khz => return FrequencyOffset::from_khz(self.value),
        };
        FrequencyOffset::from_bins(bins)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.value, self.unit.suffix())
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let num = s.trim_end_matches(|c: char| c.is_ascii_alphabetic());
        let suffix = &s[num.len()..];
        if suffix.is_empty() {
            return Err(format!("`{s}` needs a unit suffix (bins, sc, rb or khz)"));
        }
        let unit = match suffix.to_ascii_lowercase().as_str() {
            "bins" | "bin" => Unit::Bins,
            "sc" => Unit::Subcarriers,
            "rb" | "rbs" => Unit::ResourceBlocks,
            "khz" => Unit::Khz,
            other => return Err(format!("unknown unit `{other}` (expected bins, sc, rb or khz)")),
        };
        let value: f64 = num.trim().parse().map_err(|_| format!("`{num}` is not a number"))?;
        if !value.is_finite() || value < 0.0 {
            return Err(format!("`{s}` must be finite and non-negative"));
        }
        Ok(Self { value, unit })
    }
}
