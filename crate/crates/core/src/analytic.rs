//! Closed-form MSE induced by an interferer of numerology `mu_i` on one
//! victim subcarrier of numerology `mu_u`.
//!
//! The victim FFT window (`N^{mu_u}` samples starting after its cyclic prefix)
//! overlaps one or more interferer symbols. Each overlap of `l` samples
//! carries one independent unit-power constellation symbol and contributes
//! `|D_l(gb)|^2 / (N^{mu_i} N^{mu_u})` to the MSE. Two evaluators are
//! provided:
//!
//! * [`Evaluator::Literal`] uses a first overlap of `L = N_e^{mu_i} - N_CP^{mu_u}`
//!   samples followed by `ceil(Q) - 1` full interferer symbols, for every `Q`.
//!   For `Q < 1` this `L` is longer than the window itself.
//! * [`Evaluator::Exact`] splits the window at the actual interferer symbol
//!   boundaries and averages over every distinct window phase. It agrees with
//!   the literal form bit-for-bit whenever `Q >= 1`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dirichlet::dirichlet_power;
use crate::error::{Error, Result};
use crate::math;
use crate::numerology::{FrequencyOffset, NumerologyParams, BASE_GRID, SUBCARRIERS_PER_RB};

/// Both sides of a scale-invariance comparison below this are treated as an
/// exact null.
pub const NULL_FLOOR: f64 = 1e-25;

const MAX_SEGMENT_KINDS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluator {
    Literal,
    #[default]
    Exact,
}

impl Evaluator {
    pub fn as_str(self) -> &'static str {
        match self {
            Evaluator::Literal => "literal",
            Evaluator::Exact => "exact",
        }
    }
}

impl fmt::Display for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Evaluator {
    type Err = &'static str;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "literal" => Ok(Evaluator::Literal),
            "exact" => Ok(Evaluator::Exact),
            _ => Err("evaluator must be `literal` or `exact`"),
        }
    }
}

/// Distinct overlap lengths of the victim window with interferer symbols and
/// their mean count per window.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SegmentProfile {
    kinds: [(u64, f64); MAX_SEGMENT_KINDS],
    len: usize,
}

impl SegmentProfile {
    fn new(interferer: &NumerologyParams, victim: &NumerologyParams) -> Self {
        let period = math::lcm(interferer.n_sym, victim.n_sym);
        let phases = period / victim.n_sym;
        let mut counts = [(0u64, 0u64); MAX_SEGMENT_KINDS];
        let mut len = 0;
        for phase in 0..phases {
            let mut start = phase * victim.n_sym + victim.n_cp;
            let end = start + victim.n_fft;
            while start < end {
                let boundary = (start / interferer.n_sym + 1) * interferer.n_sym;
                let seg_end = boundary.min(end);
                let seg = seg_end - start;
                match counts[..len].iter_mut().find(|(l, _)| *l == seg) {
                    Some(slot) => slot.1 += 1,
                    None => {
                        // numerology lengths only ever yield two kinds
                        assert!(len < MAX_SEGMENT_KINDS, "unexpected segment layout");
                        counts[len] = (seg, 1);
                        len += 1;
                    }
                }
                start = seg_end;
            }
        }
        let mut kinds = [(0u64, 0.0); MAX_SEGMENT_KINDS];
        for (dst, &(l, c)) in kinds.iter_mut().zip(&counts[..len]) {
            *dst = (l, c as f64 / phases as f64);
        }
        Self { kinds, len }
    }

    fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.kinds[..self.len].iter().copied()
    }
}

/// An interferer numerology `mu_i` seen by a victim numerology `mu_u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferencePair {
    interferer: NumerologyParams,
    victim: NumerologyParams,
    profile: SegmentProfile,
}

impl InterferencePair {
    /// Fails for indices above 5 and for `Q >= 16`, where the victim cyclic
    /// prefix is longer than a whole interferer symbol and the first overlap
    /// `N_e^{mu_i} - N_CP^{mu_u}` is not positive.
    pub fn new(mu_i: u32, mu_u: u32) -> Result<Self> {
        let interferer = NumerologyParams::new(mu_i)?;
        let victim = NumerologyParams::new(mu_u)?;
        let first_segment = interferer.n_sym as i64 - victim.n_cp as i64;
        if first_segment <= 0 {
            return Err(Error::UnsupportedPair {
                mu_i,
                mu_u,
                first_segment,
            });
        }
        Ok(Self {
            interferer,
            victim,
            profile: SegmentProfile::new(&interferer, &victim),
        })
    }

    pub fn mu_i(&self) -> u32 {
        self.interferer.mu
    }

    pub fn mu_u(&self) -> u32 {
        self.victim.mu
    }

    pub fn interferer(&self) -> &NumerologyParams {
        &self.interferer
    }

    pub fn victim(&self) -> &NumerologyParams {
        &self.victim
    }

    /// `Q = 2^(mu_i - mu_u)`.
    pub fn q_ratio(&self) -> f64 {
        self.victim.n_fft as f64 / self.interferer.n_fft as f64
    }

    /// `L = N_e^{mu_i} - N_CP^{mu_u}`.
    pub fn first_segment(&self) -> u64 {
        self.interferer.n_sym - self.victim.n_cp
    }

    /// Smallest realizable change of `|f_i 2^mu_i - f_u 2^mu_u|`, in bins.
    pub fn gb_granularity(&self) -> u64 {
        1 << self.mu_i().min(self.mu_u())
    }

    /// Pair shifted by `alpha` on both sides.
    pub fn shifted(&self, alpha: i32) -> Result<Self> {
        let out = Error::ShiftOutOfRange {
            mu_i: self.mu_i(),
            mu_u: self.mu_u(),
            alpha,
        };
        let shift = |mu: u32| {
            let m = mu as i64 + alpha as i64;
            if (0..=5).contains(&m) {
                Ok(m as u32)
            } else {
                Err(out.clone())
            }
        };
        Self::new(shift(self.mu_i())?, shift(self.mu_u())?)
    }

    /// Overlap lengths used by the exact evaluator with their mean number of
    /// occurrences per victim window.
    pub fn segments(&self) -> Vec<(u64, f64)> {
        self.profile.iter().collect()
    }

    fn norm(&self) -> f64 {
        (self.interferer.n_fft * self.victim.n_fft) as f64
    }
}

impl fmt::Display for InterferencePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.mu_i(), self.mu_u())
    }
}

/// A contiguous block of subcarriers of one numerology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToneAllocation {
    pub mu: u32,
    pub start_subcarrier: u64,
    pub n_tones: u64,
}

impl ToneAllocation {
    pub fn new(mu: u32, start_subcarrier: u64, n_tones: u64) -> Result<Self> {
        let params = NumerologyParams::new(mu)?;
        if n_tones == 0 {
            return Err(Error::EmptyAllocation);
        }
        if start_subcarrier + n_tones > params.n_fft {
            return Err(Error::AllocationOverflow {
                mu,
                start: start_subcarrier,
                n_tones,
                grid: params.n_fft,
            });
        }
        Ok(Self {
            mu,
            start_subcarrier,
            n_tones,
        })
    }

    /// `n_rb` resource blocks starting at subcarrier 0.
    pub fn from_rbs(mu: u32, n_rb: u64) -> Result<Self> {
        Self::new(mu, 0, n_rb * SUBCARRIERS_PER_RB)
    }

    pub fn tones(&self) -> core::ops::Range<u64> {
        self.start_subcarrier..self.start_subcarrier + self.n_tones
    }
}

/// Single-tone MSE using the literal overlap layout.
pub fn mse_single_tone_literal(pair: &InterferencePair, gb: FrequencyOffset) -> f64 {
    literal_bins(pair, gb.bins())
}

fn literal_bins(pair: &InterferencePair, f: f64) -> f64 {
    let full = pair.q_ratio().ceil_u64() - 1;
    let mut acc = dirichlet_power(pair.first_segment(), f, BASE_GRID);
    if full > 0 {
        acc += full as f64 * dirichlet_power(pair.interferer.n_sym, f, BASE_GRID);
    }
    acc / pair.norm()
}

/// Single-tone MSE by exact segment decomposition of the victim window.
pub fn mse_single_tone_exact(pair: &InterferencePair, gb: FrequencyOffset) -> f64 {
    exact_bins(pair, gb.bins())
}

fn exact_bins(pair: &InterferencePair, f: f64) -> f64 {
    let acc: f64 = pair
        .profile
        .iter()
        .map(|(len, weight)| weight * dirichlet_power(len, f, BASE_GRID))
        .sum();
    acc / pair.norm()
}

pub fn mse_single_tone(pair: &InterferencePair, gb: FrequencyOffset, evaluator: Evaluator) -> f64 {
    match evaluator {
        Evaluator::Literal => mse_single_tone_literal(pair, gb),
        Evaluator::Exact => mse_single_tone_exact(pair, gb),
    }
}

fn check_interferer(pair: &InterferencePair, interferer: &ToneAllocation) -> Result<()> {
    if interferer.mu != pair.mu_i() {
        return Err(Error::NumerologyMismatch {
            expected: pair.mu_i(),
            found: interferer.mu,
        });
    }
    // re-validate in case the struct was built by hand
    ToneAllocation::new(interferer.mu, interferer.start_subcarrier, interferer.n_tones)?;
    Ok(())
}

/// MSE on one victim tone from every tone of `interferer`; `victim_tone_gb`
/// is the distance to the nearest interferer tone and the others follow at
/// one interferer subcarrier (`2^mu_i` bins) apart.
pub fn mse_multi_tone(
    pair: &InterferencePair,
    interferer: &ToneAllocation,
    victim_tone_gb: FrequencyOffset,
    evaluator: Evaluator,
) -> Result<f64> {
    check_interferer(pair, interferer)?;
    Ok(multi_tone_unchecked(
        pair,
        interferer.n_tones,
        victim_tone_gb.bins(),
        evaluator,
    ))
}

pub(crate) fn multi_tone_unchecked(pair: &InterferencePair, n_tones: u64, gb_bins: f64, evaluator: Evaluator) -> f64 {
    let step = pair.interferer.bins_per_subcarrier() as f64;
    (0..n_tones)
        .map(|k| {
            let f = gb_bins + k as f64 * step;
            match evaluator {
                Evaluator::Literal => literal_bins(pair, f),
                Evaluator::Exact => exact_bins(pair, f),
            }
        })
        .sum()
}

/// Mean of [`mse_multi_tone`] over the 12 subcarriers of one victim RB, the
/// first of which sits `gb` from the interferer.
pub fn mse_rb_average(
    pair: &InterferencePair,
    interferer: &ToneAllocation,
    gb: FrequencyOffset,
    evaluator: Evaluator,
) -> Result<f64> {
    check_interferer(pair, interferer)?;
    let step = pair.victim.bins_per_subcarrier() as f64;
    let sum: f64 = (0..SUBCARRIERS_PER_RB)
        .map(|k| multi_tone_unchecked(pair, interferer.n_tones, gb.bins() + k as f64 * step, evaluator))
        .sum();
    Ok(sum / SUBCARRIERS_PER_RB as f64)
}

/// Largest `|10 log10|` ratio between the `n_int`-tone exact MSE of `pair`
/// and of `pair` shifted by `alpha`, over guard bands given in victim
/// subcarriers (the same normalized value is applied to both pairs).
///
/// Points where both sides are below [`NULL_FLOOR`] count as agreeing; a
/// point where only one side is a null yields `+inf`.
pub fn scale_invariance_residual(
    pair: &InterferencePair,
    n_int: u64,
    alpha: i32,
    gb_grid_subcarriers: &[f64],
) -> Result<f64> {
    let shifted = pair.shifted(alpha)?;
    ToneAllocation::new(pair.mu_i(), 0, n_int)?;
    ToneAllocation::new(shifted.mu_i(), 0, n_int)?;
    let mut worst: f64 = 0.0;
    for &g in gb_grid_subcarriers {
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidGuardBand(g));
        }
        let base_bins = g * pair.victim.bins_per_subcarrier() as f64;
        let shifted_bins = g * shifted.victim.bins_per_subcarrier() as f64;
        let a = multi_tone_unchecked(pair, n_int, base_bins, Evaluator::Exact);
        let b = multi_tone_unchecked(&shifted, n_int, shifted_bins, Evaluator::Exact);
        let dev = match (a < NULL_FLOOR, b < NULL_FLOOR) {
            (true, true) => 0.0,
            (false, false) => (10.0 * math::log10(b / a)).abs(),
            _ => f64::INFINITY,
        };
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// Farthest interferer tone distance, in bins, kept by
/// [`scale_invariance_grid`]. An eighth of the base grid keeps `sin(pi f / N)`
/// within 0.3% of `pi f / N`.
pub const SCALE_INVARIANCE_SPAN_BINS: f64 = (BASE_GRID / 8) as f64;

/// `points` guard bands in victim subcarriers, evenly spaced from 1 to the
/// largest value at which the farthest `n_int`-block tone of both `pair` and
/// `pair.shifted(alpha)` stays within [`SCALE_INVARIANCE_SPAN_BINS`].
pub fn scale_invariance_grid(pair: &InterferencePair, n_int: u64, alpha: i32, points: usize) -> Result<Vec<f64>> {
    let shifted = pair.shifted(alpha)?;
    let reach = |p: &InterferencePair| {
        let block = n_int.saturating_sub(1) as f64 * p.interferer.bins_per_subcarrier() as f64;
        (SCALE_INVARIANCE_SPAN_BINS - block) / p.victim.bins_per_subcarrier() as f64
    };
    let g_max = reach(pair).min(reach(&shifted));
    if points < 2 || g_max <= 1.0 {
        return Err(Error::InvalidSearch("no room for a scale-invariance grid"));
    }
    let h = (g_max - 1.0) / (points - 1) as f64;
    Ok((0..points).map(|k| 1.0 + k as f64 * h).collect())
}

/// MSE as a function of guard band for one pair and interferer block.
#[derive(Debug, Clone, PartialEq)]
pub struct MseCurve {
    pub pair: InterferencePair,
    pub evaluator: Evaluator,
    pub points: Vec<(FrequencyOffset, f64)>,
    pub unit_note: String,
}

impl MseCurve {
    pub fn sweep(
        pair: &InterferencePair,
        interferer: &ToneAllocation,
        guard_bands: impl IntoIterator<Item = FrequencyOffset>,
        evaluator: Evaluator,
    ) -> Result<Self> {
        check_interferer(pair, interferer)?;
        let mut points: Vec<(FrequencyOffset, f64)> = Vec::new();
        for gb in guard_bands {
            if points.last().is_some_and(|(prev, _)| gb.bins() <= prev.bins()) {
                return Err(Error::NonMonotoneCurve);
            }
            points.push((gb, multi_tone_unchecked(pair, interferer.n_tones, gb.bins(), evaluator)));
        }
        Ok(Self {
            pair: *pair,
            evaluator,
            points,
            unit_note: String::from(
                "guard band: base-grid bins of 15 kHz between the victim tone and the nearest interferer tone; mse: linear, unit constellation power",
            ),
        })
    }
}

trait CeilU64 {
    fn ceil_u64(self) -> u64;
}

impl CeilU64 for f64 {
    fn ceil_u64(self) -> u64 {
        let fl = math::floor(self);
        if fl == self {
            fl as u64
        } else {
            fl as u64 + 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gb(bins: f64) -> FrequencyOffset {
        FrequencyOffset::from_bins(bins).unwrap()
    }

    #[test]
    fn derived_quantities() {
        let p = InterferencePair::new(1, 0).unwrap();
        assert_eq!(p.q_ratio(), 2.0);
        assert_eq!(p.first_segment(), 2192 - 288);
        assert_eq!(p.segments(), [(1904, 1.0), (2192, 1.0)]);

        let p = InterferencePair::new(0, 2).unwrap();
        assert_eq!(p.q_ratio(), 0.25);
        assert_eq!(p.first_segment(), 4384 - 72);
        // four window phases inside one long interferer symbol, never split
        assert_eq!(p.segments(), [(1024, 1.0)]);

        let p = InterferencePair::new(3, 0).unwrap();
        assert_eq!(p.segments(), [(548 - 288, 1.0), (548, 7.0)]);
    }

    #[test]
    fn q16_pairs_are_rejected() {
        for (mu_i, mu_u) in [(4, 0), (5, 0), (5, 1)] {
            assert!(matches!(
                InterferencePair::new(mu_i, mu_u),
                Err(Error::UnsupportedPair { .. })
            ));
        }
        assert!(InterferencePair::new(4, 1).is_ok());
        assert!(InterferencePair::new(6, 1).is_err());
    }

    #[test]
    fn co_tone_full_capture() {
        let p = InterferencePair::new(0, 0).unwrap();
        assert_eq!(mse_single_tone_literal(&p, gb(0.0)), 1.0);
        assert_eq!(mse_single_tone_exact(&p, gb(0.0)), 1.0);
    }

    #[test]
    fn adjacent_subcarrier_is_orthogonal() {
        let p = InterferencePair::new(1, 1).unwrap();
        assert_eq!(mse_single_tone_literal(&p, gb(2.0)), 0.0);
        for mu in 0..=5 {
            let p = InterferencePair::new(mu, mu).unwrap();
            // k = N^mu wraps back onto the interferer tone
            for k in 1..p.victim().n_fft {
                let off = FrequencyOffset::from_subcarriers(k, mu).unwrap();
                assert!(mse_single_tone_exact(&p, off) <= 1e-20);
            }
        }
    }

    #[test]
    fn q_below_one_is_a_single_window_segment() {
        let p = InterferencePair::new(0, 1).unwrap();
        for f in [0.5, 1.0, 3.0, 17.0, 101.25] {
            let expect = dirichlet_power(2048, f, 4096) / (4096.0 * 2048.0);
            assert_eq!(mse_single_tone_exact(&p, gb(f)), expect);
        }
        // the literal form sums over more samples than the window holds
        let lit = mse_single_tone_literal(&p, gb(0.0));
        assert!(lit > 1.0);
    }

    #[test]
    fn multi_tone_reduces_to_single() {
        let p = InterferencePair::new(2, 1).unwrap();
        let one = ToneAllocation::new(2, 0, 1).unwrap();
        for f in [0.0, 3.0, 10.0] {
            let m = mse_multi_tone(&p, &one, gb(f), Evaluator::Exact).unwrap();
            assert_eq!(m, mse_single_tone_exact(&p, gb(f)));
        }
    }

    #[test]
    fn same_numerology_block_nulls() {
        for mu in 0..=3 {
            let p = InterferencePair::new(mu, mu).unwrap();
            let rb = ToneAllocation::from_rbs(mu, 1).unwrap();
            for k in 1..40u64 {
                let off = FrequencyOffset::from_subcarriers(k, mu).unwrap();
                for ev in [Evaluator::Literal, Evaluator::Exact] {
                    assert!(mse_multi_tone(&p, &rb, off, ev).unwrap() <= 1e-20);
                    assert!(mse_rb_average(&p, &rb, off, ev).unwrap() <= 1e-20);
                }
            }
        }
    }

    #[test]
    fn rb_average_is_mean_of_victim_tones() {
        let p = InterferencePair::new(2, 0).unwrap();
        let rb = ToneAllocation::from_rbs(2, 1).unwrap();
        let avg = mse_rb_average(&p, &rb, gb(4.0), Evaluator::Exact).unwrap();
        let manual: f64 = (0..12)
            .map(|k| mse_multi_tone(&p, &rb, gb(4.0 + k as f64), Evaluator::Exact).unwrap())
            .sum::<f64>()
            / 12.0;
        assert!((avg - manual).abs() <= 1e-15 * manual);
    }

    #[test]
    fn interferer_numerology_must_match() {
        let p = InterferencePair::new(1, 0).unwrap();
        let wrong = ToneAllocation::new(0, 0, 12).unwrap();
        assert_eq!(
            mse_multi_tone(&p, &wrong, gb(3.0), Evaluator::Exact),
            Err(Error::NumerologyMismatch { expected: 1, found: 0 })
        );
    }

    #[test]
    fn allocation_bounds() {
        assert!(ToneAllocation::new(2, 1000, 24).is_ok());
        assert!(matches!(
            ToneAllocation::new(2, 1001, 24),
            Err(Error::AllocationOverflow { grid: 1024, .. })
        ));
        assert_eq!(ToneAllocation::new(0, 0, 0), Err(Error::EmptyAllocation));
    }

    #[test]
    fn identity_shift_has_zero_residual() {
        let p = InterferencePair::new(1, 0).unwrap();
        let grid: Vec<f64> = (1..=200).map(|g| g as f64).collect();
        assert_eq!(scale_invariance_residual(&p, 12, 0, &grid).unwrap(), 0.0);
        assert!(matches!(
            scale_invariance_residual(&p, 12, 5, &grid),
            Err(Error::ShiftOutOfRange { .. })
        ));
    }

    #[test]
    fn curve_requires_increasing_guard_bands() {
        let p = InterferencePair::new(1, 0).unwrap();
        let rb = ToneAllocation::from_rbs(1, 1).unwrap();
        let c = MseCurve::sweep(&p, &rb, [gb(1.0), gb(2.0), gb(5.0)], Evaluator::Exact).unwrap();
        assert_eq!(c.points.len(), 3);
        assert!(c.points.iter().all(|(_, m)| *m >= 0.0));
        assert_eq!(
            MseCurve::sweep(&p, &rb, [gb(2.0), gb(2.0)], Evaluator::Exact),
            Err(Error::NonMonotoneCurve)
        );
    }

    #[test]
    fn evaluator_parsing() {
        assert_eq!("exact".parse::<Evaluator>(), Ok(Evaluator::Exact));
        assert_eq!("literal".parse::<Evaluator>(), Ok(Evaluator::Literal));
        assert!("other".parse::<Evaluator>().is_err());
        assert_eq!(Evaluator::default(), Evaluator::Exact);
    }
}
