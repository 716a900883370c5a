//! Time-domain CP-OFDM at the common 61.44 MHz rate and the Monte Carlo
//! MSE estimator that serves as the oracle for the closed forms.
//!
//! A numerology-`mu` symbol `n` occupies samples `[n N_e, (n + 1) N_e)` and
//! tone `f` contributes `a / sqrt(N) * exp(j 2 pi (l - N_CP) f / N)` at
//! in-symbol index `l`, so the prefix is a copy of the symbol tail. The
//! receiver correlates the `N` samples after the prefix against one bin.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::analytic::{InterferencePair, ToneAllocation};
use crate::error::{Error, Result};
use crate::math::{self, PI};
use crate::numerology::NumerologyParams;

/// Smallest accepted victim symbol count for [`simulate_mse`].
pub const MIN_SYMBOLS: u64 = 100;
/// Blocks simulated per independently seeded batch.
pub const BATCH_BLOCKS: u64 = 64;
const ROUNDING_REL: f64 = 1e-12;
const ROUNDING_ABS: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Constellation {
    /// Uniform random QPSK, `(+-1 +- j) / sqrt(2)`.
    #[default]
    Qpsk,
    /// Circularly symmetric complex Gaussian with unit variance.
    Gaussian,
}

impl Constellation {
    pub fn as_str(self) -> &'static str {
        match self {
            Constellation::Qpsk => "qpsk",
            Constellation::Gaussian => "gaussian",
        }
    }

    fn draw(self, rng: &mut impl RngCore) -> Complex64 {
        match self {
            Constellation::Qpsk => {
                let bits = rng.next_u32();
                let h = core::f64::consts::FRAC_1_SQRT_2;
                let re = if bits & 1 == 0 { h } else { -h };
                let im = if bits & 2 == 0 { h } else { -h };
                Complex64::new(re, im)
            }
            Constellation::Gaussian => {
                // Box-Muller; u1 in (0, 1] keeps the log finite
                let u1 = 1.0 - unit_f64(rng);
                let u2 = unit_f64(rng);
                let r = math::sqrt(-libm::log(u1));
                let t = 2.0 * PI * u2;
                Complex64::new(r * math::cos(t), r * math::sin(t))
            }
        }
    }
}

impl core::str::FromStr for Constellation {
    type Err = &'static str;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "qpsk" => Ok(Constellation::Qpsk),
            "gaussian" => Ok(Constellation::Gaussian),
            _ => Err("constellation must be `qpsk` or `gaussian`"),
        }
    }
}

fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// SplitMix64 finalizer, used to derive batch seeds.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of Monte Carlo batch `batch`: `mix64(seed + batch)`.
pub fn batch_seed(seed: u64, batch: u64) -> u64 {
    mix64(seed.wrapping_add(batch))
}

/// `exp(j 2 pi m / N)` for `m` in `0..N`.
#[derive(Debug, Clone)]
struct UnitCircle {
    table: Vec<Complex64>,
}

impl UnitCircle {
    fn new(n: u64) -> Self {
        let table = (0..n)
            .map(|m| {
                let t = 2.0 * PI * m as f64 / n as f64;
                Complex64::new(math::cos(t), math::sin(t))
            })
            .collect();
        Self { table }
    }

    fn len(&self) -> u64 {
        self.table.len() as u64
    }
}

/// Writes CP-OFDM symbols of one allocation.
#[derive(Debug, Clone)]
struct Modulator {
    params: NumerologyParams,
    allocation: ToneAllocation,
    circle: UnitCircle,
    scale: f64,
}

impl Modulator {
    fn new(allocation: &ToneAllocation) -> Result<Self> {
        let allocation = ToneAllocation::new(allocation.mu, allocation.start_subcarrier, allocation.n_tones)?;
        let params = NumerologyParams::new(allocation.mu)?;
        Ok(Self {
            circle: UnitCircle::new(params.n_fft),
            scale: 1.0 / math::sqrt(params.n_fft as f64),
            params,
            allocation,
        })
    }

    /// Adds one symbol (`n_tones` constellation points) into `out`, which
    /// must hold `N_e` samples.
    fn add_symbol(&self, points: &[Complex64], out: &mut [Complex64]) {
        let n = self.circle.len();
        let ncp = self.params.n_cp;
        for (f, &a) in self.allocation.tones().zip(points) {
            let a = a * self.scale;
            let f = f % n;
            // index of (l - N_CP) f mod N at l = 0
            let mut idx = (n - (ncp * f) % n) % n;
            for s in out.iter_mut() {
                *s += a * self.circle.table[idx as usize];
                idx += f;
                if idx >= n {
                    idx -= n;
                }
            }
        }
    }
}

/// Single-bin receiver for one numerology and tone.
#[derive(Debug, Clone)]
struct Correlator {
    params: NumerologyParams,
    tone: u64,
    circle: UnitCircle,
    scale: f64,
}

impl Correlator {
    fn new(mu: u32, tone: u64) -> Result<Self> {
        let params = NumerologyParams::new(mu)?;
        if tone >= params.n_fft {
            return Err(Error::ToneOutOfRange {
                tone,
                grid: params.n_fft,
            });
        }
        Ok(Self {
            circle: UnitCircle::new(params.n_fft),
            scale: 1.0 / math::sqrt(params.n_fft as f64),
            params,
            tone,
        })
    }

    fn window(&self, symbol: u64) -> (usize, usize) {
        let start = symbol * self.params.n_sym + self.params.n_cp;
        (start as usize, (start + self.params.n_fft) as usize)
    }

    /// Correlates the window at `start` against `exp(-j 2 pi k f / N)`.
    fn correlate_at(&self, samples: &[Complex64], start: usize) -> Complex64 {
        let n = self.circle.len();
        let window = &samples[start..start + n as usize];
        let mut idx = 0u64;
        let mut acc = Complex64::new(0.0, 0.0);
        for &s in window {
            acc += s * self.circle.table[idx as usize].conj();
            idx += self.tone;
            if idx >= n {
                idx -= n;
            }
        }
        acc * self.scale
    }
}

/// i.i.d. unit-variance symbols on one allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolStream {
    pub allocation: ToneAllocation,
    pub n_symbols: u64,
    pub seed: u64,
    pub constellation: Constellation,
}

impl SymbolStream {
    pub fn new(allocation: ToneAllocation, n_symbols: u64, seed: u64) -> Self {
        Self {
            allocation,
            n_symbols,
            seed,
            constellation: Constellation::default(),
        }
    }

    pub fn mu(&self) -> u32 {
        self.allocation.mu
    }

    /// Symbol-major constellation points, `n_symbols * n_tones` long.
    pub fn points(&self) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.n_symbols * self.allocation.n_tones)
            .map(|_| self.constellation.draw(&mut rng))
            .collect()
    }
}

/// Complex baseband samples at 61.44 MHz.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBuffer {
    pub mu: u32,
    pub samples: Vec<Complex64>,
}

impl SampleBuffer {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean_power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }
}

pub fn synthesize(stream: &SymbolStream) -> Result<SampleBuffer> {
    synthesize_points(&stream.allocation, &stream.points())
}

/// Synthesizes explicit symbol-major constellation points; a trailing
/// partial symbol is ignored.
pub fn synthesize_points(allocation: &ToneAllocation, points: &[Complex64]) -> Result<SampleBuffer> {
    let modulator = Modulator::new(allocation)?;
    let n_sym = modulator.params.n_sym as usize;
    let per_symbol = allocation.n_tones as usize;
    let symbols = points.len() / per_symbol;
    let mut samples = vec![Complex64::new(0.0, 0.0); symbols * n_sym];
    for (chunk, out) in points.chunks_exact(per_symbol).zip(samples.chunks_exact_mut(n_sym)) {
        modulator.add_symbol(chunk, out);
    }
    Ok(SampleBuffer {
        mu: allocation.mu,
        samples,
    })
}

/// Receives tone `tone` of symbol `symbol` with a numerology-`mu_u` window.
pub fn demodulate(buf: &SampleBuffer, mu_u: u32, tone: u64, symbol: u64) -> Result<Complex64> {
    let corr = Correlator::new(mu_u, tone)?;
    let (start, end) = corr.window(symbol);
    if end > buf.len() {
        return Err(Error::WindowOutOfBounds {
            symbol,
            end: end as u64,
            len: buf.len() as u64,
        });
    }
    Ok(corr.correlate_at(&buf.samples, start))
}

/// Places an interferer block and a victim tone so that the nearest
/// interferer tone sits `gb_bins` above the victim tone. Returns the
/// allocation and the victim subcarrier index.
pub fn place_tones(pair: &InterferencePair, gb_bins: u64, n_int: u64) -> Result<(ToneAllocation, u64)> {
    let g = pair.gb_granularity();
    if gb_bins % g != 0 {
        return Err(Error::UnrealizableGuardBand {
            bins: gb_bins as f64,
            mu_i: pair.mu_i(),
            mu_u: pair.mu_u(),
            granularity: g,
        });
    }
    let i_step = pair.interferer().bins_per_subcarrier();
    let u_step = pair.victim().bins_per_subcarrier();
    // victim position (in bins) such that victim + gb lands on the interferer grid
    let victim_bins = (i_step - gb_bins % i_step) % i_step;
    debug_assert_eq!(victim_bins % u_step, 0);
    let first = (victim_bins + gb_bins) / i_step;
    let alloc = ToneAllocation::new(pair.mu_i(), first, n_int)?;
    Ok((alloc, victim_bins / u_step))
}

/// Streaming accumulator over per-block mean powers.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BatchStats {
    pub blocks: u64,
    mean: f64,
    m2: f64,
}

impl BatchStats {
    fn push(&mut self, x: f64) {
        self.blocks += 1;
        let d = x - self.mean;
        self.mean += d / self.blocks as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise merge; deterministic for a fixed merge order.
    pub fn merge(&self, other: &Self) -> Self {
        if self.blocks == 0 {
            return *other;
        }
        if other.blocks == 0 {
            return *self;
        }
        let n = self.blocks + other.blocks;
        let d = other.mean - self.mean;
        let nf = n as f64;
        Self {
            blocks: n,
            mean: self.mean + d * other.blocks as f64 / nf,
            m2: self.m2 + other.m2 + d * d * (self.blocks as f64 * other.blocks as f64) / nf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    /// Mean of `|a_hat|^2` over all simulated victim symbols.
    pub mse: f64,
    /// Standard error of `mse`, from the spread of per-block means.
    pub std_error: f64,
    pub victim_symbols: u64,
}

impl MonteCarloEstimate {
    /// `(mse - reference) / std_error`. The error is floored at rounding
    /// level so a run without sampling variance (one constant-modulus tone
    /// inside a single interferer symbol, or an exact null) is compared to
    /// round-off rather than to zero.
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = self.mse - reference;
        if d == 0.0 {
            return 0.0;
        }
        let floor = ROUNDING_REL * self.mse.abs().max(reference.abs()) + ROUNDING_ABS;
        d / self.std_error.max(floor)
    }
}

/// A prepared Monte Carlo run: the victim transmits nothing, so every
/// received sample on its tone is interference.
///
/// The interferer is generated in blocks of `lcm(N_e^{mu_i}, N_e^{mu_u})`
/// samples, so each block holds whole symbols of both numerologies and
/// every victim window phase occurs equally often. Blocks are grouped in
/// batches of [`BATCH_BLOCKS`], each with its own RNG seeded by
/// [`batch_seed`]; batches can run in any order and are reduced in index
/// order by [`MonteCarlo::finish`].
#[derive(Debug, Clone)]
pub struct MonteCarlo {
    modulator: Modulator,
    correlator: Correlator,
    constellation: Constellation,
    seed: u64,
    n_blocks: u64,
    block_len: usize,
    interferer_per_block: u64,
    victims_per_block: u64,
}

impl MonteCarlo {
    pub fn new(
        pair: &InterferencePair,
        interferer: &ToneAllocation,
        victim_tone: u64,
        n_symbols: u64,
        seed: u64,
    ) -> Result<Self> {
        if interferer.mu != pair.mu_i() {
            return Err(Error::NumerologyMismatch {
                expected: pair.mu_i(),
                found: interferer.mu,
            });
        }
        if n_symbols < MIN_SYMBOLS {
            return Err(Error::InsufficientSymbols {
                requested: n_symbols,
                min: MIN_SYMBOLS,
            });
        }
        let modulator = Modulator::new(interferer)?;
        let correlator = Correlator::new(pair.mu_u(), victim_tone)?;
        let (ni, nu) = (pair.interferer().n_sym, pair.victim().n_sym);
        let block = math::lcm(ni, nu);
        let victims_per_block = block / nu;
        Ok(Self {
            modulator,
            correlator,
            constellation: Constellation::default(),
            seed,
            n_blocks: n_symbols.div_ceil(victims_per_block),
            block_len: block as usize,
            interferer_per_block: block / ni,
            victims_per_block,
        })
    }

    pub fn with_constellation(mut self, constellation: Constellation) -> Self {
        self.constellation = constellation;
        self
    }

    pub fn victim_symbols(&self) -> u64 {
        self.n_blocks * self.victims_per_block
    }

    pub fn n_batches(&self) -> u64 {
        self.n_blocks.div_ceil(BATCH_BLOCKS)
    }

    pub fn run_batch(&self, batch: u64) -> BatchStats {
        let first = batch * BATCH_BLOCKS;
        let last = (first + BATCH_BLOCKS).min(self.n_blocks);
        let mut rng = ChaCha8Rng::seed_from_u64(batch_seed(self.seed, batch));
        let n_tones = self.modulator.allocation.n_tones as usize;
        let n_sym = self.modulator.params.n_sym as usize;
        let mut points = vec![Complex64::new(0.0, 0.0); n_tones];
        let mut buf = vec![Complex64::new(0.0, 0.0); self.block_len];
        let mut stats = BatchStats::default();
        for _ in first..last {
            buf.fill(Complex64::new(0.0, 0.0));
            for out in buf.chunks_exact_mut(n_sym) {
                for p in points.iter_mut() {
                    *p = self.constellation.draw(&mut rng);
                }
                self.modulator.add_symbol(&points, out);
            }
            debug_assert_eq!(buf.len() / n_sym, self.interferer_per_block as usize);
            let mut power = 0.0;
            for v in 0..self.victims_per_block {
                let (start, _) = self.correlator.window(v);
                power += self.correlator.correlate_at(&buf, start).norm_sqr();
            }
            stats.push(power / self.victims_per_block as f64);
        }
        stats
    }

    /// Reduces batch results given in batch-index order.
    pub fn finish(&self, batches: &[BatchStats]) -> MonteCarloEstimate {
        let total = batches.iter().fold(BatchStats::default(), |acc, b| acc.merge(b));
        let std_error = if total.blocks > 1 {
            math::sqrt(total.m2 / (total.blocks - 1) as f64 / total.blocks as f64)
        } else {
            0.0
        };
        MonteCarloEstimate {
            mse: total.mean,
            std_error,
            victim_symbols: total.blocks * self.victims_per_block,
        }
    }

    pub fn run(&self) -> MonteCarloEstimate {
        let batches: Vec<BatchStats> = (0..self.n_batches()).map(|b| self.run_batch(b)).collect();
        self.finish(&batches)
    }
}

/// Empirical MSE on `victim_tone` with QPSK interferer symbols.
pub fn simulate_mse(
    pair: &InterferencePair,
    interferer: &ToneAllocation,
    victim_tone: u64,
    n_symbols: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    Ok(MonteCarlo::new(pair, interferer, victim_tone, n_symbols, seed)?.run())
}
