//! Seeded Monte Carlo of the time-ordered selection/measurement protocol.
//!
//! Each pair is first selected on `c` at time `t₁` (drawing `γ` from the
//! marginal) and then measured on `b` at `t₂ > t₁` (drawing `β` from column
//! `γ` of `P^{b/c}`). Trials are grouped into fixed chunks of
//! [`CHUNK_TRIALS`]; chunk `k` draws outcomes from ChaCha stream `2k` and
//! times from stream `2k + 1` of the seed's key. Results therefore depend on
//! the seed and the trial index only, never on how chunks are scheduled, and
//! the outcome sequence is the same whatever time distribution is chosen.

use core::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::epr::{epr_bohm_from_difference, epr_bohm_probabilities, AnglePair, ChshSettings};
use crate::prob::{BinaryDistribution, Sign, TransitionMatrix};
use crate::{Error, Result};

/// Trials per random substream.
pub const CHUNK_TRIALS: u64 = 1 << 14;

/// Number of equal-width bins of the `t₂ − t₁` histogram on `[0, 1]`.
pub const GAP_BINS: usize = 10;

/// How the selection and measurement times of a pair are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TimeDistribution {
    /// Two independent uniforms on `[0, 1]`, ordered; exact ties are redrawn.
    #[default]
    UniformSquare,
    /// `t₁ = 0`, `t₂ = 1` for every pair.
    FixedOrder,
}

/// Parameters of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Parametrization of the EPR-Bohm conditionals.
    pub angles: AnglePair,
    /// Distribution of the selection outcome `c`.
    pub marginal_c: BinaryDistribution,
    /// Number of pairs, at least 1.
    pub n_pairs: u64,
    /// Seed of every random substream.
    pub seed: u64,
    /// Time-pair distribution.
    pub time_distribution: TimeDistribution,
}

impl SimConfig {
    /// Validated configuration.
    pub fn new(
        angles: AnglePair,
        marginal_c: BinaryDistribution,
        n_pairs: u64,
        seed: u64,
        time_distribution: TimeDistribution,
    ) -> Result<Self> {
        let config = SimConfig { angles, marginal_c, n_pairs, seed, time_distribution };
        config.validate()?;
        Ok(config)
    }

    /// Checks `n_pairs ≥ 1`. Other invariants are held by the field types.
    pub fn validate(&self) -> Result<()> {
        if self.n_pairs == 0 {
            return Err(Error::InvalidCount);
        }
        Ok(())
    }

    /// The sampling protocol behind this configuration.
    pub fn protocol(&self) -> Protocol {
        Protocol {
            conditionals: epr_bohm_probabilities(&self.angles),
            marginal_c: self.marginal_c,
            n_pairs: self.n_pairs,
            seed: self.seed,
            time_distribution: self.time_distribution,
        }
    }
}

/// One simulated pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// Time of the selection on `c`.
    pub t_selection: f64,
    /// Time of the measurement on `b`; strictly later than `t_selection`.
    pub t_measurement: f64,
    /// Selection outcome.
    pub gamma: Sign,
    /// Measurement outcome.
    pub beta: Sign,
}

/// Sampling protocol for an arbitrary conditional matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Protocol {
    /// `p^{b/c}(β/γ)` used at measurement.
    pub conditionals: TransitionMatrix,
    /// Distribution of `c` at selection.
    pub marginal_c: BinaryDistribution,
    /// Number of pairs.
    pub n_pairs: u64,
    /// Seed.
    pub seed: u64,
    /// Time-pair distribution.
    pub time_distribution: TimeDistribution,
}

impl Protocol {
    /// Number of chunks covering `n_pairs`.
    pub fn chunk_count(&self) -> u64 {
        self.n_pairs.div_ceil(CHUNK_TRIALS)
    }

    /// Runs the trials of one chunk.
    pub fn run_chunk(&self, chunk: u64) -> Tally {
        self.run_chunk_traced(chunk, |_| {})
    }

    /// Runs the trials of one chunk, passing every trial to `sink` in order.
    pub fn run_chunk_traced<F: FnMut(&TrialRecord)>(&self, chunk: u64, mut sink: F) -> Tally {
        let base = ChaCha8Rng::seed_from_u64(self.seed);
        let mut outcomes = base.clone();
        outcomes.set_stream(2 * chunk);
        let mut clock = base;
        clock.set_stream(2 * chunk + 1);

        let start = chunk * CHUNK_TRIALS;
        let end = (start + CHUNK_TRIALS).min(self.n_pairs);
        let mut tally = Tally::new();
        for _ in start..end {
            let (t_selection, t_measurement) = match self.time_distribution {
                TimeDistribution::UniformSquare => loop {
                    let u: f64 = clock.random();
                    let v: f64 = clock.random();
                    if u == v {
                        tally.n_redraws += 1;
                        continue;
                    }
                    break (u.min(v), u.max(v));
                },
                TimeDistribution::FixedOrder => (0.0, 1.0),
            };
            let gamma = draw(&mut outcomes, self.marginal_c.p_plus());
            let beta = draw(&mut outcomes, self.conditionals.get(Sign::Plus, gamma));
            let record = TrialRecord { t_selection, t_measurement, gamma, beta };
            tally.record(&record);
            sink(&record);
        }
        tally
    }

    /// Serial run over all chunks.
    pub fn tally(&self) -> Result<Tally> {
        self.tally_traced(|_| {})
    }

    /// Serial run over all chunks with a per-trial sink.
    pub fn tally_traced<F: FnMut(&TrialRecord)>(&self, mut sink: F) -> Result<Tally> {
        if self.n_pairs == 0 {
            return Err(Error::InvalidCount);
        }
        let mut total = Tally::new();
        for chunk in 0..self.chunk_count() {
            total.merge(&self.run_chunk_traced(chunk, &mut sink));
        }
        Ok(total)
    }
}

fn draw(rng: &mut ChaCha8Rng, p_plus: f64) -> Sign {
    let u: f64 = rng.random();
    if u < p_plus {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Running statistics of the gaps `t₂ − t₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapStats {
    /// Σ gap.
    pub sum: f64,
    /// Σ gap².
    pub sum_sq: f64,
    /// Smallest gap; `+∞` before any trial.
    pub min: f64,
    /// Largest gap; `0` before any trial.
    pub max: f64,
    /// Counts per bin of width `1 / GAP_BINS`; a gap of exactly 1 falls in the last bin.
    pub histogram: [u64; GAP_BINS],
}

impl GapStats {
    fn new() -> Self {
        GapStats { sum: 0.0, sum_sq: 0.0, min: f64::INFINITY, max: 0.0, histogram: [0; GAP_BINS] }
    }
}

/// Integer counts and time statistics of a set of trials. Merging tallies in
/// chunk order reproduces the serial result bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tally {
    /// `counts[β][γ]`.
    pub counts: [[u64; 2]; 2],
    /// Exact-tie redraws of the time pair.
    pub n_redraws: u64,
    /// Gap statistics.
    pub gaps: GapStats,
}

impl Default for Tally {
    fn default() -> Self {
        Self::new()
    }
}

impl Tally {
    /// Empty tally.
    pub fn new() -> Self {
        Tally { counts: [[0; 2]; 2], n_redraws: 0, gaps: GapStats::new() }
    }

    fn record(&mut self, trial: &TrialRecord) {
        self.counts[trial.beta.index()][trial.gamma.index()] += 1;
        let gap = trial.t_measurement - trial.t_selection;
        self.gaps.sum += gap;
        self.gaps.sum_sq += gap * gap;
        self.gaps.min = self.gaps.min.min(gap);
        self.gaps.max = self.gaps.max.max(gap);
        let bin = ((gap * GAP_BINS as f64) as usize).min(GAP_BINS - 1);
        self.gaps.histogram[bin] += 1;
    }

    /// Adds `other` into `self`.
    pub fn merge(&mut self, other: &Tally) {
        for r in 0..2 {
            for c in 0..2 {
                self.counts[r][c] += other.counts[r][c];
            }
        }
        self.n_redraws += other.n_redraws;
        self.gaps.sum += other.gaps.sum;
        self.gaps.sum_sq += other.gaps.sum_sq;
        self.gaps.min = self.gaps.min.min(other.gaps.min);
        self.gaps.max = self.gaps.max.max(other.gaps.max);
        for (a, b) in self.gaps.histogram.iter_mut().zip(other.gaps.histogram) {
            *a += b;
        }
    }

    /// Total number of trials.
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Pairs selected with `c = γ`.
    pub fn selected(&self, gamma: Sign) -> u64 {
        self.counts[0][gamma.index()] + self.counts[1][gamma.index()]
    }

    /// Empirical `E(bc)`.
    pub fn correlation(&self) -> f64 {
        let mut signed: i64 = 0;
        for beta in Sign::ALL {
            for gamma in Sign::ALL {
                let n = self.counts[beta.index()][gamma.index()] as i64;
                signed += if beta == gamma { n } else { -n };
            }
        }
        signed as f64 / self.total() as f64
    }
}

/// Result of [`run_simulation`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    /// `counts[β][γ] = n(β, γ)`.
    pub counts: [[u64; 2]; 2],
    /// `n(β, γ) / n(·, γ)`. A column with no selected pairs is reported as `(1/2, 1/2)`.
    pub estimated_conditionals: TransitionMatrix,
    /// Empirical `E(bc)`.
    pub estimated_correlation: f64,
    /// Binomial standard errors `√(p̂(1−p̂)/n(·, γ))`; `1/2` for an empty column.
    pub std_errors: [[f64; 2]; 2],
    /// Exact-tie redraws of `(t₁, t₂)`.
    pub n_redraws: u64,
    /// Gap statistics of `t₂ − t₁`.
    pub gaps: GapStats,
    /// The configuration that produced this report.
    pub wall_config: SimConfig,
}

impl SimReport {
    /// Builds the report from a completed tally of `config.protocol()`.
    pub fn from_tally(config: SimConfig, tally: &Tally) -> Self {
        let mut estimates = [[0.5; 2]; 2];
        let mut std_errors = [[0.5; 2]; 2];
        for gamma in Sign::ALL {
            let g = gamma.index();
            let selected = tally.selected(gamma);
            if selected == 0 {
                continue;
            }
            for beta in Sign::ALL {
                let b = beta.index();
                let p = tally.counts[b][g] as f64 / selected as f64;
                estimates[b][g] = p;
                std_errors[b][g] = libm::sqrt(p * (1.0 - p) / selected as f64);
            }
        }
        SimReport {
            counts: tally.counts,
            estimated_conditionals: TransitionMatrix::new(estimates).expect("count ratios form column distributions"),
            estimated_correlation: tally.correlation(),
            std_errors,
            n_redraws: tally.n_redraws,
            gaps: tally.gaps,
            wall_config: config,
        }
    }

    /// Total pairs.
    pub fn n_pairs(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

/// Runs the protocol serially.
pub fn run_simulation(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    Ok(SimReport::from_tally(*config, &config.protocol().tally()?))
}

/// [`run_simulation`] that also hands every trial to `sink`, in trial order.
pub fn run_simulation_traced<F: FnMut(&TrialRecord)>(config: &SimConfig, sink: F) -> Result<SimReport> {
    config.validate()?;
    Ok(SimReport::from_tally(*config, &config.protocol().tally_traced(sink)?))
}

/// Summary of the time structure of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeOrderSummary {
    /// Pairs in the run.
    pub n_pairs: u64,
    /// Exact-tie redraws.
    pub n_redraws: u64,
    /// `n_redraws / n_pairs`.
    pub redraw_fraction: f64,
    /// Mean of `t₂ − t₁`.
    pub mean_gap: f64,
    /// Standard error of `mean_gap`.
    pub gap_std_error: f64,
    /// Smallest gap.
    pub min_gap: f64,
    /// Largest gap.
    pub max_gap: f64,
    /// Gap histogram on `[0, 1]`.
    pub histogram: [u64; GAP_BINS],
}

/// Redraw fraction and distribution of `t₂ − t₁`. The mean gap is 1/3 for
/// [`TimeDistribution::UniformSquare`] and exactly 1 for
/// [`TimeDistribution::FixedOrder`].
pub fn time_order_statistics(report: &SimReport) -> TimeOrderSummary {
    let n = report.n_pairs() as f64;
    let mean = report.gaps.sum / n;
    let variance = if n > 1.0 { ((report.gaps.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    TimeOrderSummary {
        n_pairs: report.n_pairs(),
        n_redraws: report.n_redraws,
        redraw_fraction: report.n_redraws as f64 / n,
        mean_gap: mean,
        gap_std_error: libm::sqrt(variance / n),
        min_gap: report.gaps.min,
        max_gap: report.gaps.max,
        histogram: report.gaps.histogram,
    }
}

/// Empirical CHSH value with its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshEstimate {
    /// `Ŝ`.
    pub value: f64,
    /// Standard error of `Ŝ`, from the four independent correlators.
    pub std_error: f64,
    /// Correlators in [`ChshSettings::pairs`] order.
    pub correlations: [f64; 4],
    /// Standard error of each correlator, `√((1 − Ê²)/n)`.
    pub correlation_std_errors: [f64; 4],
    /// Pairs per setting.
    pub n_per_setting: u64,
}

impl ChshEstimate {
    /// Combines four correlators each estimated from `n` pairs.
    pub fn from_correlations(correlations: [f64; 4], n: u64) -> Self {
        let errs = correlations.map(|e| libm::sqrt((1.0 - e * e).max(0.0) / n as f64));
        ChshEstimate {
            value: ChshSettings::combine(correlations),
            std_error: libm::sqrt(errs.iter().map(|s| s * s).sum()),
            correlations,
            correlation_std_errors: errs,
            n_per_setting: n,
        }
    }

    /// Combines the tallies of the four [`chsh_protocols`].
    pub fn from_tallies(tallies: &[Tally; 4]) -> Self {
        Self::from_correlations(tallies.each_ref().map(Tally::correlation), tallies[0].total())
    }
}

/// Independent 64-bit seed for substream `index` of `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // SplitMix64 output function.
    let mut z = seed.wrapping_add((index + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The four protocols simulated by [`simulate_chsh`], one per setting pair,
/// each seeded with [`derive_seed`]`(seed, k)`.
pub fn chsh_protocols(
    settings: &ChshSettings,
    marginal_c: &BinaryDistribution,
    n_per_setting: u64,
    seed: u64,
) -> Result<[Protocol; 4]> {
    if n_per_setting == 0 {
        return Err(Error::InvalidCount);
    }
    let deltas = settings.differences();
    Ok(core::array::from_fn(|k| Protocol {
        conditionals: epr_bohm_from_difference(deltas[k]),
        marginal_c: *marginal_c,
        n_pairs: n_per_setting,
        seed: derive_seed(seed, k as u64),
        time_distribution: TimeDistribution::UniformSquare,
    }))
}

/// Empirical CHSH value of the time-ordered model.
pub fn simulate_chsh(
    settings: &ChshSettings,
    marginal_c: &BinaryDistribution,
    n_per_setting: u64,
    seed: u64,
) -> Result<ChshEstimate> {
    let protocols = chsh_protocols(settings, marginal_c, n_per_setting, seed)?;
    let mut tallies = [Tally::new(); 4];
    for (tally, protocol) in tallies.iter_mut().zip(&protocols) {
        *tally = protocol.tally()?;
    }
    Ok(ChshEstimate::from_tallies(&tallies))
}

/// Local hidden-variable model used as the simultaneous-measurement baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LhvStrategy {
    /// `λ` uniform on `[0, 2π)`; each outcome is `sign(cos(setting − λ))`.
    DeterministicSign,
    /// Independent fair coins on both sides.
    RandomLocal,
}

fn sign_of(x: f64) -> i64 {
    if x >= 0.0 {
        1
    } else {
        -1
    }
}

/// Empirical CHSH value of a local hidden-variable model in which both
/// outcomes of a pair are fixed at one shared time from one hidden variable.
/// Setting pair `k` uses ChaCha stream `k` of `seed`.
pub fn lhv_baseline_chsh(settings: &ChshSettings, strategy: LhvStrategy, n: u64, seed: u64) -> Result<ChshEstimate> {
    if n == 0 {
        return Err(Error::InvalidCount);
    }
    let base = ChaCha8Rng::seed_from_u64(seed);
    let pairs = settings.pairs();
    let mut correlations = [0.0; 4];
    for (k, (x, y)) in pairs.into_iter().enumerate() {
        let mut rng = base.clone();
        rng.set_stream(k as u64);
        let mut sum: i64 = 0;
        for _ in 0..n {
            let (a, b) = match strategy {
                LhvStrategy::DeterministicSign => {
                    let hidden = rng.random::<f64>() * TAU;
                    (sign_of(libm::cos(x - hidden)), sign_of(libm::cos(y - hidden)))
                }
                LhvStrategy::RandomLocal => {
                    (if rng.random::<bool>() { 1 } else { -1 }, if rng.random::<bool>() { 1 } else { -1 })
                }
            };
            sum += a * b;
        }
        correlations[k] = sum as f64 / n as f64;
    }
    Ok(ChshEstimate::from_correlations(correlations, n))
}
