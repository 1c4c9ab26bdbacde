//! Monte Carlo experiment runner: sweeps Eb/N0 points, simulates chunked
//! or stand-alone systems, and aggregates error-rate, rescue, and latency
//! statistics into CSV-ready tables.
//!
//! Determinism contract: a sweep's output depends only on the experiment
//! description, never on the number of worker threads. Every chunk draws
//! from its own counter-derived RNG streams and all aggregation is
//! integer addition, which is order-independent.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::AlphaRecord;
use crate::channel::{transmit, ChannelParams};
use crate::codec::{assemble_source_word, extract_info_stream, polar_encode, Bit};
use crate::construction::{
    build_layout, compute_reliability, effective_rate, CodeConfig, CodeLayout, ConfigError,
    DecoderKind, Scheme,
};
use crate::crc::CrcSpec;
use crate::latency::{interleaved_latency, serial_latency, LatencyParams};
use crate::pcm::{decode_chunk, encode_chunk, BlockDecoder, ChunkPlan, ChunkScheme, PcmError};
use crate::sc::FreezeMask;

/// Chunks simulated per parallel dispatch. Fixed so that stopping-rule
/// checks land on the same boundaries regardless of thread count.
const CHUNK_BATCH: u64 = 512;

/// What gets simulated at each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    StandaloneSc,
    StandaloneBp,
    StandaloneScl,
    PcmSc,
    PcmBp,
    PcmScl,
}

impl SystemKind {
    pub fn is_chunked(self) -> bool {
        matches!(
            self,
            SystemKind::PcmSc | SystemKind::PcmBp | SystemKind::PcmScl
        )
    }

    pub fn decoder_kind(self) -> DecoderKind {
        match self {
            SystemKind::StandaloneSc | SystemKind::PcmSc => DecoderKind::Sc,
            SystemKind::StandaloneBp | SystemKind::PcmBp => DecoderKind::Bp,
            SystemKind::StandaloneScl | SystemKind::PcmScl => DecoderKind::Scl,
        }
    }
}

/// Full description of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub system: SystemKind,
    #[serde(default)]
    pub config: CodeConfig,
    #[serde(default = "default_scheme")]
    pub scheme: ChunkScheme,
    pub ebn0_points: Vec<f64>,
    #[serde(default = "default_min_chunk_errors")]
    pub min_chunk_errors: u64,
    #[serde(default = "default_max_chunks")]
    pub max_chunks: u64,
    #[serde(default)]
    pub master_seed: u64,
}

fn default_scheme() -> ChunkScheme {
    ChunkScheme::Pairwise
}

fn default_min_chunk_errors() -> u64 {
    100
}

fn default_max_chunks() -> u64 {
    1_000_000
}

/// Problems detected before any simulation starts.
#[derive(Debug, Error, PartialEq)]
pub enum HarnessError {
    #[error("sweep needs at least one Eb/N0 point")]
    EmptySweep,
    #[error("Eb/N0 point {0} is not finite")]
    BadEbn0(f64),
    #[error("stopping rule needs min_chunk_errors >= 1")]
    StoppingRule,
    #[error("max_chunks must be >= 1")]
    ChunkCap,
    #[error("rate-matched stand-alone payload {0} is not a whole number of bits")]
    RateMismatch(f64),
    #[error("unknown figure id {0:?}; expected f4 through f11")]
    UnknownFigure(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Pcm(#[from] PcmError),
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.ebn0_points.is_empty() {
            return Err(HarnessError::EmptySweep);
        }
        if let Some(&bad) = self.ebn0_points.iter().find(|e| !e.is_finite()) {
            return Err(HarnessError::BadEbn0(bad));
        }
        if self.min_chunk_errors == 0 {
            return Err(HarnessError::StoppingRule);
        }
        if self.max_chunks == 0 {
            return Err(HarnessError::ChunkCap);
        }
        self.config.validate()?;
        ChunkPlan::new(self.scheme, &self.config)?;
        Ok(())
    }

    /// Payload bits per transmitted channel bit, the Eb/N0 normalization
    /// shared by a chunked system and its rate-matched baselines.
    pub fn channel_rate(&self) -> f64 {
        effective_rate(&self.config, Scheme::General)
    }
}

/// Derives the stand-alone code carrying the same payload rate as the
/// chunked system described by `spec`: the chunk's per-block payload
/// share plus the CRC, with no mutual positions reserved.
pub fn standalone_config(spec: &ExperimentSpec) -> Result<CodeConfig, HarnessError> {
    let payload = spec.channel_rate() * spec.config.n as f64;
    let rounded = payload.round();
    if (payload - rounded).abs() > 1e-9 || rounded < 1.0 {
        return Err(HarnessError::RateMismatch(payload));
    }
    Ok(CodeConfig {
        k: rounded as usize + spec.config.k_crc,
        k_p: 0,
        decoder_kind: spec.system.decoder_kind(),
        ..spec.config.clone()
    })
}

/// Integer tallies for one sweep point. All rates are derived from these
/// counts, so merging partial tallies is plain addition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub struct PointStats {
    pub ebn0_db: f64,
    pub channel_rate: f64,
    pub chunks: u64,
    pub blocks: u64,
    /// Chunks with at least one block still wrong after all rounds.
    pub chunk_errors: u64,
    /// Blocks still wrong after all rounds (genie comparison).
    pub block_errors: u64,
    /// Blocks wrong after round 1 only, i.e. the paired stand-alone
    /// outcome of the same codewords under the same noise.
    pub round1_block_errors: u64,
    pub round1_crc_failures: u64,
    pub bit_errors: u64,
    pub payload_bits: u64,
    pub second_round_attempts: u64,
    /// Second rounds whose block came out exactly right.
    pub second_round_successes: u64,
    pub serial_cycles: u64,
    pub interleaved_cycles: u64,
    pub serial_round2_cycles: u64,
    pub interleaved_round2_cycles: u64,
}

impl PointStats {
    fn merge(&mut self, other: &PointStats) {
        self.chunks += other.chunks;
        self.blocks += other.blocks;
        self.chunk_errors += other.chunk_errors;
        self.block_errors += other.block_errors;
        self.round1_block_errors += other.round1_block_errors;
        self.round1_crc_failures += other.round1_crc_failures;
        self.bit_errors += other.bit_errors;
        self.payload_bits += other.payload_bits;
        self.second_round_attempts += other.second_round_attempts;
        self.second_round_successes += other.second_round_successes;
        self.serial_cycles += other.serial_cycles;
        self.interleaved_cycles += other.interleaved_cycles;
        self.serial_round2_cycles += other.serial_round2_cycles;
        self.interleaved_round2_cycles += other.interleaved_round2_cycles;
    }

    /// Block error rate after all decoding rounds.
    pub fn per(&self) -> f64 {
        self.block_errors as f64 / self.blocks as f64
    }

    /// 95% normal-approximation confidence radius for the block error
    /// rate.
    pub fn per_ci95(&self) -> f64 {
        let p = self.per();
        1.96 * (p * (1.0 - p) / self.blocks as f64).sqrt()
    }

    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.payload_bits as f64
    }

    /// Block error rate before any rescue: the stand-alone performance
    /// of the underlying code on the same noise.
    pub fn round1_per(&self) -> f64 {
        self.round1_block_errors as f64 / self.blocks as f64
    }

    pub fn round1_crc_failure_rate(&self) -> f64 {
        self.round1_crc_failures as f64 / self.blocks as f64
    }

    /// Second rounds per block decode.
    pub fn second_round_rate(&self) -> f64 {
        self.second_round_attempts as f64 / self.blocks as f64
    }

    /// Successful rescues per block decode.
    pub fn additional_success_rate(&self) -> f64 {
        self.second_round_successes as f64 / self.blocks as f64
    }

    pub fn alpha_record(&self) -> AlphaRecord {
        AlphaRecord {
            ebn0_db: self.ebn0_db,
            second_rounds_attempted: self.second_round_attempts,
            second_rounds_failed: self.second_round_attempts - self.second_round_successes,
            standalone_per: self.round1_per(),
        }
    }

    pub fn avg_serial_cycles(&self) -> Option<f64> {
        (self.serial_cycles > 0).then(|| self.serial_cycles as f64 / self.chunks as f64)
    }

    pub fn avg_interleaved_cycles(&self) -> Option<f64> {
        (self.interleaved_cycles > 0).then(|| self.interleaved_cycles as f64 / self.chunks as f64)
    }

    /// Mean second-round saving of the interleaved schedule.
    pub fn round2_reduction(&self) -> Option<f64> {
        (self.serial_round2_cycles > 0)
            .then(|| 1.0 - self.interleaved_round2_cycles as f64 / self.serial_round2_cycles as f64)
    }

    /// Interleaved-to-serial ratio of average chunk latency.
    pub fn latency_ratio(&self) -> Option<f64> {
        (self.serial_cycles > 0).then(|| self.interleaved_cycles as f64 / self.serial_cycles as f64)
    }
}

/// One sweep's points in Eb/N0 order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub system: SystemKind,
    pub points: Vec<PointStats>,
}

struct SweepContext {
    layout: CodeLayout,
    decoder_config: CodeConfig,
    plan: Option<ChunkPlan>,
    latency: Option<LatencyParams>,
    rate: f64,
    /// Fresh payload bits drawn per chunk.
    payload_len: usize,
}

impl SweepContext {
    fn new(spec: &ExperimentSpec) -> Result<Self, HarnessError> {
        if spec.system.is_chunked() {
            let mut config = spec.config.clone();
            config.decoder_kind = spec.system.decoder_kind();
            let layout = build_layout(&compute_reliability(&config), &config);
            let plan = ChunkPlan::new(spec.scheme, &config)?;
            let latency = (config.m == 2).then(|| LatencyParams::for_layout(&layout));
            Ok(SweepContext {
                rate: spec.channel_rate(),
                payload_len: plan.payload_len(),
                layout,
                decoder_config: config,
                plan: Some(plan),
                latency,
            })
        } else {
            let config = standalone_config(spec)?;
            let layout = build_layout(&compute_reliability(&config), &config);
            Ok(SweepContext {
                rate: (config.k - config.k_crc) as f64 / config.n as f64,
                payload_len: config.k - config.k_crc,
                layout,
                decoder_config: config,
                plan: None,
                latency: None,
            })
        }
    }
}

struct Worker {
    decoder: BlockDecoder,
    mask: FreezeMask,
}

impl Worker {
    fn new(ctx: &SweepContext) -> Self {
        Worker {
            decoder: BlockDecoder::for_config(&ctx.decoder_config, &ctx.layout),
            mask: FreezeMask::from_layout(&ctx.layout),
        }
    }
}

fn chunk_rngs(master_seed: u64, point: usize, chunk: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    assert!(chunk < 1 << 32);
    let base = (point as u64) << 33;
    let mut noise = ChaCha8Rng::seed_from_u64(master_seed);
    noise.set_stream(base | (chunk << 1));
    let mut data = ChaCha8Rng::seed_from_u64(master_seed);
    data.set_stream(base | (chunk << 1) | 1);
    (noise, data)
}

fn random_bits(len: usize, rng: &mut ChaCha8Rng) -> Vec<Bit> {
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

fn simulate_chunk(
    worker: &mut Worker,
    spec: &ExperimentSpec,
    ctx: &SweepContext,
    params: &ChannelParams,
    point: usize,
    chunk: u64,
) -> PointStats {
    let (mut noise_rng, mut data_rng) = chunk_rngs(spec.master_seed, point, chunk);
    let payload = random_bits(ctx.payload_len, &mut data_rng);
    let mut stats = PointStats {
        ebn0_db: params.ebn0_db,
        channel_rate: ctx.rate,
        chunks: 1,
        payload_bits: ctx.payload_len as u64,
        ..PointStats::default()
    };

    if let Some(plan) = &ctx.plan {
        let encoded = encode_chunk(&payload, plan, &ctx.layout, &CrcSpec::CRC12)
            .expect("payload drawn at plan length");
        let llrs: Vec<Vec<f64>> = encoded
            .codewords
            .iter()
            .map(|cw| transmit(&cw.x, params, &mut noise_rng))
            .collect();
        let result = decode_chunk(&llrs, plan, &ctx.layout, &mut worker.decoder);

        stats.blocks = plan.m as u64;
        let mut any_wrong = false;
        for b in 0..plan.m {
            let truth = &encoded.source_words[b].u;
            if result.round1_estimates[b] != *truth {
                stats.round1_block_errors += 1;
            }
            if !result.round1_crc[b] {
                stats.round1_crc_failures += 1;
            }
            if result.block_estimates[b] != *truth {
                stats.block_errors += 1;
                any_wrong = true;
            }
        }
        stats.chunk_errors = u64::from(any_wrong);
        stats.bit_errors = payload
            .iter()
            .zip(&result.payload)
            .filter(|(a, b)| a != b)
            .count() as u64;
        if let Some(sr) = &result.second_round {
            stats.second_round_attempts = 1;
            let truth = &encoded.source_words[sr.block_index].u;
            if result.block_estimates[sr.block_index] == *truth {
                stats.second_round_successes = 1;
            }
        }
        if let Some(lat) = &ctx.latency {
            let breakpoint = result.second_round.as_ref().and_then(|sr| sr.breakpoint);
            let s = serial_latency(result.case, lat);
            let i = interleaved_latency(result.case, breakpoint, lat);
            stats.serial_cycles = s.total();
            stats.interleaved_cycles = i.total();
            stats.serial_round2_cycles = s.round2_cycles;
            stats.interleaved_round2_cycles = i.round2_cycles;
        }
    } else {
        let word = assemble_source_word(&payload, &ctx.layout, &CrcSpec::CRC12)
            .expect("stand-alone stream drawn at layout length");
        let codeword = polar_encode(&word);
        let llrs = transmit(&codeword.x, params, &mut noise_rng);
        let outcome = worker.decoder.decode(&llrs, &worker.mask);

        stats.blocks = 1;
        let wrong = outcome.u_hat != word.u;
        stats.block_errors = u64::from(wrong);
        stats.round1_block_errors = stats.block_errors;
        stats.round1_crc_failures = u64::from(!outcome.crc_pass);
        stats.chunk_errors = u64::from(wrong);
        let estimate = extract_info_stream(&outcome.u_hat, &ctx.layout);
        stats.bit_errors = payload
            .iter()
            .zip(&estimate)
            .filter(|(a, b)| a != b)
            .count() as u64;
    }
    stats
}

fn run_point(spec: &ExperimentSpec, ctx: &SweepContext, point: usize, ebn0_db: f64) -> PointStats {
    let params = ChannelParams::new(ebn0_db, ctx.rate);
    let mut total = PointStats {
        ebn0_db,
        channel_rate: ctx.rate,
        ..PointStats::default()
    };
    let mut done = 0u64;
    while done < spec.max_chunks && total.chunk_errors < spec.min_chunk_errors {
        let batch = CHUNK_BATCH.min(spec.max_chunks - done);
        let partial = (done..done + batch)
            .into_par_iter()
            .map_init(
                || Worker::new(ctx),
                |worker, chunk| simulate_chunk(worker, spec, ctx, &params, point, chunk),
            )
            .reduce(PointStats::default, |mut a, b| {
                a.merge(&b);
                a
            });
        total.merge(&partial);
        done += batch;
    }
    total.ebn0_db = ebn0_db;
    total.channel_rate = ctx.rate;
    total
}

/// Runs every point of the sweep, stopping each at `min_chunk_errors`
/// chunk errors (checked at fixed batch boundaries) or `max_chunks`.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepResult, HarnessError> {
    spec.validate()?;
    let ctx = SweepContext::new(spec)?;
    let points = spec
        .ebn0_points
        .iter()
        .enumerate()
        .map(|(i, &ebn0)| run_point(spec, &ctx, i, ebn0))
        .collect();
    Ok(SweepResult {
        system: spec.system,
        points,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Generic one-row-per-point CSV with every aggregate the harness tracks.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from(
        "ebn0_db,channel_rate,chunks,blocks,per,per_ci95,ber,round1_per,\
         second_round_rate,additional_success_rate,avg_serial_cycles,\
         avg_interleaved_cycles,round2_reduction\n",
    );
    for p in &result.points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            p.ebn0_db,
            p.channel_rate,
            p.chunks,
            p.blocks,
            p.per(),
            p.per_ci95(),
            p.ber(),
            p.round1_per(),
            p.second_round_rate(),
            p.additional_success_rate(),
            fmt_opt(p.avg_serial_cycles()),
            fmt_opt(p.avg_interleaved_cycles()),
            fmt_opt(p.round2_reduction()),
        ));
    }
    out
}

/// Inclusive dB grid from `start` to `stop` in `step` increments.
pub fn ebn0_grid(start: f64, step: f64, stop: f64) -> Vec<f64> {
    assert!(step > 0.0 && stop >= start);
    let count = ((stop - start) / step).round() as usize + 1;
    (0..count).map(|i| start + step * i as f64).collect()
}

/// Prebuilt experiment families, each reproducing one results plot at
/// desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    /// Bit error rates of the pairwise systems and their rate-matched
    /// stand-alone baselines.
    F4,
    /// Pairwise packet error rate against the analytic two-block model
    /// evaluated at the measured alpha extrema.
    F5,
    /// Packet error rates of the pairwise systems and baselines.
    F6,
    /// Second-round rate against the closed-form additional-decoding
    /// rate of the underlying block error probability.
    F7,
    /// Packet error rate of the three-block general scheme at its
    /// adjusted rate.
    F8,
    /// Packet error rates of the list-decoded chunked system against
    /// stand-alone list baselines.
    F9,
    /// Relative round-two latency saved by the interleaved architecture.
    F10,
    /// Average decode latency of both architectures.
    F11,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::F4,
        FigureId::F5,
        FigureId::F6,
        FigureId::F7,
        FigureId::F8,
        FigureId::F9,
        FigureId::F10,
        FigureId::F11,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FigureId::F4 => "f4",
            FigureId::F5 => "f5",
            FigureId::F6 => "f6",
            FigureId::F7 => "f7",
            FigureId::F8 => "f8",
            FigureId::F9 => "f9",
            FigureId::F10 => "f10",
            FigureId::F11 => "f11",
        }
    }

    fn filename(self) -> &'static str {
        match self {
            FigureId::F4 => "f4_ber_pair_systems.csv",
            FigureId::F5 => "f5_per_model_bound.csv",
            FigureId::F6 => "f6_per_pair_systems.csv",
            FigureId::F7 => "f7_additional_decoding.csv",
            FigureId::F8 => "f8_per_three_block.csv",
            FigureId::F9 => "f9_per_list_systems.csv",
            FigureId::F10 => "f10_latency_reduction.csv",
            FigureId::F11 => "f11_average_latency.csv",
        }
    }
}

impl std::str::FromStr for FigureId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        FigureId::ALL
            .into_iter()
            .find(|id| id.label() == key || id.label()[1..] == key)
            .ok_or_else(|| HarnessError::UnknownFigure(s.to_string()))
    }
}

/// Optional knobs layered over a figure's built-in experiment grid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOverrides {
    pub ebn0_points: Option<Vec<f64>>,
    pub min_chunk_errors: Option<u64>,
    pub max_chunks: Option<u64>,
    pub master_seed: Option<u64>,
}

/// One rendered CSV, named so a directory of figures stays sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureCsv {
    pub filename: String,
    pub csv: String,
}

fn figure_experiment(
    system: SystemKind,
    scheme: ChunkScheme,
    m: usize,
    list_size: usize,
    points: &[f64],
    overrides: &FigureOverrides,
) -> ExperimentSpec {
    let mut spec = ExperimentSpec {
        system,
        config: CodeConfig {
            m,
            list_size,
            ..CodeConfig::default()
        },
        scheme,
        ebn0_points: overrides
            .ebn0_points
            .clone()
            .unwrap_or_else(|| points.to_vec()),
        min_chunk_errors: overrides.min_chunk_errors.unwrap_or(100),
        max_chunks: overrides.max_chunks.unwrap_or(200_000),
        master_seed: overrides.master_seed.unwrap_or(0),
    };
    spec.config.decoder_kind = system.decoder_kind();
    spec
}

/// Runs several systems over a common grid and tabulates one aggregate
/// column per system.
fn comparison_csv(
    runs: &[(&str, ExperimentSpec)],
    value: fn(&PointStats) -> f64,
    value_name: &str,
) -> Result<String, HarnessError> {
    let mut columns = Vec::new();
    for (label, spec) in runs {
        let result = run_sweep(spec)?;
        columns.push((*label, result));
    }
    let grid = &runs[0].1.ebn0_points;
    let mut out = String::from("ebn0_db");
    for (label, _) in &columns {
        out.push_str(&format!(",{value_name}_{label}"));
    }
    out.push('\n');
    for (i, &ebn0) in grid.iter().enumerate() {
        out.push_str(&ebn0.to_string());
        for (_, result) in &columns {
            out.push_str(&format!(",{}", value(&result.points[i])));
        }
        out.push('\n');
    }
    Ok(out)
}

const WATERFALL_GRID: (f64, f64, f64) = (1.0, 0.5, 3.5);
const WIDE_GRID: (f64, f64, f64) = (1.0, 0.5, 4.5);
const LATENCY_SAMPLES: u64 = 100_000;

/// Runs the systems behind one prebuilt figure and renders its CSV.
pub fn run_figure(id: FigureId, overrides: &FigureOverrides) -> Result<FigureCsv, HarnessError> {
    let (gs, gd, ge) = match id {
        FigureId::F4 | FigureId::F6 | FigureId::F8 | FigureId::F9 => WATERFALL_GRID,
        _ => WIDE_GRID,
    };
    let grid = ebn0_grid(gs, gd, ge);
    let pair = |system| figure_experiment(system, ChunkScheme::Pairwise, 2, 2, &grid, overrides);

    let csv = match id {
        FigureId::F4 | FigureId::F6 => {
            let runs = [
                ("pcm_sc_2", pair(SystemKind::PcmSc)),
                ("pcm_bp_2", pair(SystemKind::PcmBp)),
                ("sc", pair(SystemKind::StandaloneSc)),
                ("bp", pair(SystemKind::StandaloneBp)),
                ("scl_l2", pair(SystemKind::StandaloneScl)),
            ];
            if id == FigureId::F4 {
                comparison_csv(&runs, PointStats::ber, "ber")?
            } else {
                comparison_csv(&runs, PointStats::per, "per")?
            }
        }
        FigureId::F5 => {
            let result = run_sweep(&pair(SystemKind::PcmSc))?;
            let records: Vec<_> = result.points.iter().map(PointStats::alpha_record).collect();
            let estimate = crate::analysis::estimate_alpha(&records);
            let mut out = String::from(
                "ebn0_db,per_round1,per_pcm_sc2,per_model_lower,per_model_upper,\
                 alpha_min,alpha_max\n",
            );
            for p in &result.points {
                let (lower, upper, amin, amax) = match &estimate {
                    Some(e) => {
                        let p1 = p.round1_per();
                        // A sweep-wide alpha extremum can exceed 1/p at a
                        // noisier point than the one it was measured at;
                        // the re-decode failure probability saturates at 1.
                        let cap = if p1 > 0.0 { 1.0 / p1 } else { f64::INFINITY };
                        (
                            Some(crate::analysis::pcm2_per(p1, e.alpha_min.min(cap))),
                            Some(crate::analysis::pcm2_per(p1, e.alpha_max.min(cap))),
                            Some(e.alpha_min),
                            Some(e.alpha_max),
                        )
                    }
                    None => (None, None, None, None),
                };
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    p.ebn0_db,
                    p.round1_per(),
                    p.per(),
                    fmt_opt(lower),
                    fmt_opt(upper),
                    fmt_opt(amin),
                    fmt_opt(amax),
                ));
            }
            out
        }
        FigureId::F7 => {
            let result = run_sweep(&pair(SystemKind::PcmSc))?;
            let mut out = String::from(
                "ebn0_db,additional_rate,second_round_rate,additional_success_rate,\
                 standalone_per\n",
            );
            for p in &result.points {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    p.ebn0_db,
                    crate::analysis::additional_rate(p.round1_per()),
                    p.second_round_rate(),
                    p.additional_success_rate(),
                    p.round1_per(),
                ));
            }
            out
        }
        FigureId::F8 => {
            let three =
                |system| figure_experiment(system, ChunkScheme::General, 3, 2, &grid, overrides);
            let runs = [
                ("pcm_sc_3", three(SystemKind::PcmSc)),
                ("sc", three(SystemKind::StandaloneSc)),
                ("bp", three(SystemKind::StandaloneBp)),
                ("scl_l2", three(SystemKind::StandaloneScl)),
            ];
            comparison_csv(&runs, PointStats::per, "per")?
        }
        FigureId::F9 => {
            let listed = |system, l| {
                figure_experiment(system, ChunkScheme::Pairwise, 2, l, &grid, overrides)
            };
            let runs = [
                ("pcm_scl_l2", listed(SystemKind::PcmScl, 2)),
                ("scl_l2", listed(SystemKind::StandaloneScl, 2)),
                ("scl_l4", listed(SystemKind::StandaloneScl, 4)),
            ];
            comparison_csv(&runs, PointStats::per, "per")?
        }
        FigureId::F10 | FigureId::F11 => {
            let mut spec = pair(SystemKind::PcmSc);
            if overrides.min_chunk_errors.is_none() {
                spec.min_chunk_errors = LATENCY_SAMPLES;
            }
            if overrides.max_chunks.is_none() {
                spec.max_chunks = LATENCY_SAMPLES;
            }
            let result = run_sweep(&spec)?;
            let mut out = String::from(if id == FigureId::F10 {
                "ebn0_db,round2_reduction_rate\n"
            } else {
                "ebn0_db,avg_serial_cycles,avg_interleaved_cycles,latency_ratio\n"
            });
            for p in &result.points {
                if id == FigureId::F10 {
                    out.push_str(&format!(
                        "{},{}\n",
                        p.ebn0_db,
                        fmt_opt(p.round2_reduction())
                    ));
                } else {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        p.ebn0_db,
                        fmt_opt(p.avg_serial_cycles()),
                        fmt_opt(p.avg_interleaved_cycles()),
                        fmt_opt(p.latency_ratio()),
                    ));
                }
            }
            out
        }
    };

    Ok(FigureCsv {
        filename: id.filename().to_string(),
        csv,
    })
}
