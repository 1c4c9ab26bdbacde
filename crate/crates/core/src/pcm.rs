//! Chunked encoding and two-round decoding with shared mutual bits.
//!
//! A chunk groups m polar blocks. Every block reserves its least reliable
//! information positions for mutual bits, chosen so the bitwise XOR of all
//! m mutual groups is zero. When exactly one block fails its CRC, the
//! missing group is rebuilt from the surviving blocks and the failed block
//! is decoded again with those bits pinned.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bp::{BpDecoder, DEFAULT_BP_ITERS};
use crate::codec::extract_message_with_crc;
use crate::codec::{
    assemble_source_word, extract_info_stream, polar_encode, Bit, CodecError, Codeword, SourceWord,
};
use crate::construction::{CodeConfig, CodeLayout, ConfigError, DecoderKind};
use crate::crc::crc_check;
use crate::crc::CrcSpec;
use crate::sc::{FreezeMask, KernelMode, ScDecoder};
use crate::scl::SclDecoder;

/// How payload bits are spread over the blocks of a chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChunkScheme {
    /// Two blocks carrying one identical mutual group.
    Pairwise,
    /// m blocks where the last block's mutual group is the XOR of all the
    /// others, which still carry payload in theirs.
    General,
}

/// Failures in chunk planning, encoding, or recovery.
#[derive(Debug, Error, PartialEq)]
pub enum PcmError {
    #[error("pairwise chunks need exactly 2 blocks per chunk, got {0}")]
    PairwiseBlockCount(usize),
    #[error("payload length {got} does not match chunk capacity {expected}")]
    PayloadLength { expected: usize, got: usize },
    #[error("mutual recovery needs {expected} sibling groups, got {got}")]
    SiblingCount { expected: usize, got: usize },
    #[error("sibling mutual groups have mismatched lengths")]
    SiblingLength,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// Payload geometry of one chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChunkPlan {
    pub scheme: ChunkScheme,
    pub m: usize,
    k_info: usize,
    k_p: usize,
}

impl ChunkPlan {
    pub fn new(scheme: ChunkScheme, config: &CodeConfig) -> Result<Self, PcmError> {
        config.validate()?;
        if scheme == ChunkScheme::Pairwise && config.m != 2 {
            return Err(PcmError::PairwiseBlockCount(config.m));
        }
        Ok(ChunkPlan {
            scheme,
            m: config.m,
            k_info: config.k_info(),
            k_p: config.k_p,
        })
    }

    /// Fresh payload bits carried by one chunk.
    pub fn payload_len(&self) -> usize {
        // Identical for both schemes: the parity constraint on the mutual
        // groups removes exactly one group's worth of freedom.
        self.m * self.k_info - self.k_p
    }

    pub fn k_info(&self) -> usize {
        self.k_info
    }

    pub fn k_p(&self) -> usize {
        self.k_p
    }

    /// Own (non-mutual, non-CRC) bits per block.
    pub fn k_i(&self) -> usize {
        self.k_info - self.k_p
    }
}

/// Splits a long bit stream into chunk payloads, zero-padding the tail.
/// Returns the payload segments and the number of padding bits added.
pub fn segment_stream(bits: &[Bit], plan: &ChunkPlan) -> (Vec<Vec<Bit>>, usize) {
    let len = plan.payload_len();
    assert!(len > 0);
    if bits.is_empty() {
        return (Vec::new(), 0);
    }
    let mut segments = Vec::with_capacity(bits.len().div_ceil(len));
    for chunk in bits.chunks(len) {
        let mut seg = chunk.to_vec();
        seg.resize(len, 0);
        segments.push(seg);
    }
    let padding = segments.len() * len - bits.len();
    (segments, padding)
}

/// Encoded chunk with the assembled source words kept for bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedChunk {
    pub source_words: Vec<SourceWord>,
    pub codewords: Vec<Codeword>,
}

/// Per-block information streams (mutual bits first) for one payload.
fn block_streams(payload: &[Bit], plan: &ChunkPlan) -> Vec<Vec<Bit>> {
    let k_p = plan.k_p;
    let k_i = plan.k_i();
    let k_info = plan.k_info;
    match plan.scheme {
        ChunkScheme::Pairwise => {
            let mutual = &payload[..k_p];
            let own_odd = &payload[k_p..k_p + k_i];
            let own_even = &payload[k_p + k_i..];
            vec![[mutual, own_odd].concat(), [mutual, own_even].concat()]
        }
        ChunkScheme::General => {
            let mut streams: Vec<Vec<Bit>> = Vec::with_capacity(plan.m);
            let mut parity = vec![0u8; k_p];
            for b in 0..plan.m - 1 {
                let stream = payload[b * k_info..(b + 1) * k_info].to_vec();
                for (p, &bit) in parity.iter_mut().zip(&stream[..k_p]) {
                    *p ^= bit;
                }
                streams.push(stream);
            }
            let own_last = &payload[(plan.m - 1) * k_info..];
            streams.push([parity.as_slice(), own_last].concat());
            streams
        }
    }
}

/// Encodes one chunk payload into m codewords.
pub fn encode_chunk(
    payload: &[Bit],
    plan: &ChunkPlan,
    layout: &CodeLayout,
    spec: &CrcSpec,
) -> Result<EncodedChunk, PcmError> {
    if payload.len() != plan.payload_len() {
        return Err(PcmError::PayloadLength {
            expected: plan.payload_len(),
            got: payload.len(),
        });
    }
    assert_eq!(layout.k_info(), plan.k_info);
    assert_eq!(layout.k_p(), plan.k_p);

    let mut source_words = Vec::with_capacity(plan.m);
    let mut codewords = Vec::with_capacity(plan.m);
    for stream in block_streams(payload, plan) {
        let word = assemble_source_word(&stream, layout, spec)?;
        codewords.push(polar_encode(&word));
        source_words.push(word);
    }
    Ok(EncodedChunk {
        source_words,
        codewords,
    })
}

/// Rebuilds a missing mutual group as the XOR of its m-1 siblings.
pub fn recover_mutual_bits(known: &[Vec<Bit>], m: usize) -> Result<Vec<Bit>, PcmError> {
    if known.len() != m - 1 {
        return Err(PcmError::SiblingCount {
            expected: m - 1,
            got: known.len(),
        });
    }
    let len = known[0].len();
    if known.iter().any(|g| g.len() != len) {
        return Err(PcmError::SiblingLength);
    }
    let mut out = vec![0u8; len];
    for group in known {
        for (o, &b) in out.iter_mut().zip(group) {
            *o ^= b & 1;
        }
    }
    Ok(out)
}

/// Outcome of decoding one block.
#[derive(Debug, Clone)]
pub struct BlockOutcome {
    pub u_hat: Vec<Bit>,
    pub crc_pass: bool,
}

enum DecoderImpl {
    Sc(ScDecoder),
    Scl(SclDecoder),
    Bp(BpDecoder),
}

/// One of the three block decoders behind a common interface.
pub struct BlockDecoder {
    layout: CodeLayout,
    crc: CrcSpec,
    inner: DecoderImpl,
}

impl BlockDecoder {
    /// Builds the decoder named by the configuration with its default
    /// kernel: exact combining for SC and SCL, scaled min-sum for BP.
    pub fn for_config(config: &CodeConfig, layout: &CodeLayout) -> Self {
        assert_eq!(layout.k_crc(), CrcSpec::CRC12.width);
        let inner = match config.decoder_kind {
            DecoderKind::Sc => DecoderImpl::Sc(ScDecoder::new(layout.n, KernelMode::Exact)),
            DecoderKind::Scl => DecoderImpl::Scl(SclDecoder::new(
                layout.clone(),
                Some(CrcSpec::CRC12),
                config.list_size,
                KernelMode::Exact,
            )),
            DecoderKind::Bp => DecoderImpl::Bp(BpDecoder::new(
                layout.clone(),
                Some(CrcSpec::CRC12),
                DEFAULT_BP_ITERS,
                KernelMode::MinSum,
            )),
        };
        BlockDecoder {
            layout: layout.clone(),
            crc: CrcSpec::CRC12,
            inner,
        }
    }

    /// Decodes one block and reports its CRC verdict.
    pub fn decode(&mut self, channel_llrs: &[f64], mask: &FreezeMask) -> BlockOutcome {
        match &mut self.inner {
            DecoderImpl::Sc(dec) => {
                let u_hat = dec.decode(channel_llrs, mask);
                let message = extract_message_with_crc(&u_hat, &self.layout);
                let crc_pass = crc_check(&message, &self.crc).expect("message covers checksum");
                BlockOutcome { u_hat, crc_pass }
            }
            DecoderImpl::Scl(dec) => {
                let out = dec.decode(channel_llrs, mask);
                BlockOutcome {
                    u_hat: out.u_hat,
                    crc_pass: out.crc_pass,
                }
            }
            DecoderImpl::Bp(dec) => {
                let out = dec.decode(channel_llrs, mask);
                BlockOutcome {
                    u_hat: out.u_hat,
                    crc_pass: out.crc_pass,
                }
            }
        }
    }
}

/// Pairwise chunk outcomes named after which block failed round one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCase {
    BothPassed,
    EvenFailed,
    OddFailed,
    BothFailed,
}

/// Classification of a decoded chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    Pair(PairCase),
    MultiBlock { round1_failures: usize },
}

/// Details of a second decoding round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondRound {
    pub block_index: usize,
    pub crc_pass: bool,
    /// Source index of the first mutual bit whose round-one estimate
    /// differed from the pinned value; None when they all agreed.
    pub breakpoint: Option<usize>,
}

/// Everything the harness needs to score one chunk.
#[derive(Debug, Clone)]
pub struct ChunkResult {
    pub case: CaseLabel,
    /// Decoding rounds spent: 1 or 2.
    pub rounds: usize,
    pub round1_crc: Vec<bool>,
    /// Source estimates as they stood after round 1, before any rescue.
    pub round1_estimates: Vec<Vec<Bit>>,
    pub second_round: Option<SecondRound>,
    /// CRC verdict per block after all rounds.
    pub final_crc: Vec<bool>,
    /// Final source estimate per block.
    pub block_estimates: Vec<Vec<Bit>>,
    /// Best-effort payload estimate, always full length.
    pub payload: Vec<Bit>,
    /// True when every block ended with a passing CRC.
    pub payload_recovered: bool,
}

/// Runs the chunk state machine: decode every block, and when exactly one
/// fails, rebuild its mutual bits from the siblings and decode it again
/// with those bits pinned.
pub fn decode_chunk(
    llr_blocks: &[Vec<f64>],
    plan: &ChunkPlan,
    layout: &CodeLayout,
    decoder: &mut BlockDecoder,
) -> ChunkResult {
    let m = plan.m;
    assert_eq!(llr_blocks.len(), m);
    assert!(layout.k_crc() > 0);

    let mask = FreezeMask::from_layout(layout);
    let mut estimates: Vec<Vec<Bit>> = Vec::with_capacity(m);
    let mut round1_crc = Vec::with_capacity(m);
    for llrs in llr_blocks {
        let out = decoder.decode(llrs, &mask);
        estimates.push(out.u_hat);
        round1_crc.push(out.crc_pass);
    }

    let failures: Vec<usize> = (0..m).filter(|&b| !round1_crc[b]).collect();
    let round1_estimates = estimates.clone();
    let mut final_crc = round1_crc.clone();
    let mut second_round = None;
    let mut rounds = 1;

    if failures.len() == 1 {
        let failed = failures[0];
        let known: Vec<Vec<Bit>> = (0..m)
            .filter(|&b| b != failed)
            .map(|b| mutual_group(&estimates[b], layout))
            .collect();
        let pinned = recover_mutual_bits(&known, m).expect("exactly one missing group");

        let breakpoint = layout
            .mutual_fill()
            .iter()
            .zip(&pinned)
            .find(|(&i, &bit)| estimates[failed][i] != bit)
            .map(|(&i, _)| i);

        let mut pinned_mask = mask.clone();
        for (&i, &bit) in layout.mutual_fill().iter().zip(&pinned) {
            pinned_mask.pin(i, bit);
        }
        let out = decoder.decode(&llr_blocks[failed], &pinned_mask);
        estimates[failed] = out.u_hat;
        final_crc[failed] = out.crc_pass;
        rounds = 2;
        second_round = Some(SecondRound {
            block_index: failed,
            crc_pass: out.crc_pass,
            breakpoint,
        });
    }

    let case = if m == 2 {
        CaseLabel::Pair(match (round1_crc[0], round1_crc[1]) {
            (true, true) => PairCase::BothPassed,
            (true, false) => PairCase::EvenFailed,
            (false, true) => PairCase::OddFailed,
            (false, false) => PairCase::BothFailed,
        })
    } else {
        CaseLabel::MultiBlock {
            round1_failures: failures.len(),
        }
    };

    let payload = extract_payload(&estimates, &final_crc, plan, layout);
    let payload_recovered = final_crc.iter().all(|&ok| ok);

    ChunkResult {
        case,
        rounds,
        round1_crc,
        round1_estimates,
        second_round,
        final_crc,
        block_estimates: estimates,
        payload,
        payload_recovered,
    }
}

fn mutual_group(u_hat: &[Bit], layout: &CodeLayout) -> Vec<Bit> {
    layout.mutual_fill().iter().map(|&i| u_hat[i] & 1).collect()
}

/// Reassembles the payload from the final block estimates. Shared mutual
/// bits are read from a block whose CRC passed when there is one.
fn extract_payload(
    estimates: &[Vec<Bit>],
    final_crc: &[bool],
    plan: &ChunkPlan,
    layout: &CodeLayout,
) -> Vec<Bit> {
    let k_p = plan.k_p;
    let mut payload = Vec::with_capacity(plan.payload_len());
    match plan.scheme {
        ChunkScheme::Pairwise => {
            let donor = final_crc.iter().position(|&ok| ok).unwrap_or(0);
            payload.extend(mutual_group(&estimates[donor], layout));
            for est in estimates {
                let stream = extract_info_stream(est, layout);
                payload.extend_from_slice(&stream[k_p..]);
            }
        }
        ChunkScheme::General => {
            for est in &estimates[..plan.m - 1] {
                payload.extend(extract_info_stream(est, layout));
            }
            let stream = extract_info_stream(&estimates[plan.m - 1], layout);
            payload.extend_from_slice(&stream[k_p..]);
        }
    }
    payload
}
