//! Polar coding with block-to-block mutual information bits.
//!
//! Consecutive codewords share a small set of "mutual" payload bits placed on
//! the least reliable information positions of each block. When one block of a
//! chunk fails its CRC and its neighbours pass, the shared bits are recovered
//! from the surviving blocks and the failed block is decoded a second time
//! with those bits frozen to the recovered values. The crate provides:
//!
//! * code construction (Gaussian-approximation density evolution) and layout,
//! * a systematic-free polar encoder plus CRC machinery,
//! * successive-cancellation (SC), SC list (SCL) and belief-propagation (BP)
//!   decoders that all accept externally pinned bit values,
//! * the chunk encode/decode state machine for the pairwise and general
//!   sharing schemes,
//! * closed-form packet-error-rate and decoding-latency models,
//! * a deterministic Monte Carlo harness with CSV reporting.

pub mod analysis;
pub mod bp;
pub mod channel;
pub mod codec;
pub mod construction;
pub mod crc;
pub mod harness;
pub mod latency;
pub mod pcm;
pub mod sc;
pub mod scl;

pub use construction::{CodeConfig, CodeLayout, DecoderKind, ReliabilityProfile, Scheme};
