//! Cycle-count models for two-block chunk decoders.
//!
//! Two hardware schedules are modeled for the m = 2 system. The serial
//! decoder runs the two blocks of a chunk back to back through one
//! successive-cancellation core, so a second round costs a full extra
//! pass. The interleaved decoder pipelines both blocks through shared
//! stages (one block occupies a stage while the other uses the previous
//! one, with an extra processing element absorbing the final-stage
//! conflict) and, on a second round, resumes from stored intermediate
//! values at the first mutual bit whose pinned value differs from the
//! first-round estimate.
//!
//! Absolute counts are model-relative; the quantities of interest are
//! ratios between the two schedules. Source positions are 0-based here,
//! matching the rest of the crate.

use crate::construction::CodeLayout;
use crate::pcm::{CaseLabel, PairCase};

/// Cycle-count knobs for the two schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatencyParams {
    /// Cycles for one conventional SC pass over a block.
    pub base_sc_cycles: u64,
    /// Extra cycles the interleaved schedule spends resolving
    /// final-stage conflicts and filling the pipeline.
    pub interleave_overhead: u64,
    /// Block length.
    pub n: usize,
    /// First mutual position in the source word.
    pub first_mutual: usize,
    /// Last mutual position in the source word.
    pub last_mutual: usize,
}

impl LatencyParams {
    /// Classic two-cycles-per-node SC schedule for the given layout.
    pub fn for_layout(layout: &CodeLayout) -> Self {
        let first = *layout
            .mutual_fill()
            .first()
            .expect("layout has mutual bits");
        let last = *layout.mutual_fill().last().expect("layout has mutual bits");
        let params = LatencyParams {
            base_sc_cycles: 2 * layout.n as u64 - 2,
            interleave_overhead: 2,
            n: layout.n,
            first_mutual: first,
            last_mutual: last,
        };
        params.validate();
        params
    }

    fn validate(&self) {
        assert!(self.n >= 2);
        assert!(self.base_sc_cycles >= self.n as u64);
        assert!(self.interleave_overhead < self.base_sc_cycles);
        assert!(self.first_mutual <= self.last_mutual);
        assert!(self.last_mutual < self.n);
    }
}

/// Which schedule produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Architecture {
    Serial,
    Interleaved,
}

/// Cycle counts for one chunk decode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatencyTrace {
    pub architecture: Architecture,
    pub round1_cycles: u64,
    /// Zero when no second round ran.
    pub round2_cycles: u64,
    /// Restart position of the second round, when one ran and a mutual
    /// bit actually changed.
    pub breakpoint: Option<usize>,
}

impl LatencyTrace {
    pub fn total(&self) -> u64 {
        self.round1_cycles + self.round2_cycles
    }
}

fn has_second_round(case: CaseLabel) -> bool {
    match case {
        CaseLabel::Pair(pc) => matches!(pc, PairCase::EvenFailed | PairCase::OddFailed),
        CaseLabel::MultiBlock { round1_failures } => round1_failures == 1,
    }
}

fn assert_pair(case: CaseLabel) {
    assert!(
        matches!(case, CaseLabel::Pair(_)),
        "latency model covers two-block chunks only"
    );
}

/// Serial schedule: two full passes in round 1, one more when a block is
/// decoded again, making the rescue cases cost exactly 1.5 times the
/// others.
pub fn serial_latency(case: CaseLabel, params: &LatencyParams) -> LatencyTrace {
    assert_pair(case);
    params.validate();
    let round2 = if has_second_round(case) {
        params.base_sc_cycles
    } else {
        0
    };
    LatencyTrace {
        architecture: Architecture::Serial,
        round1_cycles: 2 * params.base_sc_cycles,
        round2_cycles: round2,
        breakpoint: None,
    }
}

/// Prorates the base schedule over the source decisions that still need
/// to be made, rounding to the nearest cycle.
fn prorated_cycles(params: &LatencyParams, skipped_decisions: usize) -> u64 {
    assert!(skipped_decisions <= params.n);
    let remaining = (params.n - skipped_decisions) as u64;
    let n = params.n as u64;
    (params.base_sc_cycles * remaining + n / 2) / n
}

/// Interleaved schedule: both blocks share round 1, and a second round
/// restarts at the first changed mutual bit. When the pinned bits all
/// match the first-round estimates the stored state is valid through the
/// last mutual position, so the pass resumes just after it.
pub fn interleaved_latency(
    case: CaseLabel,
    breakpoint: Option<usize>,
    params: &LatencyParams,
) -> LatencyTrace {
    assert_pair(case);
    params.validate();
    let round1 = params.base_sc_cycles + params.interleave_overhead;
    if !has_second_round(case) {
        assert!(breakpoint.is_none(), "breakpoint without a second round");
        return LatencyTrace {
            architecture: Architecture::Interleaved,
            round1_cycles: round1,
            round2_cycles: 0,
            breakpoint: None,
        };
    }
    let skipped = match breakpoint {
        Some(b) => {
            assert!(
                (params.first_mutual..=params.last_mutual).contains(&b),
                "breakpoint {b} outside the mutual span"
            );
            b
        }
        None => params.last_mutual + 1,
    };
    LatencyTrace {
        architecture: Architecture::Interleaved,
        round1_cycles: round1,
        round2_cycles: prorated_cycles(params, skipped),
        breakpoint,
    }
}

/// Case label and restart position of one simulated chunk.
#[derive(Debug, Clone, Copy)]
pub struct ChunkLatencyRecord {
    pub case: CaseLabel,
    pub breakpoint: Option<usize>,
}

/// Aggregate latency statistics for one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct LatencySummary {
    pub chunks: u64,
    pub second_rounds: u64,
    pub avg_serial_total: f64,
    pub avg_interleaved_total: f64,
    /// Interleaved-to-serial ratio of the average totals.
    pub total_ratio: f64,
    /// Mean second-round saving of the interleaved schedule relative to
    /// the serial one; None when no chunk ran a second round.
    pub round2_reduction: Option<f64>,
}

/// Scores a batch of simulated chunks under both schedules. Sums are
/// integer cycle counts, so the result does not depend on record order.
pub fn latency_report(records: &[ChunkLatencyRecord], params: &LatencyParams) -> LatencySummary {
    assert!(!records.is_empty());
    let mut serial_total = 0u64;
    let mut inter_total = 0u64;
    let mut serial_round2 = 0u64;
    let mut inter_round2 = 0u64;
    let mut second_rounds = 0u64;
    for rec in records {
        let s = serial_latency(rec.case, params);
        let i = interleaved_latency(rec.case, rec.breakpoint, params);
        serial_total += s.total();
        inter_total += i.total();
        if has_second_round(rec.case) {
            second_rounds += 1;
            serial_round2 += s.round2_cycles;
            inter_round2 += i.round2_cycles;
        }
    }
    let chunks = records.len() as u64;
    let avg_serial = serial_total as f64 / chunks as f64;
    let avg_inter = inter_total as f64 / chunks as f64;
    let reduction = if second_rounds > 0 {
        Some(1.0 - inter_round2 as f64 / serial_round2 as f64)
    } else {
        None
    };
    LatencySummary {
        chunks,
        second_rounds,
        avg_serial_total: avg_serial,
        avg_interleaved_total: avg_inter,
        total_ratio: avg_inter / avg_serial,
        round2_reduction: reduction,
    }
}
