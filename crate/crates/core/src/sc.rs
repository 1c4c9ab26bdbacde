//! Successive cancellation decoding over the polar recursion, with exact
//! and min-sum check kernels. Frozen positions come from a mask that can
//! also pin individual information bits, which is how re-decode rounds
//! freeze recovered mutual bits.

use crate::codec::Bit;
use crate::construction::CodeLayout;

/// Saturation magnitude for every log-likelihood ratio in the decoder.
pub const LLR_SAT: f64 = 40.0;

/// Check-node kernel selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMode {
    Exact,
    MinSum,
}

pub(crate) fn sat(x: f64) -> f64 {
    x.clamp(-LLR_SAT, LLR_SAT)
}

/// Check-node combination of two LLRs.
///
/// The exact form evaluates 2 atanh(tanh(a/2) tanh(b/2)) through
/// logarithms so it stays finite at saturated inputs; min-sum keeps only
/// the sign-min term.
pub fn f_combine(a: f64, b: f64, mode: KernelMode) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let base = sign * a.abs().min(b.abs());
    let out = match mode {
        KernelMode::MinSum => base,
        KernelMode::Exact => base + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p(),
    };
    sat(out)
}

/// Variable-node combination given the partial sum of the upper branch.
pub fn g_combine(a: f64, b: f64, u: Bit) -> f64 {
    let flip = 1.0 - 2.0 * f64::from(u & 1);
    sat(b + flip * a)
}

/// Per-position frozen/information status, with frozen values attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreezeMask {
    values: Vec<Option<Bit>>,
}

impl FreezeMask {
    /// Mask with every layout-frozen position pinned to zero.
    pub fn from_layout(layout: &CodeLayout) -> Self {
        let values = (0..layout.n)
            .map(|i| if layout.is_frozen(i) { Some(0) } else { None })
            .collect();
        FreezeMask { values }
    }

    /// Mask with no frozen positions at all.
    pub fn all_info(n: usize) -> Self {
        FreezeMask {
            values: vec![None; n],
        }
    }

    /// Freezes one position to a known bit value.
    pub fn pin(&mut self, index: usize, bit: Bit) {
        self.values[index] = Some(bit & 1);
    }

    pub fn frozen_value(&self, index: usize) -> Option<Bit> {
        self.values[index]
    }

    pub fn is_frozen(&self, index: usize) -> bool {
        self.values[index].is_some()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of unfrozen positions.
    pub fn info_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Unfrozen positions in ascending order.
    pub fn info_positions(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.values[i].is_none())
            .collect()
    }
}

/// Decisions at the unfrozen positions, in ascending position order.
pub fn info_estimates(u_hat: &[Bit], mask: &FreezeMask) -> Vec<Bit> {
    assert_eq!(u_hat.len(), mask.len());
    mask.info_positions().iter().map(|&i| u_hat[i]).collect()
}

/// LLR and partial-sum storage for one pass over the polar recursion.
/// Layer 0 holds the N channel LLRs; layer `levels` holds the single
/// decision LLR of the current phase.
#[derive(Debug, Clone)]
pub(crate) struct PolarTree {
    n: usize,
    levels: usize,
    llr: Vec<Vec<f64>>,
    csum: Vec<Vec<[Bit; 2]>>,
}

impl PolarTree {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n >= 2 && n.is_power_of_two());
        let levels = n.trailing_zeros() as usize;
        PolarTree {
            n,
            levels,
            llr: (0..=levels).map(|l| vec![0.0; n >> l]).collect(),
            csum: (0..=levels).map(|l| vec![[0, 0]; n >> l]).collect(),
        }
    }

    pub(crate) fn load_channel(&mut self, channel_llrs: &[f64]) {
        assert_eq!(channel_llrs.len(), self.n);
        for (dst, &l) in self.llr[0].iter_mut().zip(channel_llrs) {
            *dst = sat(l);
        }
    }

    /// Refreshes the LLRs needed to decide the given phase.
    pub(crate) fn calc_llr(&mut self, phase: usize, kernel: KernelMode) {
        self.calc_llr_layer(self.levels, phase, kernel);
    }

    fn calc_llr_layer(&mut self, layer: usize, phase: usize, kernel: KernelMode) {
        if layer == 0 {
            return;
        }
        if phase & 1 == 0 {
            self.calc_llr_layer(layer - 1, phase >> 1, kernel);
        }
        for beta in 0..self.n >> layer {
            let a = self.llr[layer - 1][2 * beta];
            let b = self.llr[layer - 1][2 * beta + 1];
            self.llr[layer][beta] = if phase & 1 == 0 {
                f_combine(a, b, kernel)
            } else {
                g_combine(a, b, self.csum[layer][beta][0])
            };
        }
    }

    /// Decision LLR for the phase most recently passed to `calc_llr`.
    pub(crate) fn decision_llr(&self) -> f64 {
        self.llr[self.levels][0]
    }

    /// Records the decided bit and folds finished pairs of phases back
    /// into the partial sums.
    pub(crate) fn commit(&mut self, phase: usize, bit: Bit) {
        self.csum[self.levels][0][phase & 1] = bit & 1;
        if phase & 1 == 1 {
            self.update_c(self.levels, phase);
        }
    }

    fn update_c(&mut self, layer: usize, phase: usize) {
        let branch = phase >> 1;
        for beta in 0..self.n >> layer {
            let c0 = self.csum[layer][beta][0];
            let c1 = self.csum[layer][beta][1];
            self.csum[layer - 1][2 * beta][branch & 1] = c0 ^ c1;
            self.csum[layer - 1][2 * beta + 1][branch & 1] = c1;
        }
        if branch & 1 == 1 {
            self.update_c(layer - 1, branch);
        }
    }
}

/// Successive cancellation decoder with reusable internal buffers.
#[derive(Debug, Clone)]
pub struct ScDecoder {
    kernel: KernelMode,
    tree: PolarTree,
}

impl ScDecoder {
    pub fn new(n: usize, kernel: KernelMode) -> Self {
        ScDecoder {
            kernel,
            tree: PolarTree::new(n),
        }
    }

    pub fn n(&self) -> usize {
        self.tree.n
    }

    /// Decodes one block of channel LLRs into a source estimate.
    pub fn decode(&mut self, channel_llrs: &[f64], mask: &FreezeMask) -> Vec<Bit> {
        self.run(channel_llrs, mask, None).0
    }

    /// Like `decode`, but feeds the true bits back into the partial sums
    /// so every decision sees a correct prefix. Returns the raw per-bit
    /// decisions, which is what bit-channel error counting needs.
    pub fn decode_genie_aided(
        &mut self,
        channel_llrs: &[f64],
        mask: &FreezeMask,
        truth: &[Bit],
    ) -> Vec<Bit> {
        assert_eq!(truth.len(), self.n());
        self.run(channel_llrs, mask, Some(truth)).0
    }

    /// Walks the recursion feeding a fixed source word and returns the
    /// accumulated penalty: the sum of |decision LLR| over every position
    /// where the word contradicts the LLR sign. This is the list-decoder
    /// metric of that word as a single path.
    pub fn feed_metric(&mut self, channel_llrs: &[f64], word: &[Bit]) -> f64 {
        assert_eq!(word.len(), self.n());
        let mask = FreezeMask::all_info(self.n());
        self.run(channel_llrs, &mask, Some(word)).1
    }

    fn run(
        &mut self,
        channel_llrs: &[f64],
        mask: &FreezeMask,
        feed: Option<&[Bit]>,
    ) -> (Vec<Bit>, f64) {
        let n = self.n();
        assert_eq!(mask.len(), n);
        self.tree.load_channel(channel_llrs);
        let mut decisions = vec![0u8; n];
        let mut metric = 0.0;
        for phase in 0..n {
            self.tree.calc_llr(phase, self.kernel);
            let llr = self.tree.decision_llr();
            let d = match mask.frozen_value(phase) {
                Some(bit) => bit,
                None => u8::from(llr < 0.0),
            };
            decisions[phase] = d;
            let fed = feed.map_or(d, |t| t[phase] & 1);
            if fed != u8::from(llr < 0.0) {
                metric += llr.abs();
            }
            self.tree.commit(phase, fed);
        }
        (decisions, metric)
    }
}
