//! Code construction: bit-channel reliability estimates, information set
//! selection, mutual-bit placement, CRC placement, and effective code rates.
//!
//! Reliabilities come from Gaussian-approximation density evolution for
//! BPSK over an AWGN channel at a configurable design SNR. The mutual set
//! is always the least reliable slice of the information set, which is the
//! choice that minimizes the union bound over the remaining positions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which decoder a system runs on its component blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Sc,
    Scl,
    Bp,
}

/// Rate accounting scheme for multi-block chunks.
///
/// `DirectExtension` chains pairwise sharing across m blocks, so each block
/// past the first repeats a full mutual group. `General` shares one mutual
/// group across all m blocks. The two coincide at m = 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    DirectExtension,
    General,
}

/// Static parameters of one polar code block and its chunk grouping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeConfig {
    /// Block length N, a power of two.
    pub n: usize,
    /// Information bits per block, CRC included.
    pub k: usize,
    /// CRC bits per block.
    pub k_crc: usize,
    /// Mutual information bits per block.
    pub k_p: usize,
    /// Blocks per chunk.
    pub m: usize,
    /// List size for list decoding.
    pub list_size: usize,
    /// Design SNR in dB for the reliability computation.
    pub design_snr_db: f64,
    /// Decoder the system runs.
    pub decoder_kind: DecoderKind,
}

impl Default for CodeConfig {
    fn default() -> Self {
        CodeConfig {
            n: 256,
            k: 140,
            k_crc: 12,
            k_p: 24,
            m: 2,
            list_size: 1,
            design_snr_db: 2.0,
            decoder_kind: DecoderKind::Sc,
        }
    }
}

/// Rejected configuration values.
#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("block length {0} is not a power of two of at least 2")]
    BlockLength(usize),
    #[error("information count {k} does not fit block length {n}")]
    InfoCount { k: usize, n: usize },
    #[error("crc width {k_crc} exceeds information count {k}")]
    CrcWidth { k_crc: usize, k: usize },
    #[error("mutual count {k_p} must satisfy 1 <= k_p <= {k_info}")]
    MutualCount { k_p: usize, k_info: usize },
    #[error("blocks per chunk {0} must be at least 2")]
    BlocksPerChunk(usize),
    #[error("list size {0} must be at least 1")]
    ListSize(usize),
    #[error("design SNR {0} dB is not finite")]
    DesignSnr(f64),
}

impl CodeConfig {
    /// Checks every structural invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 2 || !self.n.is_power_of_two() {
            return Err(ConfigError::BlockLength(self.n));
        }
        if self.k == 0 || self.k > self.n {
            return Err(ConfigError::InfoCount {
                k: self.k,
                n: self.n,
            });
        }
        if self.k_crc >= self.k {
            return Err(ConfigError::CrcWidth {
                k_crc: self.k_crc,
                k: self.k,
            });
        }
        let k_info = self.k - self.k_crc;
        if self.k_p == 0 || self.k_p > k_info {
            return Err(ConfigError::MutualCount {
                k_p: self.k_p,
                k_info,
            });
        }
        if self.m < 2 {
            return Err(ConfigError::BlocksPerChunk(self.m));
        }
        if self.list_size == 0 {
            return Err(ConfigError::ListSize(self.list_size));
        }
        if !self.design_snr_db.is_finite() {
            return Err(ConfigError::DesignSnr(self.design_snr_db));
        }
        Ok(())
    }

    /// Number of butterfly levels, log2(N).
    pub fn levels(&self) -> usize {
        self.n.trailing_zeros() as usize
    }

    /// Information bits excluding CRC.
    pub fn k_info(&self) -> usize {
        self.k - self.k_crc
    }

    /// Per-block own (non-mutual, non-CRC) information bits.
    pub fn k_i(&self) -> usize {
        self.k - self.k_crc - self.k_p
    }

    /// Raw code rate K/N.
    pub fn raw_rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// Estimated error probability of each synthetic bit channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityProfile {
    /// Entry i estimates the probability that bit i is decided wrongly
    /// under successive cancellation with correct prior decisions.
    pub per_bit_error_prob: Vec<f64>,
}

const GA_SWITCH: f64 = 10.0;

/// Gaussian-approximation phi function, monotone decreasing on [0, inf).
fn ga_phi(x: f64) -> f64 {
    assert!(x >= 0.0);
    if x == 0.0 {
        1.0
    } else if x < GA_SWITCH {
        (-0.4527 * x.powf(0.86) + 0.0218).exp()
    } else {
        (PI / x).sqrt() * (-x / 4.0).exp() * (1.0 - 10.0 / (7.0 * x))
    }
}

/// Inverse of `ga_phi` by bisection. Deterministic for fixed input.
fn ga_phi_inv(y: f64) -> f64 {
    assert!(y > 0.0 && y <= 1.0);
    if y >= 1.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while ga_phi(hi) > y && hi < 1.0e9 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ga_phi(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mean update for the check-node side of one polarization step.
fn ga_check(mu: f64) -> f64 {
    let p = ga_phi(mu);
    let target = p * (2.0 - p);
    if target <= f64::MIN_POSITIVE {
        // Deep in the tail both arguments are huge; the update costs
        // four factors of two in phi, i.e. 4 ln 2 in the mean.
        (mu - 4.0 * std::f64::consts::LN_2).max(0.0)
    } else {
        ga_phi_inv(target)
    }
}

/// Error probability of a consistent Gaussian LLR with mean mu.
fn ga_error_prob(mu: f64) -> f64 {
    assert!(mu >= 0.0);
    0.5 * libm::erfc(mu.sqrt() / 2.0)
}

/// Estimates all N bit-channel error probabilities by density evolution.
///
/// The channel LLR mean is 2/sigma^2 with sigma^2 = 1 / (2 R 10^(snr/10))
/// and R = K/N, so the design point is an Eb/N0 value at the raw rate.
pub fn compute_reliability(config: &CodeConfig) -> ReliabilityProfile {
    assert!(config.n >= 2 && config.n.is_power_of_two());
    let snr_lin = 10f64.powf(config.design_snr_db / 10.0);
    let sigma_sq = 1.0 / (2.0 * config.raw_rate() * snr_lin);
    let mu0 = 2.0 / sigma_sq;

    let mut means = vec![mu0];
    for _ in 0..config.levels() {
        let mut next = Vec::with_capacity(means.len() * 2);
        for &mu in &means {
            next.push(ga_check(mu));
            next.push(2.0 * mu);
        }
        means = next;
    }

    ReliabilityProfile {
        per_bit_error_prob: means.into_iter().map(ga_error_prob).collect(),
    }
}

/// Index sets defining one block: information, frozen, mutual, and CRC
/// positions, plus cached index-ascending fill orders.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeLayout {
    /// Block length N.
    pub n: usize,
    /// K information positions, least reliable first. After parsing from
    /// text the reliability order is lost and this is index-ascending.
    pub info_set: Vec<usize>,
    /// N - K frozen positions, index-ascending.
    pub frozen_set: Vec<usize>,
    /// K_p mutual positions, the least reliable information positions.
    pub mutual_set: Vec<usize>,
    /// K_crc CRC positions, the most reliable information positions.
    pub crc_positions: Vec<usize>,
    mutual_fill: Vec<usize>,
    payload_fill: Vec<usize>,
    crc_fill: Vec<usize>,
    frozen_mask: Vec<bool>,
}

impl CodeLayout {
    fn from_sets(
        n: usize,
        info_set: Vec<usize>,
        mutual_set: Vec<usize>,
        crc_positions: Vec<usize>,
    ) -> Self {
        let mut frozen_mask = vec![true; n];
        for &i in &info_set {
            assert!(i < n);
            frozen_mask[i] = false;
        }
        let frozen_set: Vec<usize> = (0..n).filter(|&i| frozen_mask[i]).collect();
        assert_eq!(frozen_set.len() + info_set.len(), n);

        let mut mutual_fill = mutual_set.clone();
        mutual_fill.sort_unstable();
        let mut crc_fill = crc_positions.clone();
        crc_fill.sort_unstable();
        let mut payload_fill: Vec<usize> = info_set
            .iter()
            .copied()
            .filter(|i| !mutual_fill.binary_search(i).is_ok() && !crc_fill.binary_search(i).is_ok())
            .collect();
        payload_fill.sort_unstable();

        CodeLayout {
            n,
            info_set,
            frozen_set,
            mutual_set,
            crc_positions,
            mutual_fill,
            payload_fill,
            crc_fill,
            frozen_mask,
        }
    }

    pub fn k(&self) -> usize {
        self.info_set.len()
    }

    pub fn k_p(&self) -> usize {
        self.mutual_set.len()
    }

    pub fn k_crc(&self) -> usize {
        self.crc_positions.len()
    }

    /// Information bits excluding CRC.
    pub fn k_info(&self) -> usize {
        self.k() - self.k_crc()
    }

    /// Own (non-mutual, non-CRC) information bits.
    pub fn k_i(&self) -> usize {
        self.k_info() - self.k_p()
    }

    pub fn levels(&self) -> usize {
        self.n.trailing_zeros() as usize
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen_mask[i]
    }

    /// Mutual positions in ascending index order.
    pub fn mutual_fill(&self) -> &[usize] {
        &self.mutual_fill
    }

    /// Own information positions in ascending index order.
    pub fn payload_fill(&self) -> &[usize] {
        &self.payload_fill
    }

    /// CRC positions in ascending index order.
    pub fn crc_fill(&self) -> &[usize] {
        &self.crc_fill
    }

    /// Serializes the four index sets as plain text, one line per set,
    /// 1-based indices sorted ascending.
    pub fn to_text(&self) -> String {
        let line = |name: &str, set: &[usize]| {
            let mut sorted = set.to_vec();
            sorted.sort_unstable();
            let body: Vec<String> = sorted.iter().map(|i| (i + 1).to_string()).collect();
            if body.is_empty() {
                name.to_string()
            } else {
                format!("{} {}", name, body.join(" "))
            }
        };
        format!(
            "{}\n{}\n{}\n{}\n",
            line("info", &self.info_set),
            line("frozen", &self.frozen_set),
            line("mutual", &self.mutual_set),
            line("crc", &self.crc_positions),
        )
    }

    /// Parses the `to_text` format. The reliability ordering of `info_set`
    /// is not recoverable from text, so the parsed set is index-ascending.
    pub fn from_text(text: &str) -> Result<Self, LayoutTextError> {
        let mut info: Option<Vec<usize>> = None;
        let mut frozen: Option<Vec<usize>> = None;
        let mut mutual: Option<Vec<usize>> = None;
        let mut crc: Option<Vec<usize>> = None;
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let name = parts.next().unwrap();
            let mut indices = Vec::new();
            for tok in parts {
                let one_based: usize = tok
                    .parse()
                    .map_err(|_| LayoutTextError::InvalidIndex(tok.to_string()))?;
                if one_based == 0 {
                    return Err(LayoutTextError::InvalidIndex(tok.to_string()));
                }
                indices.push(one_based - 1);
            }
            match name {
                "info" => info = Some(indices),
                "frozen" => frozen = Some(indices),
                "mutual" => mutual = Some(indices),
                "crc" => crc = Some(indices),
                other => return Err(LayoutTextError::UnknownSet(other.to_string())),
            }
        }
        let info = info.ok_or(LayoutTextError::MissingSet("info"))?;
        let frozen = frozen.ok_or(LayoutTextError::MissingSet("frozen"))?;
        let mutual = mutual.ok_or(LayoutTextError::MissingSet("mutual"))?;
        let crc = crc.ok_or(LayoutTextError::MissingSet("crc"))?;

        let n = info.len() + frozen.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(LayoutTextError::Inconsistent(format!(
                "info and frozen sets cover {} positions, not a power of two",
                n
            )));
        }
        let mut seen = vec![false; n];
        for &i in info.iter().chain(frozen.iter()) {
            if i >= n {
                return Err(LayoutTextError::OutOfRange(i + 1, n));
            }
            if seen[i] {
                return Err(LayoutTextError::Inconsistent(format!(
                    "position {} listed twice",
                    i + 1
                )));
            }
            seen[i] = true;
        }
        let in_info = |set: &[usize]| set.iter().all(|i| info.contains(i));
        if !in_info(&mutual) {
            return Err(LayoutTextError::Inconsistent(
                "mutual positions outside info set".to_string(),
            ));
        }
        if !in_info(&crc) {
            return Err(LayoutTextError::Inconsistent(
                "crc positions outside info set".to_string(),
            ));
        }
        if mutual.iter().any(|i| crc.contains(i)) {
            return Err(LayoutTextError::Inconsistent(
                "mutual and crc positions overlap".to_string(),
            ));
        }
        Ok(CodeLayout::from_sets(n, info, mutual, crc))
    }
}

/// Failures while parsing a layout text file.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayoutTextError {
    #[error("missing `{0}` line")]
    MissingSet(&'static str),
    #[error("unknown set `{0}`")]
    UnknownSet(String),
    #[error("invalid index `{0}`")]
    InvalidIndex(String),
    #[error("index {0} out of range 1..={1}")]
    OutOfRange(usize, usize),
    #[error("{0}")]
    Inconsistent(String),
}

/// Selects information, mutual, and CRC positions from a reliability profile.
///
/// The information set is the K most reliable positions, stored least
/// reliable first. The mutual set is its first K_p entries and the CRC
/// set its last K_crc entries, so the two never overlap. Ties in the
/// profile break toward the lower index.
pub fn build_layout(profile: &ReliabilityProfile, config: &CodeConfig) -> CodeLayout {
    let n = config.n;
    assert_eq!(profile.per_bit_error_prob.len(), n);
    assert!(config.k <= n);
    assert!(config.k_crc + config.k_p <= config.k);

    let p = &profile.per_bit_error_prob;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));

    let info_set: Vec<usize> = order[n - config.k..].to_vec();
    let mutual_set = info_set[..config.k_p].to_vec();
    let crc_positions = info_set[config.k - config.k_crc..].to_vec();
    CodeLayout::from_sets(n, info_set, mutual_set, crc_positions)
}

/// Sum of per-bit error probabilities over the information set, skipping
/// any positions in `excluded`.
pub fn union_bound(layout: &CodeLayout, profile: &ReliabilityProfile, excluded: &[usize]) -> f64 {
    layout
        .info_set
        .iter()
        .copied()
        .filter(|i| !excluded.contains(i))
        .map(|i| profile.per_bit_error_prob[i])
        .sum()
}

/// Payload bits per transmitted channel bit once CRC and mutual overhead
/// are removed.
pub fn effective_rate(config: &CodeConfig, scheme: Scheme) -> f64 {
    let n = config.n as f64;
    let m = config.m as f64;
    let r = config.k as f64 / n;
    let crc_loss = config.k_crc as f64 / n;
    match scheme {
        Scheme::DirectExtension => r - crc_loss - (m - 1.0) / m * config.k_p as f64 / n,
        Scheme::General => r - crc_loss - config.k_p as f64 / (m * n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n: usize, k: usize, k_crc: usize, k_p: usize) -> CodeConfig {
        CodeConfig {
            n,
            k,
            k_crc,
            k_p,
            ..CodeConfig::default()
        }
    }

    #[test]
    fn validate_rejects_bad_fields() {
        assert!(CodeConfig::default().validate().is_ok());
        assert_eq!(
            config(3, 2, 0, 1).validate(),
            Err(ConfigError::BlockLength(3))
        );
        assert_eq!(
            config(4, 5, 0, 1).validate(),
            Err(ConfigError::InfoCount { k: 5, n: 4 })
        );
        assert_eq!(
            config(4, 2, 2, 1).validate(),
            Err(ConfigError::CrcWidth { k_crc: 2, k: 2 })
        );
        assert_eq!(
            config(4, 3, 1, 0).validate(),
            Err(ConfigError::MutualCount { k_p: 0, k_info: 2 })
        );
        assert_eq!(
            config(4, 3, 1, 3).validate(),
            Err(ConfigError::MutualCount { k_p: 3, k_info: 2 })
        );
        let mut c = config(4, 3, 1, 1);
        c.m = 1;
        assert_eq!(c.validate(), Err(ConfigError::BlocksPerChunk(1)));
        c.m = 2;
        c.list_size = 0;
        assert_eq!(c.validate(), Err(ConfigError::ListSize(0)));
    }

    #[test]
    fn high_design_snr_makes_both_n2_channels_clean() {
        let mut c = config(2, 1, 0, 1);
        c.design_snr_db = 40.0;
        let profile = compute_reliability(&c);
        assert!(profile.per_bit_error_prob.iter().all(|&p| p < 1e-9));
    }

    #[test]
    fn n2_minus_channel_is_degraded() {
        for snr in [-2.0, 0.0, 2.0, 5.0] {
            let mut c = config(2, 1, 0, 1);
            c.design_snr_db = snr;
            let p = compute_reliability(&c).per_bit_error_prob;
            assert!(p[0] >= p[1], "snr {}: {:?}", snr, p);
            assert!(p.iter().all(|&x| (0.0..=1.0).contains(&x) && x.is_finite()));
        }
    }

    #[test]
    fn reliability_is_deterministic() {
        let c = CodeConfig::default();
        assert_eq!(compute_reliability(&c), compute_reliability(&c));
        let l1 = build_layout(&compute_reliability(&c), &c);
        let l2 = build_layout(&compute_reliability(&c), &c);
        assert_eq!(l1, l2);
    }

    #[test]
    fn layout_from_explicit_profile() {
        let profile = ReliabilityProfile {
            per_bit_error_prob: vec![0.4, 0.3, 0.2, 0.1],
        };
        let mut c = config(4, 2, 0, 1);
        c.k_crc = 0;
        let layout = build_layout(&profile, &c);
        assert_eq!(layout.info_set, vec![2, 3]);
        assert_eq!(layout.mutual_set, vec![2]);
        assert_eq!(layout.frozen_set, vec![0, 1]);
        assert!(layout.crc_positions.is_empty());
        assert_eq!(layout.payload_fill(), &[3]);
    }

    #[test]
    fn all_non_crc_positions_can_be_mutual() {
        let c = config(16, 8, 2, 6);
        let layout = build_layout(&compute_reliability(&c), &c);
        assert_eq!(layout.k_i(), 0);
        let mut expect: Vec<usize> = layout.info_set[..6].to_vec();
        expect.sort_unstable();
        assert_eq!(layout.mutual_fill(), expect.as_slice());
        assert!(layout.payload_fill().is_empty());
    }

    #[test]
    fn reliability_ties_break_toward_lower_index() {
        let profile = ReliabilityProfile {
            per_bit_error_prob: vec![0.5, 0.5, 0.5, 0.5],
        };
        let mut c = config(4, 2, 0, 1);
        c.k_crc = 0;
        let layout = build_layout(&profile, &c);
        // Ordered worst-first by index, the info set keeps the last two.
        assert_eq!(layout.info_set, vec![2, 3]);
        assert_eq!(layout.mutual_set, vec![2]);
    }

    #[test]
    fn mutual_set_minimizes_remaining_union_bound() {
        let c = config(16, 8, 0, 2);
        let profile = compute_reliability(&c);
        let layout = build_layout(&profile, &c);
        let chosen = union_bound(&layout, &profile, &layout.mutual_set);
        for a in 0..8 {
            for b in (a + 1)..8 {
                let alt = [layout.info_set[a], layout.info_set[b]];
                let bound = union_bound(&layout, &profile, &alt);
                assert!(chosen <= bound + 1e-15);
            }
        }
    }

    #[test]
    fn crc_sits_on_most_reliable_positions() {
        let c = CodeConfig::default();
        let profile = compute_reliability(&c);
        let layout = build_layout(&profile, &c);
        assert_eq!(layout.k(), 140);
        assert_eq!(layout.k_p(), 24);
        assert_eq!(layout.k_crc(), 12);
        assert_eq!(layout.k_i(), 104);
        let p = &profile.per_bit_error_prob;
        let worst_crc: f64 = layout
            .crc_positions
            .iter()
            .map(|&i| p[i])
            .fold(0.0, f64::max);
        let best_mutual: f64 = layout.mutual_set.iter().map(|&i| p[i]).fold(1.0, f64::min);
        assert!(worst_crc <= best_mutual);
        assert!(layout
            .mutual_set
            .iter()
            .all(|i| !layout.crc_positions.contains(i)));
    }

    #[test]
    fn effective_rates_match_published_operating_points() {
        let c = CodeConfig::default();
        let r2 = effective_rate(&c, Scheme::General);
        assert!((r2 - 0.453125).abs() < 1e-12);
        assert!((effective_rate(&c, Scheme::DirectExtension) - r2).abs() < 1e-12);

        let c3 = CodeConfig {
            m: 3,
            ..CodeConfig::default()
        };
        assert!((effective_rate(&c3, Scheme::General) - 0.46875).abs() < 1e-12);
    }

    #[test]
    fn general_rate_dominates_direct_extension() {
        for m in 2..=6 {
            let c = CodeConfig {
                m,
                ..CodeConfig::default()
            };
            let general = effective_rate(&c, Scheme::General);
            let direct = effective_rate(&c, Scheme::DirectExtension);
            if m == 2 {
                assert!((general - direct).abs() < 1e-15);
            } else {
                assert!(general > direct);
            }
        }
    }

    #[test]
    fn rate_with_no_overhead_is_k_over_n() {
        let mut c = config(256, 128, 0, 1);
        c.k_p = 0;
        assert!((effective_rate(&c, Scheme::General) - 0.5).abs() < 1e-15);
        assert!((effective_rate(&c, Scheme::DirectExtension) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn layout_text_round_trips() {
        let c = CodeConfig::default();
        let layout = build_layout(&compute_reliability(&c), &c);
        let text = layout.to_text();
        let parsed = CodeLayout::from_text(&text).unwrap();
        assert_eq!(parsed.to_text(), text);
        assert_eq!(parsed.n, layout.n);
        assert_eq!(parsed.mutual_fill(), layout.mutual_fill());
        assert_eq!(parsed.payload_fill(), layout.payload_fill());
        assert_eq!(parsed.crc_fill(), layout.crc_fill());
        let mut info_sorted = layout.info_set.clone();
        info_sorted.sort_unstable();
        assert_eq!(parsed.info_set, info_sorted);
    }

    #[test]
    fn layout_text_is_one_based() {
        let profile = ReliabilityProfile {
            per_bit_error_prob: vec![0.4, 0.3, 0.2, 0.1],
        };
        let mut c = config(4, 2, 0, 1);
        c.k_crc = 0;
        let layout = build_layout(&profile, &c);
        assert_eq!(layout.to_text(), "info 3 4\nfrozen 1 2\nmutual 3\ncrc\n");
    }

    #[test]
    fn layout_text_rejects_inconsistent_sets() {
        assert!(matches!(
            CodeLayout::from_text("info 1 2\nmutual 1\ncrc\n"),
            Err(LayoutTextError::MissingSet("frozen"))
        ));
        assert!(matches!(
            CodeLayout::from_text("info 1 2\nfrozen 2 3 4\nmutual 1\ncrc\n"),
            Err(LayoutTextError::Inconsistent(_))
        ));
        assert!(matches!(
            CodeLayout::from_text("info 1 2\nfrozen 3 4\nmutual 3\ncrc\n"),
            Err(LayoutTextError::Inconsistent(_))
        ));
        assert!(matches!(
            CodeLayout::from_text("info 1 x\nfrozen 3 4\nmutual 1\ncrc\n"),
            Err(LayoutTextError::InvalidIndex(_))
        ));
    }
}
