//! Belief propagation decoding on the polar factor graph. Messages flood
//! right (source to channel) then left once per iteration, the source-side
//! priors encode frozen and pinned bits, and a CRC pass ends the loop
//! early. The check kernel is either exact or scaled min-sum.

use crate::codec::{bit_reversal_permutation, extract_message_with_crc, Bit};
use crate::construction::CodeLayout;
use crate::crc::{crc_check, CrcSpec};
use crate::sc::{f_combine, sat, FreezeMask, KernelMode, LLR_SAT};

/// Default iteration cap.
pub const DEFAULT_BP_ITERS: usize = 60;

/// Default scale applied to min-sum check messages.
pub const DEFAULT_MIN_SUM_SCALE: f64 = 0.9375;

/// Result of one belief propagation decode.
#[derive(Debug, Clone)]
pub struct BpOutcome {
    pub u_hat: Vec<Bit>,
    pub crc_pass: bool,
    /// Completed iterations, counting the one that passed the CRC.
    pub iterations: usize,
}

/// Iterative decoder bound to one code layout.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    layout: CodeLayout,
    crc: Option<CrcSpec>,
    max_iters: usize,
    kernel: KernelMode,
    min_sum_scale: f64,
    perm: Vec<usize>,
    left: Vec<Vec<f64>>,
    right: Vec<Vec<f64>>,
}

impl BpDecoder {
    pub fn new(
        layout: CodeLayout,
        crc: Option<CrcSpec>,
        max_iters: usize,
        kernel: KernelMode,
    ) -> Self {
        assert!(max_iters >= 1);
        if let Some(spec) = &crc {
            assert_eq!(layout.k_crc(), spec.width);
        }
        let n = layout.n;
        let levels = layout.levels();
        BpDecoder {
            perm: bit_reversal_permutation(levels),
            left: vec![vec![0.0; n]; levels + 1],
            right: vec![vec![0.0; n]; levels + 1],
            layout,
            crc,
            max_iters,
            kernel,
            min_sum_scale: DEFAULT_MIN_SUM_SCALE,
        }
    }

    pub fn with_min_sum_scale(mut self, scale: f64) -> Self {
        assert!(scale > 0.0 && scale <= 1.0);
        self.min_sum_scale = scale;
        self
    }

    fn check(&self, a: f64, b: f64) -> f64 {
        match self.kernel {
            KernelMode::Exact => f_combine(a, b, KernelMode::Exact),
            KernelMode::MinSum => sat(self.min_sum_scale * f_combine(a, b, KernelMode::MinSum)),
        }
    }

    /// Decodes one block of channel LLRs.
    pub fn decode(&mut self, channel_llrs: &[f64], mask: &FreezeMask) -> BpOutcome {
        let n = self.layout.n;
        let levels = self.layout.levels();
        assert_eq!(channel_llrs.len(), n);
        assert_eq!(mask.len(), n);

        for plane in self.left.iter_mut().chain(self.right.iter_mut()) {
            plane.fill(0.0);
        }
        for (cell, &llr) in self.left[levels].iter_mut().zip(channel_llrs) {
            *cell = sat(llr);
        }
        // The graph works on the bit-reversed source order, so the prior
        // for graph position j belongs to source position perm[j].
        for j in 0..n {
            self.right[0][j] = match mask.frozen_value(self.perm[j]) {
                Some(0) => LLR_SAT,
                Some(_) => -LLR_SAT,
                None => 0.0,
            };
        }

        let mut u_hat = vec![0u8; n];
        let mut crc_pass = false;
        let mut iterations = self.max_iters;
        for iter in 1..=self.max_iters {
            for s in 0..levels {
                let h = 1usize << s;
                let mut base = 0;
                while base < n {
                    for a in base..base + h {
                        let b = a + h;
                        let ra = self.right[s][a];
                        let rb = self.right[s][b];
                        let la = self.left[s + 1][a];
                        let lb = self.left[s + 1][b];
                        self.right[s + 1][a] = self.check(ra, sat(lb + rb));
                        self.right[s + 1][b] = sat(self.check(ra, la) + rb);
                    }
                    base += 2 * h;
                }
            }
            for s in (0..levels).rev() {
                let h = 1usize << s;
                let mut base = 0;
                while base < n {
                    for a in base..base + h {
                        let b = a + h;
                        let ra = self.right[s][a];
                        let rb = self.right[s][b];
                        let la = self.left[s + 1][a];
                        let lb = self.left[s + 1][b];
                        self.left[s][a] = self.check(la, sat(lb + rb));
                        self.left[s][b] = sat(self.check(la, ra) + lb);
                    }
                    base += 2 * h;
                }
            }

            for j in 0..n {
                let total = self.left[0][j] + self.right[0][j];
                u_hat[self.perm[j]] = u8::from(total < 0.0);
            }
            for (i, slot) in u_hat.iter_mut().enumerate() {
                if let Some(bit) = mask.frozen_value(i) {
                    *slot = bit;
                }
            }

            if let Some(spec) = &self.crc {
                let message = extract_message_with_crc(&u_hat, &self.layout);
                if crc_check(&message, spec).expect("message longer than checksum") {
                    crc_pass = true;
                    iterations = iter;
                    break;
                }
            }
        }

        BpOutcome {
            u_hat,
            crc_pass,
            iterations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{assemble_source_word, polar_encode};
    use crate::construction::{build_layout, compute_reliability, CodeConfig};
    use crate::crc::CrcSpec;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn default_layout() -> CodeLayout {
        let config = CodeConfig::default();
        build_layout(&compute_reliability(&config), &config)
    }

    fn random_word(layout: &CodeLayout, rng: &mut ChaCha8Rng) -> (Vec<u8>, Vec<u8>) {
        let info: Vec<u8> = (0..layout.k_info())
            .map(|_| rng.random_range(0..2u8))
            .collect();
        let word = assemble_source_word(&info, layout, &CrcSpec::CRC12).unwrap();
        let x = polar_encode(&word).x;
        (word.u, x)
    }

    #[test]
    fn noiseless_blocks_stop_after_one_iteration() {
        let layout = default_layout();
        let mask = FreezeMask::from_layout(&layout);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for kernel in [KernelMode::Exact, KernelMode::MinSum] {
            let mut dec = BpDecoder::new(layout.clone(), Some(CrcSpec::CRC12), 60, kernel);
            for _ in 0..10 {
                let (u, x) = random_word(&layout, &mut rng);
                let llrs: Vec<f64> = x
                    .iter()
                    .map(|&b| 20.0 * (1.0 - 2.0 * f64::from(b)))
                    .collect();
                let out = dec.decode(&llrs, &mask);
                assert_eq!(out.u_hat, u);
                assert!(out.crc_pass);
                assert_eq!(out.iterations, 1);
            }
        }
    }

    #[test]
    fn fully_pinned_word_is_reproduced() {
        let layout = default_layout();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let (u, _) = random_word(&layout, &mut rng);
        let mut mask = FreezeMask::all_info(layout.n);
        for (i, &b) in u.iter().enumerate() {
            mask.pin(i, b);
        }
        let llrs: Vec<f64> = (0..layout.n)
            .map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                3.0 * z
            })
            .collect();
        let mut dec = BpDecoder::new(layout.clone(), Some(CrcSpec::CRC12), 60, KernelMode::MinSum);
        let out = dec.decode(&llrs, &mask);
        assert_eq!(out.u_hat, u);
        assert!(out.crc_pass);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn early_stop_is_consistent_with_the_checksum() {
        let layout = default_layout();
        let mask = FreezeMask::from_layout(&layout);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut dec = BpDecoder::new(layout.clone(), Some(CrcSpec::CRC12), 60, KernelMode::MinSum);
        let sigma = 0.75;
        let mut early = 0;
        for _ in 0..50 {
            let (_, x) = random_word(&layout, &mut rng);
            let llrs: Vec<f64> = x
                .iter()
                .map(|&b| {
                    let z: f64 = rng.sample(StandardNormal);
                    let y = 1.0 - 2.0 * f64::from(b) + sigma * z;
                    2.0 * y / (sigma * sigma)
                })
                .collect();
            let out = dec.decode(&llrs, &mask);
            let message = extract_message_with_crc(&out.u_hat, &layout);
            assert_eq!(out.crc_pass, crc_check(&message, &CrcSpec::CRC12).unwrap());
            if out.iterations < 60 {
                assert!(out.crc_pass);
                early += 1;
            }
        }
        assert!(early > 0, "expected some early stops at this noise level");
    }

    #[test]
    fn codeword_sign_symmetry_holds() {
        let layout = default_layout();
        let mask = FreezeMask::from_layout(&layout);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for kernel in [KernelMode::Exact, KernelMode::MinSum] {
            let mut dec = BpDecoder::new(layout.clone(), Some(CrcSpec::CRC12), 8, kernel);
            for _ in 0..5 {
                let (w, xw) = random_word(&layout, &mut rng);
                let llrs: Vec<f64> = (0..layout.n)
                    .map(|_| {
                        let z: f64 = rng.sample(StandardNormal);
                        2.5 * z
                    })
                    .collect();
                let twisted: Vec<f64> = llrs
                    .iter()
                    .zip(&xw)
                    .map(|(&l, &c)| l * (1.0 - 2.0 * f64::from(c)))
                    .collect();
                let base = dec.decode(&llrs, &mask);
                let shifted = dec.decode(&twisted, &mask);
                let expected: Vec<u8> = base.u_hat.iter().zip(&w).map(|(a, b)| a ^ b).collect();
                assert_eq!(shifted.u_hat, expected);
                assert_eq!(shifted.iterations, base.iterations);
            }
        }
    }

    #[test]
    fn repeated_decodes_are_deterministic() {
        let layout = default_layout();
        let mask = FreezeMask::from_layout(&layout);
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let llrs: Vec<f64> = (0..layout.n)
            .map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                2.0 * z
            })
            .collect();
        let mut dec = BpDecoder::new(layout.clone(), Some(CrcSpec::CRC12), 30, KernelMode::MinSum);
        let a = dec.decode(&llrs, &mask);
        let b = dec.decode(&llrs, &mask);
        assert_eq!(a.u_hat, b.u_hat);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn all_frozen_block_decodes_to_zeros() {
        let layout = default_layout();
        let mut mask = FreezeMask::all_info(layout.n);
        for i in 0..layout.n {
            mask.pin(i, 0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let llrs: Vec<f64> = (0..layout.n)
            .map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                4.0 * z
            })
            .collect();
        let mut dec = BpDecoder::new(layout.clone(), None, 20, KernelMode::MinSum);
        let out = dec.decode(&llrs, &mask);
        assert_eq!(out.u_hat, vec![0u8; layout.n]);
    }

    #[test]
    fn negated_channel_is_a_twist_by_the_all_ones_codeword() {
        // Negating every channel LLR complements the received word. The
        // all-ones word is the codeword of the single source bit N-1, so
        // exactly that decision flips and every other output is unchanged.
        let layout = default_layout();
        let mask = FreezeMask::from_layout(&layout);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let llrs: Vec<f64> = (0..layout.n)
            .map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                2.0 * z
            })
            .collect();
        let negated: Vec<f64> = llrs.iter().map(|&l| -l).collect();
        for kernel in [KernelMode::Exact, KernelMode::MinSum] {
            let mut dec = BpDecoder::new(layout.clone(), None, 12, kernel);
            let base = dec.decode(&llrs, &mask);
            let flipped = dec.decode(&negated, &mask);
            for i in 0..layout.n {
                let expect = base.u_hat[i] ^ u8::from(i == layout.n - 1);
                assert_eq!(flipped.u_hat[i], expect);
            }
        }
    }

    #[test]
    fn pinned_information_bit_is_honored() {
        let layout = default_layout();
        let mut mask = FreezeMask::from_layout(&layout);
        let pinned = layout.mutual_set[0];
        mask.pin(pinned, 1);
        let llrs = vec![20.0; layout.n];
        let mut dec = BpDecoder::new(layout.clone(), Some(CrcSpec::CRC12), 10, KernelMode::Exact);
        let out = dec.decode(&llrs, &mask);
        assert_eq!(out.u_hat[pinned], 1);
    }
}
