//! Source-word assembly and the polar transform. Encoding applies the
//! bit-reversal permutation followed by an in-place butterfly, which is the
//! O(N log N) equivalent of multiplying by the dense transform matrix.

use thiserror::Error;

use crate::construction::CodeLayout;
use crate::crc::{crc_compute, CrcError, CrcSpec};

/// A single bit stored in the low position of a byte.
pub type Bit = u8;

/// Length-N vector of source bits placed according to a layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceWord {
    pub u: Vec<Bit>,
}

/// Length-N vector of channel bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub x: Vec<Bit>,
}

/// Failures while assembling a source word.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("expected {expected} information bits, got {got}")]
    InfoLength { expected: usize, got: usize },
    #[error(transparent)]
    Crc(#[from] CrcError),
}

/// Permutation sending index i to the value of i's reversed bit string.
///
/// `levels` is the string width, so the permutation covers 0..2^levels.
/// The permutation is an involution.
pub fn bit_reversal_permutation(levels: usize) -> Vec<usize> {
    assert!(levels >= 1);
    let shift = usize::BITS as usize - levels;
    (0..1usize << levels)
        .map(|i| i.reverse_bits() >> shift)
        .collect()
}

/// Runs the butterfly stages in place and returns the number of XOR
/// operations performed.
fn butterfly_in_place(x: &mut [Bit]) -> usize {
    let n = x.len();
    let mut ops = 0;
    let mut h = 1;
    while h < n {
        let mut base = 0;
        while base < n {
            for j in base..base + h {
                x[j] ^= x[j + h];
                ops += 1;
            }
            base += 2 * h;
        }
        h *= 2;
    }
    ops
}

/// Applies the full polar transform to a bit vector of power-of-two length.
pub fn polar_transform(u: &[Bit]) -> Vec<Bit> {
    let n = u.len();
    assert!(n >= 2 && n.is_power_of_two());
    let perm = bit_reversal_permutation(n.trailing_zeros() as usize);
    let mut x: Vec<Bit> = perm.iter().map(|&j| u[j] & 1).collect();
    butterfly_in_place(&mut x);
    x
}

/// Encodes a source word into a codeword.
pub fn polar_encode(source: &SourceWord) -> Codeword {
    Codeword {
        x: polar_transform(&source.u),
    }
}

/// Places an information stream into a source word.
///
/// The stream carries the mutual bits first and the block's own bits after
/// them. The CRC is computed over the stream and everything lands on its
/// layout positions in ascending index order; frozen positions stay zero.
pub fn assemble_source_word(
    info_bits: &[Bit],
    layout: &CodeLayout,
    spec: &CrcSpec,
) -> Result<SourceWord, CodecError> {
    if info_bits.len() != layout.k_info() {
        return Err(CodecError::InfoLength {
            expected: layout.k_info(),
            got: info_bits.len(),
        });
    }
    let mut u = vec![0u8; layout.n];
    let k_p = layout.k_p();
    for (&pos, &bit) in layout.mutual_fill().iter().zip(&info_bits[..k_p]) {
        u[pos] = bit & 1;
    }
    for (&pos, &bit) in layout.payload_fill().iter().zip(&info_bits[k_p..]) {
        u[pos] = bit & 1;
    }
    if layout.k_crc() > 0 {
        assert_eq!(layout.k_crc(), spec.width);
        let crc = crc_compute(info_bits, spec)?;
        for (&pos, &bit) in layout.crc_fill().iter().zip(&crc) {
            u[pos] = bit & 1;
        }
    }
    Ok(SourceWord { u })
}

/// Reads the information stream (mutual bits first) back out of a source
/// word or a decoder's source estimate.
pub fn extract_info_stream(u: &[Bit], layout: &CodeLayout) -> Vec<Bit> {
    let mut out = Vec::with_capacity(layout.k_info());
    out.extend(layout.mutual_fill().iter().map(|&i| u[i] & 1));
    out.extend(layout.payload_fill().iter().map(|&i| u[i] & 1));
    out
}

/// Reads the information stream followed by the CRC bits, ready for a
/// checksum verification.
pub fn extract_message_with_crc(u: &[Bit], layout: &CodeLayout) -> Vec<Bit> {
    let mut out = extract_info_stream(u, layout);
    out.extend(layout.crc_fill().iter().map(|&i| u[i] & 1));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_layout, compute_reliability, CodeConfig, ReliabilityProfile};
    use crate::crc::{crc_check, CrcSpec};
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn kron(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
        let (ra, rb) = (a.len(), b.len());
        let (ca, cb) = (a[0].len(), b[0].len());
        let mut out = vec![vec![0u8; ca * cb]; ra * rb];
        for i1 in 0..ra {
            for i2 in 0..rb {
                for j1 in 0..ca {
                    for j2 in 0..cb {
                        out[i1 * rb + i2][j1 * cb + j2] = a[i1][j1] & b[i2][j2];
                    }
                }
            }
        }
        out
    }

    /// Dense transform matrix: bit-reversal rows of the n-fold Kronecker
    /// power of the 2x2 lower-triangular kernel.
    fn dense_generator(levels: usize) -> Vec<Vec<u8>> {
        let f = vec![vec![1u8, 0], vec![1u8, 1]];
        let mut fk = f.clone();
        for _ in 1..levels {
            fk = kron(&f, &fk);
        }
        let perm = bit_reversal_permutation(levels);
        perm.into_iter().map(|i| fk[i].clone()).collect()
    }

    fn dense_encode(u: &[u8], g: &[Vec<u8>]) -> Vec<u8> {
        let n = u.len();
        (0..n)
            .map(|j| (0..n).fold(0u8, |acc, i| acc ^ (u[i] & g[i][j])))
            .collect()
    }

    #[test]
    fn reversal_examples() {
        assert_eq!(bit_reversal_permutation(1), vec![0, 1]);
        assert_eq!(bit_reversal_permutation(3), vec![0, 4, 2, 6, 1, 5, 3, 7]);
    }

    #[test]
    fn reversal_is_an_involution() {
        for levels in 1..=10 {
            let perm = bit_reversal_permutation(levels);
            for (i, &p) in perm.iter().enumerate() {
                assert_eq!(perm[p], i);
            }
        }
    }

    #[test]
    fn two_bit_kernel_by_hand() {
        assert_eq!(polar_transform(&[0, 0]), vec![0, 0]);
        assert_eq!(polar_transform(&[0, 1]), vec![1, 1]);
        assert_eq!(polar_transform(&[1, 0]), vec![1, 0]);
        assert_eq!(polar_transform(&[1, 1]), vec![0, 1]);
    }

    #[test]
    fn matches_dense_matrix_exhaustively_to_n8() {
        for levels in 1..=3 {
            let n = 1usize << levels;
            let g = dense_generator(levels);
            for word in 0..1u32 << n {
                let u: Vec<u8> = (0..n).map(|i| ((word >> i) & 1) as u8).collect();
                assert_eq!(polar_transform(&u), dense_encode(&u, &g));
            }
        }
    }

    #[test]
    fn matches_dense_matrix_sampled_n16_n32() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for levels in [4usize, 5] {
            let n = 1usize << levels;
            let g = dense_generator(levels);
            let trials = if levels == 4 { 50 } else { 20 };
            for _ in 0..trials {
                let u: Vec<u8> = (0..n).map(|_| rng.random_range(0..2u8)).collect();
                assert_eq!(polar_transform(&u), dense_encode(&u, &g));
            }
        }
    }

    #[test]
    fn butterfly_op_count_is_half_n_log_n() {
        for levels in 1..=8 {
            let n = 1usize << levels;
            let mut x = vec![0u8; n];
            assert_eq!(butterfly_in_place(&mut x), n / 2 * levels);
        }
    }

    proptest! {
        #[test]
        fn transform_is_linear(
            u in proptest::collection::vec(0u8..2, 16),
            v in proptest::collection::vec(0u8..2, 16),
        ) {
            let sum: Vec<u8> = u.iter().zip(&v).map(|(a, b)| a ^ b).collect();
            let xor: Vec<u8> = polar_transform(&u)
                .iter()
                .zip(polar_transform(&v))
                .map(|(a, b)| a ^ b)
                .collect();
            prop_assert_eq!(polar_transform(&sum), xor);
        }
    }

    #[test]
    fn assembly_round_trips_and_checks() {
        let config = CodeConfig::default();
        let layout = build_layout(&compute_reliability(&config), &config);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let info: Vec<u8> = (0..layout.k_info())
                .map(|_| rng.random_range(0..2u8))
                .collect();
            let word = assemble_source_word(&info, &layout, &CrcSpec::CRC12).unwrap();
            for &i in &layout.frozen_set {
                assert_eq!(word.u[i], 0);
            }
            assert_eq!(extract_info_stream(&word.u, &layout), info);
            let message = extract_message_with_crc(&word.u, &layout);
            assert_eq!(message.len(), layout.k());
            assert!(crc_check(&message, &CrcSpec::CRC12).unwrap());
        }
    }

    #[test]
    fn zero_info_gives_zero_word() {
        let config = CodeConfig::default();
        let layout = build_layout(&compute_reliability(&config), &config);
        let word =
            assemble_source_word(&vec![0; layout.k_info()], &layout, &CrcSpec::CRC12).unwrap();
        assert!(word.u.iter().all(|&b| b == 0));
        assert!(polar_encode(&word).x.iter().all(|&b| b == 0));
    }

    #[test]
    fn fully_mutual_stream_lands_on_mutual_set() {
        let profile = ReliabilityProfile {
            per_bit_error_prob: vec![0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1],
        };
        let config = CodeConfig {
            n: 8,
            k: 3,
            k_crc: 0,
            k_p: 3,
            ..CodeConfig::default()
        };
        let layout = build_layout(&profile, &config);
        let word = assemble_source_word(&[1, 1, 1], &layout, &CrcSpec::CRC12).unwrap();
        for i in 0..8 {
            let expected = u8::from(layout.mutual_set.contains(&i));
            assert_eq!(word.u[i], expected);
        }
    }

    #[test]
    fn wrong_stream_length_is_rejected() {
        let config = CodeConfig::default();
        let layout = build_layout(&compute_reliability(&config), &config);
        assert_eq!(
            assemble_source_word(&[0, 1], &layout, &CrcSpec::CRC12),
            Err(CodecError::InfoLength {
                expected: 128,
                got: 2
            })
        );
    }
}
