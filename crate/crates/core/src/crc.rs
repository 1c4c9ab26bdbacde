//! Cyclic redundancy checks over GF(2).
//!
//! Bits are processed most-significant-first with a zero-initialised register,
//! no input or output reflection and no final XOR. The checksum of a message
//! m(x) is the remainder of m(x)·x^w divided by the generator polynomial,
//! emitted most-significant coefficient first.

use thiserror::Error;

use crate::codec::Bit;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrcError {
    #[error("CRC input must not be empty")]
    EmptyMessage,
    #[error("checked sequence must be longer than the {width}-bit checksum, got {len} bits")]
    MessageTooShort { width: usize, len: usize },
}

/// A CRC generator polynomial of degree `width`.
///
/// `poly` holds the coefficients below the leading x^width term, most
/// significant first, so the full generator is x^width + poly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrcSpec {
    pub width: usize,
    pub poly: u64,
}

impl CrcSpec {
    /// Degree-12 generator x^12 + x^11 + x^10 + x^9 + x^8 + x^4 + x + 1 used
    /// by the default code family.
    pub const CRC12: CrcSpec = CrcSpec {
        width: 12,
        poly: 0xF13,
    };

    fn mask(&self) -> u64 {
        (1u64 << self.width) - 1
    }
}

/// Computes the checksum of `message`, most significant bit first.
pub fn crc_compute(message: &[Bit], spec: &CrcSpec) -> Result<Vec<Bit>, CrcError> {
    if message.is_empty() {
        return Err(CrcError::EmptyMessage);
    }
    let mask = spec.mask();
    let mut rem = 0u64;
    let augmented = message
        .iter()
        .copied()
        .chain(std::iter::repeat_n(0, spec.width));
    for bit in augmented {
        debug_assert!(bit <= 1);
        let msb = (rem >> (spec.width - 1)) & 1;
        rem = ((rem << 1) | u64::from(bit)) & mask;
        if msb == 1 {
            rem ^= spec.poly;
        }
    }
    Ok((0..spec.width)
        .rev()
        .map(|i| ((rem >> i) & 1) as Bit)
        .collect())
}

/// Appends the checksum of `message` to it.
pub fn crc_append(message: &[Bit], spec: &CrcSpec) -> Result<Vec<Bit>, CrcError> {
    let mut out = message.to_vec();
    out.extend(crc_compute(message, spec)?);
    Ok(out)
}

/// Checks a message with its checksum appended; `true` means consistent.
pub fn crc_check(message_with_crc: &[Bit], spec: &CrcSpec) -> Result<bool, CrcError> {
    if message_with_crc.len() <= spec.width {
        return Err(CrcError::MessageTooShort {
            width: spec.width,
            len: message_with_crc.len(),
        });
    }
    let split = message_with_crc.len() - spec.width;
    let expected = crc_compute(&message_with_crc[..split], spec)?;
    Ok(expected == message_with_crc[split..])
}
