//! Packed stochastic bit streams and binary/probabilistic conversion.

use super::source::RandomSource;
use crate::error::{Result, ScError};
use crate::numeric::FixedPoint;

/// Interpretation of a stream's ones-density `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum StreamFormat {
    /// value = p, range [0, 1]
    Unipolar,
    /// value = 2p - 1, range [-1, 1]
    Bipolar,
}

impl StreamFormat {
    pub fn name(self) -> &'static str {
        match self {
            StreamFormat::Unipolar => "unipolar",
            StreamFormat::Bipolar => "bipolar",
        }
    }
}

/// Largest supported stream length.
pub const MAX_STREAM_LEN: usize = 1 << 16;

/// An immutable stochastic number: an ordered bit sequence plus format tag.
///
/// Bits are packed little-endian into `u64` words; unused high bits of the
/// last word are always zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochasticStream {
    words: Vec<u64>,
    len: usize,
    format: StreamFormat,
}

impl StochasticStream {
    /// Build from a bit-producing closure.
    pub fn from_fn(
        len: usize,
        format: StreamFormat,
        mut bit: impl FnMut(usize) -> bool,
    ) -> Result<Self> {
        check_len(len)?;
        let mut words = vec![0u64; len.div_ceil(64)];
        for t in 0..len {
            if bit(t) {
                words[t / 64] |= 1u64 << (t % 64);
            }
        }
        Ok(StochasticStream { words, len, format })
    }

    /// Build from explicit bits.
    pub fn from_bits(bits: &[bool], format: StreamFormat) -> Result<Self> {
        Self::from_fn(bits.len(), format, |t| bits[t])
    }

    /// Constant all-ones stream (unipolar 1.0, bipolar +1.0).
    pub fn all_ones(len: usize, format: StreamFormat) -> Result<Self> {
        Self::from_fn(len, format, |_| true)
    }

    /// Constant all-zeros stream (unipolar 0.0, bipolar -1.0).
    pub fn all_zeros(len: usize, format: StreamFormat) -> Result<Self> {
        check_len(len)?;
        Ok(StochasticStream {
            words: vec![0u64; len.div_ceil(64)],
            len,
            format,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn format(&self) -> StreamFormat {
        self.format
    }

    pub fn bit(&self, t: usize) -> bool {
        debug_assert!(t < self.len);
        self.words[t / 64] >> (t % 64) & 1 == 1
    }

    pub fn popcount(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// The value carried by the stream.
    pub fn decode(&self) -> f64 {
        let p = f64::from(self.popcount()) / self.len as f64;
        match self.format {
            StreamFormat::Unipolar => p,
            StreamFormat::Bipolar => 2.0 * p - 1.0,
        }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Apply a word-wise binary operation; output keeps `format`.
    pub(crate) fn zip_words(
        &self,
        other: &StochasticStream,
        format: StreamFormat,
        op: impl Fn(u64, u64) -> u64,
    ) -> StochasticStream {
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        let mut out = StochasticStream {
            words,
            len: self.len,
            format,
        };
        out.mask_tail();
        out
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Render as a 0/1 string, earliest bit first.
    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|t| if self.bit(t) { '1' } else { '0' })
            .collect()
    }
}

pub(crate) fn check_len(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() || len > MAX_STREAM_LEN {
        return Err(ScError::InvalidStreamLength(len));
    }
    Ok(())
}

pub(crate) fn check_pair(a: &StochasticStream, b: &StochasticStream) -> Result<()> {
    if a.len() != b.len() {
        return Err(ScError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.format() != b.format() {
        return Err(ScError::FormatMismatch {
            expected: a.format().name(),
            got: b.format().name(),
        });
    }
    Ok(())
}

/// Comparator threshold for a value: the number of pseudo-random words in
/// `0..2^n` that must fall below it so the stream decodes back to `value`.
///
/// Unipolar: `value * 2^n`; bipolar: `(value + 1) * 2^(n-1)` — the latter
/// maps [-1, 1) onto the comparator range [0, 2^n).
pub fn comparator_threshold(value: f64, format: StreamFormat, exponent: u32) -> f64 {
    match format {
        StreamFormat::Unipolar => value * f64::from(1u32 << exponent),
        StreamFormat::Bipolar => (value + 1.0) * f64::from(1u32 << (exponent - 1)),
    }
}

/// Build a stream of length `2^exponent` whose bit at cycle `t` is
/// `word_t < threshold`. Thresholds may span the full inclusive comparator
/// range `[0, 2^exponent]`; `2^exponent` yields the all-ones stream.
pub(crate) fn encode_with_threshold(
    threshold: u32,
    format: StreamFormat,
    exponent: u32,
    src: &RandomSource,
) -> Result<StochasticStream> {
    let len = 1usize << exponent;
    check_len(len)?;
    let mut words = src.words(exponent)?;
    StochasticStream::from_fn(len, format, |_| words.next_word() < threshold)
}

/// Stochastic number generation: compare a pseudo-random word against the
/// value's comparator threshold each cycle.
///
/// With a [`super::SourceKind::FullPeriodPermutation`] source the popcount of
/// the result equals the threshold exactly, making encode/decode lossless for
/// representable values. Out-of-range values are an error; callers must
/// pre-scale (the ESL layer handles magnitudes at or above one).
pub fn sng_encode(
    value: f64,
    format: StreamFormat,
    exponent: u32,
    src: &RandomSource,
) -> Result<StochasticStream> {
    let threshold = comparator_threshold(value, format, exponent).round();
    let max = f64::from((1u32 << exponent) - 1);
    if !(0.0..=max).contains(&threshold) {
        return Err(ScError::ValueOutOfRange {
            what: match format {
                StreamFormat::Unipolar => "unipolar sng input",
                StreamFormat::Bipolar => "bipolar sng input",
            },
            value,
        });
    }
    encode_with_threshold(threshold as u32, format, exponent, src)
}

/// [`sng_encode`] for fixed-point inputs.
pub fn sng_encode_fixed(
    value: FixedPoint,
    format: StreamFormat,
    exponent: u32,
    src: &RandomSource,
) -> Result<StochasticStream> {
    sng_encode(value.to_real(), format, exponent, src)
}
