//! Saturating fixed-point numbers.
//!
//! [`FixedPoint`] is the binary interface shared by every accelerator model:
//! a two's-complement raw integer interpreted as `raw / 2^frac_bits`, with a
//! sign bit, `int_bits` integer bits and `frac_bits` fraction bits. The
//! default network format is (2, 6) — nine bits total.

use crate::error::{Result, ScError};

/// A fixed-point value with per-value format tags.
///
/// The representable range is `[-2^int_bits, 2^int_bits - 2^-frac_bits]`.
/// Raw storage is two's complement, so comparing raw values of
/// equally-formatted numbers compares the values themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedPoint {
    raw: i32,
    int_bits: u32,
    frac_bits: u32,
}

impl FixedPoint {
    /// Largest supported `int_bits + frac_bits`; keeps raw math inside `i32`.
    pub const MAX_MAGNITUDE_BITS: u32 = 24;

    /// Quantize a real value: round to nearest (ties away from zero),
    /// saturating at the representable bounds.
    pub fn quantize(value: f64, int_bits: u32, frac_bits: u32) -> Self {
        assert!(
            int_bits + frac_bits <= Self::MAX_MAGNITUDE_BITS,
            "fixed-point format ({int_bits},{frac_bits}) too wide"
        );
        let scaled = value * f64::from(1u32 << frac_bits);
        // f64::round ties away from zero.
        let rounded = scaled.round();
        let min = min_raw(int_bits, frac_bits) as f64;
        let max = max_raw(int_bits, frac_bits) as f64;
        let raw = if rounded.is_nan() {
            0
        } else {
            rounded.clamp(min, max) as i32
        };
        FixedPoint {
            raw,
            int_bits,
            frac_bits,
        }
    }

    /// Build from a raw register value, saturating into range.
    pub fn from_raw_saturating(raw: i64, int_bits: u32, frac_bits: u32) -> Self {
        let raw = raw.clamp(
            i64::from(min_raw(int_bits, frac_bits)),
            i64::from(max_raw(int_bits, frac_bits)),
        ) as i32;
        FixedPoint {
            raw,
            int_bits,
            frac_bits,
        }
    }

    /// Build from a raw register value; errors when out of range.
    pub fn from_raw(raw: i32, int_bits: u32, frac_bits: u32) -> Result<Self> {
        if raw < min_raw(int_bits, frac_bits) || raw > max_raw(int_bits, frac_bits) {
            return Err(ScError::ValueOutOfRange {
                what: "fixed-point raw",
                value: f64::from(raw),
            });
        }
        Ok(FixedPoint {
            raw,
            int_bits,
            frac_bits,
        })
    }

    /// Exact real value of this number.
    pub fn to_real(self) -> f64 {
        f64::from(self.raw) / f64::from(1u32 << self.frac_bits)
    }

    pub fn raw(self) -> i32 {
        self.raw
    }

    pub fn int_bits(self) -> u32 {
        self.int_bits
    }

    pub fn frac_bits(self) -> u32 {
        self.frac_bits
    }

    /// Total register width: sign + integer + fraction bits.
    pub fn total_bits(self) -> u32 {
        1 + self.int_bits + self.frac_bits
    }

    /// Smallest representable value in this format.
    pub fn min_value(int_bits: u32, frac_bits: u32) -> f64 {
        f64::from(min_raw(int_bits, frac_bits)) / f64::from(1u32 << frac_bits)
    }

    /// Largest representable value in this format.
    pub fn max_value(int_bits: u32, frac_bits: u32) -> f64 {
        f64::from(max_raw(int_bits, frac_bits)) / f64::from(1u32 << frac_bits)
    }

    /// Re-quantize into another format (exact when the target is finer and
    /// the value is in range).
    pub fn convert(self, int_bits: u32, frac_bits: u32) -> Self {
        if frac_bits >= self.frac_bits {
            let raw = i64::from(self.raw) << (frac_bits - self.frac_bits);
            Self::from_raw_saturating(raw, int_bits, frac_bits)
        } else {
            Self::quantize(self.to_real(), int_bits, frac_bits)
        }
    }
}

fn min_raw(int_bits: u32, frac_bits: u32) -> i32 {
    -(1i32 << (int_bits + frac_bits))
}

fn max_raw(int_bits: u32, frac_bits: u32) -> i32 {
    (1i32 << (int_bits + frac_bits)) - 1
}
