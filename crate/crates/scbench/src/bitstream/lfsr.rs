//! Fibonacci linear-feedback shift registers.

use crate::error::{Result, ScError};

/// Maximal-length feedback polynomials for widths 2..=16.
///
/// The mask has bit `i - 1` set for each `x^i` term of the polynomial
/// (the implicit `+ 1` term is not stored). All entries yield period
/// `2^width - 1`.
const MAXIMAL_TAPS: [u32; 15] = [
    0b11,                // 2: x^2 + x + 1
    0b110,               // 3: x^3 + x^2 + 1
    0b1100,              // 4: x^4 + x^3 + 1
    0b10100,             // 5: x^5 + x^3 + 1
    0b110000,            // 6: x^6 + x^5 + 1
    0b1100000,           // 7: x^7 + x^6 + 1
    0b10111000,          // 8: x^8 + x^6 + x^5 + x^4 + 1
    0b100010000,         // 9: x^9 + x^5 + 1
    0b1001000000,        // 10: x^10 + x^7 + 1
    0b10100000000,       // 11: x^11 + x^9 + 1
    0b100000101001,      // 12: x^12 + x^6 + x^4 + x + 1
    0b1000000001101,     // 13: x^13 + x^4 + x^3 + x + 1
    0b10000000010101,    // 14: x^14 + x^5 + x^3 + x + 1
    0b110000000000000,   // 15: x^15 + x^14 + 1
    0b1101000000001000,  // 16: x^16 + x^15 + x^13 + x^4 + 1
];

/// A linear-feedback shift register over `width` bits.
///
/// With a maximal-length polynomial the state sequence has period
/// `2^width - 1` and visits every non-zero state exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lfsr {
    width: u32,
    taps: u32,
    state: u32,
}

impl Lfsr {
    /// Construct with an explicit feedback polynomial mask.
    pub fn with_taps(width: u32, taps: u32, seed: u32) -> Result<Self> {
        if !(2..=16).contains(&width) {
            return Err(ScError::UnsupportedLfsrWidth(width));
        }
        let mask = (1u32 << width) - 1;
        let state = seed & mask;
        if state == 0 {
            return Err(ScError::ZeroLfsrState);
        }
        Ok(Lfsr {
            width,
            taps: taps & mask,
            state,
        })
    }

    /// Construct with the standard maximal-length polynomial for `width`.
    pub fn maximal(width: u32, seed: u32) -> Result<Self> {
        if !(2..=16).contains(&width) {
            return Err(ScError::UnsupportedLfsrWidth(width));
        }
        Self::with_taps(width, MAXIMAL_TAPS[(width - 2) as usize], seed)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn state(&self) -> u32 {
        self.state
    }

    /// Emit the current state as the next pseudo-random word, then advance.
    pub fn next_word(&mut self) -> u32 {
        let word = self.state;
        let feedback = (self.state & self.taps).count_ones() & 1;
        let mask = (1u32 << self.width) - 1;
        self.state = ((self.state << 1) | feedback) & mask;
        word
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn width3_visits_all_nonzero_states_with_period_7() {
        // Taps given explicitly: x^3 + x^2 + 1.
        for seed in 1u32..8 {
            let mut lfsr = Lfsr::with_taps(3, 0b110, seed).unwrap();
            let words: Vec<u32> = (0..7).map(|_| lfsr.next_word()).collect();
            let set: BTreeSet<u32> = words.iter().copied().collect();
            assert_eq!(set, (1..8).collect::<BTreeSet<u32>>());
            assert_eq!(lfsr.state(), seed, "period must be exactly 7");
        }
    }

    #[test]
    fn identical_seeds_reproduce_identical_sequences() {
        let mut a = Lfsr::maximal(11, 0x2f5).unwrap();
        let mut b = Lfsr::maximal(11, 0x2f5).unwrap();
        for _ in 0..2048 {
            assert_eq!(a.next_word(), b.next_word());
        }
    }

    #[test]
    fn width8_default_taps_have_period_255() {
        let mut lfsr = Lfsr::maximal(8, 1).unwrap();
        let first = lfsr.state();
        let mut period = 0u32;
        loop {
            lfsr.next_word();
            period += 1;
            if lfsr.state() == first {
                break;
            }
            assert!(period < 300, "period exceeded 2^8");
        }
        assert_eq!(period, 255);
    }

    #[test]
    fn every_supported_width_is_maximal() {
        for width in 2..=16u32 {
            let mut lfsr = Lfsr::maximal(width, 1).unwrap();
            let first = lfsr.state();
            let full = (1u64 << width) - 1;
            let mut period = 0u64;
            loop {
                lfsr.next_word();
                period += 1;
                if lfsr.state() == first || period > full {
                    break;
                }
            }
            assert_eq!(period, full, "width {width} not maximal");
        }
    }

    #[test]
    fn zero_seed_rejected() {
        assert!(Lfsr::maximal(8, 0).is_err());
        assert!(Lfsr::with_taps(4, 0b1100, 16).is_err(), "seed masked to zero");
    }
}
