//! Deterministic counter-based stochastic multiply-accumulate.
//!
//! The key trick: a unipolar stochastic product only depends on how many
//! ones of one operand's stream fall inside the other operand's unary
//! window, so the pseudo-random SNG can be replaced by a down counter plus
//! a deterministic bit selector. The selector emits bit `N-1-tz(c)` of the
//! operand at cycle `c` (`tz` = trailing zeros), which spreads each bit
//! with low discrepancy: bit `x_{N-i}` appears exactly `2^(N-i)` times per
//! `2^N`-cycle period.

use crate::error::{Result, ScError};
use crate::numeric::FixedPoint;

/// One selector table entry: which operand bit drives the stream this
/// cycle, or the forced zero that pads the period to exactly `2^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    /// Index into the operand's magnitude bits, 0 = least significant.
    Bit(u32),
    /// The constant-zero cycle at the end of the period.
    ForcedZero,
}

/// The deterministic bit-selector FSM, realized as a precomputed table the
/// way the hardware stores it in constant memory. One table is shared by
/// all processing elements of a unit.
#[derive(Debug, Clone)]
pub struct SelectorFsm {
    exponent: u32,
    table: Vec<Selector>,
}

impl SelectorFsm {
    pub fn new(exponent: u32) -> Result<Self> {
        if exponent == 0 || exponent > 16 {
            return Err(ScError::InvalidArgument(format!(
                "selector exponent must be in 1..=16, got {exponent}"
            )));
        }
        Ok(SelectorFsm {
            exponent,
            table: selector_sequence(exponent),
        })
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn table(&self) -> &[Selector] {
        &self.table
    }

    /// The stream bit of an N-bit magnitude at 1-based cycle `c`.
    pub fn stream_bit(&self, magnitude: u32, cycle: u32) -> bool {
        match self.table[(cycle - 1) as usize] {
            Selector::Bit(i) => magnitude >> i & 1 == 1,
            Selector::ForcedZero => false,
        }
    }
}

/// The deterministic selector table for exponent `n`: entry for cycle `c`
/// (1-based) is bit `n - 1 - tz(c)` for `c < 2^n`, and the forced zero at
/// `c = 2^n`.
pub fn selector_sequence(n: u32) -> Vec<Selector> {
    let period = 1u32 << n;
    (1..=period)
        .map(|c| {
            let tz = c.trailing_zeros();
            if tz >= n {
                Selector::ForcedZero
            } else {
                Selector::Bit(n - 1 - tz)
            }
        })
        .collect()
}

/// Number of ones among the first `prefix` cycles of the deterministic
/// stream of an N-bit magnitude. Closed form of the selector table: bit k
/// is selected at cycles congruent to `2^(n-1-k)` modulo `2^(n-k)`.
pub fn deterministic_prefix_ones(magnitude: u32, n: u32, prefix: u32) -> u32 {
    debug_assert!(prefix <= 1 << n);
    debug_assert!(magnitude < 1 << n);
    (0..n)
        .filter(|&k| magnitude >> k & 1 == 1)
        .map(|k| {
            let half = 1u32 << (n - 1 - k);
            (prefix + half) >> (n - k)
        })
        .sum()
}

/// Which operand drives the down counter (and therefore the cycle count).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum MacImpl {
    /// The weight runs the counter; each PE streams the shared input.
    /// A unit must wait for its largest weight each iteration.
    WeightCounted,
    /// The shared input runs the counter; each PE streams its own weight.
    /// Iteration time equals the input's magnitude.
    InputCounted,
}

/// A processing element's MAC state: down counter for the counted operand,
/// signed up/down accumulator, and the streamed operand's magnitude bits.
/// One owner at a time; a processing unit steps all its units in lockstep.
#[derive(Debug, Clone)]
pub struct BiscMacUnit {
    down_counter: u32,
    cycle: u32,
    streamed_magnitude: u32,
    sign: i64,
    acc: i64,
}

impl BiscMacUnit {
    /// Load operands for one iteration. `counted` drives the down counter;
    /// `streamed` feeds the selector MUX.
    pub fn load(counted: u32, streamed: u32, sign: i64, acc_in: i64) -> Self {
        BiscMacUnit {
            down_counter: counted,
            cycle: 0,
            streamed_magnitude: streamed,
            sign,
            acc: acc_in,
        }
    }

    pub fn done(&self) -> bool {
        self.down_counter == 0
    }

    pub fn acc(&self) -> i64 {
        self.acc
    }

    pub fn cycles_run(&self) -> u32 {
        self.cycle
    }

    /// Advance one clock cycle: the accumulator moves by the selected
    /// stream bit, steered by the product sign.
    pub fn step(&mut self, fsm: &SelectorFsm) {
        if self.done() {
            return;
        }
        self.cycle += 1;
        self.down_counter -= 1;
        if fsm.stream_bit(self.streamed_magnitude, self.cycle) {
            self.acc += self.sign;
        }
    }
}

fn split_sign_magnitude(v: FixedPoint, n: u32) -> (i64, u32) {
    let raw = i64::from(v.raw());
    let max_mag = (1u32 << n) - 1;
    // The selector addresses n bits, so the single raw value at -2^n
    // clamps to the largest expressible magnitude.
    let mag = (raw.unsigned_abs() as u32).min(max_mag);
    (raw.signum(), mag)
}

/// One multiply-accumulate through the deterministic SC datapath.
///
/// Returns the updated accumulator and the cycle count the iteration took.
/// The accumulator moves in units of `2^-N` of the unipolar product, so
/// `(acc_out - acc_in) / 2^N` tracks `x * w` within the deterministic
/// stream's truncation error. Operands use sign-magnitude around the
/// unsigned core: the product sign steers the up/down direction.
pub fn bisc_mac(
    x: FixedPoint,
    w: FixedPoint,
    implementation: MacImpl,
    acc_in: i64,
) -> Result<(i64, u32)> {
    let n = x.int_bits() + x.frac_bits();
    if w.int_bits() + w.frac_bits() != n {
        return Err(ScError::ShapeMismatch(format!(
            "operand widths differ: {} vs {}",
            n,
            w.int_bits() + w.frac_bits()
        )));
    }
    let fsm = SelectorFsm::new(n)?;
    Ok(bisc_mac_with_fsm(x, w, implementation, acc_in, &fsm))
}

/// [`bisc_mac`] against a caller-provided selector table (the table is
/// shared across all PEs of a unit).
pub fn bisc_mac_with_fsm(
    x: FixedPoint,
    w: FixedPoint,
    implementation: MacImpl,
    acc_in: i64,
    fsm: &SelectorFsm,
) -> (i64, u32) {
    let n = fsm.exponent();
    let (sx, mx) = split_sign_magnitude(x, n);
    let (sw, mw) = split_sign_magnitude(w, n);
    let (counted, streamed) = match implementation {
        MacImpl::InputCounted => (mx, mw),
        MacImpl::WeightCounted => (mw, mx),
    };
    let delta = i64::from(deterministic_prefix_ones(streamed, n, counted));
    (acc_in + sx * sw * delta, counted)
}

/// Per-iteration cycle count of a processing unit: the maximum weight
/// magnitude when weights run the counters, or the shared input's magnitude
/// when the input does.
pub fn pu_iteration_cycles(values: &[FixedPoint], implementation: MacImpl) -> u32 {
    match implementation {
        MacImpl::WeightCounted => values
            .iter()
            .map(|v| v.raw().unsigned_abs())
            .max()
            .unwrap_or(0),
        MacImpl::InputCounted => values
            .first()
            .map(|v| v.raw().unsigned_abs())
            .unwrap_or(0),
    }
}
