//! Extended stochastic logic: values carried as the ratio of two bipolar
//! streams.
//!
//! An [`EslNumber`] holds streams X and Y and represents `decode(X) /
//! decode(Y)`, which extends the representable interval beyond the bipolar
//! [-1, 1]. Multiplication maps to two XNOR gates; addition maps to a MUX
//! numerator with a rescaled denominator; conversion back to binary is a
//! bit-serial guessing loop.

use crate::bitstream::{
    encode_with_threshold, mux_add, sc_mul, RandomSource, SourceKind, StochasticStream,
    StreamFormat,
};
use crate::error::{Result, ScError};
use crate::numeric::FixedPoint;

/// Seed tags for the internal streams of compound operations. Every
/// constant, select, and estimator stream derives a fresh child seed so no
/// stream is ever XNOR-ed with itself through a product chain.
mod tag {
    pub const X: u64 = 1;
    pub const Y: u64 = 2;
    pub const SELECT: u64 = 3;
    pub const HALF: u64 = 4;
    pub const ZERO: u64 = 5;
    pub const INV_F: u64 = 6;
    pub const GUESS: u64 = 7;
    pub const NODE_STRIDE: u64 = 64;
}

/// A value encoded as the ratio of two equal-length bipolar streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EslNumber {
    x: StochasticStream,
    y: StochasticStream,
}

impl EslNumber {
    pub fn new(x: StochasticStream, y: StochasticStream) -> Result<Self> {
        if x.len() != y.len() {
            return Err(ScError::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        for s in [&x, &y] {
            if s.format() != StreamFormat::Bipolar {
                return Err(ScError::FormatMismatch {
                    expected: "bipolar",
                    got: s.format().name(),
                });
            }
        }
        Ok(EslNumber { x, y })
    }

    pub fn x(&self) -> &StochasticStream {
        &self.x
    }

    pub fn y(&self) -> &StochasticStream {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    fn exponent(&self) -> u32 {
        self.len().trailing_zeros()
    }
}

/// Bipolar comparator threshold clamped to the inclusive range `[0, 2^n]`;
/// `2^n` yields the all-ones (+1.0) stream.
fn bipolar_threshold_inclusive(value: f64, exponent: u32) -> u32 {
    let max = f64::from(1u32 << exponent);
    let thr = ((value + 1.0) * f64::from(1u32 << (exponent - 1))).round();
    thr.clamp(0.0, max) as u32
}

/// A bipolar stream of a constant value, generated from a full-period
/// source so its ones-density is exact.
fn const_bipolar(value: f64, exponent: u32, src: &RandomSource) -> Result<StochasticStream> {
    let seeded = RandomSource::new(SourceKind::FullPeriodPermutation, src.seed);
    encode_with_threshold(
        bipolar_threshold_inclusive(value, exponent),
        StreamFormat::Bipolar,
        exponent,
        &seeded,
    )
}

/// Encode a real value as an ESL number.
///
/// Magnitudes below one go into X with Y pinned at +1; magnitudes at or
/// above one pin X at the maximal-magnitude bipolar value (all-ones or
/// all-zeros) and put the reciprocal into Y. Values whose reciprocal would
/// quantize to a zero denominator are rejected.
pub fn esl_encode(value: f64, exponent: u32, src: &RandomSource) -> Result<EslNumber> {
    let len = 1usize << exponent;
    let x_src = src.derive(tag::X);
    let y_src = src.derive(tag::Y);
    if value.abs() < 1.0 {
        let thr = bipolar_threshold_inclusive(value, exponent);
        let x = encode_with_threshold(thr, StreamFormat::Bipolar, exponent, &x_src)?;
        let y = StochasticStream::all_ones(len, StreamFormat::Bipolar)?;
        EslNumber::new(x, y)
    } else {
        let x = if value > 0.0 {
            StochasticStream::all_ones(len, StreamFormat::Bipolar)?
        } else {
            StochasticStream::all_zeros(len, StreamFormat::Bipolar)?
        };
        let thr = bipolar_threshold_inclusive(1.0 / value.abs(), exponent);
        if thr == 1u32 << (exponent - 1) {
            // Reciprocal rounded to a zero denominator.
            return Err(ScError::ValueOutOfRange {
                what: "esl input magnitude",
                value,
            });
        }
        let y = encode_with_threshold(thr, StreamFormat::Bipolar, exponent, &y_src)?;
        EslNumber::new(x, y)
    }
}

/// The oracle value of an ESL number: ratio of the decoded streams.
pub fn esl_decode_ideal(e: &EslNumber) -> Result<f64> {
    let y = e.y.decode();
    if y == 0.0 {
        return Err(ScError::ZeroDenominator);
    }
    Ok(e.x.decode() / y)
}

/// Bit-serial stream-to-binary conversion.
///
/// Maintains a binary guess `P` (initially zero). Each cycle an SNG driven
/// by the current guess emits a bit `p`, the estimate `m = p XNOR y` is
/// compared with the cycle's `x` bit, and `P` moves by the current step —
/// up on `m < x`, down on `m > x`. The step starts at half the representable
/// range and halves whenever the adjustment direction reverses, with a floor
/// of one raw unit. The guess lives in the bipolar interval, so the result
/// format is `(0, out_frac_bits)`; ratios beyond that interval saturate.
pub fn esl_to_binary(e: &EslNumber, out_frac_bits: u32, src: &RandomSource) -> Result<FixedPoint> {
    let n = e.exponent();
    let scale = 1i32 << out_frac_bits;
    let min_raw = -scale;
    let max_raw = scale - 1;

    let mut guess: i32 = 0;
    let mut step: i32 = scale;
    let mut last_dir: i32 = 0;
    let mut words = src.derive(tag::GUESS).words(n)?;

    for t in 0..e.len() {
        let value = f64::from(guess) / f64::from(scale);
        let thr = bipolar_threshold_inclusive(value, n);
        let p = words.next_word() < thr;
        let m = !(p ^ e.y.bit(t));
        let x = e.x.bit(t);
        let dir = match (m, x) {
            (false, true) => 1,
            (true, false) => -1,
            _ => 0,
        };
        if dir != 0 {
            if last_dir != 0 && dir != last_dir {
                step = (step / 2).max(1);
            }
            guess = (guess + dir * step).clamp(min_raw, max_raw);
            last_dir = dir;
        }
    }
    FixedPoint::from_raw(guess, 0, out_frac_bits)
}

/// ESL multiplication: XNOR the numerators, XNOR the denominators.
pub fn esl_mul(a: &EslNumber, b: &EslNumber) -> Result<EslNumber> {
    EslNumber::new(sc_mul(&a.x, &b.x)?, sc_mul(&a.y, &b.y)?)
}

/// How the factor-of-two MUX scaling of the two-input adder is pushed into
/// the denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Add2Variant {
    /// Denominator = XNOR of a constant one-half stream with both input
    /// denominators.
    HalfConst,
    /// Denominator = MUX of the denominator product with a constant zero
    /// stream, scaling both sides by one half.
    MuxZero,
}

/// Two-input ESL addition: `a/b + p/q = (aq + pb) / (bq)` with the MUX
/// scale factor recovered in the denominator.
pub fn esl_add2(
    a: &EslNumber,
    b: &EslNumber,
    variant: Add2Variant,
    src: &RandomSource,
) -> Result<EslNumber> {
    if a.len() != b.len() {
        return Err(ScError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.exponent();
    let num = mux_add(
        &[sc_mul(&a.x, &b.y)?, sc_mul(&b.x, &a.y)?],
        &src.derive(tag::SELECT),
    )?;
    let den_product = sc_mul(&a.y, &b.y)?;
    let den = match variant {
        Add2Variant::HalfConst => {
            let half = const_bipolar(0.5, n, &src.derive(tag::HALF))?;
            sc_mul(&half, &den_product)?
        }
        Add2Variant::MuxZero => {
            let zero = const_bipolar(0.0, n, &src.derive(tag::ZERO))?;
            mux_add(&[den_product, zero], &src.derive(tag::SELECT + 1))?
        }
    };
    EslNumber::new(num, den)
}

/// Reduction strategy for summing an array of ESL terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ArrayAddStrategy {
    /// Balanced binary reduction with the two-input adder.
    Tree,
    /// Left fold with the two-input adder, the layout a weight-stationary
    /// PE chain produces naturally.
    Sequential,
    /// Single f-input MUX over `X_i * prod_{j != i} Y_j`, denominator
    /// `prod Y_j` rescaled by a constant 1/f stream.
    Flat,
}

impl ArrayAddStrategy {
    pub const ALL: [ArrayAddStrategy; 3] = [
        ArrayAddStrategy::Tree,
        ArrayAddStrategy::Sequential,
        ArrayAddStrategy::Flat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ArrayAddStrategy::Tree => "tree",
            ArrayAddStrategy::Sequential => "sequential",
            ArrayAddStrategy::Flat => "flat",
        }
    }
}

/// Sum an array of ESL numbers with the chosen strategy. Internal streams
/// of every reduction node derive distinct child seeds from `src`.
pub fn esl_array_add(
    terms: &[EslNumber],
    strategy: ArrayAddStrategy,
    src: &RandomSource,
) -> Result<EslNumber> {
    if terms.len() < 2 {
        return Err(ScError::InvalidArgument(format!(
            "array addition needs at least 2 terms, got {}",
            terms.len()
        )));
    }
    for pair in terms.windows(2) {
        if pair[0].len() != pair[1].len() {
            return Err(ScError::LengthMismatch {
                left: pair[0].len(),
                right: pair[1].len(),
            });
        }
    }
    match strategy {
        ArrayAddStrategy::Tree => {
            let mut node = 0u64;
            reduce_tree(terms, src, &mut node)
        }
        ArrayAddStrategy::Sequential => {
            let mut acc = terms[0].clone();
            for (i, term) in terms.iter().enumerate().skip(1) {
                acc = esl_add2(
                    &acc,
                    term,
                    Add2Variant::HalfConst,
                    &src.derive(i as u64 * tag::NODE_STRIDE),
                )?;
            }
            Ok(acc)
        }
        ArrayAddStrategy::Flat => flat_add(terms, src),
    }
}

fn reduce_tree(terms: &[EslNumber], src: &RandomSource, node: &mut u64) -> Result<EslNumber> {
    if terms.len() == 1 {
        return Ok(terms[0].clone());
    }
    let mid = terms.len().div_ceil(2);
    let left = reduce_tree(&terms[..mid], src, node)?;
    let right = reduce_tree(&terms[mid..], src, node)?;
    *node += 1;
    esl_add2(
        &left,
        &right,
        Add2Variant::HalfConst,
        &src.derive(*node * tag::NODE_STRIDE),
    )
}

fn flat_add(terms: &[EslNumber], src: &RandomSource) -> Result<EslNumber> {
    let f = terms.len();
    let n = terms[0].exponent();
    let len = terms[0].len();

    // Prefix/suffix XNOR products of the denominators; prefix[i] is the
    // product of Y_0..Y_{i-1}.
    let ones = StochasticStream::all_ones(len, StreamFormat::Bipolar)?;
    let mut prefix = Vec::with_capacity(f + 1);
    prefix.push(ones.clone());
    for term in terms {
        let last = prefix.last().unwrap();
        prefix.push(sc_mul(last, term.y())?);
    }
    let mut suffix = vec![ones; f + 1];
    for i in (0..f).rev() {
        suffix[i] = sc_mul(&suffix[i + 1], terms[i].y())?;
    }

    let arms: Vec<StochasticStream> = terms
        .iter()
        .enumerate()
        .map(|(i, term)| sc_mul(&sc_mul(term.x(), &prefix[i])?, &suffix[i + 1]))
        .collect::<Result<_>>()?;
    let num = mux_add(&arms, &src.derive(tag::SELECT))?;

    // The f-input MUX scales the numerator by 1/f; restore it by scaling
    // the denominator with a constant 1/f stream.
    let inv_f = const_bipolar(1.0 / f as f64, n, &src.derive(tag::INV_F))?;
    let den = sc_mul(&inv_f, &prefix[f])?;
    EslNumber::new(num, den)
}
