//! Primitive stochastic-computing arithmetic gates.

use super::source::RandomSource;
use super::stream::{check_pair, StochasticStream, StreamFormat};
use crate::error::{Result, ScError};

/// Stochastic multiplication: bitwise AND in unipolar, XNOR in bipolar.
///
/// Exact in expectation for independent streams; feeding a stream to both
/// inputs produces the well-known correlation artifact (`x ⊙ x = 1`).
pub fn sc_mul(a: &StochasticStream, b: &StochasticStream) -> Result<StochasticStream> {
    check_pair(a, b)?;
    let out = match a.format() {
        StreamFormat::Unipolar => a.zip_words(b, StreamFormat::Unipolar, |x, y| x & y),
        StreamFormat::Bipolar => a.zip_words(b, StreamFormat::Bipolar, |x, y| !(x ^ y)),
    };
    Ok(out)
}

/// Multiplication when one bipolar operand uses the inverted encoding:
/// a plain XOR. Both streams must be bipolar.
pub fn sc_mul_inverted(a: &StochasticStream, b: &StochasticStream) -> Result<StochasticStream> {
    check_pair(a, b)?;
    if a.format() != StreamFormat::Bipolar {
        return Err(ScError::FormatMismatch {
            expected: "bipolar",
            got: a.format().name(),
        });
    }
    Ok(a.zip_words(b, StreamFormat::Bipolar, |x, y| x ^ y))
}

/// Scaled MUX adder: each output bit is the bit of one uniformly selected
/// input, so the decoded output is the mean of the inputs — the sum scaled
/// down by the fan-in `f`.
pub fn mux_add(inputs: &[StochasticStream], select: &RandomSource) -> Result<StochasticStream> {
    if inputs.len() < 2 {
        return Err(ScError::InvalidArgument(format!(
            "mux_add needs at least 2 inputs, got {}",
            inputs.len()
        )));
    }
    for other in &inputs[1..] {
        check_pair(&inputs[0], other)?;
    }
    let f = inputs.len() as u32;
    // A wide select register keeps the modulo bias negligible for any fan-in.
    let mut sel = select.words(16)?;
    StochasticStream::from_fn(inputs[0].len(), inputs[0].format(), |t| {
        let pick = (sel.next_word() % f) as usize;
        inputs[pick].bit(t)
    })
}

/// OR-gate adder for unipolar streams. For independent inputs the output
/// decodes to `x + y - xy`; usable as an adder only when the product term is
/// negligible.
pub fn or_add(a: &StochasticStream, b: &StochasticStream) -> Result<StochasticStream> {
    check_pair(a, b)?;
    if a.format() != StreamFormat::Unipolar {
        return Err(ScError::FormatMismatch {
            expected: "unipolar",
            got: a.format().name(),
        });
    }
    Ok(a.zip_words(b, StreamFormat::Unipolar, |x, y| x | y))
}

/// Accumulative parallel counter: per cycle, the number of ones across all
/// inputs. The output is already binary; summing it over time gives the sum
/// of the input popcounts exactly.
pub fn apc_add(inputs: &[StochasticStream]) -> Result<Vec<u32>> {
    let Some(first) = inputs.first() else {
        return Ok(Vec::new());
    };
    for other in &inputs[1..] {
        if other.len() != first.len() {
            return Err(ScError::LengthMismatch {
                left: first.len(),
                right: other.len(),
            });
        }
    }
    Ok((0..first.len())
        .map(|t| inputs.iter().filter(|s| s.bit(t)).count() as u32)
        .collect())
}

/// FSM-based hyperbolic tangent: a saturating K-state up/down counter whose
/// output bit is high in the upper half of the state space. For a long
/// bipolar input of value `x` the output decodes near `tanh(K*x/2)`.
pub fn stanh(k: u32, input: &StochasticStream) -> Result<StochasticStream> {
    if k < 2 || k % 2 != 0 {
        return Err(ScError::InvalidArgument(format!(
            "stanh needs an even state count >= 2, got {k}"
        )));
    }
    if input.format() != StreamFormat::Bipolar {
        return Err(ScError::FormatMismatch {
            expected: "bipolar",
            got: input.format().name(),
        });
    }
    let mut state = k / 2;
    StochasticStream::from_fn(input.len(), StreamFormat::Bipolar, |t| {
        if input.bit(t) {
            state = (state + 1).min(k - 1);
        } else {
            state = state.saturating_sub(1);
        }
        debug_assert!(state < k);
        state >= k / 2
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstream::source::SourceKind;
    use crate::bitstream::stream::sng_encode;
    use proptest::prelude::*;

    fn fp(seed: u64) -> RandomSource {
        RandomSource::new(SourceKind::FullPeriodPermutation, seed)
    }

    /// Streams whose comparator words sweep the full (u, v) product grid:
    /// the decoded product of A and B is then exact, serving as the
    /// independent-streams probability oracle.
    fn grid_pair(
        thresh_a: u32,
        thresh_b: u32,
        n: u32,
        format: StreamFormat,
    ) -> (StochasticStream, StochasticStream) {
        let len = 1usize << (2 * n);
        let a = StochasticStream::from_fn(len, format, |t| ((t >> n) as u32) < thresh_a).unwrap();
        let b = StochasticStream::from_fn(len, format, |t| {
            (t as u32 & ((1 << n) - 1)) < thresh_b
        })
        .unwrap();
        (a, b)
    }

    #[test]
    fn xnor_of_stream_with_itself_is_all_ones() {
        let s = sng_encode(0.375, StreamFormat::Bipolar, 6, &fp(2)).unwrap();
        let m = sc_mul(&s, &s).unwrap();
        assert_eq!(m.popcount() as usize, m.len());
        assert_eq!(m.decode(), 1.0);
    }

    #[test]
    fn unipolar_and_with_ones_is_identity() {
        let s = sng_encode(0.3, StreamFormat::Unipolar, 8, &fp(4)).unwrap();
        let ones = StochasticStream::all_ones(s.len(), StreamFormat::Unipolar).unwrap();
        assert_eq!(sc_mul(&ones, &s).unwrap(), s);
    }

    #[test]
    fn independent_half_times_half_is_quarter() {
        // Exact-probability oracle via the product-grid construction.
        let (a, b) = grid_pair(24, 24, 5, StreamFormat::Bipolar); // 24/32 -> 0.5 bipolar
        let m = sc_mul(&a, &b).unwrap();
        assert!((m.decode() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn xor_multiplies_inverted_bipolar() {
        // XOR(a, b) decodes to -(a*b) on standard encodings, which is the
        // product when one operand is read as inverted.
        let (a, b) = grid_pair(24, 8, 5, StreamFormat::Bipolar); // 0.5 and -0.5
        let m = sc_mul_inverted(&a, &b).unwrap();
        assert!((m.decode() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn mul_rejects_mismatches() {
        let a = sng_encode(0.3, StreamFormat::Unipolar, 6, &fp(1)).unwrap();
        let b = sng_encode(0.3, StreamFormat::Unipolar, 7, &fp(2)).unwrap();
        assert!(sc_mul(&a, &b).is_err());
        let c = sng_encode(0.3, StreamFormat::Bipolar, 6, &fp(3)).unwrap();
        assert!(sc_mul(&a, &c).is_err());
    }

    #[test]
    fn mux_of_identical_streams_is_that_stream() {
        let s = sng_encode(0.7, StreamFormat::Unipolar, 8, &fp(9)).unwrap();
        let out = mux_add(&[s.clone(), s.clone()], &fp(10)).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn mux_halves_one_plus_zero() {
        let len = 1 << 12;
        let ones = StochasticStream::all_ones(len, StreamFormat::Unipolar).unwrap();
        let zeros = StochasticStream::all_zeros(len, StreamFormat::Unipolar).unwrap();
        let out = mux_add(&[ones, zeros], &fp(21)).unwrap();
        assert!((out.decode() - 0.5).abs() < 2.0 / (len as f64).sqrt());
    }

    #[test]
    fn mux_of_all_ones_is_all_ones() {
        let len = 256;
        let inputs: Vec<_> = (0..4)
            .map(|_| StochasticStream::all_ones(len, StreamFormat::Unipolar).unwrap())
            .collect();
        let out = mux_add(&inputs, &fp(3)).unwrap();
        assert_eq!(out.popcount() as usize, len);
    }

    #[test]
    fn mux_scaling_recovers_sum_across_grid() {
        let len = 1 << 12;
        let tol = 4.0 / (len as f64).sqrt();
        for (i, vals) in [[0.1, 0.4, 0.9, 0.6], [0.25, 0.25, 0.25, 0.25], [0.0, 1.0, 0.5, 0.75]]
            .iter()
            .enumerate()
        {
            let inputs: Vec<_> = vals
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let thr = (v * len as f64).round() as u32 % (len as u32 + 1);
                    // Encode at the stream's own length for exact values.
                    StochasticStream::from_fn(len, StreamFormat::Unipolar, |t| {
                        // decorrelate inputs by stride-jumping the grid
                        let r = (t.wrapping_mul(2654435761 + j * 40503) % len) as u32;
                        r < thr
                    })
                    .unwrap()
                })
                .collect();
            let truth: f64 = vals.iter().sum();
            let out = mux_add(&inputs, &fp(100 + i as u64)).unwrap();
            assert!(
                (out.decode() * 4.0 - truth).abs() < tol * 4.0,
                "sum {truth} vs {}",
                out.decode() * 4.0
            );
        }
    }

    #[test]
    fn or_add_trivials_and_oracle() {
        let s = sng_encode(0.4, StreamFormat::Unipolar, 8, &fp(5)).unwrap();
        let zeros = StochasticStream::all_zeros(s.len(), StreamFormat::Unipolar).unwrap();
        let ones = StochasticStream::all_ones(s.len(), StreamFormat::Unipolar).unwrap();
        assert_eq!(or_add(&s, &zeros).unwrap(), s);
        assert_eq!(or_add(&ones, &s).unwrap(), ones);

        // Independent 0.1 + 0.1: exact oracle 1 - (1-x)(1-y) = 0.19.
        let (a, b) = grid_pair(26, 26, 8, StreamFormat::Unipolar); // 26/256 ~ 0.1016
        let x = a.decode();
        let y = b.decode();
        let out = or_add(&a, &b).unwrap();
        assert!((out.decode() - (x + y - x * y)).abs() < 1e-12);
        assert!((out.decode() - 0.19).abs() < 1e-2);
    }

    #[test]
    fn or_add_rejects_bipolar() {
        let s = sng_encode(0.1, StreamFormat::Bipolar, 6, &fp(6)).unwrap();
        assert!(or_add(&s, &s).is_err());
    }

    #[test]
    fn apc_counts_are_lossless() {
        let ones = StochasticStream::all_ones(64, StreamFormat::Unipolar).unwrap();
        let counts = apc_add(&[ones.clone(), ones.clone(), ones]).unwrap();
        assert!(counts.iter().all(|&c| c == 3));

        let zeros = StochasticStream::all_zeros(64, StreamFormat::Unipolar).unwrap();
        let counts = apc_add(&[zeros.clone(), zeros]).unwrap();
        assert!(counts.iter().all(|&c| c == 0));

        let streams: Vec<_> = [3u32, 5, 7]
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                StochasticStream::from_fn(16, StreamFormat::Unipolar, |t| {
                    (t as u32).wrapping_mul(7).wrapping_add(i as u32) % 16 < k
                })
                .unwrap()
            })
            .collect();
        let total: u32 = apc_add(&streams).unwrap().iter().sum();
        let expect: u32 = streams.iter().map(|s| s.popcount()).sum();
        assert_eq!(total, expect);
        assert_eq!(expect, 15);
    }

    #[test]
    fn stanh_saturates_on_all_ones() {
        let k = 8;
        let ones = StochasticStream::all_ones(64, StreamFormat::Bipolar).unwrap();
        let out = stanh(k, &ones).unwrap();
        // All-ones after at most K/2 warm-up bits.
        assert!((k as usize / 2..64).all(|t| out.bit(t)));
    }

    #[test]
    fn stanh_is_balanced_at_zero() {
        let s = sng_encode(0.0, StreamFormat::Bipolar, 13, &fp(8)).unwrap();
        let out = stanh(8, &s).unwrap();
        assert!(out.decode().abs() < 0.1);
    }

    /// Stationary distribution of the K-state birth-death chain with up
    /// probability p: pi_i ∝ (p/(1-p))^i; output probability is the upper
    /// half's mass.
    fn stationary_output(k: u32, p: f64) -> f64 {
        let r = p / (1.0 - p);
        let weights: Vec<f64> = (0..k).map(|i| r.powi(i as i32)).collect();
        let total: f64 = weights.iter().sum();
        let upper: f64 = weights[(k / 2) as usize..].iter().sum();
        upper / total
    }

    #[test]
    fn stanh_tracks_markov_oracle_and_tanh() {
        let k = 8;
        let x = 0.5;
        let s = sng_encode(x, StreamFormat::Bipolar, 13, &fp(12)).unwrap();
        let out = stanh(k, &s).unwrap().decode();
        let oracle = 2.0 * stationary_output(k, (x + 1.0) / 2.0) - 1.0;
        assert!((out - oracle).abs() < 0.03, "decode {out} vs oracle {oracle}");
        let t = (f64::from(k) * x / 2.0).tanh();
        assert!((out - t).abs() < 0.05, "decode {out} vs tanh {t}");
    }

    #[test]
    fn stanh_rejects_bad_state_counts() {
        let s = StochasticStream::all_ones(16, StreamFormat::Bipolar).unwrap();
        assert!(stanh(1, &s).is_err());
        assert!(stanh(7, &s).is_err());
    }

    proptest! {
        #[test]
        fn stanh_state_stays_in_bounds(bits in proptest::collection::vec(any::<bool>(), 64), k in 1u32..8) {
            let k = k * 2;
            let s = StochasticStream::from_bits(&bits, StreamFormat::Bipolar).unwrap();
            let out = stanh(k, &s).unwrap();
            // Mirror the FSM and check the clamp invariant directly.
            let mut state = k / 2;
            for (t, &b) in bits.iter().enumerate() {
                state = if b { (state + 1).min(k - 1) } else { state.saturating_sub(1) };
                prop_assert!(state < k);
                prop_assert_eq!(out.bit(t), state >= k / 2);
            }
        }
    }
}
