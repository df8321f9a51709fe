//! Core stochastic-number machinery: pseudo-random sources, stochastic
//! number generation and decoding, and the primitive SC arithmetic gates.
//!
//! All types are immutable values after construction and all operations are
//! pure given their inputs and a [`RandomSource`] seed, so callers are free
//! to parallelize across independent streams.

mod gates;
mod lfsr;
mod source;
mod stream;

pub use gates::{apc_add, mux_add, or_add, sc_mul, sc_mul_inverted, stanh};
pub use lfsr::Lfsr;
pub use source::{mix_seed, splitmix64, RandomSource, SourceKind, WordStream};
pub use stream::{
    comparator_threshold, sng_encode, sng_encode_fixed, StochasticStream, StreamFormat,
    MAX_STREAM_LEN,
};

pub(crate) use stream::{check_pair, encode_with_threshold};
