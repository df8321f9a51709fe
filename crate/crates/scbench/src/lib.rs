//! Stochastic-computing arithmetic and cycle-level CNN accelerator simulation.
//!
//! The crate bundles the pieces needed to compare a binary-interfaced
//! deterministic SC multiply-accumulate design against extended stochastic
//! logic (ESL) designs on equal footing:
//!
//! - [`numeric`] — saturating fixed-point numbers, the binary interface of
//!   every accelerator model.
//! - [`bitstream`] — LFSR pseudo-random sources, stochastic number
//!   generation/decoding, and the primitive SC gates (AND/XNOR multipliers,
//!   MUX/OR/APC adders, the Stanh FSM).
//! - [`esl`] — the two-stream ratio format: encoding policy, multiplication,
//!   scaled two-input adders, array-adder strategies, and the bit-serial
//!   stream-to-binary converter.
//! - [`bisc`] — the deterministic counter-based MAC and its selector FSM.
//! - [`accelerator`] — a weight-stationary processing-unit model with a
//!   partial-result buffer and per-run cycle/footprint accounting.
//! - [`nn`] — forward-only CNN inference with pluggable arithmetic backends.
//! - [`metrics`] — RMSE sweep harness and comparison reports.
//! - [`ingestion`] — MNIST IDX parsing and the weight container format.
//! - [`cli`] — the `scbench` command-line driver.
//!
//! Every stochastic operation is deterministic given a seed; see
//! [`bitstream::RandomSource`].

pub mod accelerator;
pub mod bisc;
pub mod bitstream;
pub mod cli;
pub mod error;
pub mod esl;
pub mod ingestion;
pub mod metrics;
pub mod nn;
pub mod numeric;

pub use error::{Result, ScError};
