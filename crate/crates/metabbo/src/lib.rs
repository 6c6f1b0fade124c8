//! Meta-black-box optimization testbed.
//!
//! The crate wires four layers together:
//!
//! * [`problems`] — synthetic single- and multi-objective problem instances with
//!   budgeted, seeded, optionally noisy evaluation.
//! * [`optimizers`] — population-based low-level optimizers (DE, SHADE, PSO,
//!   random search) sharing one [`optimizers::OptimizerState`].
//! * [`agent`] — the meta-level: state features, per-generation rewards, an MLP
//!   meta-policy that emits DE designs, and two trainers (policy-gradient and
//!   evolution strategies) consuming a uniform learning signal.
//! * [`parallel`] + [`metrics`] + [`workflow`] — worker pools, batched test
//!   plans with four scheduling modes, run-metadata capture, scoring
//!   (performance, ranks, hypervolume, learning efficiency, anti-NFL), and the
//!   config-driven train/test/analyze entry points behind the CLI.
//!
//! Start with the `examples/` directory; each file there is a runnable tour of
//! one capability (`cargo run --release --example run_baselines`, ...).

pub mod agent;
pub mod error;
pub mod fsio;
pub mod metrics;
pub mod optimizers;
pub mod parallel;
pub mod problems;
pub mod seed;
pub mod workflow;

pub use error::Error;

/// Shorthand for results carrying this crate's [`Error`].
pub type Result<T> = std::result::Result<T, Error>;
