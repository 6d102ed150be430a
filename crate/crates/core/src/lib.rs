//! Entropy-driven drift on Johnson graphs.
//!
//! The Johnson graph `J(n, k)` has every `k`-subset of an `n`-element ground
//! set as a vertex, with edges between subsets that differ by a single swap.
//! Fixing a target subset partitions the graph into distance shells, and a
//! random walk on the graph projects onto a birth-death chain over those
//! shells. This crate provides:
//!
//! - [`shell`]: exact and log-space shell sizes and the entropy landscape.
//! - [`chain`]: the lumped distance chain, its drift, variance and
//!   equilibrium points, with optional Metropolis reweighting.
//! - [`hitting`]: closed-form expected hitting times of the target.
//! - [`walker`]: Monte Carlo simulation of the full-state and lumped walks.
//! - [`oracle`]: brute-force enumeration and exact linear solves used to
//!   validate everything above on small instances.

pub mod chain;
pub mod error;
pub mod hitting;
pub mod numeric;
pub mod oracle;
pub mod params;
pub mod report;
pub mod shell;
pub mod walker;

pub use chain::{DistanceChain, DriftProfile, EquilibriumStatus};
pub use error::{Error, Result};
pub use hitting::{HittingTime, HittingTimeTable};
pub use numeric::{Exactness, DEFAULT_EXACT_CUTOFF};
pub use params::JohnsonParams;
pub use report::{Check, Report};
pub use shell::ShellProfile;
pub use walker::{SubsetState, TrajectoryBatch, WalkConfig, WalkMode};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
