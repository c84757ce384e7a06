//! Key, storage, privacy-leakage and action-cost rate regions for
//! authentication with action-controlled identifier measurements.
//!
//! * [`prob`]: alphabets, channels, the system model and entropy kernels.
//! * [`regions`]: corner points of the four regions for a fixed auxiliary
//!   choice.
//! * [`frontier`]: search over auxiliary choices and an exhaustive grid
//!   oracle.
//! * [`binary`]: the analytic path for the binary-symmetric example.

pub mod binary;
pub mod error;
pub mod frontier;
pub mod par;
pub mod prob;
pub mod regions;

pub use error::{Error, Result};
pub use frontier::{
    brute_force_oracle, cardinality_bounds, trace_frontier, Frontier, Objective, OracleConfig,
    SearchConfig,
};
pub use par::Execution;
pub use prob::{AuxiliaryChoice, Mode, SystemModel};
pub use regions::{evaluate, RatePoint, RegionCorner};
