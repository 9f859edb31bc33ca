//! Numerical laboratory for power-adjusting block-withholding attacks on
//! proof-of-work mining pools.
//!
//! An adversary with hash fraction `alpha` infiltrates a pool of fraction
//! `beta`, withholds full proofs-of-work it finds there, shifts its pool
//! allocation from `p1` to `p2` while withholding, and releases the held
//! block after at most `T` time (dimensionless budget `theta = lambda1 T`).
//! The crate computes the exact long-run revenue ratios, block redundancy
//! and temporal profitability of this strategy family in closed form,
//! verifies them against per-cycle and multi-epoch Monte Carlo simulators,
//! reduces them to the classic withholding variants, and maximizes attack
//! objectives with a multi-start derivative-free search.
//!
//! Modules:
//! - [`model`]: validated parameters, strategies, derived constants
//! - [`special`]: exponential integral `E1` and the reward-share terms
//! - [`analytics`]: closed-form revenue and temporal metrics
//! - [`variants`]: infinite-deadline limit, legacy approximation, c-model
//! - [`simulator`]: per-cycle and difficulty-epoch Monte Carlo
//! - [`optimizer`]: bounded multi-start Nelder-Mead over `(p1, p2, theta)`
//! - [`rng`]: deterministic counter-based random streams

pub mod analytics;
mod error;
pub mod model;
pub mod optimizer;
mod quad;
pub mod rng;
pub mod simulator;
pub mod special;
pub mod variants;

pub use error::{Error, Result};
pub use model::{derive_constants, DerivedConstants, EnvironmentParams, Strategy, Theta};
