//! Socially-aware gradient-ascent learning in repeated matrix games.
//!
//! The crate is organised bottom-up:
//!
//! - [`games`]: normal-form games, expected payoffs, equilibria, benchmark games.
//! - [`dynamics`]: the continuous-time learning dynamics of two socially-aware
//!   gradient-ascent agents, an RK4 integrator and equilibrium/stability analysis.
//! - [`learners`]: discrete learning agents (SA-PGA, PHC, WoLF-PHC, CJAL, fixed).
//! - [`simulate`]: seeded repeated-game runs and batches with welfare metrics.
//! - [`experiments`]: canned reproductions of the trajectory, welfare,
//!   selfish-opponent and public-goods studies.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod games;
pub mod learners;
pub mod simulate;

pub use error::{Error, Result};
