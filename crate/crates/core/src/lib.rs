//! Analysis engine for the Mafia party game under the random-lynch model.
//!
//! The game is a discrete-time pure death process on the number of living
//! mafia members. This crate computes the mafia winning chance exactly (by
//! recurrence and in closed form) and asymptotically, evolves the distribution
//! of mafia counts in discrete and continuous time, and simulates games for
//! Monte Carlo cross-checks.

pub mod combinatorics;
pub mod error;
pub mod evolution;
pub mod game;
pub mod montecarlo;
pub mod winchance;

pub use combinatorics::{binomial, double_factorial, falling_product, to_f64, Rational};
pub use error::{Error, Result};
pub use game::{BoundaryRule, GameState, Winner};
