//! Exact arithmetic on lower semicomputable reals.
//!
//! Reals are streams of rationals approaching their value from below. On top
//! of that the crate offers reductions between such reals, covers of their
//! limits, the prediction game, and finite prefix-free machines with their
//! a-priori semimeasure and halting probability.

pub mod cli;
pub mod corpus;
pub mod covers;
pub mod error;
pub mod games;
pub mod machine;
pub mod pairing;
pub mod rational;
pub mod real;
pub mod reduce;
pub mod semimeasure;
pub mod transforms;

pub use error::{Error, Result};
pub use rational::{q, Q};
pub use real::{Budget, Fuel, Kind, LscReal, Verdict};
pub use semimeasure::Semimeasure;
