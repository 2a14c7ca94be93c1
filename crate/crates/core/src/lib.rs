//! Synthesis, optimization and verification of encoding circuits for
//! stabilizer codes.

pub mod circuit;
pub mod code;
pub mod error;
pub mod f2;
pub mod pauli;
pub mod tableau;
pub mod heuristics;
pub mod css;
pub mod search;
pub mod greedy;
pub mod rollout;
pub mod codes;
pub mod verify;
pub mod synth;
pub mod exact;
pub mod compose;

pub use error::{Error, Result};
