//! Stabilizer-code machinery for steganographic quantum error correction.
//!
//! The crate is organized around the pipeline the protocols need:
//!
//! - [`pauli`]: phase-tracked Pauli operators and GF(2) symplectic algebra;
//! - [`code`]: stabilizer/subsystem/entanglement-assisted codes, syndromes,
//!   distance, and the structural searches;
//! - [`clifford`]: conjugation semantics and encoding-circuit synthesis;
//! - [`sim`]: a dense state-vector / density-matrix simulator;
//! - [`lp`]: a self-contained two-phase simplex solver;
//! - [`classical`]: syndrome-encoding and inner-outer rate optimizations
//!   for the binary symmetric channel;
//! - [`quantum`]: depolarizing-channel emulation rates, key consumption,
//!   and diamond-norm distinguishability;
//! - [`perfect`]: the five-qubit-code hiding protocol end to end.

#![allow(clippy::needless_range_loop)]

pub mod classical;
pub mod clifford;
pub mod code;
pub mod error;
pub mod gf2;
pub mod lp;
mod numeric;
pub mod pauli;
pub mod perfect;
pub mod quantum;
pub mod sim;

pub use error::{Error, Result};
