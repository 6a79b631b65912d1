//! Polynomial invariants and entanglement monotones for mixed two-qutrit and
//! two-qubit states.

pub mod counting;
pub mod error;
pub mod linalg;
pub mod lsl_qutrit;
pub mod lu_invariants;
pub mod monotones;
pub mod qubit;
pub mod states;
pub mod tensors;

pub use error::{Error, Result};
