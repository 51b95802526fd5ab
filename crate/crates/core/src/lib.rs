//! Bipartite entanglement under passive decoherence on truncated Fock spaces.
//!
//! Two bosonic modes `a` and `b` are damped by vacuum or coherent baths
//! through a beam-splitter coupling `η`. The crate evaluates moment-matrix
//! witnesses, log-negativity and two-qubit concurrence on the damped states,
//! inverts the damping map, and searches for separable states with physical,
//! entangled preimages.

pub mod channels;
pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod io;
pub mod moments;
pub mod numerics;

pub use error::{Error, Result};
