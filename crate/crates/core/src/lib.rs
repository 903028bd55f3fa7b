//! Measurement-based implementation of one- and two-qubit tactics.
//!
//! The crate simulates pure states over up to 16 qubits and builds the
//! measurement-only gadgets (σH, σ, σT, σG, CNOT) that realise gates purely
//! through Pauli-type observable measurements and classical feedforward. On
//! top of that sit a Pauli-frame tracker, a compiler from small circuits to
//! measurement programs, and the dense-coding dealer demonstration.

pub mod algebra;
pub mod compiler;
pub mod densecoding;
pub mod error;
pub mod gadgets;
pub mod par;
pub mod pauliframe;
pub mod rng;
pub mod statevec;

pub use error::{Error, Result};
