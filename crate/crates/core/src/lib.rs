//! Graph-code encoding and decoding over `F_p`, a GHZ-based quantum erasure
//! code, and their concatenation, all checked against a dense state-vector
//! simulator.
#![no_std]

extern crate alloc;

pub mod concat;
pub mod error;
pub mod fp;
pub mod ghz;
pub mod graph_code;
pub mod pauli;
pub mod statevec;

pub use concat::{Blocking, ChannelEvent, ConcatScheme, NoiseModel};
pub use error::{Error, Result};
pub use fp::{Fp, FpMatrix, FpVector, Prime};
pub use ghz::{Corruption, Gate, GateProgram, GhzLayout, Side};
pub use graph_code::{AdmissibilityReport, CodeGraph, DecoderUnitary, SyndromeRow, SyndromeTable};
pub use pauli::PauliError;
pub use statevec::{DensityMatrix, StateVector, Subsystem};
