use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {p} exceeds the supported maximum {max}")]
    PrimeTooLarge { p: u32, max: u32 },
    #[error("digit {digit} is not an element of F_{p}")]
    DigitOutOfRange { digit: u32, p: u32 },
    #[error("operands use different moduli")]
    ModulusMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("not an adjacency matrix: {0}")]
    NotAdjacency(&'static str),
    #[error("gate addresses must be pairwise distinct")]
    AddressCollision,
    #[error("{gate} is only defined for qubits, not dimension {p}")]
    QubitOnly { gate: &'static str, p: u32 },
    #[error("the zero vector is not a quantum state")]
    ZeroState,
    #[error("register too large: {0}")]
    RegisterTooLarge(&'static str),
    #[error("invalid vertex partition: {0}")]
    InvalidPartition(&'static str),
    #[error("size bound exceeded: {what} must be at most {limit}")]
    SizeBound { what: &'static str, limit: usize },
    #[error("graph violates admissibility condition {0}")]
    Inadmissible(&'static str),
    #[error("decoder is not unitary (max deviation {defect:e}); the graph fails C2")]
    NotUnitary { defect: f64 },
    #[error(
        "uncorrectable or multi-error input: most likely syndrome has probability {probability}"
    )]
    NondeterministicSyndrome { probability: f64 },
    #[error(
        "syndrome collision at {syndrome}: errors {first} and {second} need different corrections"
    )]
    SyndromeCollision {
        syndrome: String,
        first: String,
        second: String,
    },
    #[error("unrecognized syndrome {0}")]
    UnrecognizedSyndrome(String),
    #[error("residual after error {0} is not a Pauli image of the reference state")]
    Uncorrectable(String),
    #[error("recovery failed: residual entanglement (purity {purity})")]
    RecoveryFailed { purity: f64 },
    #[error("GHZ layout size {n} outside 2..=6")]
    LayoutOutOfRange { n: usize },
    #[error("invalid label {0:?}")]
    InvalidLabel(String),
    #[error("{0}")]
    Unsupported(&'static str),
}
