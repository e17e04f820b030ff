//! A laboratory for Reed-Muller (RM) codes and their recursive soft-decision
//! decoders.
//!
//! The crate provides:
//!
//! - RM code algebra: parameters, monomial-evaluation encoding, codeword
//!   membership, Plotkin decomposition, and the addressed decoding tree
//!   ([`rm`]).
//! - Extended-real LLR arithmetic: soft XOR, negative log-sigmoid, analog
//!   weight, list cost, and the fast Hadamard transform ([`llr`]).
//! - A binary-input AWGN channel with reproducible, stream-keyed noise, the
//!   BPSK-constrained capacity, and the constrained Shannon limit
//!   ([`channel`]).
//! - Affine coordinate permutations of `GA(m, F2)` and automorphism
//!   ensembles ([`automorphism`]).
//! - Decoders: leaf ML decoders (Wagner, Hadamard-transform first-order),
//!   the recursive GMC/SC decoder, successive-cancellation list decoding,
//!   automorphism-ensemble decoding, and constituent-automorphism decoding
//!   driven by an automorphism distribution ([`decode`]).
//! - Closed-form worst-case basic-operation counts for every decoder,
//!   including selection-network costs for list truncation ([`complexity`]).
//! - A Monte Carlo harness: BLER estimation, SNR-at-target search, gap to
//!   the constrained Shannon limit, first-error profiling, heuristic
//!   enumeration of automorphism distributions, and Pareto frontier
//!   extraction ([`sim`]).

pub mod automorphism;
pub mod bits;
pub mod channel;
pub mod complexity;
pub mod decode;
pub mod decoder_spec;
pub mod llr;
pub mod rm;
pub mod sim;

pub use bits::BitVec;
pub use decoder_spec::{Decoder, DecoderSpec};
pub use rm::{Address, AtomSet, RmCode};

/// Errors reported by fallible operations across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("length {0} is odd")]
    OddLength(usize),
    #[error("invalid bit string {0:?}")]
    BadBitString(String),
    #[error("invalid address {0:?}")]
    BadAddress(String),
    #[error("invalid decoder spec {0:?}: {1}")]
    BadDecoderSpec(String, String),
    #[error("message length {got} does not match code dimension {expected}")]
    BadMessageLength { expected: usize, got: usize },
    #[error("ML enumeration guard: dimension {0} exceeds 24")]
    MlDimensionGuard(usize),
    #[error("list decoding requires order >= 0, got {0}")]
    NegativeOrder(i32),
    #[error("maximum list size must be at least 2, got {0}")]
    ListSizeTooSmall(usize),
    #[error("ensemble size {size} exceeds the order of GA({m}, F2)")]
    EnsembleTooLarge { m: u32, size: usize },
    #[error("automorphism distribution entry {0}: {1}")]
    BadDistribution(String, String),
    #[error("no ensemble materialized for address {0}")]
    MissingEnsemble(String),
    #[error("rate {0} is outside (0, 1)")]
    BadRate(f64),
    #[error("no BLER bracket for target {target} in [{low} dB, {high} dB]")]
    BracketNotFound { target: f64, low: f64, high: f64 },
    #[error("code dimension is zero")]
    ZeroDimension,
    #[error("no operation-count model for decoder {0:?}")]
    NoComplexityModel(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
