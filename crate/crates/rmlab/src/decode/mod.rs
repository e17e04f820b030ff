//! Decoding algorithms: leaf ML decoders, the recursive GMC/SC decoder,
//! list decoding, and the automorphism-driven AE and CA decoders.

pub mod leaf;
pub mod ml;
pub mod recursive;
pub mod scl;

pub use leaf::{decode_first_order, decode_leaf, decode_repetition, decode_spc_wagner};
pub use ml::{decode_ml, DecodeOutcome};
pub use recursive::{
    decode_ae, decode_ca, decode_gmc, decode_gmc_with, AutomorphismDistribution, CaEnsembles,
};
pub use scl::{decode_scl, scl_candidates, SclEntry};
