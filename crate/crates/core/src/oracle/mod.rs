//! Brute-force checks on finite structures: Galois adjunctions, the chain
//! rule, and the classification of finite poset functions.

mod galois;
mod laws;
mod poset;

pub use galois::{
    check_chain_rule, check_galois, check_morphism, check_morphism_sampled, check_preservation, embed_at,
    random_elem, rng, sampled_galois, seed_from_env, Report, DEFAULT_SEED,
};
pub use laws::{check_lattice_laws, spread};
pub use poset::{
    classify, examples, least_preimage, stable_at, stable_witness_at, Classification, CmWitness, FinFun, FinPoset,
    StableWitness, Verdict,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("function table of {0} does not cover its domain")]
    BadTable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}
