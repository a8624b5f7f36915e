//! Galois slicing for a small total functional language.
//!
//! Every run of a program yields, besides its value, a forward map on input
//! approximations and a backward map on output approximations. The two form
//! a Galois connection at first-order types.

pub mod cbn;
pub mod fam;
pub mod interp;
pub mod lang;
pub mod lattice;
pub mod oracle;
pub mod prims;
pub mod program;
pub mod rational;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error("{span}: syntax error: {msg}")]
    Syntax { span: lang::Span, msg: String },
    #[error("{span}: type error: {msg}")]
    Type { span: lang::Span, msg: String },
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error("bad input: {0}")]
    Input(String),
    #[error("unknown primitive type {0:?}")]
    UnknownPrimType(String),
    #[error("{0} require first-order type, found {1}")]
    HigherOrder(&'static str, String),
    #[error("unknown signature {0:?} (known: disc-num, lift-num, interval-num, cbn-num)")]
    UnknownSignature(String),
}
