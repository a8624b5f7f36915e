//! The object language: types, terms, parsing, printing and typechecking.

mod lexer;
pub mod parser;
pub mod print;
mod syntax;
mod ty;
pub mod typeck;
pub mod value_lit;

pub use parser::{parse_program, parse_term, parse_type, sig_pragma};
pub use print::{print_program, print_term};
pub use syntax::{Program, Span, Term, TermKind};
pub use ty::{Signature, Ty};
pub use typeck::{typecheck, typecheck_program, Ctx, Typed, TypedKind};
pub use value_lit::parse_value;
