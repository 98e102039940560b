//! A small simply-typed calculus with products, sums, finite base types and
//! successor constants, plus a bridge into the shift-function scheme of
//! [`crate::quotient_he`].
//!
//! There is no recursion, so every well-typed term has a normal form. Terms
//! of type `Bn -> Bn` that denote a cyclic shift can be encrypted, and the
//! encrypted composition of two such terms decrypts to the sum of their shift
//! amounts.

mod bridge;
pub mod generate;
mod normalize;
mod parse;
mod semantics;
mod syntax;
mod typing;

use thiserror::Error;

use crate::quotient_he::QuotientError;

pub use bridge::{encrypt_denotation, hom_compose_terms, shift_term};
pub use normalize::{
    normalize_counting, normalize_term, normalize_with, substitute, Strategy, DEFAULT_FUEL,
};
pub use parse::{is_valid_identifier, parse, parse_type, parse_with_scope, MAX_INPUT_BYTES};
pub use semantics::{denote, Denotation, MAX_TABLE_DOMAIN};
pub use syntax::{Term, Type};
pub use typing::{type_of, typecheck, Context};

#[derive(Debug, Error)]
pub enum ProofError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unbound variable `{name}` at {line}:{column}")]
    Scope {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("input is {bytes} bytes, limit {limit}")]
    InputTooLarge { bytes: usize, limit: usize },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("type mismatch in `{term}`: expected {expected}, found {found}")]
    TypeMismatch {
        term: String,
        expected: String,
        found: String,
    },
    #[error("invalid constant `{term}`: {reason}")]
    InvalidConstant { term: String, reason: String },
    #[error("normalization did not finish within {fuel} steps")]
    FuelExhausted { fuel: u64 },
    #[error("cannot tabulate a function over `{ty}` (more than {limit} arguments)")]
    DenotationTooLarge { ty: String, limit: u64 },
    #[error("evaluation failed: {0}")]
    Semantics(String),
    #[error("only terms of type Bn -> Bn can be encrypted, found {ty}")]
    NotEncryptable { ty: String },
    #[error("term works over B{term} but the key has modulus {key}")]
    ModulusMismatch { term: usize, key: usize },
    #[error("denotation {table} is not a cyclic shift")]
    NotAShift { table: String },
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

/// Parses a closed term and returns its normal form and type.
pub fn prove(text: &str, fuel: u64) -> Result<(Term, Type), ProofError> {
    let t = parse(text)?;
    let ty = type_of(&t)?;
    Ok((normalize_term(&t, fuel)?, ty))
}
