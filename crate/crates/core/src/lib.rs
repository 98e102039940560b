//! A desk-scale laboratory for homomorphic encryption built on quotients of
//! finitary polynomial functors.
//!
//! * [`functor_core`]: polynomial functor expressions, canonical sum-of-powers
//!   normal forms, and their finite-set semantics.
//! * [`quotient_he`]: the quotient scheme. Residues mod `n` are carried by
//!   shift functions hidden in secret equivalence classes of function tables;
//!   addition is class composition through a public table.
//! * [`subgroup_he`]: bits as subgroup members of a simulated composite-order
//!   bilinear group, with OR, AND and 2-DNF evaluation.
//! * [`bnf_distinguish`]: slot-quotients of host graphs, the pattern
//!   distinguishing game, and its link to subgraph isomorphism.
//! * [`proof_lang`]: a strongly normalizing proof-term calculus whose shift
//!   denotations can be encrypted under [`quotient_he`].

pub mod bnf_distinguish;
pub mod functor_core;
pub mod proof_lang;
pub mod quotient_he;
pub mod subgroup_he;

/// Seeded generator used throughout the crate.
pub type SeededRng = rand_chacha::ChaCha20Rng;

/// Build the crate's standard generator from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    use rand::SeedableRng;
    SeededRng::seed_from_u64(seed)
}
