//! The pattern-distinguishing problem over host graphs, and its link to
//! subgraph isomorphism.
//!
//! A host graph `H` is read as the functor `U(X) = Π_v X^{deg(v)}`, whose
//! coordinates ("slots") are the (vertex, neighbor) pairs of `H`. A pattern
//! `P` induces a quotient of those slots: if `P` embeds in `H`, the two slots
//! of every edge hit by a uniformly drawn embedding are identified; if not, a
//! decoy identifies the same number of random slot pairs. The distinguishing
//! game hands an adversary the quotient and two candidate patterns and asks
//! which one produced it. Recognizing the "present" shape exactly decides
//! subgraph isomorphism, which [`reduce_si_to_distinguishing`] makes explicit.

mod game;
mod graph;
mod quotient;
mod search;

use thiserror::Error;

pub use game::{
    distinguish_game, reduce_si_to_distinguishing, trial_rng, Adversary, Candidate, CanonicalForm,
    Challenge, ClassSizeProfile, CoinFlip, DistinguishInstance, GameConfig, GameResult,
    OracleRecognizer, Recognizer,
};
pub use graph::{graph_catalog, Graph};
pub use quotient::{
    build_pattern_quotient, encode_host, has_canonical_form, HostEncoding, PatternQuotient,
    Provenance, Slot, SlotPartition,
};
pub use search::{enumerate_embeddings, subgraph_iso_bruteforce, Embedding, SearchBudget};

#[derive(Debug, Error)]
pub enum DistinguishError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid quotient: {0}")]
    InvalidQuotient(String),
    #[error("adversary failed in trial {trial}: {source}")]
    Adversary {
        trial: u64,
        #[source]
        source: Box<DistinguishError>,
    },
    #[error("the game needs at least one trial")]
    NoTrials,
}
