//! Dynamic update semantics over finite intensional models.
//!
//! The central object is a *file*: a set of possibilities (assignment/world
//! pairs) together with a domain of discourse referents.  Files model both the
//! global conversational context and the content of embedded information
//! sources (documents, plans, belief states), and can themselves be introduced
//! as discourse referents and grown by discourse-representation increments.
//!
//! Modules:
//!
//! * [`model`] — finite intensional models: worlds, individuals, predicates,
//!   attitude sources with sorted propositional content.
//! * [`state`] — files, possibilities, and the identified/unidentified status
//!   of a referent within a file.
//! * [`logic`] — formula and discourse-box syntax trees, plus scope checking.
//! * [`parser`] — concrete syntax (ASCII with Unicode aliases) for formulas,
//!   boxes, and conditions.
//! * [`eval`] — the update engine: eliminative conditions, block-wise
//!   existential quantification, modal tests, presupposition handling, and
//!   discourse-box interpretation.
//! * [`lexicon`] — a presuppositional lexicon of participles and determiners,
//!   with instantiation of stored descriptive conditions.
//! * [`readings`] — enumeration and model-theoretic filtering of the scope /
//!   anchoring readings of a sentence skeleton.
//! * [`oracle`] — independent brute-force checkers used to cross-validate the
//!   engine on small random instances.

pub mod eval;
pub mod lexicon;
pub mod logic;
pub mod model;
pub mod oracle;
pub mod parser;
pub mod readings;
pub mod state;

use thiserror::Error;

/// Unified error type for the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A term used as an attitude source has no source entry in the model.
    #[error("unknown attitude source: {0}")]
    UnknownSource(String),
    /// A predicate symbol is not declared in the model.
    #[error("unknown predicate: {0}")]
    UnknownPredicate(String),
    /// A world name is not declared in the model.
    #[error("unknown world: {0}")]
    UnknownWorld(String),
    /// An individual name is not declared in the model.
    #[error("unknown individual: {0}")]
    UnknownIndividual(String),
    /// A constant symbol has no denotation in the model.
    #[error("unknown constant: {0}")]
    UnknownConstant(String),
    /// A discourse referent was introduced twice into the same file.
    #[error("discourse referent already in domain: {0}")]
    DuplicateDref(String),
    /// A file-level operation referenced a referent outside the file's domain.
    #[error("discourse referent not in file domain: {0}")]
    DrefNotInDomain(String),
    /// An operation required a non-absurd file.
    #[error("operation undefined on the absurd file")]
    AbsurdFile,
    /// Summation produced an empty group in every possibility.
    #[error("summation produced no witnesses in any possibility")]
    EmptyGroup,
    /// Concrete-syntax error with position information.
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    /// A formula or box violates scope discipline.
    #[error("scope error: {0}")]
    Scope(String),
    /// Unusable caller input: a missing file, bad flag combination, or a
    /// malformed fixture.
    #[error("{0}")]
    Input(String),
    /// A file variable was bound twice in the same environment.
    #[error("file variable bound twice: {0}")]
    Rebind(String),
    /// A formula mentions a discourse referent with no binder or ambient row.
    #[error("unbound discourse referent: {0}")]
    UnboundDref(String),
    /// A condition mentions a file variable that is not defined.
    #[error("unbound file variable: {0}")]
    UnboundFileVar(String),
    /// A source term does not denote a single individual in every possibility.
    #[error("attitude source term is not uniquely resolved: {0}")]
    AmbiguousSource(String),
    /// A predicate was applied to the wrong number of arguments.
    #[error("arity mismatch for predicate {pred}: expected {expected}, got {got}")]
    Arity {
        pred: String,
        expected: usize,
        got: usize,
    },
    /// The model text or structure is ill-formed.
    #[error("model error: {0}")]
    Model(String),
    /// A lexeme is missing from the lexicon.
    #[error("unknown lexeme: {0}")]
    UnknownLexeme(String),
    /// The lexicon text is ill-formed.
    #[error("lexicon error: {0}")]
    Lexicon(String),
    /// A sentence skeleton combines features that have no reading.
    #[error("invalid skeleton: {0}")]
    InvalidSkeleton(String),
    /// A file's internal invariants were violated.
    #[error("file invariant violated: {0}")]
    FileInvariant(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
