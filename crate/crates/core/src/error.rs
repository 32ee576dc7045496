use thiserror::Error;

use crate::label::{Label, Word};

/// Errors raised while building or transforming transition systems and codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid symbol {0:?}: symbols are non-empty and may not contain whitespace, '/', '.', '⟨' or '⟩'")]
    InvalidSymbol(String),

    #[error("invalid label {0:?}")]
    InvalidLabel(String),

    #[error("labels mix atomic and Mealy variants ({0} vs {1})")]
    MixedLabels(Label, Label),

    #[error("initial state {0:?} is not a declared state")]
    UnknownInitial(String),

    #[error("transition {source_state} --{label}--> {target}: label is not in the alphabet")]
    LabelNotInAlphabet {
        source_state: String,
        label: Label,
        target: String,
    },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("the right-hand system is not deterministic")]
    NotDeterministic,

    #[error("code word for {0} is empty")]
    EmptyWord(Label),

    #[error("prefix clash: code word of {0} is a prefix of the code word of {1}")]
    PrefixClash(Label, Label),

    #[error("duplicate code entry for {0}")]
    DuplicateEntry(Label),

    #[error("invalid code tree: {0}")]
    InvalidTree(String),

    #[error("code word {word} of {label} uses a letter outside the source alphabet")]
    LetterNotInSource { label: Label, word: Word },

    #[error("isomorphism search gave up after {0} nodes")]
    Inconclusive(u64),

    #[error("relation {0} needs Mealy labels")]
    NotMealy(&'static str),

    #[error("machine is not input enabled: state {state:?} has no transition for input {input:?}")]
    NotInputEnabled { state: String, input: String },

    #[error(
        "code is not determinate at node {node}: inputs {first} and {second} both lead to leaves for {abstract_input}"
    )]
    NotDeterminate {
        node: String,
        abstract_input: String,
        first: String,
        second: String,
    },

    #[error("code has no winning strategy for abstract input {0:?}")]
    NotWinning(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
