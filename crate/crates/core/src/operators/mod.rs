//! Contraction, refinement and concretization of transition systems along an
//! action code, plus the I-completeness decider and the vertical
//! implementation relations built from them.

mod concretize;
mod contract;
mod icomplete;
mod refine;
mod vertical;

pub use concretize::{concretize, CHAOS};
pub use contract::contract;
pub use icomplete::{is_icomplete, IncompletenessWitness};
pub use refine::refine;
pub use vertical::{vertical_check, VerticalMode};

use std::collections::BTreeSet;

use crate::code::node_id;
use crate::error::{Error, Result};
use crate::label::{Label, Word};
use crate::lts::StateId;

/// Renders the composite state `(q, w)` as `q⟨w⟩`.
pub fn pair_id(q: &str, w: &Word) -> StateId {
    format!("{q}{}", node_id(w))
}

fn require_alphabet(actual: &BTreeSet<Label>, expected: &BTreeSet<Label>, what: &str) -> Result<()> {
    if actual == expected {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!(
            "{what}: expected {{{}}}, found {{{}}}",
            render(expected),
            render(actual)
        )))
    }
}

fn render(labels: &BTreeSet<Label>) -> String {
    labels.iter().map(Label::to_string).collect::<Vec<_>>().join(", ")
}
