//! Adaptors between an abstract learner or tester and a concrete system
//! under test: winning strategies, determinacy, the adaptor runtime and the
//! process composition used to check it against the contraction.

mod composition;
mod session;
mod sut;
mod winning;

pub use composition::{build_adaptor_composition, check_adaptor_theorem, impl_encoding, TheoremCheck, TAU};
pub use session::{run_adaptor, AdaptorError, AdaptorRun, AdaptorSession, Event};
pub use sut::{serve_lines, InProcessSut, LineSut, Resolver, SutEndpoint, SutError, DEFAULT_TIMEOUT};
pub use winning::{is_determinate, is_output_deterministic, solve_winning, DeterminacyWitness, WinningTable};

use crate::code::CodeTree;
use crate::error::{Error, Result};

/// Checks that a code tree is over Mealy labels on both sides.
pub(crate) fn require_mealy_code(tree: &CodeTree) -> Result<()> {
    if !tree.source().iter().all(|l| l.is_mealy()) {
        return Err(Error::NotMealy("adaptor code source alphabet"));
    }
    if !tree.target().iter().all(|l| l.is_mealy()) {
        return Err(Error::NotMealy("adaptor code target alphabet"));
    }
    Ok(())
}
