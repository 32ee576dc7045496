//! Action codes for labeled transition systems and Mealy machines.
//!
//! An action code maps abstract actions to non-empty words of concrete
//! actions, with no code word a prefix of another. This crate builds the
//! three operators induced by a code (contraction, refinement and
//! concretization), decides simulation, isomorphism and delay simulation
//! between finite systems, and runs an adaptor that translates abstract
//! inputs into concrete exchanges with a system under test.

pub mod adaptor;
pub mod cli;
pub mod code;
pub mod doc;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod label;
pub mod lts;
pub mod operators;
pub mod simulation;

pub use code::{CodeMap, CodeTree};
pub use error::{Error, Result};
pub use label::{CompatRel, Label, Word};
pub use lts::{Lts, StateId, Transition};
