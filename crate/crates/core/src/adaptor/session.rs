use std::fmt;

use thiserror::Error;

use super::sut::{SutEndpoint, SutError};
use super::winning::{is_determinate, solve_winning, WinningTable};
use crate::code::CodeTree;
use crate::error::Error;
use crate::label::Label;
use crate::lts::StateId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdaptorError {
    #[error(transparent)]
    Invalid(#[from] Error),
    #[error("code has no winning strategy for abstract input {0:?}")]
    NotWinning(String),
    #[error("code is not complete: node {node} has no edge for {input}/{output}")]
    CodeIncomplete {
        node: StateId,
        input: String,
        output: String,
    },
    #[error(transparent)]
    Sut(#[from] SutError),
}

/// One transcript record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    /// Abstract input received from the learner.
    In(String),
    /// Concrete exchange with the SUT.
    Sut { input: String, output: String },
    /// Abstract output returned to the learner.
    Out(String),
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::In(x) => write!(f, "IN {x}"),
            Event::Sut { input, output } => write!(f, "SUT {input}/{output}"),
            Event::Out(y) => write!(f, "OUT {y}"),
        }
    }
}

/// The adaptor loop: for each abstract input, walk the code tree from the
/// root by sending the winning concrete input and following the SUT's
/// output, until a leaf names the abstract output.
pub struct AdaptorSession<S> {
    tree: CodeTree,
    table: WinningTable,
    sut: S,
    node: StateId,
    transcript: Vec<Event>,
}

impl<S: SutEndpoint> AdaptorSession<S> {
    /// Refuses codes that are not determinate.
    pub fn new(tree: CodeTree, sut: S) -> Result<Self, AdaptorError> {
        if let Some(w) = is_determinate(&tree)? {
            return Err(Error::NotDeterminate {
                node: w.node,
                abstract_input: w.abstract_input,
                first: w.first,
                second: w.second,
            }
            .into());
        }
        let table = solve_winning(&tree)?;
        Ok(AdaptorSession {
            node: tree.root().to_string(),
            tree,
            table,
            sut,
            transcript: Vec::new(),
        })
    }

    pub fn table(&self) -> &WinningTable {
        &self.table
    }

    pub fn transcript(&self) -> &[Event] {
        &self.transcript
    }

    pub fn current_node(&self) -> &str {
        &self.node
    }

    pub fn sut(&self) -> &S {
        &self.sut
    }

    pub fn sut_mut(&mut self) -> &mut S {
        &mut self.sut
    }

    /// Translates one abstract input into concrete exchanges and returns the
    /// abstract output.
    pub fn handle(&mut self, x: &str) -> Result<String, AdaptorError> {
        self.transcript.push(Event::In(x.to_string()));
        self.node = self.tree.root().to_string();
        if !self.table.is_winning(&self.node, x) {
            return Err(AdaptorError::NotWinning(x.to_string()));
        }
        loop {
            if self.tree.is_leaf(&self.node) {
                let label = self.tree.leaf_label(&self.node).expect("non-root leaves are labelled");
                let y = label.output().expect("Mealy leaf label").to_string();
                self.transcript.push(Event::Out(y.clone()));
                return Ok(y);
            }
            let i = self
                .table
                .strategy(&self.node, x)
                .expect("a winning node of a determinate code has one winning input")
                .to_string();
            self.sut.send(&i)?;
            let o = self.sut.receive()?;
            self.transcript.push(Event::Sut {
                input: i.clone(),
                output: o.clone(),
            });
            let next = Label::mealy(i.as_str(), o.as_str())
                .ok()
                .and_then(|l| self.tree.child(&self.node, &l).map(str::to_string));
            match next {
                Some(r) => self.node = r,
                None => {
                    return Err(AdaptorError::CodeIncomplete {
                        node: self.node.clone(),
                        input: i,
                        output: o,
                    })
                }
            }
        }
    }

    pub fn into_parts(self) -> (S, Vec<Event>) {
        (self.sut, self.transcript)
    }
}

/// Outputs and transcript of a completed [`run_adaptor`] call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdaptorRun {
    pub outputs: Vec<String>,
    pub transcript: Vec<Event>,
}

impl AdaptorRun {
    /// Concrete labels exchanged with the SUT, in order.
    pub fn concrete_trace(&self) -> Vec<Label> {
        self.transcript
            .iter()
            .filter_map(|e| match e {
                Event::Sut { input, output } => Label::mealy(input.as_str(), output.as_str()).ok(),
                _ => None,
            })
            .collect()
    }

    /// The abstract `x/y` pairs answered, in order.
    pub fn abstract_trace(&self) -> Vec<Label> {
        let mut out = Vec::new();
        let mut pending = None;
        for e in &self.transcript {
            match e {
                Event::In(x) => pending = Some(x.clone()),
                Event::Out(y) => {
                    if let Some(x) = pending.take() {
                        out.extend(Label::mealy(x, y.as_str()).ok());
                    }
                }
                Event::Sut { .. } => {}
            }
        }
        out
    }
}

/// Runs a session over all of `inputs`, stopping at the first error.
pub fn run_adaptor<S, I>(tree: &CodeTree, sut: S, inputs: I) -> Result<AdaptorRun, AdaptorError>
where
    S: SutEndpoint,
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    let mut session = AdaptorSession::new(tree.clone(), sut)?;
    let mut outputs = Vec::new();
    for x in inputs {
        outputs.push(session.handle(x.as_ref())?);
    }
    let (_, transcript) = session.into_parts();
    Ok(AdaptorRun { outputs, transcript })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adaptor::sut::{InProcessSut, Resolver};
    use crate::fixtures;
    use crate::label::{lab, word};

    fn square_sut() -> InProcessSut {
        InProcessSut::new(fixtures::square_machine(), Resolver::seeded(0)).unwrap()
    }

    #[test]
    fn doubled_code_on_square_machine() {
        let run = run_adaptor(&fixtures::doubled_code().to_tree(), square_sut(), ["A", "B", "A"]).unwrap();
        assert_eq!(run.outputs, ["0", "0", "0"]);
        assert_eq!(run.concrete_trace(), word("a/0.a/0.b/0.b/0.a/0.a/0").labels().to_vec());
        assert_eq!(run.abstract_trace(), vec![lab("A/0"), lab("B/0"), lab("A/0")]);
        let lines: Vec<String> = run.transcript.iter().map(|e| e.to_string()).collect();
        assert_eq!(&lines[..4], ["IN A", "SUT a/0", "SUT a/0", "OUT 0"]);
    }

    #[test]
    fn adaptive_code_on_square_machine() {
        let run = run_adaptor(&fixtures::adaptive_code().to_tree(), square_sut(), ["C"]).unwrap();
        assert_eq!(run.outputs, ["1"]);
        assert_eq!(run.concrete_trace(), word("a/0.b/1").labels().to_vec());
    }

    #[test]
    fn empty_input_stream() {
        let run = run_adaptor(&fixtures::doubled_code().to_tree(), square_sut(), Vec::<String>::new()).unwrap();
        assert!(run.outputs.is_empty());
        assert!(run.transcript.is_empty());
    }

    #[test]
    fn unknown_input_is_not_winning() {
        let err = run_adaptor(&fixtures::doubled_code().to_tree(), square_sut(), ["Z"]).unwrap_err();
        assert_eq!(err, AdaptorError::NotWinning("Z".into()));
    }

    #[test]
    fn non_determinate_code_is_refused() {
        let m = crate::lts::Lts::builder("q")
            .edge("q", "a/0", "q")
            .edge("q", "b/0", "q")
            .build()
            .unwrap();
        let sut = InProcessSut::new(m, Resolver::seeded(0)).unwrap();
        let err = AdaptorSession::new(fixtures::nondeterminate_code().to_tree(), sut)
            .err()
            .unwrap();
        assert!(matches!(err, AdaptorError::Invalid(Error::NotDeterminate { .. })));
    }

    #[test]
    fn unexpected_output_is_reported() {
        // the SUT answers a/1, which the code never mentions
        let m = crate::lts::Lts::builder("q")
            .mealy_alphabet(["a", "b"], ["0", "1"])
            .edge("q", "a/1", "q")
            .edge("q", "b/0", "q")
            .build()
            .unwrap();
        let sut = InProcessSut::new(m, Resolver::seeded(0)).unwrap();
        let err = run_adaptor(&fixtures::doubled_code().to_tree(), sut, ["A"]).unwrap_err();
        assert_eq!(
            err,
            AdaptorError::CodeIncomplete {
                node: "⟨⟩".into(),
                input: "a".into(),
                output: "1".into(),
            }
        );
    }
}
