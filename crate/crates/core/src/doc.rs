//! JSON documents for transition systems and codes.
//!
//! Rendering is canonical: alphabets, states and transitions are sorted by
//! their string form, so equal values always serialize to identical bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeMap, CodeTree};
use crate::error::Error;
use crate::label::{Label, Word};
use crate::lts::{Lts, Transition};

pub const LTS_SCHEMA: &str = "actcode/lts@1";
pub const CODE_SCHEMA: &str = "actcode/code@1";
pub const TREE_SCHEMA: &str = "actcode/code-tree@1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl From<serde_json::Error> for DocError {
    fn from(e: serde_json::Error) -> Self {
        DocError::Json(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LtsDocument {
    pub schema: String,
    pub kind: String,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub transitions: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeEntry {
    #[serde(rename = "abstract")]
    pub abstract_label: String,
    pub concrete: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeDocument {
    pub schema: String,
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub entries: Vec<CodeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeTreeDocument {
    pub schema: String,
    pub target: Vec<String>,
    pub tree: LtsDocument,
    pub leaves: BTreeMap<String, String>,
}

fn sorted_strings<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Vec<String> {
    let mut v: Vec<String> = labels.into_iter().map(Label::to_string).collect();
    v.sort();
    v
}

fn parse_labels(xs: &[String]) -> Result<BTreeSet<Label>, DocError> {
    xs.iter().map(|s| s.parse::<Label>().map_err(DocError::from)).collect()
}

fn check_schema(found: &str, expected: &str) -> Result<(), DocError> {
    if found == expected {
        Ok(())
    } else {
        Err(DocError::Schema(format!(
            "expected schema {expected:?}, found {found:?}"
        )))
    }
}

impl LtsDocument {
    pub fn from_lts(m: &Lts) -> Self {
        let mut transitions: Vec<(String, String, String)> = m
            .transitions()
            .iter()
            .map(|t| (t.source.clone(), t.label.to_string(), t.target.clone()))
            .collect();
        transitions.sort();
        LtsDocument {
            schema: LTS_SCHEMA.to_string(),
            kind: if m.is_mealy() { "mealy" } else { "lts" }.to_string(),
            alphabet: sorted_strings(m.alphabet()),
            states: m.states().iter().cloned().collect(),
            initial: m.initial().to_string(),
            transitions,
        }
    }

    pub fn to_lts(&self) -> Result<Lts, DocError> {
        check_schema(&self.schema, LTS_SCHEMA)?;
        let alphabet = parse_labels(&self.alphabet)?;
        let mealy = match self.kind.as_str() {
            "mealy" => true,
            "lts" => false,
            other => return Err(DocError::Schema(format!("unknown kind {other:?}"))),
        };
        if let Some(l) = alphabet.iter().find(|l| l.is_mealy() != mealy) {
            return Err(DocError::Schema(format!(
                "label {l} does not match kind {:?}",
                self.kind
            )));
        }
        let transitions = self
            .transitions
            .iter()
            .map(|(s, l, t)| {
                Ok(Transition {
                    source: s.clone(),
                    label: l.parse()?,
                    target: t.clone(),
                })
            })
            .collect::<Result<Vec<_>, DocError>>()?;
        let declared: BTreeSet<&String> = self.states.iter().collect();
        if let Some(t) = transitions
            .iter()
            .find(|t| !declared.contains(&t.source) || !declared.contains(&t.target))
        {
            return Err(DocError::Schema(format!(
                "transition {} --{}--> {} uses an undeclared state",
                t.source, t.label, t.target
            )));
        }
        Ok(Lts::new(
            self.states.iter().cloned(),
            self.initial.clone(),
            transitions,
            alphabet,
        )?)
    }
}

impl CodeDocument {
    pub fn from_code(code: &CodeMap) -> Self {
        let mut entries: Vec<CodeEntry> = code
            .entries()
            .iter()
            .map(|(b, w)| CodeEntry {
                abstract_label: b.to_string(),
                concrete: w.labels().iter().map(Label::to_string).collect(),
            })
            .collect();
        entries.sort_by(|a, b| a.abstract_label.cmp(&b.abstract_label));
        CodeDocument {
            schema: CODE_SCHEMA.to_string(),
            source: sorted_strings(code.source()),
            target: sorted_strings(code.target()),
            entries,
        }
    }

    pub fn to_code(&self) -> Result<CodeMap, DocError> {
        check_schema(&self.schema, CODE_SCHEMA)?;
        let source = parse_labels(&self.source)?;
        let target = parse_labels(&self.target)?;
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let b: Label = e.abstract_label.parse()?;
                let w = e
                    .concrete
                    .iter()
                    .map(|s| s.parse::<Label>())
                    .collect::<Result<Word, Error>>()?;
                Ok((b, w))
            })
            .collect::<Result<Vec<_>, DocError>>()?;
        Ok(CodeMap::validate(source, target, entries)?)
    }
}

impl CodeTreeDocument {
    pub fn from_tree(tree: &CodeTree) -> Self {
        CodeTreeDocument {
            schema: TREE_SCHEMA.to_string(),
            target: sorted_strings(tree.target()),
            tree: LtsDocument::from_lts(tree.lts()),
            leaves: tree
                .leaf_labels()
                .iter()
                .map(|(r, b)| (r.clone(), b.to_string()))
                .collect(),
        }
    }

    pub fn to_tree(&self) -> Result<CodeTree, DocError> {
        check_schema(&self.schema, TREE_SCHEMA)?;
        let lts = self.tree.to_lts()?;
        let leaves = self
            .leaves
            .iter()
            .map(|(r, b)| Ok((r.clone(), b.parse::<Label>()?)))
            .collect::<Result<BTreeMap<_, _>, DocError>>()?;
        Ok(CodeTree::new(lts, leaves, parse_labels(&self.target)?)?)
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn render_lts(m: &Lts) -> String {
    pretty(&LtsDocument::from_lts(m))
}

pub fn parse_lts(text: &str) -> Result<Lts, DocError> {
    serde_json::from_str::<LtsDocument>(text)?.to_lts()
}

pub fn render_code(code: &CodeMap) -> String {
    pretty(&CodeDocument::from_code(code))
}

pub fn parse_code(text: &str) -> Result<CodeMap, DocError> {
    serde_json::from_str::<CodeDocument>(text)?.to_code()
}

pub fn render_tree(tree: &CodeTree) -> String {
    pretty(&CodeTreeDocument::from_tree(tree))
}

pub fn parse_tree(text: &str) -> Result<CodeTree, DocError> {
    serde_json::from_str::<CodeTreeDocument>(text)?.to_tree()
}

/// Parses either a code document or a code-tree document, telling them
/// apart by their schema tag.
pub fn parse_any_code(text: &str) -> Result<CodeMap, DocError> {
    #[derive(Deserialize)]
    struct Probe {
        schema: String,
    }
    let probe: Probe = serde_json::from_str(text)?;
    match probe.schema.as_str() {
        TREE_SCHEMA => Ok(parse_tree(text)?.to_map()),
        _ => parse_code(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn lts_round_trip_is_byte_stable() {
        for m in [
            fixtures::square_machine(),
            fixtures::naive_choice_refinement(),
            fixtures::doubled_concretization(),
        ] {
            let text = render_lts(&m);
            let back = parse_lts(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(render_lts(&back), text);
        }
    }

    #[test]
    fn code_round_trip() {
        for code in [
            fixtures::ascii_code(),
            fixtures::coffee_code(),
            fixtures::adaptive_code(),
        ] {
            let text = render_code(&code);
            assert_eq!(parse_code(&text).unwrap(), code);
            let tree_text = render_tree(&code.to_tree());
            assert_eq!(parse_tree(&tree_text).unwrap().to_map(), code);
            assert_eq!(parse_any_code(&tree_text).unwrap(), code);
        }
    }

    #[test]
    fn canonical_order_ignores_input_order() {
        let text = r#"{"schema":"actcode/lts@1","kind":"lts","alphabet":["b","a"],
            "states":["y","x"],"initial":"x","transitions":[["y","b","x"],["x","a","y"]]}"#;
        let m = parse_lts(text).unwrap();
        let canon = render_lts(&m);
        assert_eq!(render_lts(&parse_lts(&canon).unwrap()), canon);
        assert!(canon.find("\"a\"").unwrap() < canon.find("\"b\"").unwrap());
    }

    #[test]
    fn validation_errors_surface() {
        let text = r#"{"schema":"actcode/code@1","source":["a","b"],"target":["A","B"],
            "entries":[{"abstract":"A","concrete":["a"]},{"abstract":"B","concrete":["a","b"]}]}"#;
        let err = parse_code(text).unwrap_err();
        assert_eq!(
            err,
            DocError::Invalid(Error::PrefixClash(crate::label::lab("A"), crate::label::lab("B")))
        );
        assert!(matches!(parse_lts("{"), Err(DocError::Json(_))));
        let wrong_kind = r#"{"schema":"actcode/lts@1","kind":"mealy","alphabet":["a"],"states":["x"],"initial":"x","transitions":[]}"#;
        assert!(matches!(parse_lts(wrong_kind), Err(DocError::Schema(_))));
        let undeclared = r#"{"schema":"actcode/lts@1","kind":"lts","alphabet":["a"],"states":["x"],"initial":"x","transitions":[["x","a","y"]]}"#;
        assert!(matches!(parse_lts(undeclared), Err(DocError::Schema(_))));
    }
}
