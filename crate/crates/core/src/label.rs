//! Action labels, words over them, and compatibility relations between labels.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Checks that `s` can be used as an action symbol.
///
/// Besides whitespace and `/` (reserved for Mealy labels), `.`, `⟨` and `⟩`
/// are rejected because composite state names embed rendered words.
pub fn validate_symbol(s: &str) -> Result<()> {
    let bad = |c: char| c.is_whitespace() || matches!(c, '/' | '.' | '⟨' | '⟩');
    if s.is_empty() || s.chars().any(bad) {
        return Err(Error::InvalidSymbol(s.to_string()));
    }
    Ok(())
}

/// An action label: either an atomic symbol or an input/output pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Atomic(String),
    Mealy { input: String, output: String },
}

impl Label {
    pub fn atomic(symbol: impl Into<String>) -> Result<Self> {
        let symbol = symbol.into();
        validate_symbol(&symbol)?;
        Ok(Label::Atomic(symbol))
    }

    pub fn mealy(input: impl Into<String>, output: impl Into<String>) -> Result<Self> {
        let (input, output) = (input.into(), output.into());
        validate_symbol(&input)?;
        validate_symbol(&output)?;
        Ok(Label::Mealy { input, output })
    }

    pub fn is_mealy(&self) -> bool {
        matches!(self, Label::Mealy { .. })
    }

    /// Input component of a Mealy label.
    pub fn input(&self) -> Option<&str> {
        match self {
            Label::Mealy { input, .. } => Some(input),
            Label::Atomic(_) => None,
        }
    }

    /// Output component of a Mealy label.
    pub fn output(&self) -> Option<&str> {
        match self {
            Label::Mealy { output, .. } => Some(output),
            Label::Atomic(_) => None,
        }
    }

    pub(crate) fn same_variant(&self, other: &Label) -> bool {
        self.is_mealy() == other.is_mealy()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atomic(s) => f.write_str(s),
            Label::Mealy { input, output } => write!(f, "{input}/{output}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    /// `"i/o"` parses as a Mealy label, anything else as an atomic one.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((i, o)) => Label::mealy(i, o).map_err(|_| Error::InvalidLabel(s.to_string())),
            None => Label::atomic(s).map_err(|_| Error::InvalidLabel(s.to_string())),
        }
    }
}

/// Parses a label, panicking on malformed input. Intended for literals in
/// tests and examples.
pub fn lab(s: &str) -> Label {
    s.parse().unwrap_or_else(|e| panic!("bad label literal {s:?}: {e}"))
}

/// A finite word over labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Label>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    /// `self ≤ other` in the prefix order.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn push(&mut self, label: Label) {
        self.0.push(label);
    }

    pub fn pushed(&self, label: Label) -> Word {
        let mut w = self.clone();
        w.push(label);
        w
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    /// Parses labels separated by `.` or whitespace; the empty string and `ε`
    /// denote the empty word.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(Word::empty());
        }
        s.split(|c: char| c == '.' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromIterator<Label> for Word {
    fn from_iter<T: IntoIterator<Item = Label>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Parses a dot-separated word literal, panicking on malformed input.
pub fn word(s: &str) -> Word {
    Word::parse(s).unwrap_or_else(|e| panic!("bad word literal {s:?}: {e}"))
}

/// A reflexive relation on concrete labels telling which actions count as
/// "similar". It parameterizes concretization, I-completeness and the
/// relation-parametric notion of determinism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompatRel {
    /// Only `a ~ a`.
    Identity,
    /// `(i, o) ~ (i', o')` iff `i = i'`. Mealy labels only.
    SameInput,
    /// The reflexive closure of the given pairs.
    Explicit(BTreeSet<(Label, Label)>),
}

impl CompatRel {
    pub fn related(&self, a: &Label, b: &Label) -> bool {
        if a == b {
            return true;
        }
        match self {
            CompatRel::Identity => false,
            CompatRel::SameInput => match (a.input(), b.input()) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            },
            CompatRel::Explicit(pairs) => pairs.contains(&(a.clone(), b.clone())),
        }
    }

    /// Checks that the relation can be used over `carrier`.
    pub fn check_carrier(&self, carrier: &BTreeSet<Label>) -> Result<()> {
        match self {
            CompatRel::Identity => Ok(()),
            CompatRel::SameInput => {
                if carrier.iter().all(Label::is_mealy) {
                    Ok(())
                } else {
                    Err(Error::NotMealy("same-input"))
                }
            }
            CompatRel::Explicit(pairs) => {
                for (a, b) in pairs {
                    if !carrier.contains(a) || !carrier.contains(b) {
                        return Err(Error::AlphabetMismatch(format!(
                            "relation pair ({a}, {b}) is outside the alphabet"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Labels of `carrier` related to `a`, including `a` itself.
    pub fn related_in<'a>(
        &'a self,
        a: &'a Label,
        carrier: &'a BTreeSet<Label>,
    ) -> impl Iterator<Item = &'a Label> + 'a {
        carrier.iter().filter(move |b| self.related(a, b))
    }
}

impl FromStr for CompatRel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(CompatRel::Identity),
            "same-input" => Ok(CompatRel::SameInput),
            other => Err(Error::AlphabetMismatch(format!(
                "unknown relation {other:?} (expected identity or same-input)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_renders_labels() {
        assert_eq!(lab("a/0"), Label::mealy("a", "0").unwrap());
        assert_eq!(lab("a/0").to_string(), "a/0");
        assert_eq!(lab("M"), Label::Atomic("M".into()));
        assert!("a/b/c".parse::<Label>().is_err());
        assert!("".parse::<Label>().is_err());
        assert!("a b".parse::<Label>().is_err());
        assert!("a.b".parse::<Label>().is_err());
        assert!("/0".parse::<Label>().is_err());
    }

    #[test]
    fn word_prefix_order() {
        let w = word("1.4.1");
        assert!(word("1.4").is_prefix_of(&w));
        assert!(Word::empty().is_prefix_of(&w));
        assert!(w.is_prefix_of(&w));
        assert!(!word("1.5").is_prefix_of(&w));
        assert_eq!(w.to_string(), "1.4.1");
        assert_eq!(word("ε"), Word::empty());
    }

    #[test]
    fn same_input_relation() {
        let r = CompatRel::SameInput;
        assert!(r.related(&lab("a/0"), &lab("a/1")));
        assert!(!r.related(&lab("a/0"), &lab("b/0")));
        assert!(CompatRel::Identity.related(&lab("x"), &lab("x")));
        assert!(!CompatRel::Identity.related(&lab("a/0"), &lab("a/1")));
        let atomic: BTreeSet<_> = [lab("x")].into();
        assert!(r.check_carrier(&atomic).is_err());
    }

    #[test]
    fn explicit_relation_is_reflexive_closure() {
        let r = CompatRel::Explicit([(lab("x"), lab("y"))].into());
        assert!(r.related(&lab("x"), &lab("y")));
        assert!(!r.related(&lab("y"), &lab("x")));
        assert!(r.related(&lab("z"), &lab("z")));
        let carrier: BTreeSet<_> = [lab("x")].into();
        assert!(matches!(r.check_carrier(&carrier), Err(Error::AlphabetMismatch(_))));
    }
}
