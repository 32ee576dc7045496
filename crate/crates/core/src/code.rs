//! Action codes: prefix-free partial maps from abstract labels to non-empty
//! concrete words, and their tree-shaped view.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::label::{CompatRel, Label, Word};
use crate::lts::{Lts, StateId, Transition};

/// Renders a code-tree node (a prefix word) as a state id.
pub fn node_id(w: &Word) -> StateId {
    format!("⟨{w}⟩")
}

/// Map-based action code from a concrete alphabet `A` (source) to an
/// abstract alphabet `B` (target).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeMap {
    source: BTreeSet<Label>,
    target: BTreeSet<Label>,
    map: BTreeMap<Label, Word>,
}

impl CodeMap {
    /// Validates a raw entry list.
    ///
    /// Rejects empty words, duplicate abstract labels, labels outside the
    /// alphabets and pairs where one word is a prefix of another.
    pub fn validate(
        source: impl IntoIterator<Item = Label>,
        target: impl IntoIterator<Item = Label>,
        entries: impl IntoIterator<Item = (Label, Word)>,
    ) -> Result<Self> {
        let source: BTreeSet<Label> = source.into_iter().collect();
        let target: BTreeSet<Label> = target.into_iter().collect();
        for alphabet in [&source, &target] {
            if let Some(first) = alphabet.iter().next() {
                if let Some(other) = alphabet.iter().find(|l| !l.same_variant(first)) {
                    return Err(Error::MixedLabels(first.clone(), other.clone()));
                }
            }
        }
        let mut map = BTreeMap::new();
        for (b, w) in entries {
            if !target.contains(&b) {
                return Err(Error::AlphabetMismatch(format!(
                    "abstract label {b} is not in the target alphabet"
                )));
            }
            if w.is_empty() {
                return Err(Error::EmptyWord(b));
            }
            if w.labels().iter().any(|a| !source.contains(a)) {
                return Err(Error::LetterNotInSource { label: b, word: w });
            }
            if map.contains_key(&b) {
                return Err(Error::DuplicateEntry(b));
            }
            map.insert(b, w);
        }
        let code = CodeMap { source, target, map };
        code.check_prefix_free()?;
        Ok(code)
    }

    fn check_prefix_free(&self) -> Result<()> {
        let entries: Vec<(&Label, &Word)> = self.map.iter().collect();
        for (k, (b, u)) in entries.iter().enumerate() {
            for (b2, w) in &entries[k + 1..] {
                if u.is_prefix_of(w) {
                    return Err(Error::PrefixClash((*b).clone(), (*b2).clone()));
                }
                if w.is_prefix_of(u) {
                    return Err(Error::PrefixClash((*b2).clone(), (*b).clone()));
                }
            }
        }
        Ok(())
    }

    pub fn empty(source: BTreeSet<Label>, target: BTreeSet<Label>) -> Self {
        CodeMap {
            source,
            target,
            map: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &BTreeSet<Label> {
        &self.source
    }

    pub fn target(&self) -> &BTreeSet<Label> {
        &self.target
    }

    pub fn get(&self, b: &Label) -> Option<&Word> {
        self.map.get(b)
    }

    pub fn entries(&self) -> &BTreeMap<Label, Word> {
        &self.map
    }

    pub fn domain(&self) -> BTreeSet<&Label> {
        self.map.keys().collect()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Words `w` that are the empty word or a strict prefix of a code word;
    /// these are the internal nodes of the code tree.
    pub fn internal_prefixes(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::from([Word::empty()]);
        for w in self.map.values() {
            for k in 1..w.len() {
                out.insert(Word(w.labels()[..k].to_vec()));
            }
        }
        out
    }

    /// Abstract label whose code word is exactly `w`.
    pub fn decode(&self, w: &Word) -> Option<&Label> {
        self.map.iter().find(|(_, v)| *v == w).map(|(b, _)| b)
    }

    /// The extension `R*` to words: concatenation of the code words of the
    /// letters of `w`, or `None` if a letter is outside the domain.
    pub fn encode_word(&self, w: &Word) -> Option<Word> {
        let mut out = Word::empty();
        for b in w.labels() {
            out = out.concat(self.map.get(b)?);
        }
        Some(out)
    }

    /// Whether every letter of every code word of `inner` is in the domain
    /// of `self`.
    pub fn covers_image_of(&self, inner: &CodeMap) -> bool {
        inner
            .map
            .values()
            .all(|w| w.labels().iter().all(|b| self.map.contains_key(b)))
    }

    /// Whether the only labels used on transitions of `m` are in the domain.
    pub fn covers_lts(&self, m: &Lts) -> bool {
        m.transitions().iter().all(|t| self.map.contains_key(&t.label))
    }

    /// Kleisli composition: `self` maps `B ⇀ A⁺`, `inner` maps `C ⇀ B⁺`,
    /// and the result maps `c` to `self(b₁)···self(bₙ)` when
    /// `inner(c) = b₁···bₙ` and every `bᵢ` is in the domain of `self`.
    pub fn compose(&self, inner: &CodeMap) -> Result<CodeMap> {
        if !inner.source.is_subset(&self.target) {
            return Err(Error::AlphabetMismatch(
                "source alphabet of the inner code is not contained in the target alphabet of the outer code".into(),
            ));
        }
        let entries: Vec<(Label, Word)> = inner
            .map
            .iter()
            .filter_map(|(c, w)| self.encode_word(w).map(|v| (c.clone(), v)))
            .collect();
        CodeMap::validate(self.source.clone(), inner.target.clone(), entries)
    }

    /// Builds the unique grounded code tree for this map.
    pub fn to_tree(&self) -> CodeTree {
        let mut states = BTreeSet::new();
        let mut transitions = BTreeSet::new();
        let mut leaves = BTreeMap::new();
        states.insert(node_id(&Word::empty()));
        for (b, w) in &self.map {
            let mut prefix = Word::empty();
            for a in w.labels() {
                let next = prefix.pushed(a.clone());
                states.insert(node_id(&next));
                transitions.insert(Transition {
                    source: node_id(&prefix),
                    label: a.clone(),
                    target: node_id(&next),
                });
                prefix = next;
            }
            leaves.insert(node_id(w), b.clone());
        }
        let tree = Lts::new(states, node_id(&Word::empty()), transitions, self.source.clone())
            .expect("prefix tree is well formed");
        CodeTree::new(tree, leaves, self.target.clone()).expect("prefix tree of a valid code is a code tree")
    }
}

/// Tree-shaped action code: a deterministic, tree-shaped, grounded LTS over
/// the concrete alphabet whose non-root leaves carry distinct abstract labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeTree {
    tree: Lts,
    leaf_labels: BTreeMap<StateId, Label>,
    target: BTreeSet<Label>,
}

impl CodeTree {
    pub fn new(tree: Lts, leaf_labels: BTreeMap<StateId, Label>, target: BTreeSet<Label>) -> Result<Self> {
        let invalid = |why: String| Err(Error::InvalidTree(why));
        if !tree.is_deterministic(&CompatRel::Identity)? {
            return invalid("not deterministic".into());
        }
        let shape = tree.structure();
        if !shape.tree_shaped {
            return invalid("not tree-shaped".into());
        }
        if !shape.grounded {
            return invalid("not grounded".into());
        }
        if tree.reachable_states().len() != tree.states().len() {
            return invalid("has unreachable states".into());
        }
        let mut non_root_leaves = shape.leaves.clone();
        non_root_leaves.remove(tree.initial());
        let labelled: BTreeSet<StateId> = leaf_labels.keys().cloned().collect();
        if labelled.contains(tree.initial()) {
            return invalid("the root carries a label".into());
        }
        if labelled != non_root_leaves {
            return invalid("labelled states differ from the non-root leaves".into());
        }
        let distinct: BTreeSet<&Label> = leaf_labels.values().collect();
        if distinct.len() != leaf_labels.len() {
            return invalid("leaf labelling is not injective".into());
        }
        if let Some(b) = leaf_labels.values().find(|b| !target.contains(b)) {
            return invalid(format!("leaf label {b} is outside the target alphabet"));
        }
        Ok(CodeTree {
            tree,
            leaf_labels,
            target,
        })
    }

    pub fn lts(&self) -> &Lts {
        &self.tree
    }

    pub fn root(&self) -> &str {
        self.tree.initial()
    }

    pub fn source(&self) -> &BTreeSet<Label> {
        self.tree.alphabet()
    }

    pub fn target(&self) -> &BTreeSet<Label> {
        &self.target
    }

    pub fn leaf_labels(&self) -> &BTreeMap<StateId, Label> {
        &self.leaf_labels
    }

    pub fn leaf_label(&self, node: &str) -> Option<&Label> {
        self.leaf_labels.get(node)
    }

    pub fn is_leaf(&self, node: &str) -> bool {
        self.tree.outgoing(node).is_empty()
    }

    pub fn children(&self, node: &str) -> &[(Label, StateId)] {
        self.tree.outgoing(node)
    }

    pub fn child(&self, node: &str, a: &Label) -> Option<&str> {
        self.children(node)
            .iter()
            .find(|(l, _)| l == a)
            .map(|(_, t)| t.as_str())
    }

    /// Reads the map back off the tree: each leaf's label maps to the word
    /// spelled by its root path.
    pub fn to_map(&self) -> CodeMap {
        let mut entries = Vec::new();
        let mut stack = vec![(self.root().to_string(), Word::empty())];
        while let Some((node, w)) = stack.pop() {
            if let Some(b) = self.leaf_labels.get(&node) {
                entries.push((b.clone(), w.clone()));
            }
            for (a, child) in self.children(&node) {
                stack.push((child.clone(), w.pushed(a.clone())));
            }
        }
        CodeMap::validate(self.source().clone(), self.target.clone(), entries)
            .expect("a code tree spells a prefix-free map")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::label::{lab, word};

    fn atoms(xs: &[&str]) -> BTreeSet<Label> {
        xs.iter().map(|x| lab(x)).collect()
    }

    #[test]
    fn ascii_fragment_is_valid() {
        let code = fixtures::ascii_code();
        assert_eq!(code.len(), 5);
        assert_eq!(code.get(&lab("M")), Some(&word("1.1.5")));
    }

    #[test]
    fn empty_code_is_valid() {
        let code = CodeMap::validate(atoms(&["a"]), atoms(&["A"]), []).unwrap();
        assert!(code.is_empty());
        let tree = code.to_tree();
        assert_eq!(tree.lts().states().len(), 1);
        assert!(tree.lts().transitions().is_empty());
        assert_eq!(tree.to_map(), code);
    }

    #[test]
    fn prefix_clash_and_empty_word() {
        let r = CodeMap::validate(
            atoms(&["a", "b"]),
            atoms(&["A", "B"]),
            [(lab("A"), word("a")), (lab("B"), word("a.b"))],
        );
        assert_eq!(r, Err(Error::PrefixClash(lab("A"), lab("B"))));
        let r = CodeMap::validate(
            atoms(&["a", "b"]),
            atoms(&["A", "B"]),
            [(lab("B"), word("a")), (lab("A"), word("a.b"))],
        );
        assert_eq!(r, Err(Error::PrefixClash(lab("B"), lab("A"))));
        let r = CodeMap::validate(atoms(&["a"]), atoms(&["A"]), [(lab("A"), Word::empty())]);
        assert_eq!(r, Err(Error::EmptyWord(lab("A"))));
        let r = CodeMap::validate(
            atoms(&["a"]),
            atoms(&["A", "B"]),
            [(lab("A"), word("a")), (lab("B"), word("a"))],
        );
        assert!(matches!(r, Err(Error::PrefixClash(..))));
        let r = CodeMap::validate(atoms(&["a"]), atoms(&["A"]), [(lab("A"), word("b"))]);
        assert!(matches!(r, Err(Error::LetterNotInSource { .. })));
    }

    #[test]
    fn ascii_tree_has_eleven_nodes() {
        let tree = fixtures::ascii_code().to_tree();
        assert_eq!(tree.lts().states().len(), 11);
        let s = tree.lts().structure();
        assert!(s.tree_shaped && s.grounded);
        assert_eq!(s.leaves.len(), 5);
        assert_eq!(tree.leaf_label("⟨1.4.1⟩"), Some(&lab("a")));
        assert_eq!(tree.to_map(), fixtures::ascii_code());
    }

    #[test]
    fn adaptive_code_tree_reads_back() {
        let tree = fixtures::adaptive_code().to_tree();
        let map = tree.to_map();
        assert_eq!(map.get(&lab("B/0")), Some(&word("b/0")));
        assert_eq!(map.get(&lab("C/0")), Some(&word("a/0.b/0")));
        assert_eq!(map.get(&lab("C/1")), Some(&word("a/0.b/1")));
    }

    #[test]
    fn invalid_trees_are_rejected() {
        let tree = Lts::builder("r")
            .edge("r", "a", "x")
            .edge("r", "b", "y")
            .build()
            .unwrap();
        let target = atoms(&["X", "Y"]);
        // missing label on a leaf
        let one: BTreeMap<_, _> = [("x".to_string(), lab("X"))].into();
        assert!(matches!(
            CodeTree::new(tree.clone(), one, target.clone()),
            Err(Error::InvalidTree(_))
        ));
        // non-injective
        let dup: BTreeMap<_, _> = [("x".to_string(), lab("X")), ("y".to_string(), lab("X"))].into();
        assert!(matches!(
            CodeTree::new(tree.clone(), dup, target.clone()),
            Err(Error::InvalidTree(_))
        ));
        // cycle
        let cyc = Lts::builder("r")
            .edge("r", "a", "s")
            .edge("s", "a", "r")
            .build()
            .unwrap();
        assert!(matches!(
            CodeTree::new(cyc, BTreeMap::new(), target.clone()),
            Err(Error::InvalidTree(_))
        ));
        // nondeterministic
        let nd = Lts::builder("r")
            .edge("r", "a", "x")
            .edge("r", "a", "y")
            .build()
            .unwrap();
        let both: BTreeMap<_, _> = [("x".to_string(), lab("X")), ("y".to_string(), lab("Y"))].into();
        assert!(matches!(CodeTree::new(nd, both, target), Err(Error::InvalidTree(_))));
    }

    #[test]
    fn composition_examples() {
        // unit: singleton words
        let r = CodeMap::validate(atoms(&["a"]), atoms(&["b"]), [(lab("b"), word("a.a"))]).unwrap();
        let s = CodeMap::validate(atoms(&["b"]), atoms(&["c"]), [(lab("c"), word("b"))]).unwrap();
        assert_eq!(r.compose(&s).unwrap().get(&lab("c")), Some(&word("a.a")));
        // empty inner code
        let empty = CodeMap::empty(atoms(&["b"]), atoms(&["c"]));
        assert!(r.compose(&empty).unwrap().is_empty());
        // hand evaluation: c ↦ b1·b2 ↦ a1·a2·a1
        let r = CodeMap::validate(
            atoms(&["a1", "a2"]),
            atoms(&["b1", "b2"]),
            [(lab("b1"), word("a1")), (lab("b2"), word("a2.a1"))],
        )
        .unwrap();
        let s = CodeMap::validate(atoms(&["b1", "b2"]), atoms(&["c"]), [(lab("c"), word("b1.b2"))]).unwrap();
        let rs = r.compose(&s).unwrap();
        assert_eq!(rs.get(&lab("c")), Some(&word("a1.a2.a1")));
        assert!(CodeMap::validate(rs.source().clone(), rs.target().clone(), rs.entries().clone()).is_ok());
    }

    #[test]
    fn composition_drops_undefined_letters() {
        let r = CodeMap::validate(atoms(&["a"]), atoms(&["b1", "b2"]), [(lab("b1"), word("a"))]).unwrap();
        let s = CodeMap::validate(
            atoms(&["b1", "b2"]),
            atoms(&["c1", "c2"]),
            [(lab("c1"), word("b1.b1")), (lab("c2"), word("b2"))],
        )
        .unwrap();
        let rs = r.compose(&s).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs.get(&lab("c1")), Some(&word("a.a")));
    }

    #[test]
    fn composition_alphabet_mismatch() {
        let r = CodeMap::validate(atoms(&["a"]), atoms(&["b"]), []).unwrap();
        let s = CodeMap::validate(atoms(&["z"]), atoms(&["c"]), []).unwrap();
        assert!(matches!(r.compose(&s), Err(Error::AlphabetMismatch(_))));
    }
}
