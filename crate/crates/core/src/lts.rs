//! Finite labeled transition systems and Mealy machines.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::label::{CompatRel, Label, Word};

pub type StateId = String;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: StateId,
    pub label: Label,
    pub target: StateId,
}

/// A rooted LTS with an explicit alphabet.
///
/// Values are immutable once built; every constructor checks that the
/// initial state and all transition endpoints are declared, that every
/// transition label is in the alphabet, and that atomic and Mealy labels are
/// not mixed. Duplicate transitions collapse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lts {
    states: BTreeSet<StateId>,
    initial: StateId,
    transitions: BTreeSet<Transition>,
    alphabet: BTreeSet<Label>,
    out: BTreeMap<StateId, Vec<(Label, StateId)>>,
}

/// Result of [`Lts::structure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub tree_shaped: bool,
    pub grounded: bool,
    pub leaves: BTreeSet<StateId>,
}

impl Lts {
    pub fn new(
        states: impl IntoIterator<Item = StateId>,
        initial: impl Into<StateId>,
        transitions: impl IntoIterator<Item = Transition>,
        alphabet: impl IntoIterator<Item = Label>,
    ) -> Result<Self> {
        let mut states: BTreeSet<StateId> = states.into_iter().collect();
        let initial = initial.into();
        let transitions: BTreeSet<Transition> = transitions.into_iter().collect();
        let alphabet: BTreeSet<Label> = alphabet.into_iter().collect();

        if !states.contains(&initial) {
            return Err(Error::UnknownInitial(initial));
        }
        if let Some(first) = alphabet.iter().next() {
            if let Some(other) = alphabet.iter().find(|l| !l.same_variant(first)) {
                return Err(Error::MixedLabels(first.clone(), other.clone()));
            }
        }
        for t in &transitions {
            if !alphabet.contains(&t.label) {
                return Err(Error::LabelNotInAlphabet {
                    source_state: t.source.clone(),
                    label: t.label.clone(),
                    target: t.target.clone(),
                });
            }
            // endpoints are implicitly declared
            states.insert(t.source.clone());
            states.insert(t.target.clone());
        }
        let mut out: BTreeMap<StateId, Vec<(Label, StateId)>> = BTreeMap::new();
        for t in &transitions {
            out.entry(t.source.clone())
                .or_default()
                .push((t.label.clone(), t.target.clone()));
        }
        Ok(Lts {
            states,
            initial,
            transitions,
            alphabet,
            out,
        })
    }

    pub fn builder(initial: impl Into<StateId>) -> LtsBuilder {
        LtsBuilder::new(initial)
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn alphabet(&self) -> &BTreeSet<Label> {
        &self.alphabet
    }

    pub fn has_transition(&self, source: &str, label: &Label, target: &str) -> bool {
        self.outgoing(source).iter().any(|(l, t)| l == label && t == target)
    }

    /// Outgoing `(label, target)` pairs of `q`, sorted.
    pub fn outgoing(&self, q: &str) -> &[(Label, StateId)] {
        self.out.get(q).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn successors<'a>(&'a self, q: &str, label: &'a Label) -> impl Iterator<Item = &'a str> + 'a {
        self.outgoing(q)
            .iter()
            .filter(move |(l, _)| l == label)
            .map(|(_, t)| t.as_str())
    }

    /// All `q'` with `q ⇒w q'`.
    pub fn run(&self, q: &str, w: &Word) -> BTreeSet<StateId> {
        let mut current: BTreeSet<StateId> = [q.to_string()].into();
        for a in w.labels() {
            current = current
                .iter()
                .flat_map(|p| self.successors(p, a).map(str::to_string).collect::<Vec<_>>())
                .collect();
            if current.is_empty() {
                break;
            }
        }
        current
    }

    pub fn is_mealy(&self) -> bool {
        self.alphabet.iter().next().is_some_and(Label::is_mealy)
    }

    /// Input symbols occurring in a Mealy alphabet.
    pub fn inputs(&self) -> BTreeSet<String> {
        self.alphabet
            .iter()
            .filter_map(|l| l.input().map(str::to_string))
            .collect()
    }

    /// Output symbols occurring in a Mealy alphabet.
    pub fn outputs(&self) -> BTreeSet<String> {
        self.alphabet
            .iter()
            .filter_map(|l| l.output().map(str::to_string))
            .collect()
    }

    /// States reachable from the initial state, the initial state included.
    pub fn reachable_states(&self) -> BTreeSet<StateId> {
        let mut seen: BTreeSet<StateId> = [self.initial.clone()].into();
        let mut queue = VecDeque::from([self.initial.as_str()]);
        while let Some(q) = queue.pop_front() {
            for (_, t) in self.outgoing(q) {
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// The same system restricted to its reachable states.
    pub fn restrict_reachable(&self) -> Lts {
        let reach = self.reachable_states();
        let transitions = self.transitions.iter().filter(|t| reach.contains(&t.source)).cloned();
        Lts::new(reach.clone(), self.initial.clone(), transitions, self.alphabet.clone())
            .expect("restriction of a well-formed system is well formed")
    }

    /// Relation-parametric determinism: whenever `q --a--> q1`,
    /// `q --a'--> q2` and `a ~ a'`, then `a = a'` and `q1 = q2`.
    ///
    /// With [`CompatRel::Identity`] this is ordinary determinism, with
    /// [`CompatRel::SameInput`] it is output determinism of a Mealy machine.
    pub fn is_deterministic(&self, rel: &CompatRel) -> Result<bool> {
        rel.check_carrier(&self.alphabet)?;
        for edges in self.out.values() {
            for (k, (a, q1)) in edges.iter().enumerate() {
                for (b, q2) in &edges[k + 1..] {
                    if rel.related(a, b) || rel.related(b, a) {
                        // the pair differs in label or target (the set has no duplicates)
                        debug_assert!(a != b || q1 != q2);
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// All traces of length at most `k`; always contains the empty word.
    pub fn traces_up_to(&self, k: usize) -> BTreeSet<Word> {
        let mut traces = BTreeSet::from([Word::empty()]);
        let mut layer: BTreeMap<Word, BTreeSet<&str>> =
            BTreeMap::from([(Word::empty(), BTreeSet::from([self.initial.as_str()]))]);
        for _ in 0..k {
            let mut next: BTreeMap<Word, BTreeSet<&str>> = BTreeMap::new();
            for (w, qs) in &layer {
                for q in qs {
                    for (a, t) in self.outgoing(q) {
                        next.entry(w.pushed(a.clone())).or_default().insert(t);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            traces.extend(next.keys().cloned());
            layer = next;
        }
        traces
    }

    /// Tree shape, groundedness and leaves of the reachable part.
    pub fn structure(&self) -> Structure {
        let reach = self.reachable_states();
        let mut indegree: BTreeMap<&str, usize> = reach.iter().map(|q| (q.as_str(), 0)).collect();
        for t in &self.transitions {
            if reach.contains(&t.source) {
                *indegree.get_mut(t.target.as_str()).expect("target reachable") += 1;
            }
        }
        let tree_shaped = indegree
            .iter()
            .all(|(q, &d)| if *q == self.initial { d == 0 } else { d == 1 });

        let leaves: BTreeSet<StateId> = reach.iter().filter(|q| self.outgoing(q).is_empty()).cloned().collect();

        // backward search from the leaves
        let mut preds: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for t in &self.transitions {
            preds.entry(t.target.as_str()).or_default().push(t.source.as_str());
        }
        let mut grounded_set: BTreeSet<&str> = leaves.iter().map(String::as_str).collect();
        let mut queue: VecDeque<&str> = grounded_set.iter().copied().collect();
        while let Some(q) = queue.pop_front() {
            for p in preds.get(q).into_iter().flatten() {
                if grounded_set.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        let grounded = reach.iter().all(|q| grounded_set.contains(q.as_str()));

        Structure {
            tree_shaped,
            grounded,
            leaves,
        }
    }

    /// Whether every reachable state enables every input of `inputs`.
    pub fn first_disabled_input(&self, inputs: &BTreeSet<String>) -> Option<(StateId, String)> {
        for q in self.reachable_states() {
            for i in inputs {
                if !self.outgoing(&q).iter().any(|(l, _)| l.input() == Some(i)) {
                    return Some((q, i.clone()));
                }
            }
        }
        None
    }

    pub(crate) fn graph(&self) -> Graph<'_> {
        Graph::new(self)
    }
}

/// One line naming the initial state, then one line per reachable
/// transition in sorted order.
impl fmt::Display for Lts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "initial {}", self.initial)?;
        let reachable = self.reachable_states();
        for t in self.transitions.iter().filter(|t| reachable.contains(&t.source)) {
            writeln!(f, "  {} --{}--> {}", t.source, t.label, t.target)?;
        }
        Ok(())
    }
}

/// Dense index over the reachable part of an [`Lts`], used by the deciders.
pub(crate) struct Graph<'a> {
    pub ids: Vec<&'a str>,
    /// Outgoing edges per state, labels by reference.
    pub succ: Vec<Vec<(&'a Label, usize)>>,
    pub pred: Vec<Vec<(&'a Label, usize)>>,
}

impl<'a> Graph<'a> {
    fn new(lts: &'a Lts) -> Self {
        // BFS order from the initial state, so index 0 is the initial state
        let mut ids = vec![lts.initial()];
        let mut index = HashMap::from([(lts.initial(), 0)]);
        let mut k = 0;
        while k < ids.len() {
            for (_, t) in lts.outgoing(ids[k]) {
                if !index.contains_key(t.as_str()) {
                    index.insert(t.as_str(), ids.len());
                    ids.push(t.as_str());
                }
            }
            k += 1;
        }
        let mut succ = vec![Vec::new(); ids.len()];
        let mut pred = vec![Vec::new(); ids.len()];
        for (p, q) in ids.iter().enumerate() {
            for (l, t) in lts.outgoing(q) {
                let ti = index[t.as_str()];
                succ[p].push((l, ti));
                pred[ti].push((l, p));
            }
        }
        Graph { ids, succ, pred }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }
}

/// Incremental construction of an [`Lts`] from string literals.
///
/// Labels are parsed with [`Label::from_str`](std::str::FromStr); the first
/// parse error is reported by [`LtsBuilder::build`]. The alphabet is the
/// union of the explicitly added labels and the labels used on edges.
#[derive(Debug, Clone)]
pub struct LtsBuilder {
    initial: StateId,
    states: BTreeSet<StateId>,
    transitions: Vec<Transition>,
    alphabet: BTreeSet<Label>,
    error: Option<Error>,
}

impl LtsBuilder {
    pub fn new(initial: impl Into<StateId>) -> Self {
        let initial = initial.into();
        LtsBuilder {
            states: [initial.clone()].into(),
            initial,
            transitions: Vec::new(),
            alphabet: BTreeSet::new(),
            error: None,
        }
    }

    pub fn state(mut self, q: impl Into<StateId>) -> Self {
        self.states.insert(q.into());
        self
    }

    pub fn label(mut self, l: &str) -> Self {
        match l.parse() {
            Ok(l) => {
                self.alphabet.insert(l);
            }
            Err(e) => {
                self.error.get_or_insert(e);
            }
        }
        self
    }

    pub fn labels<'s>(mut self, ls: impl IntoIterator<Item = &'s str>) -> Self {
        for l in ls {
            self = self.label(l);
        }
        self
    }

    pub fn alphabet(mut self, ls: impl IntoIterator<Item = Label>) -> Self {
        self.alphabet.extend(ls);
        self
    }

    /// Adds the full product `inputs × outputs` to the alphabet.
    pub fn mealy_alphabet<'s>(
        mut self,
        inputs: impl IntoIterator<Item = &'s str>,
        outputs: impl IntoIterator<Item = &'s str> + Clone,
    ) -> Self {
        for i in inputs {
            for o in outputs.clone() {
                match Label::mealy(i, o) {
                    Ok(l) => {
                        self.alphabet.insert(l);
                    }
                    Err(e) => {
                        self.error.get_or_insert(e);
                    }
                }
            }
        }
        self
    }

    pub fn edge(mut self, source: &str, label: &str, target: &str) -> Self {
        match label.parse::<Label>() {
            Ok(l) => self = self.edge_label(source, l, target),
            Err(e) => {
                self.error.get_or_insert(e);
            }
        }
        self
    }

    pub fn edge_label(mut self, source: &str, label: Label, target: &str) -> Self {
        self.alphabet.insert(label.clone());
        self.transitions.push(Transition {
            source: source.to_string(),
            label,
            target: target.to_string(),
        });
        self
    }

    pub fn build(self) -> Result<Lts> {
        if let Some(e) = self.error {
            return Err(e);
        }
        Lts::new(self.states, self.initial, self.transitions, self.alphabet)
    }
}
