use std::collections::{BTreeSet, VecDeque};

use super::{pair_id, require_alphabet};
use crate::code::CodeMap;
use crate::error::Result;
use crate::label::{CompatRel, Word};
use crate::lts::{Lts, StateId, Transition};

/// Name of the chaos state created by [`concretize`].
pub const CHAOS: &str = "χ";

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Pair(StateId, Word),
    Chaos,
}

impl Node {
    fn id(&self) -> StateId {
        match self {
            Node::Pair(q, w) => pair_id(q, w),
            Node::Chaos => CHAOS.to_string(),
        }
    }
}

/// Concretization `γ_{R,I}(M)`: like refinement, but any concrete action
/// that is not similar (under `rel`) to an action the code can take at the
/// current node leads to the chaos state `χ`, which allows everything.
///
/// `m` must be over the target alphabet of `code` and `rel` over its source
/// alphabet. Only the reachable part is built; `χ` appears only if reachable.
pub fn concretize(code: &CodeMap, rel: &CompatRel, m: &Lts) -> Result<Lts> {
    require_alphabet(m.alphabet(), code.target(), "concretization input alphabet")?;
    let alphabet = code.source();
    rel.check_carrier(alphabet)?;
    let internal = code.internal_prefixes();
    let image: BTreeSet<&Word> = code.entries().values().collect();
    let known = |w: &Word| internal.contains(w) || image.contains(w);

    let init = Node::Pair(m.initial().to_string(), Word::empty());
    let mut seen = BTreeSet::from([init.clone()]);
    let mut queue = VecDeque::from([init]);
    let mut transitions = BTreeSet::new();
    let mut push = |from: &Node, a, to: Node, seen: &mut BTreeSet<Node>, queue: &mut VecDeque<Node>| {
        transitions.insert(Transition {
            source: from.id(),
            label: a,
            target: to.id(),
        });
        if seen.insert(to.clone()) {
            queue.push_back(to);
        }
    };
    while let Some(node) = queue.pop_front() {
        let Node::Pair(q, w) = &node else {
            for a in alphabet {
                push(&node, a.clone(), Node::Chaos, &mut seen, &mut queue);
            }
            continue;
        };
        for a in alphabet {
            let wa = w.pushed(a.clone());
            if internal.contains(&wa) {
                push(
                    &node,
                    a.clone(),
                    Node::Pair(q.clone(), wa.clone()),
                    &mut seen,
                    &mut queue,
                );
            }
            if let Some(b) = code.decode(&wa) {
                for q2 in m.successors(q, b) {
                    push(
                        &node,
                        a.clone(),
                        Node::Pair(q2.to_string(), Word::empty()),
                        &mut seen,
                        &mut queue,
                    );
                }
            }
            if rel.related_in(a, alphabet).all(|a2| !known(&w.pushed(a2.clone()))) {
                push(&node, a.clone(), Node::Chaos, &mut seen, &mut queue);
            }
        }
    }
    let states = seen.iter().map(Node::id);
    Lts::new(
        states,
        pair_id(m.initial(), &Word::empty()),
        transitions,
        alphabet.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::label::lab;
    use crate::operators::contract;
    use crate::simulation::{find_isomorphism_reachable, isomorphic};

    #[test]
    fn mealy_concretization_with_same_input() {
        let g = concretize(
            &fixtures::doubled_code(),
            &CompatRel::SameInput,
            &fixtures::doubled_contraction(),
        )
        .unwrap();
        assert_eq!(g.reachable_states().len(), 7);
        assert!(g.has_transition("q2⟨b/0⟩", &lab("a/0"), CHAOS));
        assert!(g.has_transition("q2⟨b/0⟩", &lab("b/0"), "q0⟨⟩"));
        assert!(isomorphic(&g, &fixtures::doubled_concretization()));
    }

    #[test]
    fn empty_code_sends_everything_to_chaos() {
        let (_, s, m) = fixtures::noncommuting_concretization();
        let g = concretize(&s, &CompatRel::Identity, &m).unwrap();
        assert_eq!(g.states().len(), 2);
        assert!(g.has_transition("q0⟨⟩", &lab("b"), CHAOS));
        assert!(g.has_transition(CHAOS, &lab("b"), CHAOS));
    }

    #[test]
    fn contraction_undoes_concretization() {
        let m = fixtures::doubled_contraction();
        let code = fixtures::doubled_code();
        for rel in [CompatRel::Identity, CompatRel::SameInput] {
            let back = contract(&code, &concretize(&code, &rel, &m).unwrap()).unwrap();
            assert!(find_isomorphism_reachable(&m, &back).unwrap().is_some());
        }
    }

    #[test]
    fn identity_relation_adds_more_chaos() {
        let g = concretize(
            &fixtures::doubled_code(),
            &CompatRel::Identity,
            &fixtures::doubled_contraction(),
        )
        .unwrap();
        assert!(g.has_transition("q0⟨⟩", &lab("a/1"), CHAOS));
        assert!(g.has_transition("q0⟨a/0⟩", &lab("a/1"), CHAOS));
    }
}
