use std::collections::{BTreeSet, VecDeque};

use super::require_alphabet;
use crate::code::CodeMap;
use crate::error::Result;
use crate::lts::{Lts, StateId, Transition};

/// Contraction `α_R(M)`: every complete run of a code word `R(b)` in `m`
/// becomes a single `b`-transition. Only states reachable this way are kept.
///
/// `m` must be over the source alphabet of `code`; the result is over its
/// target alphabet.
pub fn contract(code: &CodeMap, m: &Lts) -> Result<Lts> {
    require_alphabet(m.alphabet(), code.source(), "contraction input alphabet")?;
    let mut states: BTreeSet<StateId> = [m.initial().to_string()].into();
    let mut transitions = BTreeSet::new();
    let mut queue = VecDeque::from([m.initial().to_string()]);
    while let Some(q) = queue.pop_front() {
        for (b, w) in code.entries() {
            for target in m.run(&q, w) {
                if states.insert(target.clone()) {
                    queue.push_back(target.clone());
                }
                transitions.insert(Transition {
                    source: q.clone(),
                    label: b.clone(),
                    target,
                });
            }
        }
    }
    Lts::new(states, m.initial(), transitions, code.target().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixtures;
    use crate::label::lab;
    use crate::simulation::isomorphic;

    #[test]
    fn square_machine_under_doubled_code() {
        let a = contract(&fixtures::doubled_code(), &fixtures::square_machine()).unwrap();
        assert_eq!(a, fixtures::doubled_contraction());
    }

    #[test]
    fn square_machine_under_adaptive_code() {
        let a = contract(&fixtures::adaptive_code(), &fixtures::square_machine()).unwrap();
        assert!(isomorphic(&a, &fixtures::adaptive_contraction()));
    }

    #[test]
    fn empty_code_contracts_to_initial_state() {
        let m = fixtures::square_machine();
        let code = CodeMap::empty(m.alphabet().clone(), [lab("X")].into());
        let a = contract(&code, &m).unwrap();
        assert_eq!(a.states().len(), 1);
        assert!(a.transitions().is_empty());
    }

    #[test]
    fn nondeterministic_paths_yield_one_edge_per_target() {
        let m = Lts::builder("p")
            .edge("p", "x", "p1")
            .edge("p", "x", "p2")
            .edge("p1", "y", "t")
            .edge("p2", "y", "t")
            .edge("p2", "y", "u")
            .build()
            .unwrap();
        let code = CodeMap::validate(
            m.alphabet().clone(),
            [lab("B")],
            [(lab("B"), crate::label::word("x.y"))],
        )
        .unwrap();
        let a = contract(&code, &m).unwrap();
        assert_eq!(a.transitions().len(), 2);
        assert!(a.has_transition("p", &lab("B"), "t"));
        assert!(a.has_transition("p", &lab("B"), "u"));
    }

    #[test]
    fn alphabet_must_match() {
        let r = contract(&fixtures::ascii_code(), &fixtures::square_machine());
        assert!(matches!(r, Err(Error::AlphabetMismatch(_))));
    }
}
