use std::collections::{BTreeSet, VecDeque};

use super::{pair_id, require_alphabet};
use crate::code::CodeMap;
use crate::error::Result;
use crate::label::Word;
use crate::lts::{Lts, Transition};

/// Refinement `ρ_R(N)`: every `b`-transition of `n` is expanded into the
/// path spelling `R(b)`. Paths leaving the same state share their common
/// prefixes, so a deterministic `n` gives a deterministic result.
///
/// States are pairs `(q, w)` rendered as `q⟨w⟩`; only the reachable part is
/// built. Transitions of `n` whose label is outside the domain of `code`
/// contribute nothing.
pub fn refine(code: &CodeMap, n: &Lts) -> Result<Lts> {
    require_alphabet(n.alphabet(), code.target(), "refinement input alphabet")?;
    let init = (n.initial().to_string(), Word::empty());
    let mut seen = BTreeSet::from([init.clone()]);
    let mut queue = VecDeque::from([init]);
    let mut transitions = BTreeSet::new();
    while let Some((q, w)) = queue.pop_front() {
        for (b, q2) in n.outgoing(&q) {
            let Some(cw) = code.get(b) else { continue };
            if !w.is_prefix_of(cw) || w.len() == cw.len() {
                continue;
            }
            let a = cw.labels()[w.len()].clone();
            let next = if w.len() + 1 < cw.len() {
                (q.clone(), w.pushed(a.clone()))
            } else {
                (q2.clone(), Word::empty())
            };
            transitions.insert(Transition {
                source: pair_id(&q, &w),
                label: a,
                target: pair_id(&next.0, &next.1),
            });
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let states = seen.iter().map(|(q, w)| pair_id(q, w));
    Lts::new(
        states,
        pair_id(n.initial(), &Word::empty()),
        transitions,
        code.source().clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::label::{lab, word, CompatRel};
    use crate::simulation::{isomorphic, simulates};

    #[test]
    fn ascii_refinement() {
        let r = refine(&fixtures::ascii_code(), &fixtures::letter_loops()).unwrap();
        assert_eq!(r.states().len(), 4);
        assert!(isomorphic(&r, &fixtures::letter_loops_refined()));
        assert!(r.has_transition("q⟨1.1⟩", &lab("5"), "q⟨⟩"));
    }

    #[test]
    fn shared_prefix_refinement_is_deterministic() {
        let r = refine(&fixtures::choice_code(), &fixtures::choice()).unwrap();
        assert!(isomorphic(&r, &fixtures::shared_prefix_refinement()));
        assert!(r.is_deterministic(&CompatRel::Identity).unwrap());
        assert!(simulates(&fixtures::naive_choice_refinement(), &r));
    }

    #[test]
    fn no_transitions_gives_single_state() {
        let n = Lts::builder("q").labels(["a", "b"]).build().unwrap();
        let r = refine(&fixtures::choice_code(), &n).unwrap();
        assert_eq!(r.states().len(), 1);
        assert!(r.transitions().is_empty());
    }

    #[test]
    fn code_word_runs_match_abstract_steps() {
        let n = fixtures::doubled_contraction();
        let code = fixtures::doubled_code();
        let r = refine(&code, &n).unwrap();
        for q in n.states() {
            for b in code.domain() {
                let expected: BTreeSet<String> = n.successors(q, b).map(|t| pair_id(t, &Word::empty())).collect();
                let got = r.run(&pair_id(q, &Word::empty()), code.get(b).unwrap());
                assert_eq!(got, expected, "state {q}, label {b}");
            }
        }
        assert!(r.run("q0⟨⟩", &word("a/0.b/0")).is_empty());
    }
}
