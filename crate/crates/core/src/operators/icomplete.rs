use std::collections::{BTreeSet, VecDeque};

use crate::code::CodeMap;
use crate::error::Result;
use crate::label::{CompatRel, Label};
use crate::lts::{Lts, StateId};

/// Failure of I-completeness: at machine state `state`, with the code at
/// tree node `node`, the code can take `code_label` and the machine can take
/// the related `machine_label`, but the code cannot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncompletenessWitness {
    pub state: StateId,
    pub node: StateId,
    pub code_label: Label,
    pub machine_label: Label,
}

/// Decides whether `code` is I-complete for `m` under `rel`.
///
/// Explores pairs of a machine state and a code-tree node, starting from the
/// initial state and the root and returning to the root whenever a complete
/// code word has been read. At every pair reached, each code edge `a` and
/// each related `a'` that the machine can take must also be a code edge.
pub fn is_icomplete(code: &CodeMap, rel: &CompatRel, m: &Lts) -> Result<Option<IncompletenessWitness>> {
    super::require_alphabet(m.alphabet(), code.source(), "I-completeness machine alphabet")?;
    rel.check_carrier(code.source())?;
    let tree = code.to_tree();
    let root = tree.root().to_string();
    let init = (m.initial().to_string(), root.clone());
    let mut seen = BTreeSet::from([init.clone()]);
    let mut queue = VecDeque::from([init]);
    while let Some((q, r)) = queue.pop_front() {
        let enabled: BTreeSet<&Label> = m.outgoing(&q).iter().map(|(l, _)| l).collect();
        for (a, _) in tree.children(&r) {
            for a2 in rel.related_in(a, code.source()) {
                if enabled.contains(a2) && tree.child(&r, a2).is_none() {
                    return Ok(Some(IncompletenessWitness {
                        state: q,
                        node: r,
                        code_label: a.clone(),
                        machine_label: a2.clone(),
                    }));
                }
            }
        }
        for (a, q2) in m.outgoing(&q) {
            let Some(child) = tree.child(&r, a) else { continue };
            let next_node = if tree.is_leaf(child) {
                root.clone()
            } else {
                child.to_string()
            };
            let next = (q2.clone(), next_node);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::label::{lab, word};

    #[test]
    fn doubled_code_is_complete_for_square_machine() {
        let r = is_icomplete(
            &fixtures::doubled_code(),
            &CompatRel::SameInput,
            &fixtures::square_machine(),
        )
        .unwrap();
        assert_eq!(r, None);
    }

    #[test]
    fn identity_is_always_complete() {
        let m = fixtures::square_machine();
        for code in [fixtures::doubled_code(), fixtures::adaptive_code()] {
            assert_eq!(is_icomplete(&code, &CompatRel::Identity, &m).unwrap(), None);
        }
    }

    #[test]
    fn missing_output_at_root_is_reported() {
        let m = Lts::builder("p")
            .mealy_alphabet(["a"], ["0", "1"])
            .edge("p", "a/1", "p2")
            .build()
            .unwrap();
        let code = CodeMap::validate(m.alphabet().clone(), [lab("X/0")], [(lab("X/0"), word("a/0"))]).unwrap();
        let w = is_icomplete(&code, &CompatRel::SameInput, &m).unwrap().unwrap();
        assert_eq!(w.state, "p");
        assert_eq!(w.node, "⟨⟩");
        assert_eq!(w.code_label, lab("a/0"));
        assert_eq!(w.machine_label, lab("a/1"));
    }

    #[test]
    fn adaptive_code_is_complete_for_square_machine() {
        let r = is_icomplete(
            &fixtures::adaptive_code(),
            &CompatRel::SameInput,
            &fixtures::square_machine(),
        )
        .unwrap();
        assert_eq!(r, None);
    }
}
