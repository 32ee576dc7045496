use std::collections::{BTreeSet, VecDeque};

use super::require_mealy_code;
use super::winning::{is_determinate, solve_winning, WinningTable};
use crate::code::CodeTree;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::lts::{Lts, StateId, Transition};
use crate::operators::contract;
use crate::simulation::{find_delay_simulation, Relation};

/// The hidden action of the composed systems.
pub const TAU: &str = "τ";

fn tau() -> Label {
    Label::Atomic(TAU.to_string())
}

/// Receiving abstract input `x` from the environment.
fn recv(x: &str) -> Label {
    Label::Atomic(format!("?{x}"))
}

/// Emitting abstract output `y` to the environment.
fn emit(y: &str) -> Label {
    Label::Atomic(format!("!{y}"))
}

fn observable_alphabet(xs: &BTreeSet<String>, ys: &BTreeSet<String>) -> BTreeSet<Label> {
    let mut alphabet: BTreeSet<Label> = xs.iter().map(|x| recv(x)).collect();
    alphabet.extend(ys.iter().map(|y| emit(y)));
    alphabet.insert(tau());
    alphabet
}

/// An implementation of the Mealy machine `n` that takes inputs and gives
/// outputs as separate steps: `N(q) --?x--> N(q,x)` for every input `x` of
/// the alphabet, and `N(q,x) --!y--> N(q')` for every `q --x/y--> q'`.
pub fn impl_encoding(n: &Lts) -> Result<Lts> {
    if !n.is_mealy() && !n.alphabet().is_empty() {
        return Err(Error::NotMealy("implementation encoding"));
    }
    let (xs, ys) = (n.inputs(), n.outputs());
    let waiting = |q: &str| format!("N({q})");
    let answering = |q: &str, x: &str| format!("N({q},{x})");
    let mut states = BTreeSet::new();
    let mut transitions = BTreeSet::new();
    for q in n.reachable_states() {
        states.insert(waiting(&q));
        for x in &xs {
            transitions.insert(Transition {
                source: waiting(&q),
                label: recv(x),
                target: answering(&q, x),
            });
        }
        for (l, q2) in n.outgoing(&q) {
            let (x, y) = (l.input().expect("Mealy"), l.output().expect("Mealy"));
            transitions.insert(Transition {
                source: answering(&q, x),
                label: emit(y),
                target: waiting(q2),
            });
        }
    }
    Lts::new(states, waiting(n.initial()), transitions, observable_alphabet(&xs, &ys))
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Adaptor {
    Idle,
    Choose(StateId, String),
    Await(StateId, String),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Machine {
    Ready(StateId),
    Busy(StateId, String),
}

fn render(a: &Adaptor, m: &Machine, root: &str) -> StateId {
    let left = match a {
        Adaptor::Idle => format!("P({root})"),
        Adaptor::Choose(r, x) => format!("Q({r},{x})"),
        Adaptor::Await(r, x) => format!("R({r},{x})"),
    };
    let right = match m {
        Machine::Ready(q) => format!("M({q})"),
        Machine::Busy(q, i) => format!("M({q},{i})"),
    };
    format!("{left}|{right}")
}

fn check_preconditions(tree: &CodeTree, m: &Lts) -> Result<WinningTable> {
    require_mealy_code(tree)?;
    if m.alphabet() != tree.source() {
        return Err(Error::AlphabetMismatch(
            "the machine alphabet differs from the source alphabet of the code".into(),
        ));
    }
    if let Some(w) = is_determinate(tree)? {
        return Err(Error::NotDeterminate {
            node: w.node,
            abstract_input: w.abstract_input,
            first: w.first,
            second: w.second,
        });
    }
    let table = solve_winning(tree)?;
    for label in tree.leaf_labels().values() {
        let x = label.input().expect("Mealy leaf label");
        if !table.is_winning(tree.root(), x) {
            return Err(Error::NotWinning(x.to_string()));
        }
    }
    if let Some((state, input)) = m.first_disabled_input(&m.inputs()) {
        return Err(Error::NotInputEnabled { state, input });
    }
    Ok(table)
}

/// Explicit state space of the adaptor for `tree` running against an
/// implementation of `m`, with all concrete communication hidden as `τ`.
///
/// The adaptor accepts an abstract input `?x`, sends winning concrete inputs
/// and follows the machine's outputs through the code tree, and emits `!y`
/// on reaching a leaf labelled `x/y`.
pub fn build_adaptor_composition(tree: &CodeTree, m: &Lts) -> Result<Lts> {
    let table = check_preconditions(tree, m)?;
    let root = tree.root().to_string();
    let xs: BTreeSet<String> = tree
        .target()
        .iter()
        .filter_map(|l| l.input().map(str::to_string))
        .collect();
    let ys: BTreeSet<String> = tree
        .target()
        .iter()
        .filter_map(|l| l.output().map(str::to_string))
        .collect();

    let init = (Adaptor::Idle, Machine::Ready(m.initial().to_string()));
    let mut seen = BTreeSet::from([init.clone()]);
    let mut queue = VecDeque::from([init]);
    let mut transitions = BTreeSet::new();
    while let Some((a, mach)) = queue.pop_front() {
        let mut steps: Vec<(Label, Adaptor, Machine)> = Vec::new();
        match (&a, &mach) {
            (Adaptor::Idle, Machine::Ready(_)) => {
                for x in &xs {
                    steps.push((recv(x), Adaptor::Choose(root.clone(), x.clone()), mach.clone()));
                }
            }
            (Adaptor::Choose(r, x), Machine::Ready(q)) => {
                if let Some(label) = tree.leaf_label(r) {
                    let y = label.output().expect("Mealy leaf label");
                    steps.push((emit(y), Adaptor::Idle, mach.clone()));
                } else if let Some(i) = table.strategy(r, x) {
                    steps.push((
                        tau(),
                        Adaptor::Await(r.clone(), x.clone()),
                        Machine::Busy(q.clone(), i.to_string()),
                    ));
                }
            }
            (Adaptor::Await(r, x), Machine::Busy(q, i)) => {
                for (l, r2) in tree.children(r) {
                    if l.input() != Some(i.as_str()) {
                        continue;
                    }
                    for q2 in m.successors(q, l) {
                        steps.push((
                            tau(),
                            Adaptor::Choose(r2.clone(), x.clone()),
                            Machine::Ready(q2.to_string()),
                        ));
                    }
                }
            }
            _ => unreachable!("adaptor and machine phases always agree"),
        }
        for (label, a2, m2) in steps {
            transitions.insert(Transition {
                source: render(&a, &mach, &root),
                label,
                target: render(&a2, &m2, &root),
            });
            let next = (a2, m2);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let states = seen.iter().map(|(a, mach)| render(a, mach, &root));
    Lts::new(
        states,
        render(&Adaptor::Idle, &Machine::Ready(m.initial().to_string()), &root),
        transitions,
        observable_alphabet(&xs, &ys),
    )
}

/// Result of [`check_adaptor_theorem`]: delay simulations in both
/// directions between the composition and the implementation of the
/// contraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCheck {
    pub composition: Lts,
    pub implementation: Lts,
    pub forward: Option<Relation>,
    pub backward: Option<Relation>,
}

impl TheoremCheck {
    pub fn holds(&self) -> bool {
        self.forward.is_some() && self.backward.is_some()
    }
}

/// Checks that the adaptor composed with `m` is delay-simulation equivalent
/// to an implementation of the contraction of `m` along the code.
pub fn check_adaptor_theorem(tree: &CodeTree, m: &Lts) -> Result<TheoremCheck> {
    let composition = build_adaptor_composition(tree, m)?;
    let implementation = impl_encoding(&contract(&tree.to_map(), m)?)?;
    let forward = find_delay_simulation(&composition, &implementation, &tau())?;
    let backward = find_delay_simulation(&implementation, &composition, &tau())?;
    Ok(TheoremCheck {
        composition,
        implementation,
        forward,
        backward,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::CodeMap;
    use crate::fixtures;
    use crate::label::lab;
    use crate::simulation::observable_traces_up_to;

    #[test]
    fn theorem_on_doubled_code() {
        let check = check_adaptor_theorem(&fixtures::doubled_code().to_tree(), &fixtures::square_machine()).unwrap();
        assert!(check.holds());
    }

    #[test]
    fn theorem_on_adaptive_code_with_trace_agreement() {
        let check = check_adaptor_theorem(&fixtures::adaptive_code().to_tree(), &fixtures::square_machine()).unwrap();
        assert!(check.holds());
        let t = tau();
        assert_eq!(
            observable_traces_up_to(&check.composition, &t, 8),
            observable_traces_up_to(&check.implementation, &t, 8)
        );
    }

    #[test]
    fn empty_code_has_no_abstract_inputs() {
        let m = fixtures::square_machine();
        let code = CodeMap::empty(m.alphabet().clone(), [lab("X/0")].into());
        let check = check_adaptor_theorem(&code.to_tree(), &m).unwrap();
        assert!(check.holds());
        assert!(!check.composition.transitions().iter().any(|t| t.label == lab("?Y")));
    }

    #[test]
    fn composition_shape_for_doubled_code() {
        let c = build_adaptor_composition(&fixtures::doubled_code().to_tree(), &fixtures::square_machine()).unwrap();
        assert!(c.has_transition("P(⟨⟩)|M(q0)", &lab("?A"), "Q(⟨⟩,A)|M(q0)"));
        assert!(c.has_transition("Q(⟨⟩,A)|M(q0)", &tau(), "R(⟨⟩,A)|M(q0,a)"));
        assert!(c.has_transition("R(⟨⟩,A)|M(q0,a)", &tau(), "Q(⟨a/0⟩,A)|M(q3)"));
        assert!(c.has_transition("Q(⟨a/0.a/0⟩,A)|M(q2)", &lab("!0"), "P(⟨⟩)|M(q2)"));
    }

    #[test]
    fn preconditions_are_enforced() {
        let m = fixtures::square_machine();
        let r = build_adaptor_composition(&fixtures::nondeterminate_code().to_tree(), &m);
        assert!(matches!(r, Err(Error::AlphabetMismatch(_))));
        let partial = Lts::builder("q")
            .mealy_alphabet(["a", "b"], ["0", "1"])
            .edge("q", "a/0", "q")
            .build()
            .unwrap();
        let r = build_adaptor_composition(&fixtures::doubled_code().to_tree(), &partial);
        assert!(matches!(r, Err(Error::NotInputEnabled { .. })));
    }
}
