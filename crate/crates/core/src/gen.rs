//! Seeded random instances: transition systems, Mealy machines and codes.
//!
//! All generators draw from a caller-supplied RNG, so a fixed seed gives a
//! fixed instance.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::code::CodeMap;
use crate::label::{Label, Word};
use crate::lts::{Lts, Transition};

/// Atomic labels `a, b, c, …` (then `l26, l27, …`).
pub fn atomic_alphabet(k: usize) -> BTreeSet<Label> {
    (0..k).map(|n| Label::Atomic(symbol(n))).collect()
}

fn symbol(n: usize) -> String {
    if n < 26 {
        char::from(b'a' + n as u8).to_string()
    } else {
        format!("l{n}")
    }
}

/// Input symbols `a, b, …` and output symbols `0, 1, …`.
pub fn io_symbols(inputs: usize, outputs: usize) -> (Vec<String>, Vec<String>) {
    (
        (0..inputs).map(symbol).collect(),
        (0..outputs).map(|n| n.to_string()).collect(),
    )
}

/// The product alphabet `inputs × outputs`.
pub fn mealy_alphabet(inputs: &[String], outputs: &[String]) -> BTreeSet<Label> {
    inputs
        .iter()
        .flat_map(|i| {
            outputs.iter().map(move |o| Label::Mealy {
                input: i.clone(),
                output: o.clone(),
            })
        })
        .collect()
}

fn state(n: usize) -> String {
    format!("s{n}")
}

/// Random LTS over `alphabet` whose transitions only use labels from `used`;
/// each possible transition is present with probability `density`.
pub fn random_lts<R: Rng>(rng: &mut R, states: usize, alphabet: &BTreeSet<Label>, used: &[Label], density: f64) -> Lts {
    let states = states.max(1);
    let mut transitions = Vec::new();
    for p in 0..states {
        for a in used {
            for q in 0..states {
                if rng.gen_bool(density) {
                    transitions.push(Transition {
                        source: state(p),
                        label: a.clone(),
                        target: state(q),
                    });
                }
            }
        }
    }
    Lts::new((0..states).map(state), state(0), transitions, alphabet.clone()).expect("generated LTS is well formed")
}

/// Random deterministic LTS: each `(state, label)` pair is enabled with
/// probability `density` and then has a single random target.
pub fn random_deterministic_lts<R: Rng>(
    rng: &mut R,
    states: usize,
    alphabet: &BTreeSet<Label>,
    used: &[Label],
    density: f64,
) -> Lts {
    let states = states.max(1);
    let mut transitions = Vec::new();
    for p in 0..states {
        for a in used {
            if rng.gen_bool(density) {
                transitions.push(Transition {
                    source: state(p),
                    label: a.clone(),
                    target: state(rng.gen_range(0..states)),
                });
            }
        }
    }
    Lts::new((0..states).map(state), state(0), transitions, alphabet.clone()).expect("generated LTS is well formed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MealyOptions {
    /// Every state answers every input.
    pub input_enabled: bool,
    /// At most one output and successor per state and input.
    pub output_deterministic: bool,
}

/// Random Mealy machine over `inputs × outputs`.
pub fn random_mealy<R: Rng>(
    rng: &mut R,
    states: usize,
    inputs: &[String],
    outputs: &[String],
    opts: MealyOptions,
) -> Lts {
    let states = states.max(1);
    let mut transitions = Vec::new();
    for p in 0..states {
        for i in inputs {
            if !opts.input_enabled && rng.gen_bool(0.3) {
                continue;
            }
            let answers = if opts.output_deterministic {
                1
            } else {
                rng.gen_range(1..=2)
            };
            for _ in 0..answers {
                let o = outputs.choose(rng).expect("at least one output");
                transitions.push(Transition {
                    source: state(p),
                    label: Label::Mealy {
                        input: i.clone(),
                        output: o.clone(),
                    },
                    target: state(rng.gen_range(0..states)),
                });
            }
        }
    }
    Lts::new(
        (0..states).map(state),
        state(0),
        transitions,
        mealy_alphabet(inputs, outputs),
    )
    .expect("generated machine is well formed")
}

/// Random prefix-free code from `source` to `target` with at most `entries`
/// entries and words of length `1..=max_len`.
///
/// Words are inserted one at a time into a trie; a candidate that is a prefix
/// of an existing word, or has one as a prefix, is redrawn a bounded number
/// of times and the entry is dropped if no free word is found.
pub fn random_code<R: Rng>(
    rng: &mut R,
    source: &BTreeSet<Label>,
    target: &BTreeSet<Label>,
    entries: usize,
    max_len: usize,
) -> CodeMap {
    let letters: Vec<&Label> = source.iter().collect();
    let mut abstract_labels: Vec<&Label> = target.iter().collect();
    abstract_labels.shuffle(rng);
    let mut words: BTreeMap<Label, Word> = BTreeMap::new();
    if !letters.is_empty() {
        for b in abstract_labels.into_iter().take(entries) {
            for _ in 0..16 {
                let len = rng.gen_range(1..=max_len.max(1));
                let w: Word = (0..len).map(|_| (*letters.choose(rng).unwrap()).clone()).collect();
                if words.values().all(|v| !v.is_prefix_of(&w) && !w.is_prefix_of(v)) {
                    words.insert(b.clone(), w);
                    break;
                }
            }
        }
    }
    CodeMap::validate(source.clone(), target.clone(), words).expect("generated code is prefix free")
}

/// Random code for adaptors over `inputs × outputs` that is determinate,
/// winning for every abstract input it mentions, and complete for any
/// machine under the same-input relation.
///
/// Each abstract input gets its own root input. Every internal node uses a
/// single concrete input and has a child for every output; each child is a
/// leaf or, above `max_depth`, another internal node. Abstract outputs are
/// numbered per abstract input so leaf labels stay distinct.
pub fn random_adaptor_code<R: Rng>(
    rng: &mut R,
    inputs: &[String],
    outputs: &[String],
    abstract_inputs: &[String],
    max_depth: usize,
) -> CodeMap {
    assert!(
        abstract_inputs.len() <= inputs.len(),
        "need a distinct root input per abstract input"
    );
    let mut root_inputs = inputs.to_vec();
    root_inputs.shuffle(rng);
    let mut entries: Vec<(Label, Word)> = Vec::new();
    for (x, first) in abstract_inputs.iter().zip(root_inputs) {
        let mut counter = 0usize;
        let mut stack = vec![(Word::empty(), first)];
        while let Some((prefix, i)) = stack.pop() {
            for o in outputs {
                let w = prefix.pushed(Label::Mealy {
                    input: i.clone(),
                    output: o.clone(),
                });
                if w.len() < max_depth && rng.gen_bool(0.4) {
                    let next = inputs.choose(rng).expect("at least one input").clone();
                    stack.push((w, next));
                } else {
                    let label = Label::Mealy {
                        input: x.clone(),
                        output: counter.to_string(),
                    };
                    counter += 1;
                    entries.push((label, w));
                }
            }
        }
    }
    let target: BTreeSet<Label> = entries.iter().map(|(b, _)| b.clone()).collect();
    CodeMap::validate(mealy_alphabet(inputs, outputs), target, entries).expect("generated adaptor code is valid")
}
