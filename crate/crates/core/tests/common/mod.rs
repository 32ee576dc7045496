//! Independent oracles and instance helpers shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use actcode::code::CodeTree;
use actcode::label::Label;
use actcode::lts::{Lts, Transition};
use rand::Rng;

/// Atomic labels `{prefix}0, {prefix}1, …`.
pub fn named_alphabet(prefix: &str, k: usize) -> BTreeSet<Label> {
    (0..k).map(|n| Label::atomic(format!("{prefix}{n}")).unwrap()).collect()
}

pub fn labels_vec(s: &BTreeSet<Label>) -> Vec<Label> {
    s.iter().cloned().collect()
}

fn rebuild(m: &Lts, transitions: Vec<Transition>) -> Lts {
    Lts::new(
        m.states().iter().cloned(),
        m.initial().to_string(),
        transitions,
        m.alphabet().clone(),
    )
    .unwrap()
}

/// `m` with each transition dropped with probability `p`.
pub fn drop_transitions<R: Rng>(rng: &mut R, m: &Lts, p: f64) -> Lts {
    let kept = m.transitions().iter().filter(|_| !rng.gen_bool(p)).cloned().collect();
    rebuild(m, kept)
}

/// `m` with transitions dropped with probability `drop`, plus `extra` random
/// transitions between its states over labels from `used`.
pub fn perturb<R: Rng>(rng: &mut R, m: &Lts, drop: f64, extra: usize, used: &[Label]) -> Lts {
    let states: Vec<&String> = m.states().iter().collect();
    let mut ts: Vec<Transition> = m
        .transitions()
        .iter()
        .filter(|_| !rng.gen_bool(drop))
        .cloned()
        .collect();
    if !used.is_empty() {
        for _ in 0..extra {
            ts.push(Transition {
                source: states[rng.gen_range(0..states.len())].clone(),
                label: used[rng.gen_range(0..used.len())].clone(),
                target: states[rng.gen_range(0..states.len())].clone(),
            });
        }
    }
    rebuild(m, ts)
}

/// Dense encoding of an LTS for the brute-force oracles: states in index
/// order with the initial state first, successor bitmasks per label.
pub struct Dense {
    pub n: usize,
    pub succ: Vec<Vec<u32>>,
}

impl Dense {
    pub fn new(m: &Lts, alphabet: &[Label]) -> Self {
        let mut order: Vec<&String> = m.states().iter().filter(|s| s.as_str() == m.initial()).collect();
        order.extend(m.states().iter().filter(|s| s.as_str() != m.initial()));
        let index: BTreeMap<&String, usize> = order.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut succ = vec![vec![0u32; alphabet.len()]; order.len()];
        for t in m.transitions() {
            let a = alphabet.iter().position(|l| *l == t.label).unwrap();
            succ[index[&t.source]][a] |= 1 << index[&t.target];
        }
        Dense { n: order.len(), succ }
    }
}

/// Whether some relation containing the initial pair satisfies the
/// simulation transfer property, by trying every relation.
pub fn brute_simulates(m: &Dense, n: &Dense) -> bool {
    let pairs = m.n * n.n;
    assert!(pairs <= 16, "brute force is limited to 16 state pairs");
    let row = |rel: u32, p: usize| (rel >> (p * n.n)) & ((1 << n.n) - 1);
    (0u32..(1 << pairs)).filter(|rel| rel & 1 == 1).any(|rel| {
        (0..m.n).all(|p| {
            (0..n.n).all(|q| {
                if rel & (1 << (p * n.n + q)) == 0 {
                    return true;
                }
                m.succ[p]
                    .iter()
                    .zip(&n.succ[q])
                    .all(|(&ps, &qs)| (0..m.n).all(|p2| ps & (1 << p2) == 0 || row(rel, p2) & qs != 0))
            })
        })
    })
}

/// Every LTS with exactly `states` states over `alphabet`, with `s0` initial.
pub fn all_lts(states: usize, alphabet: &BTreeSet<Label>) -> Vec<Lts> {
    let labels = labels_vec(alphabet);
    let slots: Vec<(usize, usize, usize)> = (0..states)
        .flat_map(|p| (0..labels.len()).flat_map(move |a| (0..states).map(move |q| (p, a, q))))
        .collect();
    (0u64..(1 << slots.len()))
        .map(|mask| {
            let ts = slots
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &(p, a, q))| Transition {
                    source: format!("s{p}"),
                    label: labels[a].clone(),
                    target: format!("s{q}"),
                })
                .collect::<Vec<_>>();
            Lts::new(
                (0..states).map(|p| format!("s{p}")),
                "s0".to_string(),
                ts,
                alphabet.clone(),
            )
            .unwrap()
        })
        .collect()
}

/// Whether `node` is winning for `x`, straight from the recursive definition.
pub fn brute_winning(tree: &CodeTree, node: &str, x: &str) -> bool {
    !brute_winning_inputs(tree, node, x).is_empty() || tree.leaf_label(node).and_then(Label::input) == Some(x)
}

/// Inputs with which the internal `node` is winning for `x`.
pub fn brute_winning_inputs(tree: &CodeTree, node: &str, x: &str) -> BTreeSet<String> {
    if tree.is_leaf(node) {
        return BTreeSet::new();
    }
    let inputs: BTreeSet<&str> = tree.children(node).iter().filter_map(|(l, _)| l.input()).collect();
    inputs
        .into_iter()
        .filter(|i| {
            tree.children(node)
                .iter()
                .filter(|(l, _)| l.input() == Some(*i))
                .all(|(_, child)| brute_winning(tree, child, x))
        })
        .map(str::to_string)
        .collect()
}

/// Traces of length at most `k`, as plain label vectors.
pub fn traces(m: &Lts, k: usize) -> BTreeSet<Vec<Label>> {
    m.traces_up_to(k).into_iter().map(|w| w.labels().to_vec()).collect()
}
