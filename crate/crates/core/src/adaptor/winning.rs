use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::require_mealy_code;
use crate::code::CodeTree;
use crate::error::Result;
use crate::label::CompatRel;
use crate::lts::{Lts, StateId};

/// For every code-tree node and abstract input, the concrete inputs with
/// which the node is winning. Leaves are winning for the input of their
/// label and carry no concrete input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinningTable {
    abstract_inputs: BTreeSet<String>,
    winning: BTreeMap<(StateId, String), BTreeSet<String>>,
    leaves: BTreeMap<StateId, String>,
}

impl WinningTable {
    pub fn abstract_inputs(&self) -> &BTreeSet<String> {
        &self.abstract_inputs
    }

    pub fn is_winning(&self, node: &str, x: &str) -> bool {
        if let Some(input) = self.leaves.get(node) {
            return input == x;
        }
        self.winning
            .get(&(node.to_string(), x.to_string()))
            .is_some_and(|s| !s.is_empty())
    }

    /// All inputs with which the internal `node` is winning for `x`.
    pub fn winning_inputs(&self, node: &str, x: &str) -> BTreeSet<String> {
        self.winning
            .get(&(node.to_string(), x.to_string()))
            .cloned()
            .unwrap_or_default()
    }

    /// The winning input at `node` for `x`, if there is exactly one.
    pub fn strategy(&self, node: &str, x: &str) -> Option<&str> {
        let s = self.winning.get(&(node.to_string(), x.to_string()))?;
        if s.len() == 1 {
            s.iter().next().map(String::as_str)
        } else {
            None
        }
    }

    /// `(node, x)` pairs with more than one winning input.
    pub fn multi_winner_nodes(&self) -> Vec<(&str, &str)> {
        self.winning
            .iter()
            .filter(|(_, s)| s.len() > 1)
            .map(|((r, x), _)| (r.as_str(), x.as_str()))
            .collect()
    }
}

fn bfs_order(tree: &CodeTree) -> Vec<StateId> {
    let mut order = vec![tree.root().to_string()];
    let mut queue = VecDeque::from([tree.root().to_string()]);
    while let Some(r) = queue.pop_front() {
        for (_, c) in tree.children(&r) {
            order.push(c.clone());
            queue.push_back(c.clone());
        }
    }
    order
}

/// Solves the winning game bottom-up over the code tree.
///
/// A leaf is winning for the input component of its label. An internal node
/// is winning for `x` with `i` if it has an `i/o` edge and every `i/o` edge
/// leads to a node winning for `x`.
pub fn solve_winning(tree: &CodeTree) -> Result<WinningTable> {
    require_mealy_code(tree)?;
    let abstract_inputs: BTreeSet<String> = tree
        .target()
        .iter()
        .filter_map(|l| l.input().map(str::to_string))
        .collect();
    let leaves: BTreeMap<StateId, String> = tree
        .leaf_labels()
        .iter()
        .filter_map(|(r, l)| l.input().map(|x| (r.clone(), x.to_string())))
        .collect();
    let mut table = WinningTable {
        abstract_inputs,
        winning: BTreeMap::new(),
        leaves,
    };
    for r in bfs_order(tree).into_iter().rev() {
        let children = tree.children(&r);
        if children.is_empty() {
            continue;
        }
        let inputs: BTreeSet<&str> = children.iter().filter_map(|(l, _)| l.input()).collect();
        for x in table.abstract_inputs.clone() {
            let good: BTreeSet<String> = inputs
                .iter()
                .filter(|i| {
                    children
                        .iter()
                        .filter(|(l, _)| l.input() == Some(**i))
                        .all(|(_, c)| table.is_winning(c, &x))
                })
                .map(|i| i.to_string())
                .collect();
            table.winning.insert((r.clone(), x), good);
        }
    }
    Ok(table)
}

/// Two distinct concrete inputs at `node` that both lead towards leaves for
/// the abstract input `abstract_input`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminacyWitness {
    pub node: StateId,
    pub abstract_input: String,
    pub first: String,
    pub second: String,
}

/// Checks that at every node, distinct concrete inputs lead to subtrees
/// whose leaves carry disjoint sets of abstract inputs.
pub fn is_determinate(tree: &CodeTree) -> Result<Option<DeterminacyWitness>> {
    require_mealy_code(tree)?;
    let order = bfs_order(tree);
    let mut below: BTreeMap<&str, BTreeSet<String>> = BTreeMap::new();
    for r in order.iter().rev() {
        let mut xs = BTreeSet::new();
        if let Some(x) = tree.leaf_label(r).and_then(|l| l.input()) {
            xs.insert(x.to_string());
        }
        for (_, c) in tree.children(r) {
            xs.extend(below[c.as_str()].iter().cloned());
        }
        below.insert(r, xs);
    }
    for r in &order {
        let mut by_input: BTreeMap<&str, BTreeSet<&String>> = BTreeMap::new();
        for (l, c) in tree.children(r) {
            if let Some(i) = l.input() {
                by_input.entry(i).or_default().extend(below[c.as_str()].iter());
            }
        }
        let groups: Vec<_> = by_input.into_iter().collect();
        for (k, (i1, xs1)) in groups.iter().enumerate() {
            for (i2, xs2) in &groups[k + 1..] {
                if let Some(x) = xs1.intersection(xs2).next() {
                    return Ok(Some(DeterminacyWitness {
                        node: r.clone(),
                        abstract_input: (*x).clone(),
                        first: i1.to_string(),
                        second: i2.to_string(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Each state answers each input with at most one output and successor.
pub fn is_output_deterministic(m: &Lts) -> Result<bool> {
    m.is_deterministic(&CompatRel::SameInput)
}
