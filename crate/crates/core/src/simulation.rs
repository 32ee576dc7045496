//! Deciders for the simulation preorder, reachable-part isomorphism and
//! delay simulation.
//!
//! All deciders work on the reachable parts only and compute greatest
//! fixpoints by deleting violating pairs from the full relation. Pairs are
//! visited in lexicographic order of their state names, so results are
//! reproducible run to run.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::label::{CompatRel, Label};
use crate::lts::{Graph, Lts, StateId, Transition};

/// A relation between the states of two systems.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Relation {
    pub pairs: BTreeSet<(StateId, StateId)>,
}

impl Relation {
    pub fn contains(&self, p: &str, q: &str) -> bool {
        self.pairs.contains(&(p.to_string(), q.to_string()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Relational composition `self ; other`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let mut by_left: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (a, b) in &other.pairs {
            by_left.entry(a).or_default().push(b);
        }
        let pairs = self
            .pairs
            .iter()
            .flat_map(|(p, q)| {
                by_left
                    .get(q.as_str())
                    .into_iter()
                    .flatten()
                    .map(move |r| (p.clone(), r.to_string()))
            })
            .collect();
        Relation { pairs }
    }
}

/// Boolean matrix over `left × right` state indices.
struct Matrix {
    cols: usize,
    bits: Vec<bool>,
}

impl Matrix {
    fn full(rows: usize, cols: usize) -> Self {
        Matrix {
            cols,
            bits: vec![true; rows * cols],
        }
    }

    fn get(&self, p: usize, q: usize) -> bool {
        self.bits[p * self.cols + q]
    }

    fn clear(&mut self, p: usize, q: usize) {
        self.bits[p * self.cols + q] = false;
    }
}

/// Pair indices sorted lexicographically by state names.
fn lexicographic_pairs(g: &Graph<'_>, h: &Graph<'_>) -> Vec<(usize, usize)> {
    let mut left: Vec<usize> = (0..g.len()).collect();
    left.sort_by_key(|&p| g.ids[p]);
    let mut right: Vec<usize> = (0..h.len()).collect();
    right.sort_by_key(|&q| h.ids[q]);
    left.iter().flat_map(|&p| right.iter().map(move |&q| (p, q))).collect()
}

fn to_relation(g: &Graph<'_>, h: &Graph<'_>, m: &Matrix) -> Relation {
    let mut pairs = BTreeSet::new();
    for p in 0..g.len() {
        for q in 0..h.len() {
            if m.get(p, q) {
                pairs.insert((g.ids[p].to_string(), h.ids[q].to_string()));
            }
        }
    }
    Relation { pairs }
}

/// Greatest simulation from `m` to `n`, if it relates the initial states.
///
/// Labels must match exactly.
pub fn find_simulation(m: &Lts, n: &Lts) -> Option<Relation> {
    let (g, h) = (m.graph(), n.graph());
    let mut rel = Matrix::full(g.len(), h.len());
    let order = lexicographic_pairs(&g, &h);
    loop {
        let mut changed = false;
        for &(p, q) in &order {
            if !rel.get(p, q) {
                continue;
            }
            let ok = g.succ[p]
                .iter()
                .all(|&(a, p2)| h.succ[q].iter().any(|&(b, q2)| a == b && rel.get(p2, q2)));
            if !ok {
                rel.clear(p, q);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    rel.get(0, 0).then(|| to_relation(&g, &h, &rel))
}

/// `m ⊑ n`.
pub fn simulates(m: &Lts, n: &Lts) -> bool {
    find_simulation(m, n).is_some()
}

/// Re-checks the simulation conditions for a candidate relation directly
/// against the transition sets, independent of the fixpoint code.
pub fn verify_simulation(m: &Lts, n: &Lts, rel: &Relation) -> bool {
    if !rel.contains(m.initial(), n.initial()) {
        return false;
    }
    rel.pairs.iter().all(|(p, q)| {
        m.outgoing(p)
            .iter()
            .all(|(a, p2)| n.outgoing(q).iter().any(|(b, q2)| a == b && rel.contains(p2, q2)))
    })
}

/// Outcome of [`trace_inclusion_equiv_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceCheck {
    pub simulated: bool,
    pub traces_included_up_to_k: bool,
}

/// Decides `m ⊑ n` and bounded trace inclusion side by side. For a
/// deterministic `n` the two coincide once `k ≥ |Q_m|·|Q_n|`.
pub fn trace_inclusion_equiv_check(m: &Lts, n: &Lts, k: usize) -> Result<TraceCheck> {
    if !n.is_deterministic(&CompatRel::Identity)? {
        return Err(Error::NotDeterministic);
    }
    Ok(TraceCheck {
        simulated: simulates(m, n),
        traces_included_up_to_k: bounded_trace_inclusion(m, n, k),
    })
}

/// Whether every trace of `m` of length ≤ `k` is a trace of the
/// deterministic `n`, by breadth-first search over the product.
pub(crate) fn bounded_trace_inclusion(m: &Lts, n: &Lts, k: usize) -> bool {
    let (g, h) = (m.graph(), n.graph());
    let mut seen = BTreeSet::from([(0usize, 0usize)]);
    let mut queue = VecDeque::from([(0usize, 0usize, 0usize)]);
    while let Some((p, q, depth)) = queue.pop_front() {
        if depth == k {
            continue;
        }
        for &(a, p2) in &g.succ[p] {
            match h.succ[q].iter().find(|(b, _)| *b == a) {
                None => return false,
                Some(&(_, q2)) => {
                    if seen.insert((p2, q2)) {
                        queue.push_back((p2, q2, depth + 1));
                    }
                }
            }
        }
    }
    true
}

/// A bijection between reachable states.
pub type Bijection = BTreeMap<StateId, StateId>;

/// Node budget of [`find_isomorphism_reachable`].
pub const ISOMORPHISM_NODE_LIMIT: u64 = 1_000_000;

/// Finds an isomorphism between the reachable parts of `m` and `n`.
///
/// Returns `Ok(None)` if there is none and [`Error::Inconclusive`] if the
/// backtracking search exceeds [`ISOMORPHISM_NODE_LIMIT`] nodes.
pub fn find_isomorphism_reachable(m: &Lts, n: &Lts) -> Result<Option<Bijection>> {
    let (g, h) = (m.graph(), n.graph());
    if g.len() != h.len() {
        return Ok(None);
    }
    let edges = |x: &Graph<'_>| x.succ.iter().map(Vec::len).sum::<usize>();
    if edges(&g) != edges(&h) {
        return Ok(None);
    }
    fn signature<'a>(x: &Graph<'a>, s: usize) -> (Vec<&'a Label>, Vec<&'a Label>) {
        let mut out: Vec<&Label> = x.succ[s].iter().map(|(l, _)| *l).collect();
        let mut inc: Vec<&Label> = x.pred[s].iter().map(|(l, _)| *l).collect();
        out.sort();
        inc.sort();
        (out, inc)
    }
    let sig_g: Vec<_> = (0..g.len()).map(|s| signature(&g, s)).collect();
    let sig_h: Vec<_> = (0..h.len()).map(|s| signature(&h, s)).collect();
    if sig_g[0] != sig_h[0] {
        return Ok(None);
    }

    let mut search = IsoSearch {
        g: &g,
        h: &h,
        sig_g: &sig_g,
        sig_h: &sig_h,
        fwd: vec![usize::MAX; g.len()],
        bwd: vec![usize::MAX; h.len()],
        nodes: 0,
    };
    if !search.consistent(0, 0) {
        return Ok(None);
    }
    search.fwd[0] = 0;
    search.bwd[0] = 0;
    // graph indices follow BFS order, so every state > 0 has a predecessor
    // with a smaller index
    if search.extend(1)? {
        let bij = (0..g.len())
            .map(|p| (g.ids[p].to_string(), h.ids[search.fwd[p]].to_string()))
            .collect();
        Ok(Some(bij))
    } else {
        Ok(None)
    }
}

type Signature<'a> = (Vec<&'a Label>, Vec<&'a Label>);

struct IsoSearch<'g, 'a> {
    g: &'g Graph<'a>,
    h: &'g Graph<'a>,
    sig_g: &'g [Signature<'a>],
    sig_h: &'g [Signature<'a>],
    fwd: Vec<usize>,
    bwd: Vec<usize>,
    nodes: u64,
}

impl IsoSearch<'_, '_> {
    fn extend(&mut self, s: usize) -> Result<bool> {
        if s == self.g.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > ISOMORPHISM_NODE_LIMIT {
            return Err(Error::Inconclusive(self.nodes));
        }
        let (label, parent) = *self.g.pred[s]
            .iter()
            .find(|(_, p)| *p < s)
            .expect("BFS order gives every non-initial state an earlier predecessor");
        let image = self.fwd[parent];
        let candidates: BTreeSet<usize> = self.h.succ[image]
            .iter()
            .filter(|(l, t)| *l == label && self.bwd[*t] == usize::MAX)
            .map(|(_, t)| *t)
            .collect();
        for t in candidates {
            if self.sig_g[s] != self.sig_h[t] || !self.consistent(s, t) {
                continue;
            }
            self.fwd[s] = t;
            self.bwd[t] = s;
            if self.extend(s + 1)? {
                return Ok(true);
            }
            self.fwd[s] = usize::MAX;
            self.bwd[t] = usize::MAX;
        }
        Ok(false)
    }

    /// Every edge between `s` and already mapped states (including `s` itself)
    /// has a counterpart under the tentative mapping `s ↦ t`, in both
    /// directions.
    fn consistent(&self, s: usize, t: usize) -> bool {
        let image = |p: usize| if p == s { t } else { self.fwd[p] };
        let preimage = |q: usize| if q == t { s } else { self.bwd[q] };
        let has =
            |x: &Graph<'_>, from: usize, l: &Label, to: usize| x.succ[from].iter().any(|(m, y)| *m == l && *y == to);
        let forward = self.g.succ[s]
            .iter()
            .filter(|(_, p)| image(*p) != usize::MAX)
            .all(|(l, p)| has(self.h, t, l, image(*p)))
            && self.g.pred[s]
                .iter()
                .filter(|(_, p)| image(*p) != usize::MAX)
                .all(|(l, p)| has(self.h, image(*p), l, t));
        let backward = self.h.succ[t]
            .iter()
            .filter(|(_, q)| preimage(*q) != usize::MAX)
            .all(|(l, q)| has(self.g, s, l, preimage(*q)))
            && self.h.pred[t]
                .iter()
                .filter(|(_, q)| preimage(*q) != usize::MAX)
                .all(|(l, q)| has(self.g, preimage(*q), l, s));
        forward && backward
    }
}

/// `m ≅ n` on reachable parts. Inconclusive searches count as failure.
pub fn isomorphic(m: &Lts, n: &Lts) -> bool {
    matches!(find_isomorphism_reachable(m, n), Ok(Some(_)))
}

/// Re-checks a candidate bijection against both transition sets.
pub fn verify_isomorphism(m: &Lts, n: &Lts, f: &Bijection) -> bool {
    let (rm, rn) = (m.reachable_states(), n.reachable_states());
    let keys: BTreeSet<&String> = f.keys().collect();
    let values: BTreeSet<&String> = f.values().collect();
    if keys != rm.iter().collect() || values != rn.iter().collect() || values.len() != f.len() {
        return false;
    }
    if f.get(m.initial()).map(String::as_str) != Some(n.initial()) {
        return false;
    }
    let image: BTreeSet<Transition> = m
        .transitions()
        .iter()
        .filter(|t| rm.contains(&t.source))
        .map(|t| Transition {
            source: f[&t.source].clone(),
            label: t.label.clone(),
            target: f[&t.target].clone(),
        })
        .collect();
    let reach_n: BTreeSet<Transition> = n
        .transitions()
        .iter()
        .filter(|t| rn.contains(&t.source))
        .cloned()
        .collect();
    image == reach_n
}

/// Greatest delay simulation from `m` to `n` relating the initial states.
///
/// A step `p --a--> p'` of `m` from a related pair `(p, q)` is matched either
/// by `q ⇒ q' --a--> q''` with `(p', q'')` related, where `⇒` is a finite
/// sequence of `tau` steps, or, when `a = tau`, by `q` staying put with
/// `(p', q)` related.
pub fn find_delay_simulation(m: &Lts, n: &Lts, tau: &Label) -> Result<Option<Relation>> {
    if !m.alphabet().contains(tau) || !n.alphabet().contains(tau) {
        return Err(Error::AlphabetMismatch(format!(
            "hidden action {tau} must belong to both alphabets"
        )));
    }
    let (g, h) = (m.graph(), n.graph());
    // weak[q] = {(a, q'') | q ⇒ q' --a--> q''}
    let weak: Vec<Vec<(&Label, usize)>> = (0..h.len())
        .map(|q| {
            let closure = tau_closure(&h, q, tau);
            let mut edges: Vec<(&Label, usize)> = closure.iter().flat_map(|&q1| h.succ[q1].iter().copied()).collect();
            edges.sort();
            edges.dedup();
            edges
        })
        .collect();

    let mut rel = Matrix::full(g.len(), h.len());
    let order = lexicographic_pairs(&g, &h);
    loop {
        let mut changed = false;
        for &(p, q) in &order {
            if !rel.get(p, q) {
                continue;
            }
            let ok = g.succ[p].iter().all(|&(a, p2)| {
                (a == tau && rel.get(p2, q)) || weak[q].iter().any(|&(b, q2)| a == b && rel.get(p2, q2))
            });
            if !ok {
                rel.clear(p, q);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(rel.get(0, 0).then(|| to_relation(&g, &h, &rel)))
}

fn tau_closure(h: &Graph<'_>, q: usize, tau: &Label) -> Vec<usize> {
    let mut seen = vec![false; h.len()];
    seen[q] = true;
    let mut stack = vec![q];
    let mut out = vec![q];
    while let Some(x) = stack.pop() {
        for &(l, y) in &h.succ[x] {
            if l == tau && !seen[y] {
                seen[y] = true;
                stack.push(y);
                out.push(y);
            }
        }
    }
    out
}

/// Re-checks the delay simulation transfer property for a candidate relation.
pub fn verify_delay_simulation(m: &Lts, n: &Lts, tau: &Label, rel: &Relation) -> bool {
    if !rel.contains(m.initial(), n.initial()) {
        return false;
    }
    let closure = |q: &str| -> BTreeSet<String> {
        let mut seen = BTreeSet::from([q.to_string()]);
        let mut stack = vec![q.to_string()];
        while let Some(x) = stack.pop() {
            for y in n.successors(&x, tau) {
                if seen.insert(y.to_string()) {
                    stack.push(y.to_string());
                }
            }
        }
        seen
    };
    rel.pairs.iter().all(|(p, q)| {
        let cl = closure(q);
        m.outgoing(p).iter().all(|(a, p2)| {
            (a == tau && rel.contains(p2, q)) || cl.iter().any(|q1| n.successors(q1, a).any(|q2| rel.contains(p2, q2)))
        })
    })
}

/// Observable traces (with `tau` erased) of length at most `k`.
pub fn observable_traces_up_to(m: &Lts, tau: &Label, k: usize) -> BTreeSet<Vec<Label>> {
    let g = m.graph();
    let closure = |set: BTreeSet<usize>| -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for q in set {
            out.extend(tau_closure(&g, q, tau));
        }
        out
    };
    let mut traces = BTreeSet::from([Vec::new()]);
    let mut layer: BTreeMap<Vec<Label>, BTreeSet<usize>> = BTreeMap::from([(Vec::new(), closure(BTreeSet::from([0])))]);
    for _ in 0..k {
        let mut next: BTreeMap<Vec<Label>, BTreeSet<usize>> = BTreeMap::new();
        for (w, qs) in &layer {
            for &q in qs {
                for &(a, q2) in &g.succ[q] {
                    if a == tau {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(a.clone());
                    next.entry(w2).or_default().insert(q2);
                }
            }
        }
        let next: BTreeMap<_, _> = next.into_iter().map(|(w, qs)| (w, closure(qs))).collect();
        if next.is_empty() {
            break;
        }
        traces.extend(next.keys().cloned());
        layer = next;
    }
    traces
}
