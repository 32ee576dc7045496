mod common;

use std::collections::BTreeSet;

use actcode::code::CodeMap;
use actcode::doc;
use actcode::gen;
use actcode::label::{Label, Word};
use actcode::lts::{Lts, Transition};
use actcode::operators::{contract, refine};
use actcode::simulation::{
    find_delay_simulation, find_isomorphism_reachable, find_simulation, simulates, verify_simulation,
};
use common::named_alphabet;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn build(states: usize, alphabet: &BTreeSet<Label>, edges: &[(usize, usize, usize)], prefix: &str) -> Lts {
    let labels: Vec<&Label> = alphabet.iter().collect();
    let name = |k: usize| format!("{prefix}{}", k % states);
    let transitions = edges.iter().map(|&(p, a, q)| Transition {
        source: name(p),
        label: labels[a % labels.len()].clone(),
        target: name(q),
    });
    Lts::new((0..states).map(name), name(0), transitions, alphabet.clone()).unwrap()
}

fn edges() -> impl Strategy<Value = (usize, Vec<(usize, usize, usize)>)> {
    (
        1usize..=4,
        prop::collection::vec((0usize..4, 0usize..2, 0usize..4), 0..10),
    )
}

fn lts() -> impl Strategy<Value = Lts> {
    edges().prop_map(|(n, es)| build(n, &gen::atomic_alphabet(2), &es, "s"))
}

fn code(seed: u64, source: &BTreeSet<Label>, target: &BTreeSet<Label>) -> CodeMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen::random_code(&mut rng, source, target, target.len(), 3)
}

proptest! {
    #[test]
    fn simulation_is_reflexive(m in lts()) {
        let rel = find_simulation(&m, &m).expect("m ⊑ m");
        prop_assert!(verify_simulation(&m, &m, &rel));
        for q in m.reachable_states() {
            prop_assert!(rel.contains(&q, &q));
        }
    }

    #[test]
    fn simulation_witnesses_compose(a in lts(), b in lts(), c in lts()) {
        if let (Some(ab), Some(bc)) = (find_simulation(&a, &b), find_simulation(&b, &c)) {
            let ac = ab.compose(&bc);
            prop_assert!(verify_simulation(&a, &c, &ac));
        }
    }

    #[test]
    fn renaming_gives_an_isomorphism((n, es) in edges()) {
        let alphabet = gen::atomic_alphabet(2);
        let m = build(n, &alphabet, &es, "s");
        let renamed = build(n, &alphabet, &es, "t");
        let f = find_isomorphism_reachable(&m, &renamed).unwrap().expect("renaming is an isomorphism");
        prop_assert_eq!(f.get(m.initial()).map(String::as_str), Some(renamed.initial()));
        prop_assert!(simulates(&m, &renamed) && simulates(&renamed, &m));
    }

    #[test]
    fn delay_simulation_is_reflexive(m in lts()) {
        let tau = Label::atomic("a").unwrap();
        prop_assert!(find_delay_simulation(&m, &m, &tau).unwrap().is_some());
    }

    #[test]
    fn lts_documents_round_trip(m in lts()) {
        let text = doc::render_lts(&m);
        let back = doc::parse_lts(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(doc::render_lts(&back), text);
    }

    #[test]
    fn codes_round_trip_through_trees_and_documents(seed in any::<u64>(), k in 0usize..6) {
        let c = code(seed, &gen::atomic_alphabet(2), &named_alphabet("B", k));
        let tree = c.to_tree();
        prop_assert!(tree.lts().structure().grounded);
        prop_assert_eq!(tree.to_map(), c.clone());
        prop_assert_eq!(doc::parse_code(&doc::render_code(&c)).unwrap(), c.clone());
        prop_assert_eq!(doc::parse_tree(&doc::render_tree(&tree)).unwrap().to_map(), c);
    }

    #[test]
    fn validate_accepts_exactly_prefix_free_maps(
        words in prop::collection::vec(prop::collection::vec(0usize..2, 0..4), 0..5)
    ) {
        let source = gen::atomic_alphabet(2);
        let letters: Vec<Label> = source.iter().cloned().collect();
        let target = named_alphabet("B", words.len());
        let entries: Vec<(Label, Word)> = target
            .iter()
            .cloned()
            .zip(words.iter().map(|w| w.iter().map(|&i| letters[i].clone()).collect()))
            .collect();
        let free = entries.iter().all(|(_, w)| !w.is_empty())
            && entries.iter().all(|(b, v)| entries.iter().all(|(c, w)| b == c || !v.is_prefix_of(w)));
        prop_assert_eq!(CodeMap::validate(source, target, entries).is_ok(), free);
    }

    #[test]
    fn composition_is_associative(r in any::<u64>(), s in any::<u64>(), t in any::<u64>()) {
        let (a, b, c, d) = (
            gen::atomic_alphabet(2),
            named_alphabet("B", 3),
            named_alphabet("C", 3),
            named_alphabet("D", 3),
        );
        let (r, s, t) = (code(r, &a, &b), code(s, &b, &c), code(t, &c, &d));
        let left = r.compose(&s).unwrap().compose(&t).unwrap();
        let right = r.compose(&s.compose(&t).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn composed_domain(r in any::<u64>(), s in any::<u64>()) {
        let (a, b, c) = (gen::atomic_alphabet(2), named_alphabet("B", 3), named_alphabet("C", 3));
        let (r, s) = (code(r, &a, &b), code(s, &b, &c));
        let rs = r.compose(&s).unwrap();
        for label in &c {
            let expected = s.get(label).is_some_and(|w| w.labels().iter().all(|l| r.get(l).is_some()));
            prop_assert_eq!(rs.get(label).is_some(), expected);
        }
    }

    #[test]
    fn contraction_and_refinement_are_monotone(seed in any::<u64>(), (n, es) in edges(), drop in 0usize..10) {
        let a = gen::atomic_alphabet(2);
        let b = named_alphabet("B", 2);
        let c = code(seed, &a, &b);
        let big = build(n, &a, &es, "s");
        let small_edges: Vec<_> = es.iter().enumerate().filter(|(k, _)| *k != drop).map(|(_, e)| *e).collect();
        let small = build(n, &a, &small_edges, "s");
        prop_assert!(simulates(&contract(&c, &small).unwrap(), &contract(&c, &big).unwrap()));

        let big = build(n, &b, &es, "s");
        let small = build(n, &b, &small_edges, "s");
        prop_assert!(simulates(&refine(&c, &small).unwrap(), &refine(&c, &big).unwrap()));
    }

    #[test]
    fn empty_code_contracts_to_a_point(m in lts()) {
        let c = CodeMap::empty(gen::atomic_alphabet(2), named_alphabet("B", 2));
        let n = contract(&c, &m).unwrap();
        prop_assert_eq!(n.reachable_states().len(), 1);
        prop_assert!(n.transitions().is_empty());
    }
}
