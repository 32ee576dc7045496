//! Small hand-built machines and codes used throughout the docs, examples
//! and tests: the running square Mealy machine, the ASCII fragment code, the
//! coffee-machine code, and friends.

use std::collections::BTreeSet;

use crate::code::CodeMap;
use crate::label::{lab, word, Label};
use crate::lts::Lts;

fn labels(xs: &[&str]) -> BTreeSet<Label> {
    xs.iter().map(|x| lab(x)).collect()
}

fn mealy_labels(inputs: &[&str], outputs: &[&str]) -> BTreeSet<Label> {
    inputs
        .iter()
        .flat_map(|i| outputs.iter().map(move |o| lab(&format!("{i}/{o}"))))
        .collect()
}

fn code(source: BTreeSet<Label>, target: BTreeSet<Label>, entries: &[(&str, &str)]) -> CodeMap {
    CodeMap::validate(source, target, entries.iter().map(|(b, w)| (lab(b), word(w)))).expect("fixture code is valid")
}

/// Accepts either `a` or `b`, then stops.
pub fn choice() -> Lts {
    Lts::builder("q0")
        .edge("q0", "a", "q1")
        .edge("q0", "b", "q2")
        .build()
        .unwrap()
}

/// Naive refinement of [`choice`] that commits to `a` or `b` on the first `1`.
pub fn naive_choice_refinement() -> Lts {
    Lts::builder("q0")
        .edge("q0", "1", "q1")
        .edge("q0", "1", "q2")
        .edge("q1", "4", "q3")
        .edge("q2", "4", "q4")
        .edge("q3", "1", "q5")
        .edge("q4", "2", "q6")
        .labels(["1", "2", "4"])
        .build()
        .unwrap()
}

/// Deterministic refinement of [`choice`]: shares the `1·4` prefix.
pub fn shared_prefix_refinement() -> Lts {
    Lts::builder("q0")
        .edge("q0", "1", "q1")
        .edge("q1", "4", "q3")
        .edge("q3", "1", "q5")
        .edge("q3", "2", "q6")
        .labels(["1", "2", "4"])
        .build()
        .unwrap()
}

/// `a ↦ 1·4·1`, `b ↦ 1·4·2`.
pub fn choice_code() -> CodeMap {
    code(
        labels(&["1", "2", "4"]),
        labels(&["a", "b"]),
        &[("a", "1.4.1"), ("b", "1.4.2")],
    )
}

/// The running four-state Mealy machine over inputs `{a, b}` and outputs `{0, 1}`.
pub fn square_machine() -> Lts {
    Lts::builder("q0")
        .mealy_alphabet(["a", "b"], ["0", "1"])
        .edge("q0", "b/0", "q1")
        .edge("q0", "a/0", "q3")
        .edge("q1", "a/0", "q2")
        .edge("q1", "b/0", "q0")
        .edge("q2", "b/0", "q1")
        .edge("q2", "a/0", "q3")
        .edge("q3", "a/0", "q2")
        .edge("q3", "b/1", "q0")
        .build()
        .unwrap()
}

/// Octal ASCII encodings of the letters `M`, `e`, `a`, `l`, `y`.
pub fn ascii_code() -> CodeMap {
    code(
        labels(&["1", "4", "5", "7"]),
        labels(&["M", "e", "a", "l", "y"]),
        &[
            ("M", "1.1.5"),
            ("e", "1.4.5"),
            ("a", "1.4.1"),
            ("l", "1.5.4"),
            ("y", "1.7.1"),
        ],
    )
}

fn coffee_subtree(prefix: &str, n: usize) -> [(String, String); 2] {
    let join = |last: &str| {
        if prefix.is_empty() {
            last.to_string()
        } else {
            format!("{prefix}.{last}")
        }
    };
    [
        (format!("coffee/{n}"), join("coffee_button/coffee")),
        (format!("espresso/{n}"), join("espresso_button/espresso")),
    ]
}

fn coffee_entries(with_espresso_2: bool) -> Vec<(String, String)> {
    let prefixes = [
        "switch_on/ready",
        "switch_on/need_water.add_water/ready",
        "switch_on/need_water.add_water/need_beans.add_beans/ready",
        "switch_on/need_water.add_water/need_beans.add_beans/tray_full.remove_waste/ready",
    ];
    let mut entries = Vec::new();
    for (n, p) in prefixes.iter().enumerate() {
        for (b, w) in coffee_subtree(p, n) {
            if with_espresso_2 || b != "espresso/2" {
                entries.push((b, w));
            }
        }
    }
    entries
}

fn build_coffee_code(with_espresso_2: bool) -> CodeMap {
    let source = mealy_labels(
        &[
            "switch_on",
            "add_water",
            "add_beans",
            "remove_waste",
            "coffee_button",
            "espresso_button",
        ],
        &["ready", "need_water", "need_beans", "tray_full", "coffee", "espresso"],
    );
    let target = mealy_labels(&["coffee", "espresso"], &["0", "1", "2", "3"]);
    let entries = coffee_entries(with_espresso_2);
    let refs: Vec<(&str, &str)> = entries.iter().map(|(b, w)| (b.as_str(), w.as_str())).collect();
    code(source, target, &refs)
}

/// Adaptive code for ordering a drink; the abstract output counts the
/// interventions needed before the machine was ready.
pub fn coffee_code() -> CodeMap {
    build_coffee_code(true)
}

/// [`coffee_code`] without the `espresso/2` leaf.
pub fn coffee_code_missing_leaf() -> CodeMap {
    build_coffee_code(false)
}

/// `A/0 ↦ (a/0)(a/0)`, `B/0 ↦ (b/0)(b/0)` over the alphabet of [`square_machine`].
pub fn doubled_code() -> CodeMap {
    code(
        mealy_labels(&["a", "b"], &["0", "1"]),
        mealy_labels(&["A", "B"], &["0"]),
        &[("A/0", "a/0.a/0"), ("B/0", "b/0.b/0")],
    )
}

/// Contraction of [`square_machine`] under [`doubled_code`].
pub fn doubled_contraction() -> Lts {
    Lts::builder("q0")
        .mealy_alphabet(["A", "B"], ["0"])
        .edge("q0", "A/0", "q2")
        .edge("q2", "A/0", "q2")
        .edge("q0", "B/0", "q0")
        .edge("q2", "B/0", "q0")
        .build()
        .unwrap()
}

/// `B/0 ↦ b/0`, `C/0 ↦ (a/0)(b/0)`, `C/1 ↦ (a/0)(b/1)`.
pub fn adaptive_code() -> CodeMap {
    code(
        mealy_labels(&["a", "b"], &["0", "1"]),
        mealy_labels(&["B", "C"], &["0", "1"]),
        &[("B/0", "b/0"), ("C/0", "a/0.b/0"), ("C/1", "a/0.b/1")],
    )
}

/// Contraction of [`square_machine`] under [`adaptive_code`].
pub fn adaptive_contraction() -> Lts {
    Lts::builder("q0")
        .mealy_alphabet(["B", "C"], ["0", "1"])
        .edge("q0", "B/0", "q1")
        .edge("q1", "B/0", "q0")
        .edge("q0", "C/1", "q0")
        .edge("q1", "C/0", "q1")
        .build()
        .unwrap()
}

/// One state with self-loops `M` and `a`, over the letters of [`ascii_code`].
pub fn letter_loops() -> Lts {
    Lts::builder("q")
        .labels(["M", "e", "a", "l", "y"])
        .edge("q", "M", "q")
        .edge("q", "a", "q")
        .build()
        .unwrap()
}

/// Refinement of [`letter_loops`] under [`ascii_code`].
pub fn letter_loops_refined() -> Lts {
    Lts::builder("ε")
        .labels(["1", "4", "5", "7"])
        .edge("ε", "1", "1")
        .edge("1", "1", "11")
        .edge("1", "4", "14")
        .edge("11", "5", "ε")
        .edge("14", "1", "ε")
        .build()
        .unwrap()
}

/// Concretization of [`doubled_contraction`] under [`doubled_code`] with the
/// same-input relation, with a single chaos state.
pub fn doubled_concretization() -> Lts {
    let mut b = Lts::builder("q0,ε").mealy_alphabet(["a", "b"], ["0", "1"]);
    let edges = [
        ("q0,ε", "b/0", "q0,b"),
        ("q0,ε", "a/0", "q0,a"),
        ("q2,b", "a/0", "χ"),
        ("q2,b", "a/1", "χ"),
        ("q2,b", "b/0", "q0,ε"),
        ("q2,ε", "b/0", "q2,b"),
        ("q2,ε", "a/0", "q2,a"),
        ("q0,a", "a/0", "q2,ε"),
        ("q0,a", "b/0", "χ"),
        ("q0,a", "b/1", "χ"),
        ("q0,b", "a/0", "χ"),
        ("q0,b", "a/1", "χ"),
        ("q0,b", "b/0", "q0,ε"),
        ("q2,a", "b/0", "χ"),
        ("q2,a", "b/1", "χ"),
        ("q2,a", "a/0", "q2,ε"),
        ("χ", "a/0", "χ"),
        ("χ", "a/1", "χ"),
        ("χ", "b/0", "χ"),
        ("χ", "b/1", "χ"),
    ];
    for (s, l, t) in edges {
        b = b.edge(s, l, t);
    }
    b.build().unwrap()
}

/// Non-determinate code: inputs `a` and `b` at the root both reach leaves
/// for abstract input `0`.
pub fn nondeterminate_code() -> CodeMap {
    code(
        mealy_labels(&["a", "b"], &["0"]),
        mealy_labels(&["0"], &["A", "B"]),
        &[("0/A", "a/0"), ("0/B", "b/0")],
    )
}

/// Instance on which concretization fails to commute with code composition:
/// returns `(r, s, m)` with `r = {b ↦ a·a}` over `{a}`, `s` empty from
/// `{b}` to `{c}`, and `m` a single state over `{c}`.
pub fn noncommuting_concretization() -> (CodeMap, CodeMap, Lts) {
    let r = code(labels(&["a"]), labels(&["b"]), &[("b", "a.a")]);
    let s = CodeMap::empty(labels(&["b"]), labels(&["c"]));
    let m = Lts::builder("q0").labels(["c"]).build().unwrap();
    (r, s, m)
}
