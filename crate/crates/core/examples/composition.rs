//! Compose codes, and see that contraction follows composition while
//! concretization does not.

use actcode::code::CodeMap;
use actcode::fixtures;
use actcode::label::{lab, word, CompatRel, Label};
use actcode::operators::{concretize, contract};
use actcode::simulation::{isomorphic, simulates};
use std::collections::BTreeSet;

fn labels(xs: &[&str]) -> BTreeSet<Label> {
    xs.iter().map(|x| lab(x)).collect()
}

fn main() -> actcode::Result<()> {
    let outer = CodeMap::validate(
        labels(&["a1", "a2"]),
        labels(&["b1", "b2"]),
        [(lab("b1"), word("a1")), (lab("b2"), word("a2.a1"))],
    )?;
    let inner = CodeMap::validate(labels(&["b1", "b2"]), labels(&["c"]), [(lab("c"), word("b1.b2"))])?;
    let composed = outer.compose(&inner)?;
    println!("composed: c ↦ {}", composed.get(&lab("c")).unwrap());

    let m = actcode::Lts::builder("p")
        .labels(["a1", "a2"])
        .edge("p", "a1", "q")
        .edge("q", "a2", "r")
        .edge("r", "a1", "p")
        .build()?;
    let direct = contract(&composed, &m)?;
    let stepwise = contract(&inner, &contract(&outer, &m)?)?;
    println!("contraction commutes: {}", isomorphic(&direct, &stepwise));

    let (outer, inner, m) = fixtures::noncommuting_concretization();
    let rel = CompatRel::Identity;
    let direct = concretize(&outer.compose(&inner)?, &rel, &m)?;
    let stepwise = concretize(&outer, &rel, &concretize(&inner, &rel, &m)?)?;
    println!("concretization along the composite:\n{direct}");
    println!("stepwise concretization:\n{stepwise}");
    println!(
        "isomorphic: {}, similar both ways: {}",
        isomorphic(&direct, &stepwise),
        simulates(&direct, &stepwise) && simulates(&stepwise, &direct)
    );
    Ok(())
}
