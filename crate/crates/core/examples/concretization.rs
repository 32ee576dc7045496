//! Concretize an abstract Mealy machine, completing unexpected behaviour
//! with a chaos state, then contract it back.

use actcode::fixtures;
use actcode::label::CompatRel;
use actcode::operators::{concretize, contract, is_icomplete};
use actcode::simulation::isomorphic;

fn main() -> actcode::Result<()> {
    let code = fixtures::doubled_code();
    let abstract_machine = fixtures::doubled_contraction();
    let rel = CompatRel::SameInput;

    let concrete = concretize(&code, &rel, &abstract_machine)?;
    println!(
        "concretization ({} states):\n{concrete}",
        concrete.reachable_states().len()
    );

    let back = contract(&code, &concrete)?;
    println!(
        "contracting it again gives the original: {}",
        isomorphic(&back, &abstract_machine)
    );

    match is_icomplete(&code, &rel, &fixtures::square_machine())? {
        None => println!("the code is complete for the square machine"),
        Some(w) => println!("incomplete: {w:?}"),
    }
    let stubborn = actcode::Lts::builder("s")
        .mealy_alphabet(["a", "b"], ["0", "1"])
        .edge("s", "a/1", "s")
        .build()?;
    if let Some(w) = is_icomplete(&code, &rel, &stubborn)? {
        println!(
            "incomplete for a machine answering 1: at {} the code has {} but the machine does {}",
            w.node, w.code_label, w.machine_label
        );
    }
    Ok(())
}
