//! Contract the square Mealy machine along two codes: one that doubles each
//! letter and one that branches on the machine's output.

use actcode::fixtures;
use actcode::operators::contract;

fn main() -> actcode::Result<()> {
    let m = fixtures::square_machine();
    println!("square machine:\n{m}");

    let doubled = fixtures::doubled_code();
    println!("doubled code: {}", describe(&doubled));
    println!("contraction:\n{}", contract(&doubled, &m)?);

    let adaptive = fixtures::adaptive_code();
    println!("adaptive code: {}", describe(&adaptive));
    println!("contraction:\n{}", contract(&adaptive, &m)?);
    Ok(())
}

fn describe(code: &actcode::CodeMap) -> String {
    code.entries()
        .iter()
        .map(|(b, w)| format!("{b} ↦ {w}"))
        .collect::<Vec<_>>()
        .join(", ")
}
