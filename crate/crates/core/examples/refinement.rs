//! Refine abstract systems into concrete ones: ASCII letters into octal
//! digits, and a binary choice into a shared-prefix protocol.

use actcode::fixtures;
use actcode::operators::refine;
use actcode::simulation::{isomorphic, simulates};

fn main() -> actcode::Result<()> {
    let loops = fixtures::letter_loops();
    let ascii = fixtures::ascii_code();
    println!("letters M and a, looping:\n{loops}");
    println!("refined to octal digits:\n{}", refine(&ascii, &loops)?);

    let choice = fixtures::choice();
    let refined = refine(&fixtures::choice_code(), &choice)?;
    println!("choice between a and b:\n{choice}");
    println!("refined:\n{refined}");
    println!(
        "matches the shared-prefix protocol: {}",
        isomorphic(&refined, &fixtures::shared_prefix_refinement())
    );

    // the naive protocol commits to a branch on the first digit
    let naive = fixtures::naive_choice_refinement();
    println!("naive ⊑ refined: {}", simulates(&naive, &refined));
    println!("refined ⊑ naive: {}", simulates(&refined, &naive));
    Ok(())
}
