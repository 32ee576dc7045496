//! Drive the square machine through the doubled code: abstract inputs go in,
//! the adaptor talks to the machine, abstract outputs come out. Then check
//! that the adaptor composed with the machine behaves like the contraction.

use actcode::adaptor::{check_adaptor_theorem, run_adaptor, InProcessSut, Resolver};
use actcode::fixtures;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tree = fixtures::doubled_code().to_tree();
    let sut = InProcessSut::new(fixtures::square_machine(), Resolver::seeded(0))?;
    let run = run_adaptor(&tree, sut, ["A", "B", "A"])?;
    for event in &run.transcript {
        println!("{event}");
    }
    println!("outputs: {}", run.outputs.join(" "));

    let check = check_adaptor_theorem(&tree, &fixtures::square_machine())?;
    println!(
        "composition has {} states, implementation {}; delay similar both ways: {}",
        check.composition.reachable_states().len(),
        check.implementation.reachable_states().len(),
        check.holds()
    );
    Ok(())
}
