//! Winning strategies for an adaptive coffee-machine code, and what breaks
//! when a leaf is missing or the code is not determinate.

use actcode::adaptor::{is_determinate, solve_winning};
use actcode::fixtures;

fn main() -> actcode::Result<()> {
    for (name, code) in [
        ("coffee code", fixtures::coffee_code()),
        ("coffee code missing a leaf", fixtures::coffee_code_missing_leaf()),
    ] {
        let tree = code.to_tree();
        let table = solve_winning(&tree)?;
        println!("{name}:");
        for x in ["coffee", "espresso"] {
            match table.strategy(tree.root(), x) {
                Some(i) => println!("  {x}: winning, start with {i}"),
                None => println!("  {x}: no winning strategy"),
            }
        }
    }

    let tree = fixtures::nondeterminate_code().to_tree();
    if let Some(w) = is_determinate(&tree)? {
        println!(
            "not determinate: at {} both {} and {} lead to leaves for input {}",
            w.node, w.first, w.second, w.abstract_input
        );
    }
    Ok(())
}
