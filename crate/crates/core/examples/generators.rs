//! Seeded random instances: the same seed always gives the same machine or
//! code, and generated adaptor codes come out determinate and winning.

use actcode::adaptor::{is_determinate, solve_winning};
use actcode::doc;
use actcode::gen::{self, MealyOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> actcode::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (inputs, outputs) = gen::io_symbols(2, 2);
    let opts = MealyOptions {
        input_enabled: true,
        output_deterministic: true,
    };
    let m = gen::random_mealy(&mut rng, 3, &inputs, &outputs, opts);
    print!("{}", doc::render_lts(&m));

    let code = gen::random_code(&mut rng, &gen::atomic_alphabet(2), &gen::atomic_alphabet(4), 4, 3);
    print!("{}", doc::render_code(&code));

    let xs = vec!["X".to_string(), "Z".to_string()];
    let adaptor_code = gen::random_adaptor_code(&mut rng, &inputs, &outputs, &xs, 3);
    let tree = adaptor_code.to_tree();
    let table = solve_winning(&tree)?;
    println!(
        "adaptor code with {} entries: determinate {}, winning for X {} and Z {}",
        adaptor_code.len(),
        is_determinate(&tree)?.is_none(),
        table.is_winning(tree.root(), "X"),
        table.is_winning(tree.root(), "Z")
    );
    Ok(())
}
