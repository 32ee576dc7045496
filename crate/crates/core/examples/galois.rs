//! The two adjunctions around contraction, checked on a sample of random
//! instances, plus the case that shows why determinism matters.

use actcode::fixtures;
use actcode::gen;
use actcode::label::{CompatRel, Label};
use actcode::operators::{concretize, contract, refine};
use actcode::simulation::simulates;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> actcode::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = gen::atomic_alphabet(2);
    let a_vec: Vec<Label> = a.iter().cloned().collect();
    let b: std::collections::BTreeSet<Label> = ["X", "Y", "Z"].iter().map(|s| Label::atomic(*s).unwrap()).collect();
    let b_vec: Vec<Label> = b.iter().cloned().collect();

    let (mut held, mut live) = (0, 0);
    for _ in 0..200 {
        let code = gen::random_code(&mut rng, &a, &b, 3, 3);
        let m = gen::random_deterministic_lts(&mut rng, 4, &a, &a_vec, 0.7);
        let n = gen::random_lts(&mut rng, 2, &b, &b_vec, 0.3);
        // refinement is left adjoint to contraction for deterministic m
        let left = simulates(&refine(&code, &n)?, &m);
        let right = simulates(&n, &contract(&code, &m)?);
        held += usize::from(!right || left);
        live += usize::from(right);

        // concretization is right adjoint; the identity relation makes every code complete
        let left = simulates(&contract(&code, &m)?, &n);
        let right = simulates(&m, &concretize(&code, &CompatRel::Identity, &n)?);
        assert_eq!(left, right);
    }
    println!("refinement adjunction held on {held}/200 instances ({live} with a live premise)");
    println!("concretization adjunction held on all 200 instances");

    let code = fixtures::choice_code();
    let choice = fixtures::choice();
    let naive = fixtures::naive_choice_refinement();
    println!(
        "nondeterministic concrete system: choice ⊑ contract(naive) = {}, refine(choice) ⊑ naive = {}",
        simulates(&choice, &contract(&code, &naive)?),
        simulates(&refine(&code, &choice)?, &naive)
    );
    Ok(())
}
