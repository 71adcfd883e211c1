//! Seeded invariants for the update engine and the concrete syntax.
//!
//! Every property draws a random seed, expands it into a model/file instance
//! or an AST through the oracle generators, and checks a law that should hold
//! for every instance: eliminative formulas only discard possibilities,
//! whole-state tests are idempotent, identification and non-identification
//! partition non-absurd files, and printing then reparsing is the identity.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use filesem::eval::{update, Outcome};
use filesem::oracle::{
    gen_instance, gen_roundtrip_box, gen_roundtrip_formula, gen_semantic_formula, FormulaKind,
};
use filesem::parser::{parse_box, parse_formula};
use filesem::state::File;

fn proceed(outcome: Outcome) -> File {
    match outcome {
        Outcome::Proceed(file) => file,
        Outcome::PresupFailure(diag) => panic!("unexpected presupposition failure: {diag:?}"),
    }
}

proptest! {
    #[test]
    fn eliminative_updates_only_discard(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = gen_instance(&mut rng);
        let formula = gen_semantic_formula(&mut rng, &inst, 3, FormulaKind::Eliminative);
        let out = proceed(update(&inst.file, &formula, &inst.model).unwrap());
        prop_assert_eq!(out.domain(), inst.file.domain());
        prop_assert!(out.possibilities().is_subset(inst.file.possibilities()));
    }
}

proptest! {
    #[test]
    fn whole_state_tests_are_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = gen_instance(&mut rng);
        let test = gen_semantic_formula(&mut rng, &inst, 2, FormulaKind::Test);
        let once = proceed(update(&inst.file, &test, &inst.model).unwrap());
        let twice = proceed(update(&once, &test, &inst.model).unwrap());
        prop_assert_eq!(&twice, &once);
        prop_assert!(once == inst.file || once.is_absurd());
    }
}

proptest! {
    #[test]
    fn identification_partitions_non_absurd_files(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = gen_instance(&mut rng);
        let id = inst.file.is_identified(&inst.dref).unwrap();
        let ud = inst.file.is_unidentified(&inst.dref).unwrap();
        prop_assert!(id != ud);
    }
}

proptest! {
    #[test]
    fn formula_display_reparses_to_the_same_ast(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let formula = gen_roundtrip_formula(&mut rng, 3);
        let text = formula.to_string();
        let reparsed = parse_formula(&text).unwrap();
        prop_assert_eq!(reparsed, formula, "round-trip through {}", text);
    }
}

proptest! {
    #[test]
    fn box_display_reparses_to_the_same_ast(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bx = gen_roundtrip_box(&mut rng, 2);
        let text = bx.to_string();
        let reparsed = parse_box(&text).unwrap();
        prop_assert_eq!(reparsed, bx, "round-trip through {}", text);
    }
}
