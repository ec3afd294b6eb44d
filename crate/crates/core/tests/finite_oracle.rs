mod common;

use common::{finite_sweep, library, oracle, random_trial, rng};
use fdlab_core::{Tolerances, Verdict};
use proptest::prelude::*;

#[test]
fn two_hundred_seeded_tables_agree_with_brute_force() {
    let (mismatches, refutations) = finite_sweep(0xFD15C, 200);
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
    assert_eq!(refutations, 0);
}

#[test]
fn sweep_covers_both_verdicts() {
    let tol = Tolerances::default();
    let mut r = rng(0xFD15C);
    let verdicts: Vec<Verdict> = (0..200).map(|_| oracle(&random_trial(&mut r), &tol).verdict).collect();
    assert!(verdicts.contains(&Verdict::Consistent));
    assert!(verdicts.contains(&Verdict::HypothesisFailed));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn any_seed_agrees(seed in any::<u64>()) {
        let tol = Tolerances::default();
        let t = random_trial(&mut rng(seed));
        let got = library(&t, &tol);
        prop_assert_eq!(oracle(&t, &tol), got);
    }

    #[test]
    fn zc_contraction_never_refuted(seed in any::<u64>()) {
        let t = random_trial(&mut rng(seed));
        prop_assert_ne!(library(&t, &Tolerances::default()).verdict, Verdict::RefutationCandidate);
    }
}
