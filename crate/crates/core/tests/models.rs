use bstkit_core::decide::{decide, Verdict};
use bstkit_core::models::{
    extend, flat_rank_for, flatten, is_flat, lift_with, solve_nested, LiftOptions, NestedVerdict,
};
use bstkit_core::oracle::{generate, nested_sat, random_flat_formula, Profile};
use bstkit_core::translate::{flat_formula, translate};
use bstkit_core::{Literal, Problem, Var};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn planted() -> impl Strategy<Value = Problem> {
    (any::<u64>(), 2usize..=5, 1usize..=4, 0usize..=3).prop_map(
        |(seed, vars, diffs, singletons)| {
            generate(
                seed,
                Profile::Planted {
                    vars,
                    diffs,
                    singletons: singletons.min(vars - 1),
                },
            )
        },
    )
}

fn random_problem() -> impl Strategy<Value = Problem> {
    (any::<u64>(), 2usize..=3, 0usize..=3, 1usize..=2).prop_map(
        |(seed, vars, diffs, singletons)| {
            generate(
                seed,
                Profile::Random {
                    vars,
                    diffs,
                    singletons,
                },
            )
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flattened_values_are_flat_and_unrelated(seed in any::<u64>(), extra in 0u32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_flat_formula(&mut rng, 3, 4);
        if let Verdict::Sat(a) = decide(&f).unwrap() {
            let rank = a.vars.len() as u32 + 1 + extra;
            let (m, _) = flatten(&a, &a.vars, rank).unwrap();
            prop_assert!(is_flat(&m, rank));
            prop_assert!(m.evaluate(&f).unwrap());
            for (_, u) in m.iter() {
                for (_, v) in m.iter() {
                    prop_assert!(!v.contains(u));
                }
            }
        }
    }

    #[test]
    fn planted_problems_are_solved(p in planted()) {
        let out = solve_nested(&p).unwrap();
        let NestedVerdict::Sat(m) = out.verdict else {
            return Err(TestCaseError::fail(format!("planted instance reported UNSAT: {p}")));
        };
        prop_assert!(m.models(&p).unwrap());
        prop_assert!(out.steps.len() <= p.psi().len());
        prop_assert!(nested_sat(&p, 3).unwrap());
    }

    #[test]
    fn verdicts_match_the_bounded_oracle(p in random_problem()) {
        let solved = solve_nested(&p).unwrap().verdict.is_sat();
        let bounded = (0..=3).any(|level| nested_sat(&p, level).unwrap());
        // The bounded oracle may miss models that need higher ranks.
        prop_assert!(solved || !bounded, "{}", p);
    }

    #[test]
    fn models_extend_to_the_translation(p in planted()) {
        if let NestedVerdict::Sat(m) = solve_nested(&p).unwrap().verdict {
            let xi = translate(&p);
            let full = extend(&m, &p).unwrap();
            prop_assert!(full.evaluate(&flat_formula(&p, &xi)).unwrap());
        }
    }

    #[test]
    fn lifting_keeps_its_invariants(p in planted()) {
        let xi = translate(&p);
        let Verdict::Sat(a) = decide(&flat_formula(&p, &xi)).unwrap() else {
            return Err(TestCaseError::fail(format!("translation of a planted instance is UNSAT: {p}")));
        };
        let vars: Vec<Var> = p.vars().iter().cloned().chain(xi.companion_vars().cloned()).collect();
        let (m0, params) = flatten(&a, &vars, flat_rank_for(&p)).unwrap();
        let options = LiftOptions { check_invariants: true, trace: true };
        let lifted = lift_with(&p, &m0, &params, options).unwrap();
        prop_assert!(lifted.model.models(&p).unwrap());
        prop_assert!(lifted.steps.iter().all(|s| s.model.is_some()));
        let retired: usize = lifted.steps.iter().map(|s| s.satisfied.len()).sum();
        prop_assert_eq!(retired, p.psi().len());
    }

    #[test]
    fn generation_and_translation_are_deterministic(seed in any::<u64>()) {
        let profile = Profile::Planted { vars: 4, diffs: 3, singletons: 2 };
        let p = generate(seed, profile);
        prop_assert_eq!(&p, &generate(seed, profile));
        let xi = translate(&p);
        prop_assert_eq!(xi.to_string(), translate(&p).to_string());
        let mut has_singleton = false;
        xi.to_formula().for_each_literal(&mut |l| has_singleton |= matches!(l, Literal::Singleton(..)));
        prop_assert!(!has_singleton);
    }
}
