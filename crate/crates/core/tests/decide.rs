use bstkit_core::decide::{
    decide, decide_with, encode, solve, CnfInstance, SolverOptions, Verdict,
};
use bstkit_core::oracle::{flat_sat, random_flat_formula};
use bstkit_core::Formula;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_formula() -> impl Strategy<Value = Formula> {
    (any::<u64>(), 1usize..=4, 1usize..=5).prop_map(|(seed, vars, atoms)| {
        random_flat_formula(&mut ChaCha8Rng::seed_from_u64(seed), vars, atoms)
    })
}

/// The encoding's element budget, when the flat oracle can afford it.
fn budget(f: &Formula) -> Option<u32> {
    let k = encode(f).unwrap().elements() as u32;
    (k * f.vars().len() as u32 <= 20).then_some(k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1200))]

    #[test]
    fn decide_agrees_with_flat_oracle(f in small_formula()) {
        if let Some(k) = budget(&f) {
            let want = flat_sat(&f, k).unwrap();
            prop_assert_eq!(decide(&f).unwrap().is_sat(), want, "{}", f);
        }
    }
}

proptest! {
    #[test]
    fn models_satisfy_their_formula(f in small_formula(), activity in any::<bool>()) {
        let report = decide_with(&f, SolverOptions { activity }).unwrap();
        if let Verdict::Sat(m) = report.verdict {
            prop_assert!(m.satisfies(&f).unwrap());
        }
        prop_assert_eq!(report.cnf_vars, encode(&f).unwrap().cnf.num_vars);
    }

    #[test]
    fn verdict_ignores_conjunct_order(fs in prop::collection::vec(small_formula(), 1..4), rot in 0usize..4) {
        let mut rotated = fs.clone();
        rotated.rotate_left(rot % fs.len());
        let a = decide(&Formula::And(fs)).unwrap().is_sat();
        let b = decide(&Formula::And(rotated)).unwrap().is_sat();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn solver_matches_brute_force(
        clauses in prop::collection::vec(prop::collection::vec((1i32..=6, any::<bool>()), 1..4), 0..30)
    ) {
        let mut cnf = CnfInstance::default();
        for _ in 0..6 {
            cnf.new_var();
        }
        for c in &clauses {
            cnf.add(c.iter().map(|&(v, pos)| if pos { v } else { -v }));
        }
        let brute = (0u32..64).any(|bits| {
            clauses.iter().all(|c| c.iter().any(|&(v, pos)| (bits >> (v - 1) & 1 == 1) == pos))
        });
        prop_assert_eq!(solve(&cnf).is_sat(), brute);
    }
}
