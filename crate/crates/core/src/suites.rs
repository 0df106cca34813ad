//! Executable property suites, shared by the acceptance tests and
//! `bstkit check`. Each suite returns a report instead of panicking.

use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decide::{decide, encode, AbstractModel, Verdict};
use crate::hf::{bound_checks, check_axioms, count_rank_exact, enumerate_level, HfSet};
use crate::models::{
    flat_rank_for, flatten, is_flat, order, region_signatures, solve_nested, transform, ModelError,
    NestedVerdict, SetAssignment,
};
use crate::oracle::{flat_sat, generate, nested_sat, random_flat_formula, Profile};
use crate::syntax::{parse_problem, Formula, Literal, Problem, Var};
use crate::translate::{flat_formula, translate, translate_size, XiFormula};

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            ..Self::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} ({} checks, {} failures, {:.2?})",
            self.name,
            self.checked,
            self.failures.len(),
            self.elapsed
        )?;
        for n in &self.notes {
            write!(f, "\n    {n}")?;
        }
        for e in self.failures.iter().filter(|e| !e.is_empty()) {
            write!(f, "\n    failure: {e}")?;
        }
        Ok(())
    }
}

fn timed(name: &'static str, body: impl FnOnce(&mut SuiteReport)) -> SuiteReport {
    let mut r = SuiteReport::new(name);
    let start = Instant::now();
    body(&mut r);
    r.elapsed = start.elapsed();
    r
}

pub const EXAMPLE_ONE: &str = "x = { y } ; y = { z } ; z = { x } ; a = b \\ c";
pub const EXAMPLE_TWO: &str = "y = x \\ z ; x = { y } ; y = { z }";
pub const EXAMPLE_THREE: &str = "x = y \\ y2 ; x = z \\ z2 ; z = { y }";

/// The three worked examples, each with its solve time.
pub fn examples(time_limit: Duration) -> SuiteReport {
    timed("worked examples", |r| {
        for (name, text, want_sat) in [
            ("example 1", EXAMPLE_ONE, false),
            ("example 2", EXAMPLE_TWO, false),
            ("example 3", EXAMPLE_THREE, true),
        ] {
            let p = parse_problem(text).expect("example parses");
            let start = Instant::now();
            let out = solve_nested(&p);
            let took = start.elapsed();
            r.notes.push(format!("{name}: {took:.2?}"));
            r.check(took < time_limit, || format!("{name} took {took:?}"));
            match out {
                Ok(o) => match (o.verdict, want_sat) {
                    (NestedVerdict::Unsat, false) => r.check(true, String::new),
                    (NestedVerdict::Sat(m), true) => {
                        let v = |n: &str| m.value(&Var::user(n)).ok().cloned();
                        let shape = m.models(&p) == Ok(true)
                            && v("x").is_some_and(|s| s.is_empty())
                            && matches!((v("z"), v("y")), (Some(z), Some(y)) if z == HfSet::singleton(&y));
                        r.check(shape, || {
                            format!("{name}: model lacks the expected shape:\n{m}")
                        });
                    }
                    (v, _) => r.check(false, || format!("{name}: wrong verdict {:?}", v.is_sat())),
                },
                Err(e) => r.check(false, || format!("{name}: {e}")),
            }
        }
    })
}

/// A problem with `n` variables and `p` singleton atoms on distinct set
/// sides.
pub fn sized_problem(n: usize, p: usize) -> Problem {
    let v = |i: usize| Var::user(format!("v{i}"));
    let mut lits: Vec<Literal> = (0..p).map(|i| Literal::Singleton(v(i), v(i + 1))).collect();
    for i in 0..n {
        lits.push(Literal::DiffEq(v(i), v((i + 1) % n), v((i + 2) % n)));
    }
    Problem::new(lits)
}

/// Conjunct counts against the closed form, and quadratic growth.
pub fn translation_size(time_limit: Duration) -> SuiteReport {
    timed("translation size", |r| {
        for (n, p) in [(10, 3), (50, 10), (200, 50)] {
            let prob = sized_problem(n, p);
            let start = Instant::now();
            let xi = translate(&prob);
            let took = start.elapsed();
            let want = translate_size(n, p);
            r.notes
                .push(format!("n={n} p={p}: {} conjuncts in {took:.2?}", xi.len()));
            r.check(xi.len() == want, || {
                format!("n={n} p={p}: {} conjuncts, closed form {want}", xi.len())
            });
            if n == 200 {
                r.check(took < time_limit, || format!("n=200 took {took:?}"));
            }
        }
        let ratio = |p| {
            translate(&sized_problem(200, p)).len() as f64
                / translate(&sized_problem(100, p)).len() as f64
        };
        let (pinned, wide) = (ratio(3), ratio(10));
        r.notes.push(format!(
            "count ratio n=200/n=100: {pinned:.3} with p=3, {wide:.3} with p=10"
        ));
        r.check((pinned - 4.0).abs() <= 0.3, || {
            format!("ratio {pinned} with p=3")
        });
    })
}

/// Planted instances are solved and verified; every UNSAT verdict on a
/// random instance is confirmed by the bounded nested oracle.
pub fn equisatisfiability(planted: usize, random: usize, seed: u64) -> SuiteReport {
    timed("equisatisfiability", |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sat = 0;
        for _ in 0..planted {
            let vars = rng.gen_range(2..=5);
            let profile = Profile::Planted {
                vars,
                diffs: rng.gen_range(1..=4),
                singletons: rng.gen_range(0..=3.min(vars - 1)),
            };
            let p = generate(rng.gen(), profile);
            match solve_nested(&p) {
                Ok(out) => match out.verdict {
                    NestedVerdict::Sat(m) if m.models(&p) == Ok(true) => sat += 1,
                    NestedVerdict::Sat(m) => {
                        r.failures.push(format!("unverified model for {p}:\n{m}"))
                    }
                    NestedVerdict::Unsat => r
                        .failures
                        .push(format!("planted instance reported UNSAT: {p}")),
                },
                Err(e) => r.failures.push(format!("{p}: {e}")),
            }
            r.checked += 1;
        }
        r.notes
            .push(format!("planted: {sat}/{planted} solved and verified"));
        let (mut unsat, mut agree) = (0, 0);
        for _ in 0..random {
            let vars = rng.gen_range(2..=4);
            let profile = Profile::Random {
                vars,
                diffs: rng.gen_range(0..=3),
                singletons: rng.gen_range(1..=3),
            };
            let p = generate(rng.gen(), profile);
            let verdict = match solve_nested(&p) {
                Ok(out) => out.verdict.is_sat(),
                Err(e) => {
                    r.check(false, || format!("{p}: {e}"));
                    continue;
                }
            };
            let oracle_sat = (0..=3).any(|level| nested_sat(&p, level).unwrap_or(false));
            if !verdict {
                unsat += 1;
            }
            if verdict == oracle_sat {
                agree += 1;
            }
            // A bounded oracle can miss models, never invent them.
            r.check(verdict || !oracle_sat, || {
                format!("UNSAT but the oracle found a model: {p}")
            });
        }
        r.notes.push(format!(
            "random: {unsat}/{random} UNSAT, all confirmed at levels 0..=3; {agree}/{random} verdicts equal"
        ));
    })
}

/// Every conjunction of at most three distinct difference literals over
/// three variables.
pub fn flat_grid_formulas() -> Vec<Formula> {
    let vars = [Var::user("x"), Var::user("y"), Var::user("z")];
    let mut lits = Vec::new();
    for eq in [true, false] {
        for a in &vars {
            for b in &vars {
                for c in &vars {
                    let (a, b, c) = (a.clone(), b.clone(), c.clone());
                    lits.push(if eq {
                        Literal::DiffEq(a, b, c)
                    } else {
                        Literal::DiffNeq(a, b, c)
                    });
                }
            }
        }
    }
    let n = lits.len();
    let mut out = vec![Formula::And(Vec::new())];
    for i in 0..n {
        out.push(Formula::conj([lits[i].clone()]));
        for j in i + 1..n {
            out.push(Formula::conj([lits[i].clone(), lits[j].clone()]));
            for k in j + 1..n {
                out.push(Formula::conj([
                    lits[i].clone(),
                    lits[j].clone(),
                    lits[k].clone(),
                ]));
            }
        }
    }
    out
}

/// Decision procedure against the flat oracle on the exhaustive grid and on
/// random propositional formulas.
pub fn flat_oracle(random: usize, seed: u64) -> SuiteReport {
    timed("flat oracle agreement", |r| {
        let grid = flat_grid_formulas();
        let mut sat = 0;
        for f in &grid {
            let want = flat_sat(f, 3).expect("grid fits the budget");
            let got = decide(f).map(|v| v.is_sat());
            sat += usize::from(want);
            r.check(got == Ok(want), || {
                format!("{f}: decide {got:?}, oracle {want}")
            });
        }
        r.notes.push(format!(
            "grid: {} conjunctions, {sat} satisfiable",
            grid.len()
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        while checked < random {
            let (vars, atoms) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let f = random_flat_formula(&mut rng, vars, atoms);
            let n = f.vars().len() as u32;
            let k = encode(&f).expect("flat formula").elements() as u32;
            if k * n > crate::oracle::BUDGET_LOG2 {
                continue;
            }
            checked += 1;
            let want = flat_sat(&f, k).expect("within budget");
            let got = decide(&f).map(|v| v.is_sat());
            r.check(got == Ok(want), || {
                format!("{f}: decide {got:?}, oracle {want}")
            });
        }
        r.notes
            .push(format!("random: {random} propositional formulas"));
    })
}

fn random_sat_flat(rng: &mut ChaCha8Rng) -> (Formula, AbstractModel) {
    loop {
        let (vars, atoms) = (rng.gen_range(2..=5), rng.gen_range(2..=6));
        let f = random_flat_formula(rng, vars, atoms);
        if let Ok(Verdict::Sat(a)) = decide(&f) {
            return (f, a);
        }
    }
}

/// Flattened witnesses are flat, realize exactly the abstract regions,
/// satisfy the formula and have no membership between values.
pub fn flatness(count: usize, seed: u64) -> SuiteReport {
    timed("flat models", |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            let (f, a) = random_sat_flat(&mut rng);
            let vars = a.vars.clone();
            let rank = vars.len() as u32 + 1 + rng.gen_range(0..3);
            let (m, _) = match flatten(&a, &vars, rank) {
                Ok(x) => x,
                Err(e) => {
                    r.check(false, || format!("{f}: {e}"));
                    continue;
                }
            };
            r.check(is_flat(&m, rank), || format!("{f}: not {rank}-flat"));
            let regions = region_signatures(&m, &vars);
            r.check(regions.as_ref() == Ok(&a.signatures()), || {
                format!("{f}: regions differ")
            });
            r.check(m.evaluate(&f) == Ok(true), || {
                format!("{f}: flattened model fails")
            });
            let no_membership = m.iter().all(|(_, u)| m.iter().all(|(_, v)| !v.contains(u)));
            r.check(no_membership, || format!("{f}: membership between values"));
        }
    })
}

/// A flat model of `phi & Xi` for a planted problem with at least one
/// singleton atom.
fn planted_flat_model(rng: &mut ChaCha8Rng) -> (Problem, XiFormula, SetAssignment) {
    loop {
        let vars = rng.gen_range(2..=5);
        let profile = Profile::Planted {
            vars,
            diffs: rng.gen_range(1..=4),
            singletons: rng.gen_range(1..=3.min(vars - 1)),
        };
        let p = generate(rng.gen(), profile);
        let xi = translate(&p);
        if let Ok(Verdict::Sat(a)) = decide(&flat_formula(&p, &xi)) {
            let vars: Vec<Var> = p
                .vars()
                .iter()
                .cloned()
                .chain(xi.companion_vars().cloned())
                .collect();
            if let Ok((m, _)) = flatten(&a, &vars, flat_rank_for(&p)) {
                return (p, xi, m);
            }
        }
    }
}

fn profiles(m: &SetAssignment, vars: &[Var]) -> Vec<(bool, bool)> {
    let mut out = Vec::new();
    for u in vars {
        for v in vars {
            let (a, b) = (m.value(u).expect("var"), m.value(v).expect("var"));
            out.push((a.is_subset(b), a.is_disjoint(b)));
        }
    }
    out
}

/// One transformation step preserves the inclusion and disjointness
/// profiles and makes its atom true.
pub fn transformation(count: usize, seed: u64) -> SuiteReport {
    timed("transformation", |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            let (p, xi, m) = planted_flat_model(&mut rng);
            let atom = p.psi().choose(&mut rng).expect("at least one atom").clone();
            let t = match transform(&m, &atom.set, &atom.member) {
                Ok(t) => t,
                Err(e) => {
                    r.check(false, || format!("{p}: {e}"));
                    continue;
                }
            };
            let vars = p.vars();
            r.check(profiles(&m, vars) == profiles(&t, vars), || {
                format!("{p}: profile changed by `{atom}`")
            });
            let g = Formula::And(vec![
                flat_formula(&p, &xi),
                Formula::Lit(Literal::Singleton(atom.set.clone(), atom.member.clone())),
            ]);
            r.check(t.evaluate(&g) == Ok(true), || {
                format!("{p}: result fails after `{atom}`")
            });
            r.check(t.value(&atom.member) == m.value(&atom.member), || {
                format!("{p}: member moved")
            });
        }
    })
}

/// The atom order of a model of the translation has no cycle; the
/// configuration of the first worked example has one.
pub fn atom_order(count: usize, seed: u64) -> SuiteReport {
    timed("atom order", |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            let (p, _, m) = planted_flat_model(&mut rng);
            let o = order(&p.psi(), &m);
            r.check(o.is_ok(), || format!("{p}: {}", o.unwrap_err()));
        }
        let p = parse_problem(EXAMPLE_ONE).expect("example parses");
        let one = HfSet::singleton(&HfSet::empty());
        let m: SetAssignment = p.vars().iter().map(|v| (v.clone(), one.clone())).collect();
        let cyc = order(&p.psi(), &m);
        r.check(matches!(cyc, Err(ModelError::CycleDetected { .. })), || {
            "example 1 configuration has no cycle".into()
        });
    })
}

/// The counting bounds on sets of a given rank.
pub fn bounds(n_max: u32, enum_limit: Duration) -> SuiteReport {
    timed("counting bounds", |r| {
        let report = bound_checks(n_max);
        for c in &report.checks {
            r.check(c.holds, || format!("{} at n={}: {}", c.name, c.n, c.detail));
        }
        let start = Instant::now();
        let counts: Vec<u64> = (1..=4)
            .map(|n| count_rank_exact(n).expect("n <= 4"))
            .collect();
        let v4 = enumerate_level(4).expect("level 4");
        let took = start.elapsed();
        r.notes.push(format!(
            "rank-exact counts for n=1..4: {counts:?} ({took:.2?})"
        ));
        r.check(counts == [1, 2, 12, 65520], || format!("counts {counts:?}"));
        r.check(v4.len() == 16, || format!("|V_4| = {}", v4.len()));
        for (i, &c) in counts.iter().enumerate() {
            r.check(c >= 1 << i, || format!("count {c} below 2^{i}"));
        }
        r.check(took < enum_limit, || format!("enumeration took {took:?}"));
    })
}

fn random_set(rng: &mut ChaCha8Rng, level: &[HfSet]) -> HfSet {
    HfSet::from_members(level.iter().filter(|_| rng.gen_bool(0.5)).cloned())
}

/// The difference-algebra axioms on every triple from `V_3` and `V_4`, on
/// random triples from `V_4`, and on random triples from `V_5`.
pub fn axioms(random: usize, seed: u64) -> SuiteReport {
    timed("difference axioms", |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let run = |r: &mut SuiteReport, label: &str, triples: Vec<(HfSet, HfSet, HfSet)>| {
            let rep = check_axioms(triples.iter());
            r.checked += rep.checked;
            r.notes.push(format!("{label}: {} triples", rep.checked));
            for v in rep.violations.iter().take(20) {
                let (x, y, z) = &v.triple;
                r.failures
                    .push(format!("axiom {} fails at ({x}, {y}, {z})", v.axiom));
            }
        };
        for n in [3, 4] {
            let level = enumerate_level(n).expect("small level").sets;
            let mut all = Vec::new();
            for x in &level {
                for y in &level {
                    for z in &level {
                        all.push((x.clone(), y.clone(), z.clone()));
                    }
                }
            }
            run(r, &format!("all of V_{n}"), all);
        }
        let v4 = enumerate_level(4).expect("level 4").sets;
        let pick = |rng: &mut ChaCha8Rng| v4.choose(rng).expect("nonempty").clone();
        let sampled = (0..random)
            .map(|_| (pick(&mut rng), pick(&mut rng), pick(&mut rng)))
            .collect();
        run(r, "random from V_4", sampled);
        let wide = (0..random)
            .map(|_| {
                (
                    random_set(&mut rng, &v4),
                    random_set(&mut rng, &v4),
                    random_set(&mut rng, &v4),
                )
            })
            .collect();
        run(r, "random from V_5", wide);
    })
}

/// `x ∈ y` iff some `z` has `z = {x}` and `z sub y`, for `x, y` in `V_3`
/// and `z` ranging over `V_4`, which holds every singleton of a member of
/// `V_3`.
pub fn membership_downgrade() -> SuiteReport {
    timed("membership via singleton", |r| {
        let v3 = enumerate_level(3).expect("level 3").sets;
        let v4 = enumerate_level(4).expect("level 4").sets;
        let p = parse_problem("z = { x } ; z sub y").expect("pattern parses");
        for x in &v3 {
            for y in &v3 {
                let member = y.contains(x);
                let witness = v4.iter().any(|z| {
                    let mut m: SetAssignment = [
                        (Var::user("x"), x.clone()),
                        (Var::user("y"), y.clone()),
                        (Var::user("z"), z.clone()),
                    ]
                    .into_iter()
                    .collect();
                    // The inclusion is desugared through a fresh difference.
                    for v in p
                        .vars()
                        .iter()
                        .filter(|v| v.kind() == crate::syntax::VarKind::Fresh)
                    {
                        m.insert(v.clone(), z.diff(y));
                    }
                    m.models(&p) == Ok(true)
                });
                r.check(member == witness, || {
                    format!("x = {x}, y = {y}: member {member}, witness {witness}")
                });
            }
        }
    })
}

/// Everything `bstkit check` runs.
pub fn all(seed: u64) -> Vec<SuiteReport> {
    vec![
        examples(Duration::from_millis(100)),
        translation_size(Duration::from_secs(1)),
        equisatisfiability(200, 200, seed),
        flat_oracle(1000, seed),
        flatness(100, seed),
        transformation(100, seed),
        atom_order(100, seed),
        bounds(20, Duration::from_secs(5)),
        axioms(10_000, seed),
        membership_downgrade(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_size() {
        // 54 literals: the empty conjunction, singles, pairs and triples.
        assert_eq!(flat_grid_formulas().len(), 1 + 54 + 1431 + 24804);
    }

    #[test]
    fn sized_problem_counts() {
        let p = sized_problem(10, 3);
        assert_eq!(p.vars().len(), 10);
        assert_eq!(p.psi().len(), 3);
    }

    #[test]
    fn small_runs_pass() {
        for r in [
            flatness(10, 1),
            transformation(10, 2),
            atom_order(10, 3),
            equisatisfiability(10, 10, 4),
            membership_downgrade(),
        ] {
            assert!(r.passed(), "{r}");
        }
    }
}
