use std::time::{Duration, Instant};

use super::lift::{lift_with, LiftOptions, LiftStep};
use super::{flatten, ModelError, SetAssignment};
use crate::decide::{decide_with, SolverOptions, Verdict};
use crate::syntax::{Problem, Var};
use crate::translate::{flat_formula, translate};

#[derive(Debug, Clone, Copy, Default)]
pub struct PipelineOptions {
    pub solver: SolverOptions,
    pub lift: LiftOptions,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StageTimings {
    pub translate: Duration,
    pub decide: Duration,
    pub flatten: Duration,
    pub lift: Duration,
    pub verify: Duration,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PipelineStats {
    pub vars: usize,
    pub atoms: usize,
    pub xi_conjuncts: usize,
    pub cnf_vars: usize,
    pub cnf_clauses: usize,
    pub flat_rank: u32,
    pub lift_steps: usize,
    pub timings: StageTimings,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NestedVerdict {
    Sat(SetAssignment),
    Unsat,
}

impl NestedVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, NestedVerdict::Sat(_))
    }
}

#[derive(Debug, Clone)]
pub struct NestedOutcome {
    pub verdict: NestedVerdict,
    pub stats: PipelineStats,
    pub steps: Vec<LiftStep>,
}

/// `2n + m + 2` for `n` problem variables and `m` singleton atoms: above
/// both the variable count of the translated problem and the atom count.
pub fn flat_rank_for(p: &Problem) -> u32 {
    (2 * p.vars().len() + p.psi().len() + 2) as u32
}

pub fn solve_nested(p: &Problem) -> Result<NestedOutcome, ModelError> {
    solve_nested_with(p, PipelineOptions::default())
}

/// Translate, decide the flat problem, and on success flatten and lift the
/// witness into a verified model of `phi & psi`.
pub fn solve_nested_with(
    p: &Problem,
    options: PipelineOptions,
) -> Result<NestedOutcome, ModelError> {
    let mut stats = PipelineStats {
        vars: p.vars().len(),
        atoms: p.psi().len(),
        flat_rank: flat_rank_for(p),
        ..PipelineStats::default()
    };

    let t = Instant::now();
    let xi = translate(p);
    let g = flat_formula(p, &xi);
    stats.xi_conjuncts = xi.len();
    stats.timings.translate = t.elapsed();

    let t = Instant::now();
    let report = decide_with(&g, options.solver)?;
    stats.cnf_vars = report.cnf_vars;
    stats.cnf_clauses = report.cnf_clauses;
    stats.timings.decide = t.elapsed();
    let abstract_model = match report.verdict {
        Verdict::Unsat => {
            return Ok(NestedOutcome {
                verdict: NestedVerdict::Unsat,
                stats,
                steps: Vec::new(),
            })
        }
        Verdict::Sat(a) => a,
    };

    let t = Instant::now();
    let vars: Vec<Var> = p
        .vars()
        .iter()
        .cloned()
        .chain(xi.companion_vars().cloned())
        .collect();
    let (m0, params) = flatten(&abstract_model, &vars, stats.flat_rank)?;
    stats.timings.flatten = t.elapsed();

    let t = Instant::now();
    let lifted = lift_with(p, &m0, &params, options.lift)?;
    stats.lift_steps = lifted.steps.len();
    stats.timings.lift = t.elapsed();

    let t = Instant::now();
    if !lifted.model.models(p)? {
        return Err(ModelError::LiftInvariantBroken(
            "lifted model fails verification".into(),
        ));
    }
    stats.timings.verify = t.elapsed();

    Ok(NestedOutcome {
        verdict: NestedVerdict::Sat(lifted.model),
        stats,
        steps: lifted.steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hf::HfSet;
    use crate::syntax::parse_problem;
    use crate::translate::translate_size;

    fn run(text: &str) -> NestedOutcome {
        solve_nested(&parse_problem(text).unwrap()).unwrap()
    }

    #[test]
    fn example_one_is_unsat() {
        assert_eq!(
            run("x = { y } ; y = { z } ; z = { x } ; a = b \\ c").verdict,
            NestedVerdict::Unsat
        );
    }

    #[test]
    fn example_two_is_unsat() {
        assert_eq!(
            run("y = x \\ z ; x = { y } ; y = { z }").verdict,
            NestedVerdict::Unsat
        );
    }

    #[test]
    fn example_three_is_sat() {
        let out = run("x = y \\ y2 ; x = z \\ z2 ; z = { y }");
        let NestedVerdict::Sat(m) = out.verdict else {
            panic!("example three is satisfiable");
        };
        let v = |n: &str| m.value(&Var::user(n)).unwrap().clone();
        assert!(v("x").is_empty());
        assert_eq!(v("z"), HfSet::singleton(&v("y")));
        assert_eq!(out.stats.xi_conjuncts, translate_size(5, 1));
        assert_eq!(out.stats.flat_rank, 13);
    }

    #[test]
    fn self_membership_is_unsat() {
        assert_eq!(run("x = { x }").verdict, NestedVerdict::Unsat);
    }

    #[test]
    fn empty_problem_is_sat() {
        assert!(run("").verdict.is_sat());
    }

    #[test]
    fn two_atoms_with_shared_member() {
        let out = run("a = { c } ; b = { c } ; a != b");
        assert_eq!(out.verdict, NestedVerdict::Unsat);
        let out = run("a = { c } ; b = { d } ; c != d ; e = a \\ b");
        assert!(out.verdict.is_sat());
    }
}
