use super::flat::is_flat;
use super::order::{order, AtomOrder};
use super::transform::transform;
use super::{FlatParams, ModelError, SetAssignment};
use crate::hf::HfSet;
use crate::syntax::{Problem, SingletonAtom};
use crate::translate::{flat_formula, translate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftOptions {
    /// Check the per-step invariants of the lifting argument, not just the
    /// final model.
    pub check_invariants: bool,
    /// Keep a snapshot of the model after every step.
    pub trace: bool,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            check_invariants: cfg!(debug_assertions)
                || std::env::var("BSTKIT_DEBUG_ASSERTS").is_ok_and(|v| v == "1"),
            trace: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftStep {
    /// Index into `psi` of the atom chosen at this step.
    pub atom: usize,
    pub chosen: SingletonAtom,
    /// Atoms whose set side changed, all of which now hold.
    pub satisfied: Vec<usize>,
    /// The model after the step, restricted to the problem variables, when
    /// tracing.
    pub model: Option<SetAssignment>,
}

#[derive(Debug, Clone)]
pub struct Lifted {
    /// A model of `phi & psi` over the problem variables.
    pub model: SetAssignment,
    pub steps: Vec<LiftStep>,
    pub order: AtomOrder,
}

pub fn lift(p: &Problem, m0: &SetAssignment, params: &FlatParams) -> Result<Lifted, ModelError> {
    lift_with(p, m0, params, LiftOptions::default())
}

fn broken(msg: impl Into<String>) -> ModelError {
    ModelError::LiftInvariantBroken(msg.into())
}

/// Turn a flat model of `phi & Xi` into a model of `phi & psi`.
///
/// The atom order is computed once against `m0`. Each step takes the
/// earliest pending atom with no pending predecessor, applies
/// [`transform`] for it, and retires every atom whose set side changed.
pub fn lift_with(
    p: &Problem,
    m0: &SetAssignment,
    params: &FlatParams,
    options: LiftOptions,
) -> Result<Lifted, ModelError> {
    let psi = p.psi();
    let flat_rank = params.flat_rank;
    let xi = translate(p);
    if !m0.evaluate(&flat_formula(p, &xi))? {
        return Err(ModelError::NotAModel("the translated problem"));
    }
    if !is_flat(m0, flat_rank) {
        return Err(ModelError::NotFlat { flat_rank });
    }
    if flat_rank as usize <= psi.len() {
        return Err(ModelError::FlatRankTooSmall {
            flat_rank,
            needed: psi.len() as u32 + 1,
        });
    }
    let atom_order = order(&psi, m0)?;

    let mut m = m0.clone();
    let mut pending = vec![true; psi.len()];
    // For each retired atom, the member value it was made a singleton of.
    let mut targets: Vec<Option<HfSet>> = vec![None; psi.len()];
    let mut steps = Vec::new();
    while let Some(i) = atom_order.first_minimal(&pending) {
        let atom = &psi[i];
        let before = m;
        m = transform(&before, &atom.set, &atom.member)?;
        let target = before.value(&atom.member)?.clone();
        let mut satisfied = Vec::new();
        for (j, b) in psi.iter().enumerate() {
            if m.value(&b.set)? != before.value(&b.set)? {
                satisfied.push(j);
            }
        }
        if !satisfied.contains(&i) {
            return Err(broken(format!(
                "step on `{atom}` left its set side unchanged"
            )));
        }
        for &j in &satisfied {
            if !pending[j] {
                return Err(broken(format!(
                    "atom `{}` changed after it was satisfied",
                    psi[j]
                )));
            }
            pending[j] = false;
            targets[j] = Some(target.clone());
        }
        if options.check_invariants {
            check_step(
                p,
                &m,
                &psi,
                &targets,
                &atom_order,
                flat_rank,
                steps.len() as u32 + 1,
            )?;
        }
        steps.push(LiftStep {
            atom: i,
            chosen: atom.clone(),
            satisfied,
            model: options.trace.then(|| m.restrict(p.vars())),
        });
    }
    if pending.iter().any(|&b| b) {
        return Err(broken("pending atoms with no minimal element"));
    }
    let model = m.restrict(p.vars());
    if !model.models(p)? {
        return Err(broken("final model does not satisfy the problem"));
    }
    Ok(Lifted {
        model,
        steps,
        order: atom_order,
    })
}

/// The inductive claims behind the lifting loop, after step `i`.
fn check_step(
    p: &Problem,
    m: &SetAssignment,
    psi: &[SingletonAtom],
    targets: &[Option<HfSet>],
    atom_order: &AtomOrder,
    flat_rank: u32,
    i: u32,
) -> Result<(), ModelError> {
    if !m.evaluate(&flat_formula(p, &translate(p)))? {
        return Err(broken(format!(
            "step {i} does not model the translated problem"
        )));
    }
    for (a, target) in psi.iter().zip(targets) {
        if let Some(t) = target {
            if m.value(&a.member)? != t || *m.value(&a.set)? != HfSet::singleton(t) {
                return Err(broken(format!("satisfied atom `{a}` drifted at step {i}")));
            }
        }
    }
    let images: Vec<&HfSet> = psi
        .iter()
        .zip(targets)
        .filter(|(_, t)| t.is_some())
        .map(|(a, _)| m.value(&a.member))
        .collect::<Result<_, _>>()?;
    for v in p.vars() {
        let s = m.value(v)?;
        let r = s.rank();
        if !(r <= i || (flat_rank + 1..=flat_rank + 1 + i).contains(&r)) {
            return Err(broken(format!(
                "rank {r} of `{v}` outside the window at step {i}"
            )));
        }
        if let Some(u) = s
            .members()
            .iter()
            .find(|u| u.rank() != flat_rank && !images.contains(u))
        {
            return Err(broken(format!("`{v}` has stray member {u} at step {i}")));
        }
    }
    let now = order(psi, m)?;
    if now.closure != atom_order.closure {
        return Err(broken(format!("atom order changed at step {i}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::{decide, Verdict};
    use crate::models::flatten;
    use crate::syntax::parse_problem;

    fn flat_model(p: &Problem) -> (SetAssignment, FlatParams) {
        let xi = translate(p);
        let Verdict::Sat(a) = decide(&flat_formula(p, &xi)).unwrap() else {
            panic!("expected a satisfiable translation");
        };
        let vars: Vec<_> = p
            .vars()
            .iter()
            .cloned()
            .chain(xi.companion_vars().cloned())
            .collect();
        let rank = (vars.len() + p.psi().len() + 2) as u32;
        flatten(&a, &vars, rank).unwrap()
    }

    #[test]
    fn nothing_to_lift() {
        let p = parse_problem("a = b \\ c").unwrap();
        let (m0, params) = flat_model(&p);
        let lifted = lift(&p, &m0, &params).unwrap();
        assert!(lifted.steps.is_empty());
        assert_eq!(lifted.model, m0.restrict(p.vars()));
    }

    #[test]
    fn example_three_has_the_expected_shape() {
        let p = parse_problem("x = y \\ y2 ; x = z \\ z2 ; z = { y }").unwrap();
        let (m0, params) = flat_model(&p);
        let opts = LiftOptions {
            check_invariants: true,
            trace: true,
        };
        let lifted = lift_with(&p, &m0, &params, opts).unwrap();
        let v = |n: &str| lifted.model.value(&crate::Var::user(n)).unwrap().clone();
        assert!(v("x").is_empty());
        assert_eq!(v("z"), HfSet::singleton(&v("y")));
        assert!(v("y").is_subset(&v("y2")));
        assert!(v("z").is_subset(&v("z2")));
        assert_eq!(lifted.steps.len(), 1);
        assert!(lifted.steps[0].model.is_some());
    }

    #[test]
    fn chained_atoms() {
        let p = parse_problem("a = { b } ; b = { c } ; c != 0 ; d = a \\ c").unwrap();
        let (m0, params) = flat_model(&p);
        let opts = LiftOptions {
            check_invariants: true,
            trace: false,
        };
        let lifted = lift_with(&p, &m0, &params, opts).unwrap();
        assert!(lifted.model.models(&p).unwrap());
    }

    #[test]
    fn rejects_non_models() {
        let p = parse_problem("x = { y }").unwrap();
        let (mut m0, params) = flat_model(&p);
        m0.insert(crate::Var::user("x"), HfSet::empty());
        assert!(matches!(
            lift(&p, &m0, &params),
            Err(ModelError::NotAModel(_))
        ));
    }
}
