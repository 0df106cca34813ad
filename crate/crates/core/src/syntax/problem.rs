use std::collections::HashSet;

use super::ast::{Literal, SingletonAtom, Var};
use super::desugar::{desugar, FreshSupply};

/// A conjunction `phi & psi` where `phi` is built from `x = y \ z` and
/// `x != y \ z` literals and `psi` collects the singleton atoms.
///
/// The literals are kept in source order so that printing reproduces the
/// input layout; [`Problem::phi`] and [`Problem::psi`] are views on it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Problem {
    literals: Vec<Literal>,
    vars: Vec<Var>,
}

impl Problem {
    /// Build a problem, expanding derived literals and dropping repeated
    /// singleton atoms.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Self {
        let literals: Vec<Literal> = literals.into_iter().collect();
        let mut fresh = FreshSupply::avoiding(literals.iter().flat_map(|l| l.args()));
        let mut seen_atoms = HashSet::new();
        let mut out = Vec::with_capacity(literals.len());
        for lit in &literals {
            if lit.is_singleton() {
                if seen_atoms.insert(lit.clone()) {
                    out.push(lit.clone());
                }
            } else {
                out.extend(desugar(lit, &mut fresh));
            }
        }
        let vars = first_occurrence(&out);
        Problem {
            literals: out,
            vars,
        }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    /// The BST conjunction.
    pub fn phi(&self) -> impl Iterator<Item = &Literal> {
        self.literals.iter().filter(|l| !l.is_singleton())
    }

    /// The singleton atoms, deduplicated, in source order.
    pub fn psi(&self) -> Vec<SingletonAtom> {
        self.literals
            .iter()
            .filter_map(|l| match l {
                Literal::Singleton(x, y) => Some(SingletonAtom {
                    set: x.clone(),
                    member: y.clone(),
                }),
                _ => None,
            })
            .collect()
    }

    /// Vars(phi & psi) in first-occurrence order.
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}

fn first_occurrence(lits: &[Literal]) -> Vec<Var> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for l in lits {
        for v in l.args() {
            if seen.insert(v) {
                out.push(v.clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Var {
        Var::user(s)
    }

    #[test]
    fn duplicate_singletons_are_dropped() {
        let s = Literal::Singleton(v("x"), v("y"));
        let p = Problem::new([s.clone(), Literal::DiffEq(v("a"), v("b"), v("c")), s]);
        assert_eq!(p.psi().len(), 1);
        assert_eq!(p.literals().len(), 2);
    }

    #[test]
    fn vars_in_first_occurrence_order() {
        let p = Problem::new([
            Literal::Singleton(v("x"), v("y")),
            Literal::DiffEq(v("a"), v("x"), v("b")),
        ]);
        let names: Vec<_> = p.vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["x", "y", "a", "b"]);
    }

    #[test]
    fn derived_literals_are_expanded() {
        let p = Problem::new([Literal::Subseteq(v("x"), v("y"))]);
        assert!(p.phi().all(Literal::is_core));
        assert_eq!(p.vars().len(), 3);
    }
}
