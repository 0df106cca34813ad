use std::fmt;

use indexmap::IndexMap;

use super::ModelError;
use crate::hf::HfSet;
use crate::syntax::{Formula, Literal, Problem, Var};

/// A map from variables to hereditarily finite sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SetAssignment(IndexMap<Var, HfSet>);

impl SetAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: Var, s: HfSet) -> Option<HfSet> {
        self.0.insert(v, s)
    }

    pub fn get(&self, v: &Var) -> Option<&HfSet> {
        self.0.get(v)
    }

    pub fn value(&self, v: &Var) -> Result<&HfSet, ModelError> {
        self.0
            .get(v)
            .ok_or_else(|| ModelError::MissingVariable(v.clone()))
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &HfSet)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Keep only `vars`, in that order.
    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Self {
        SetAssignment(
            vars.into_iter()
                .filter_map(|v| self.0.get(v).map(|s| (v.clone(), s.clone())))
                .collect(),
        )
    }

    pub fn evaluate_literal(&self, l: &Literal) -> Result<bool, ModelError> {
        use Literal::*;
        let m = |v: &Var| self.value(v);
        Ok(match l {
            DiffEq(x, y, z) => *m(x)? == m(y)?.diff(m(z)?),
            DiffNeq(x, y, z) => *m(x)? != m(y)?.diff(m(z)?),
            Singleton(x, y) => *m(x)? == HfSet::singleton(m(y)?),
            Empty(x) => m(x)?.is_empty(),
            NotEmpty(x) => !m(x)?.is_empty(),
            Subseteq(x, y) => m(x)?.is_subset(m(y)?),
            NotSubseteq(x, y) => !m(x)?.is_subset(m(y)?),
            InterEq(x, y, z) => *m(x)? == m(y)?.inter(m(z)?),
            InterNeq(x, y, z) => *m(x)? != m(y)?.inter(m(z)?),
            UnionEq(x, y, z) => *m(x)? == m(y)?.union(m(z)?),
            UnionNeq(x, y, z) => *m(x)? != m(y)?.union(m(z)?),
            Disj(x, y) => m(x)?.is_disjoint(m(y)?),
            NotDisj(x, y) => !m(x)?.is_disjoint(m(y)?),
            StrictSub(x, y) => m(x)?.is_subset(m(y)?) && m(x)? != m(y)?,
            VarEq(x, y) => m(x)? == m(y)?,
            VarNeq(x, y) => m(x)? != m(y)?,
        })
    }

    pub fn evaluate(&self, f: &Formula) -> Result<bool, ModelError> {
        f.eval(&mut |l| self.evaluate_literal(l))
    }

    /// Whether the assignment models every literal of `phi & psi`.
    pub fn models(&self, p: &Problem) -> Result<bool, ModelError> {
        for l in p.literals() {
            if !self.evaluate_literal(l)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl FromIterator<(Var, HfSet)> for SetAssignment {
    fn from_iter<I: IntoIterator<Item = (Var, HfSet)>>(iter: I) -> Self {
        SetAssignment(iter.into_iter().collect())
    }
}

/// One `v = {...}` line per variable.
impl fmt::Display for SetAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, s) in &self.0 {
            writeln!(f, "{v} = {s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_problem;

    fn s(text: &str) -> HfSet {
        text.parse().unwrap()
    }

    fn assign(pairs: &[(&str, &str)]) -> SetAssignment {
        pairs.iter().map(|(v, t)| (Var::user(v), s(t))).collect()
    }

    #[test]
    fn all_empty_models_a_difference() {
        let m = assign(&[("x", "{}"), ("y", "{}"), ("z", "{}")]);
        let p = parse_problem("x = y \\ z").unwrap();
        assert!(m.models(&p).unwrap());
    }

    #[test]
    fn example_three_family() {
        // s = {0}, s' = s'' = 0.
        let m = assign(&[
            ("x", "{}"),
            ("y", "{{}}"),
            ("z", "{{{}}}"),
            ("y2", "{{}}"),
            ("z2", "{{{}}}"),
        ]);
        let p = parse_problem("x = y \\ y2 ; x = z \\ z2 ; z = { y }").unwrap();
        assert!(m.models(&p).unwrap());
    }

    #[test]
    fn missing_variable() {
        let m = assign(&[("x", "{}")]);
        let p = parse_problem("x = y \\ x").unwrap();
        assert_eq!(
            m.models(&p),
            Err(ModelError::MissingVariable(Var::user("y")))
        );
    }

    #[test]
    fn derived_relators() {
        let m = assign(&[("a", "{{},{{}}}"), ("b", "{{}}"), ("c", "{{{}}}")]);
        let lit = |t: &str| crate::syntax::parse_formula(t).unwrap();
        for (text, want) in [
            ("b ssub a", true),
            ("a ssub a", false),
            ("disj(b, c)", true),
            ("ndisj(a, b)", true),
            ("a = b | c", true),
            ("b = a | c", false),
            ("b = a & b", true),
            ("c != 0", true),
        ] {
            assert_eq!(m.evaluate(&lit(text)).unwrap(), want, "{text}");
        }
    }

    #[test]
    fn display_lines() {
        let m = assign(&[("x", "{}"), ("y", "{{}}")]);
        assert_eq!(m.to_string(), "x = {}\ny = {{}}\n");
    }
}
