use super::{ModelError, SetAssignment};
use crate::hf::HfSet;
use crate::syntax::Problem;
use crate::translate::translate;

/// Extend a model of `phi & psi` to the companion variables so that it
/// also models the translation.
///
/// With `u < v` the transitive closure of `Mu ∈ Mv` over the problem
/// variables, `~v` is assigned `{Mu : u < v}`.
pub fn extend(m: &SetAssignment, p: &Problem) -> Result<SetAssignment, ModelError> {
    if !m.models(p)? {
        return Err(ModelError::NotAModel("the problem"));
    }
    let vars = p.vars();
    let values: Vec<&HfSet> = vars.iter().map(|v| m.value(v)).collect::<Result<_, _>>()?;
    let n = vars.len();
    let mut below = vec![vec![false; n]; n];
    for u in 0..n {
        for v in 0..n {
            below[u][v] = values[v].contains(values[u]);
        }
    }
    for k in 0..n {
        let through = below[k].clone();
        for row in below.iter_mut().filter(|row| row[k]) {
            for (cell, &b) in row.iter_mut().zip(&through) {
                *cell |= b;
            }
        }
    }
    let mut out = m.restrict(vars);
    for (v, var) in vars.iter().enumerate() {
        let members = (0..n).filter(|&u| below[u][v]).map(|u| values[u].clone());
        out.insert(var.tilde(), HfSet::from_members(members));
    }
    if !out.evaluate(&translate(p).to_formula())? {
        return Err(ModelError::ExtensionFailed);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_problem, Var};

    fn s(text: &str) -> HfSet {
        text.parse().unwrap()
    }

    #[test]
    fn all_empty_without_singletons() {
        let p = parse_problem("a = b \\ c").unwrap();
        let m: SetAssignment = ["a", "b", "c"]
            .iter()
            .map(|v| (Var::user(v), HfSet::empty()))
            .collect();
        let e = extend(&m, &p).unwrap();
        assert_eq!(e.len(), 6);
        assert!(e.iter().all(|(_, s)| s.is_empty()));
    }

    #[test]
    fn example_three_family() {
        let p = parse_problem("x = y \\ y2 ; x = z \\ z2 ; z = { y }").unwrap();
        let m: SetAssignment = [
            ("x", "{}"),
            ("y", "{{}}"),
            ("z", "{{{}}}"),
            ("y2", "{{},{{{}}}}"),
            ("z2", "{{{}}}"),
        ]
        .iter()
        .map(|(v, t)| (Var::user(v), s(t)))
        .collect();
        let e = extend(&m, &p).unwrap();
        // x < y < z, since the empty set is a member of My.
        assert_eq!(*e.value(&Var::user("z").tilde()).unwrap(), s("{{},{{}}}"));
        assert!(e.value(&Var::user("x").tilde()).unwrap().is_empty());
    }

    #[test]
    fn rejects_non_models() {
        let p = parse_problem("x = { y }").unwrap();
        let m: SetAssignment = [("x", "{}"), ("y", "{}")]
            .iter()
            .map(|(v, t)| (Var::user(v), s(t)))
            .collect();
        assert!(matches!(extend(&m, &p), Err(ModelError::NotAModel(_))));
    }
}
