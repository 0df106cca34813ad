use std::collections::HashSet;

use super::ast::{Literal, Var, VarKind};

/// Hands out fresh variables `_0`, `_1`, ... skipping names already taken.
#[derive(Debug, Default, Clone)]
pub struct FreshSupply {
    next: u64,
    taken: HashSet<String>,
}

impl FreshSupply {
    pub fn new() -> Self {
        Self::default()
    }

    /// A supply that avoids every fresh variable mentioned in `vars`.
    pub fn avoiding<'a>(vars: impl IntoIterator<Item = &'a Var>) -> Self {
        let taken = vars
            .into_iter()
            .filter(|v| v.kind() == VarKind::Fresh)
            .map(|v| v.name().to_owned())
            .collect();
        FreshSupply { next: 0, taken }
    }

    pub fn next_var(&mut self) -> Var {
        loop {
            let name = self.next.to_string();
            self.next += 1;
            if self.taken.insert(name.clone()) {
                return Var::fresh(name);
            }
        }
    }
}

/// Expand a derived literal into an equisatisfiable conjunction of
/// `x = y \ z` / `x != y \ z` literals, existentially quantified over the
/// fresh variables it introduces.
///
/// Core literals come back unchanged. Singleton atoms are not expressible
/// this way and are also returned unchanged; callers keep them apart.
pub fn desugar(lit: &Literal, fresh: &mut FreshSupply) -> Vec<Literal> {
    use Literal::*;
    match lit {
        DiffEq(..) | DiffNeq(..) | Singleton(..) => vec![lit.clone()],
        Empty(x) => vec![DiffEq(x.clone(), x.clone(), x.clone())],
        NotEmpty(x) => vec![DiffNeq(x.clone(), x.clone(), x.clone())],
        Subseteq(x, y) => {
            let d = fresh.next_var();
            vec![
                DiffEq(d.clone(), x.clone(), y.clone()),
                DiffEq(d.clone(), d.clone(), d),
            ]
        }
        NotSubseteq(x, y) => {
            let d = fresh.next_var();
            vec![
                DiffEq(d.clone(), x.clone(), y.clone()),
                DiffNeq(d.clone(), d.clone(), d),
            ]
        }
        // y & z = y \ (y \ z)
        InterEq(x, y, z) => {
            let d = fresh.next_var();
            vec![
                DiffEq(d.clone(), y.clone(), z.clone()),
                DiffEq(x.clone(), y.clone(), d),
            ]
        }
        InterNeq(x, y, z) => {
            let d = fresh.next_var();
            vec![
                DiffEq(d.clone(), y.clone(), z.clone()),
                DiffNeq(x.clone(), y.clone(), d),
            ]
        }
        UnionEq(x, y, z) => union_eq(x, y, z, fresh),
        UnionNeq(x, y, z) => {
            let u = fresh.next_var();
            let mut out = union_eq(&u, y, z, fresh);
            // `out[0]` is `e = e \ e`, so `u \ e` is just `u`.
            let DiffEq(e, _, _) = &out[0] else {
                unreachable!("union expansion starts with the empty witness")
            };
            let e = e.clone();
            out.push(DiffNeq(x.clone(), u, e));
            out
        }
        // x & y = x \ (x \ y), empty iff x \ (x \ y) = e with e empty
        Disj(x, y) => {
            let d = fresh.next_var();
            let e = fresh.next_var();
            vec![
                DiffEq(d.clone(), x.clone(), y.clone()),
                DiffEq(e.clone(), x.clone(), d),
                DiffEq(e.clone(), e.clone(), e),
            ]
        }
        NotDisj(x, y) => {
            let d = fresh.next_var();
            let e = fresh.next_var();
            vec![
                DiffEq(d.clone(), x.clone(), y.clone()),
                DiffEq(e.clone(), x.clone(), d),
                DiffNeq(e.clone(), e.clone(), e),
            ]
        }
        StrictSub(x, y) => {
            let mut out = desugar(&Subseteq(x.clone(), y.clone()), fresh);
            out.extend(desugar(&NotSubseteq(y.clone(), x.clone()), fresh));
            out
        }
        VarEq(x, y) => {
            let e = fresh.next_var();
            vec![
                DiffEq(x.clone(), y.clone(), e.clone()),
                DiffEq(e.clone(), e.clone(), e),
            ]
        }
        VarNeq(x, y) => {
            let e = fresh.next_var();
            vec![
                DiffNeq(x.clone(), y.clone(), e.clone()),
                DiffEq(e.clone(), e.clone(), e),
            ]
        }
    }
}

// x = y | z  iff  y \ x = 0, z \ x = 0, (x \ y) \ z = 0
fn union_eq(x: &Var, y: &Var, z: &Var, fresh: &mut FreshSupply) -> Vec<Literal> {
    use Literal::*;
    let e = fresh.next_var();
    let d = fresh.next_var();
    vec![
        DiffEq(e.clone(), e.clone(), e.clone()),
        DiffEq(e.clone(), y.clone(), x.clone()),
        DiffEq(e.clone(), z.clone(), x.clone()),
        DiffEq(d.clone(), x.clone(), y.clone()),
        DiffEq(e, d, z.clone()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Var {
        Var::user(s)
    }

    #[test]
    fn empty_is_self_difference() {
        let out = desugar(&Literal::Empty(v("x")), &mut FreshSupply::new());
        assert_eq!(out, vec![Literal::DiffEq(v("x"), v("x"), v("x"))]);
    }

    #[test]
    fn subseteq_uses_one_fresh_var() {
        let out = desugar(&Literal::Subseteq(v("x"), v("y")), &mut FreshSupply::new());
        let d = Var::fresh("0");
        assert_eq!(
            out,
            vec![
                Literal::DiffEq(d.clone(), v("x"), v("y")),
                Literal::DiffEq(d.clone(), d.clone(), d)
            ]
        );
    }

    #[test]
    fn supply_skips_taken_names() {
        let taken = [Var::fresh("0"), Var::fresh("2"), v("a")];
        let mut s = FreshSupply::avoiding(taken.iter());
        assert_eq!(s.next_var(), Var::fresh("1"));
        assert_eq!(s.next_var(), Var::fresh("3"));
    }

    #[test]
    fn core_literals_pass_through() {
        let l = Literal::DiffNeq(v("a"), v("b"), v("c"));
        assert_eq!(desugar(&l, &mut FreshSupply::new()), vec![l]);
    }
}
