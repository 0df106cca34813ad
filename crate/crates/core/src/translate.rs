//! The nested-to-flat translation.
//!
//! Given `phi & psi`, emits a conjunction over the Boolean relators that is
//! satisfiable together with `phi` exactly when `phi & psi` is. Every
//! variable `v` gets a companion `~v`; the companions track the membership
//! order that the singleton atoms impose (`y ∈ x` must force `~y ⊊ ~x`).

use std::fmt;

use crate::syntax::{Formula, Literal, Problem, Var};

/// One conjunct of the translation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum XiConjunct {
    /// `x nsub y` for `x = {y}`.
    NotSubseteq { x: Var, y: Var },
    /// `ndisj(x, v) -> x sub v` for `x = {y}`.
    OverlapIncludes { x: Var, v: Var },
    /// `ndisj(x, v) -> ~y ssub ~v` for `x = {y}`.
    OverlapOrders { x: Var, v: Var, ty: Var, tv: Var },
    /// `y = y' <-> x = x'` for two distinct atoms `x = {y}`, `x' = {y'}`.
    MemberIff { y: Var, y2: Var, x: Var, x2: Var },
    /// `x = y -> ~x = ~y`.
    EqualCompanions { x: Var, y: Var, tx: Var, ty: Var },
}

impl XiConjunct {
    pub fn to_formula(&self) -> Formula {
        use Literal::*;
        let lit = |l: Literal| Formula::Lit(l);
        match self {
            XiConjunct::NotSubseteq { x, y } => lit(NotSubseteq(x.clone(), y.clone())),
            XiConjunct::OverlapIncludes { x, v } => Formula::implies(
                lit(NotDisj(x.clone(), v.clone())),
                lit(Subseteq(x.clone(), v.clone())),
            ),
            XiConjunct::OverlapOrders { x, v, ty, tv } => Formula::implies(
                lit(NotDisj(x.clone(), v.clone())),
                lit(StrictSub(ty.clone(), tv.clone())),
            ),
            XiConjunct::MemberIff { y, y2, x, x2 } => Formula::iff(
                lit(VarEq(y.clone(), y2.clone())),
                lit(VarEq(x.clone(), x2.clone())),
            ),
            XiConjunct::EqualCompanions { x, y, tx, ty } => Formula::implies(
                lit(VarEq(x.clone(), y.clone())),
                lit(VarEq(tx.clone(), ty.clone())),
            ),
        }
    }
}

impl fmt::Display for XiConjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// The translated conjunction together with the companion map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiFormula {
    pub conjuncts: Vec<XiConjunct>,
    /// `(v, ~v)` for every variable of the problem, in problem order.
    pub companions: Vec<(Var, Var)>,
}

impl XiFormula {
    pub fn len(&self) -> usize {
        self.conjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conjuncts.is_empty()
    }

    pub fn to_formula(&self) -> Formula {
        Formula::And(self.conjuncts.iter().map(XiConjunct::to_formula).collect())
    }

    pub fn companion_vars(&self) -> impl Iterator<Item = &Var> {
        self.companions.iter().map(|(_, t)| t)
    }
}

/// One conjunct per line.
impl fmt::Display for XiFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conjuncts {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Translate `psi` relative to `phi`.
///
/// Conjuncts are emitted in four families, in this order:
/// `x nsub y` per atom; per atom and per variable `v` the two overlap
/// implications; per unordered pair of distinct atoms the member
/// biconditional; per unordered pair of distinct variables the companion
/// equality implication.
pub fn translate(p: &Problem) -> XiFormula {
    let vars = p.vars();
    let psi = p.psi();
    let companions: Vec<(Var, Var)> = vars.iter().map(|v| (v.clone(), v.tilde())).collect();
    let tilde = |i: usize| companions[i].1.clone();
    let index_of = |v: &Var| {
        vars.iter()
            .position(|w| w == v)
            .expect("atom variable is in Vars")
    };

    let mut out = Vec::with_capacity(translate_size(vars.len(), psi.len()));
    for a in &psi {
        out.push(XiConjunct::NotSubseteq {
            x: a.set.clone(),
            y: a.member.clone(),
        });
    }
    for a in &psi {
        let ty = tilde(index_of(&a.member));
        for (j, v) in vars.iter().enumerate() {
            out.push(XiConjunct::OverlapIncludes {
                x: a.set.clone(),
                v: v.clone(),
            });
            out.push(XiConjunct::OverlapOrders {
                x: a.set.clone(),
                v: v.clone(),
                ty: ty.clone(),
                tv: tilde(j),
            });
        }
    }
    for (i, a) in psi.iter().enumerate() {
        for b in &psi[i + 1..] {
            out.push(XiConjunct::MemberIff {
                y: a.member.clone(),
                y2: b.member.clone(),
                x: a.set.clone(),
                x2: b.set.clone(),
            });
        }
    }
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            out.push(XiConjunct::EqualCompanions {
                x: vars[i].clone(),
                y: vars[j].clone(),
                tx: tilde(i),
                ty: tilde(j),
            });
        }
    }
    XiFormula {
        conjuncts: out,
        companions,
    }
}

/// Number of conjuncts [`translate`] emits for `n` variables and `p`
/// singleton atoms: `p + 2pn + p(p-1)/2 + n(n-1)/2`.
pub fn translate_size(n: usize, p: usize) -> usize {
    p + 2 * p * n + p * p.saturating_sub(1) / 2 + n * n.saturating_sub(1) / 2
}

/// `phi & Xi` as one formula, the input handed to the flat decision
/// procedure.
pub fn flat_formula(p: &Problem, xi: &XiFormula) -> Formula {
    let mut parts: Vec<Formula> = p.phi().cloned().map(Formula::Lit).collect();
    parts.extend(xi.conjuncts.iter().map(XiConjunct::to_formula));
    Formula::And(parts)
}
