//! Satisfiability of propositional combinations of flat atoms.
//!
//! Every flat atom is either a universal statement `∀e P(e)` over the
//! elements of the universe, with `P` a Boolean function of the element's
//! membership in at most three variables, or the negation of one
//! (`x ssub y` is a conjunction of one of each). A formula is therefore
//! satisfiable over sets iff it is satisfiable over a finite universe in
//! which every false universal atom has a counterexample element. We give
//! each atom its own candidate witness element, which bounds the universe
//! by the number of distinct atoms, and hand the result to a CDCL solver.

mod cnf;
mod solver;

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::syntax::{Formula, Literal, Var};

pub use cnf::CnfInstance;
pub use solver::{solve, solve_with, SolveResult, SolverOptions, SolverStats};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("singleton atom `{0}` is not a flat atom")]
    SingletonAtom(Literal),
    #[error("decoded model does not satisfy the formula")]
    SelfCheckFailed,
}

/// How a literal relates to the universal atoms.
enum Shape {
    All(Literal),
    NotAll(Literal),
    /// `x ssub y`: first holds, second fails.
    Strict(Literal, Literal),
}

fn shape(l: &Literal) -> Result<Shape, DecideError> {
    use Literal::*;
    Ok(match l {
        DiffEq(..) | Empty(_) | Subseteq(..) | InterEq(..) | UnionEq(..) | Disj(..) | VarEq(..) => {
            Shape::All(l.clone())
        }
        DiffNeq(x, y, z) => Shape::NotAll(DiffEq(x.clone(), y.clone(), z.clone())),
        NotEmpty(x) => Shape::NotAll(Empty(x.clone())),
        NotSubseteq(x, y) => Shape::NotAll(Subseteq(x.clone(), y.clone())),
        InterNeq(x, y, z) => Shape::NotAll(InterEq(x.clone(), y.clone(), z.clone())),
        UnionNeq(x, y, z) => Shape::NotAll(UnionEq(x.clone(), y.clone(), z.clone())),
        NotDisj(x, y) => Shape::NotAll(Disj(x.clone(), y.clone())),
        VarNeq(x, y) => Shape::NotAll(VarEq(x.clone(), y.clone())),
        StrictSub(x, y) => Shape::Strict(
            Subseteq(x.clone(), y.clone()),
            Subseteq(y.clone(), x.clone()),
        ),
        Singleton(..) => return Err(DecideError::SingletonAtom(l.clone())),
    })
}

/// The per-element predicate of a universal atom.
fn element_holds(atom: &Literal, row: impl Fn(&Var) -> bool) -> bool {
    use Literal::*;
    match atom {
        DiffEq(x, y, z) => row(x) == (row(y) && !row(z)),
        Empty(x) => !row(x),
        Subseteq(x, y) => !row(x) || row(y),
        InterEq(x, y, z) => row(x) == (row(y) && row(z)),
        UnionEq(x, y, z) => row(x) == (row(y) || row(z)),
        Disj(x, y) => !(row(x) && row(y)),
        VarEq(x, y) => row(x) == row(y),
        _ => unreachable!("not a universal atom: {atom}"),
    }
}

/// A finite Boolean model: which element lies in which variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractModel {
    pub vars: Vec<Var>,
    /// `membership[e][i]` is whether element `e` belongs to `vars[i]`.
    pub membership: Vec<Vec<bool>>,
    /// Elements that belong to at least one variable.
    pub active: Vec<bool>,
}

impl AbstractModel {
    pub fn new(vars: Vec<Var>, membership: Vec<Vec<bool>>) -> Self {
        let active = membership
            .iter()
            .map(|row| row.iter().any(|&b| b))
            .collect();
        AbstractModel {
            vars,
            membership,
            active,
        }
    }

    pub fn elements(&self) -> usize {
        self.membership.len()
    }

    fn column(&self, v: &Var) -> Option<usize> {
        self.vars.iter().position(|w| w == v)
    }

    /// Whether element `e` is in `v`; variables outside the model are empty.
    pub fn contains(&self, e: usize, v: &Var) -> bool {
        self.column(v).is_some_and(|i| self.membership[e][i])
    }

    fn all(&self, atom: &Literal) -> bool {
        (0..self.elements())
            .filter(|&e| self.active[e])
            .all(|e| element_holds(atom, |v| self.contains(e, v)))
    }

    pub fn literal_holds(&self, l: &Literal) -> Result<bool, DecideError> {
        Ok(match shape(l)? {
            Shape::All(a) => self.all(&a),
            Shape::NotAll(a) => !self.all(&a),
            Shape::Strict(a, b) => self.all(&a) && !self.all(&b),
        })
    }

    pub fn satisfies(&self, f: &Formula) -> Result<bool, DecideError> {
        f.eval(&mut |l| self.literal_holds(l))
    }

    /// Signature of every active element: the variables it belongs to, as
    /// column indices.
    pub fn signatures(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .membership
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(row, _)| (0..row.len()).filter(|&i| row[i]).collect())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for AbstractModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, row) in self.membership.iter().enumerate() {
            if !self.active[e] {
                continue;
            }
            let names: Vec<String> = (0..row.len())
                .filter(|&i| row[i])
                .map(|i| self.vars[i].to_string())
                .collect();
            writeln!(f, "e{e}: {}", names.join(" "))?;
        }
        Ok(())
    }
}

/// The CNF for a formula plus what is needed to read a model back.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub cnf: CnfInstance,
    pub vars: Vec<Var>,
    /// Universal atoms in first-occurrence order; atom `i` has witness
    /// element `i`.
    pub atoms: Vec<Literal>,
    indicators: Vec<i32>,
}

impl Encoding {
    pub fn elements(&self) -> usize {
        self.atoms.len()
    }

    fn membership_var(&self, e: usize, col: usize) -> i32 {
        (e * self.vars.len() + col + 1) as i32
    }

    /// The solver variable asserting that atom `i` holds.
    pub fn indicator(&self, i: usize) -> i32 {
        self.indicators[i]
    }

    pub fn decode(&self, assignment: &[bool]) -> AbstractModel {
        let membership = (0..self.elements())
            .map(|e| {
                (0..self.vars.len())
                    .map(|c| assignment[self.membership_var(e, c) as usize - 1])
                    .collect()
            })
            .collect();
        AbstractModel::new(self.vars.clone(), membership)
    }
}

struct Encoder {
    enc: Encoding,
    atom_index: IndexMap<Literal, usize>,
    strict_gates: IndexMap<(usize, usize), i32>,
    truth: Option<i32>,
}

impl Encoder {
    fn indicator(&self, atom: &Literal) -> i32 {
        self.enc.indicators[self.atom_index[atom]]
    }

    fn literal(&mut self, l: &Literal) -> i32 {
        match shape(l).expect("checked while collecting atoms") {
            Shape::All(a) => self.indicator(&a),
            Shape::NotAll(a) => -self.indicator(&a),
            Shape::Strict(a, b) => {
                let key = (self.atom_index[&a], self.atom_index[&b]);
                if let Some(&g) = self.strict_gates.get(&key) {
                    return g;
                }
                let (pa, pb) = (self.indicator(&a), self.indicator(&b));
                let g = self.enc.cnf.new_var();
                self.enc.cnf.add([-g, pa]);
                self.enc.cnf.add([-g, -pb]);
                self.enc.cnf.add([g, -pa, pb]);
                self.strict_gates.insert(key, g);
                g
            }
        }
    }

    fn truth(&mut self) -> i32 {
        if let Some(t) = self.truth {
            return t;
        }
        let t = self.enc.cnf.new_var();
        self.enc.cnf.add([t]);
        self.truth = Some(t);
        t
    }

    /// A solver literal equivalent to `f`.
    fn node(&mut self, f: &Formula) -> i32 {
        match f {
            Formula::Lit(l) => self.literal(l),
            Formula::Not(g) => -self.node(g),
            Formula::And(fs) | Formula::Or(fs) => {
                let is_and = matches!(f, Formula::And(_));
                let parts: Vec<i32> = fs.iter().map(|g| self.node(g)).collect();
                match parts.len() {
                    0 => {
                        let t = self.truth();
                        if is_and {
                            t
                        } else {
                            -t
                        }
                    }
                    1 => parts[0],
                    _ => {
                        // Or is And under negation of inputs and output.
                        let sign = if is_and { 1 } else { -1 };
                        let g = self.enc.cnf.new_var();
                        for &p in &parts {
                            self.enc.cnf.add([-sign * g, sign * p]);
                        }
                        self.enc
                            .cnf
                            .add(parts.iter().map(|&p| -sign * p).chain([sign * g]));
                        g
                    }
                }
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.node(a), self.node(b));
                let g = self.enc.cnf.new_var();
                self.enc.cnf.add([-g, -a, b]);
                self.enc.cnf.add([g, a]);
                self.enc.cnf.add([g, -b]);
                g
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.node(a), self.node(b));
                let g = self.enc.cnf.new_var();
                self.enc.cnf.add([-g, -a, b]);
                self.enc.cnf.add([-g, a, -b]);
                self.enc.cnf.add([g, a, b]);
                self.enc.cnf.add([g, -a, -b]);
                g
            }
        }
    }

    /// Add `f` as a top-level constraint, writing shallow shapes directly
    /// as clauses.
    fn assert(&mut self, f: &Formula) {
        match f {
            Formula::And(fs) => fs.iter().for_each(|g| self.assert(g)),
            Formula::Or(fs) => {
                let clause: Vec<i32> = fs.iter().map(|g| self.node(g)).collect();
                self.enc.cnf.add(clause);
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.node(a), self.node(b));
                self.enc.cnf.add([-a, b]);
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.node(a), self.node(b));
                self.enc.cnf.add([-a, b]);
                self.enc.cnf.add([a, -b]);
            }
            Formula::Not(g) => match g.as_ref() {
                Formula::Not(h) => self.assert(h),
                Formula::Or(hs) => hs
                    .iter()
                    .for_each(|h| self.assert(&Formula::not(h.clone()))),
                _ => {
                    let l = self.node(g);
                    self.enc.cnf.add([-l]);
                }
            },
            Formula::Lit(_) => {
                let l = self.node(f);
                self.enc.cnf.add([l]);
            }
        }
    }

    /// Tie each indicator to its atom: true means every element satisfies
    /// the predicate, false means the atom's own element violates it.
    fn atom_clauses(&mut self) {
        let k = self.enc.atoms.len();
        for (a, atom) in self.enc.atoms.clone().iter().enumerate() {
            let mut cols: Vec<(Var, usize)> = Vec::new();
            for v in atom.args() {
                if !cols.iter().any(|(w, _)| w == v) {
                    let c = self
                        .enc
                        .vars
                        .iter()
                        .position(|w| w == v)
                        .expect("atom var is a column");
                    cols.push((v.clone(), c));
                }
            }
            let b = self.enc.indicators[a];
            for bits in 0u32..1 << cols.len() {
                let row = |v: &Var| {
                    let i = cols.iter().position(|(w, _)| w == v).unwrap();
                    bits >> i & 1 == 1
                };
                let holds = element_holds(atom, row);
                // Literals that are all false exactly on this row pattern.
                let block = |e: usize| -> Vec<i32> {
                    cols.iter()
                        .enumerate()
                        .map(|(i, &(_, c))| {
                            let m = self.enc.membership_var(e, c);
                            if bits >> i & 1 == 1 {
                                -m
                            } else {
                                m
                            }
                        })
                        .collect()
                };
                if holds {
                    let clause: Vec<i32> = std::iter::once(b).chain(block(a)).collect();
                    self.enc.cnf.add(clause);
                } else {
                    let clauses: Vec<Vec<i32>> = (0..k)
                        .map(|e| std::iter::once(-b).chain(block(e)).collect())
                        .collect();
                    self.enc.cnf.clauses.extend(clauses);
                }
            }
        }
    }
}

/// Encode a flat formula as CNF. Columns are the formula's variables in
/// first-occurrence order.
pub fn encode(f: &Formula) -> Result<Encoding, DecideError> {
    let mut atom_index: IndexMap<Literal, usize> = IndexMap::new();
    let mut err = None;
    f.for_each_literal(&mut |l| match shape(l) {
        Ok(Shape::All(a)) | Ok(Shape::NotAll(a)) => {
            let n = atom_index.len();
            atom_index.entry(a).or_insert(n);
        }
        Ok(Shape::Strict(a, b)) => {
            for x in [a, b] {
                let n = atom_index.len();
                atom_index.entry(x).or_insert(n);
            }
        }
        Err(e) => {
            err.get_or_insert(e);
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let vars = f.vars();
    let atoms: Vec<Literal> = atom_index.keys().cloned().collect();
    let k = atoms.len();
    let mut cnf = CnfInstance {
        num_vars: k * vars.len(),
        clauses: Vec::new(),
    };
    let indicators = (0..k).map(|_| cnf.new_var()).collect();
    let mut encoder = Encoder {
        enc: Encoding {
            cnf,
            vars,
            atoms,
            indicators,
        },
        atom_index,
        strict_gates: IndexMap::new(),
        truth: None,
    };
    encoder.atom_clauses();
    encoder.assert(f);
    Ok(encoder.enc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(AbstractModel),
    Unsat,
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }
}

#[derive(Debug, Clone)]
pub struct DecideReport {
    pub verdict: Verdict,
    pub cnf_vars: usize,
    pub cnf_clauses: usize,
    pub stats: SolverStats,
}

pub fn decide(f: &Formula) -> Result<Verdict, DecideError> {
    decide_with(f, SolverOptions::default()).map(|r| r.verdict)
}

/// Encode, solve and decode; a satisfying model is checked against `f`
/// before it is returned.
pub fn decide_with(f: &Formula, options: SolverOptions) -> Result<DecideReport, DecideError> {
    let enc = encode(f)?;
    let (result, stats) = solve_with(&enc.cnf, options);
    let verdict = match result {
        SolveResult::Unsat => Verdict::Unsat,
        SolveResult::Sat(assignment) => {
            let model = enc.decode(&assignment);
            if !model.satisfies(f)? {
                return Err(DecideError::SelfCheckFailed);
            }
            Verdict::Sat(model)
        }
    };
    Ok(DecideReport {
        verdict,
        cnf_vars: enc.cnf.num_vars,
        cnf_clauses: enc.cnf.clauses.len(),
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_problem};
    use crate::translate::{flat_formula, translate};

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn sat(text: &str) -> bool {
        decide(&f(text)).unwrap().is_sat()
    }

    #[test]
    fn empty_variable_has_empty_column() {
        match decide(&f("x = x \\ x")).unwrap() {
            Verdict::Sat(m) => assert!((0..m.elements()).all(|e| !m.contains(e, &Var::user("x")))),
            Verdict::Unsat => panic!("x = 0 is satisfiable"),
        }
    }

    #[test]
    fn antisymmetry() {
        assert!(!sat("x sub y ; y sub x ; x != y"));
        assert!(sat("x sub y ; x != y"));
    }

    #[test]
    fn nonempty_needs_an_element() {
        match decide(&f("x != 0")).unwrap() {
            Verdict::Sat(m) => assert_eq!(m.signatures(), vec![vec![0]]),
            Verdict::Unsat => panic!(),
        }
    }

    #[test]
    fn strict_inclusion_is_irreflexive_and_transitive() {
        assert!(!sat("x ssub x"));
        assert!(!sat("x ssub y ; y ssub z ; z ssub x"));
        assert!(sat("x ssub y ; y ssub z"));
    }

    #[test]
    fn propositional_structure() {
        assert!(sat("(x = 0 or y = 0) and x != 0"));
        assert!(!sat("(x = 0 <-> y = 0) and x = 0 and y != 0"));
        assert!(sat("not (x sub y -> y sub x)"));
        assert!(!sat("x = y and not (x sub y)"));
    }

    #[test]
    fn example_two_translation_is_unsat() {
        let p = parse_problem("y = x \\ z ; x = { y } ; y = { z }").unwrap();
        let g = flat_formula(&p, &translate(&p));
        assert_eq!(decide(&g).unwrap(), Verdict::Unsat);
    }

    #[test]
    fn example_one_translation_is_unsat() {
        let p = parse_problem("x = { y } ; y = { z } ; z = { x } ; a = b \\ c").unwrap();
        let g = flat_formula(&p, &translate(&p));
        assert_eq!(decide(&g).unwrap(), Verdict::Unsat);
    }

    #[test]
    fn example_three_translation_is_sat_with_x_empty() {
        let p = parse_problem("x = y \\ y2 ; x = z \\ z2 ; z = { y }").unwrap();
        let g = flat_formula(&p, &translate(&p));
        match decide(&g).unwrap() {
            Verdict::Sat(m) => assert!((0..m.elements()).all(|e| !m.contains(e, &Var::user("x")))),
            Verdict::Unsat => panic!("example three is satisfiable"),
        }
    }

    #[test]
    fn singleton_is_rejected() {
        let g = Formula::Lit(Literal::Singleton(Var::user("x"), Var::user("y")));
        assert!(matches!(encode(&g), Err(DecideError::SingletonAtom(_))));
    }

    #[test]
    fn budget_is_the_atom_count() {
        let enc = encode(&f("x ssub y ; disj(x, z) ; x = y \\ z")).unwrap();
        assert_eq!(enc.elements(), 4);
        assert_eq!(enc.vars.len(), 3);
    }

    #[test]
    fn empty_formula_is_sat() {
        assert!(decide(&Formula::And(vec![])).unwrap().is_sat());
        assert!(!decide(&Formula::Or(vec![])).unwrap().is_sat());
    }

    #[test]
    fn activity_flag_agrees() {
        let g = f("x ssub y ; y ssub z ; ndisj(z, w) ; disj(x, w)");
        let a = decide_with(&g, SolverOptions { activity: true }).unwrap();
        assert!(a.verdict.is_sat());
    }
}
