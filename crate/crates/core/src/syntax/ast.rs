use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

/// Where a variable came from. User variables are the only ones a source
/// file can name with a plain identifier; the other kinds carry a reserved
/// prefix (`~` for auxiliary, `_` for fresh) when printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    User,
    /// Companion variable `~x` introduced by the translation for each `x`.
    Auxiliary,
    /// Introduced while expanding a derived literal.
    Fresh,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    kind: VarKind,
    name: Arc<str>,
}

impl Var {
    pub fn user(name: impl AsRef<str>) -> Self {
        Var {
            kind: VarKind::User,
            name: Arc::from(name.as_ref()),
        }
    }

    pub fn fresh(name: impl AsRef<str>) -> Self {
        Var {
            kind: VarKind::Fresh,
            name: Arc::from(name.as_ref()),
        }
    }

    /// The auxiliary companion `~self`.
    ///
    /// Panics when called on an auxiliary variable: the translation never
    /// nests companions.
    pub fn tilde(&self) -> Self {
        assert!(
            self.kind != VarKind::Auxiliary,
            "auxiliary variable {self} has no companion"
        );
        Var {
            kind: VarKind::Auxiliary,
            name: Arc::from(self.to_string()),
        }
    }

    pub(crate) fn auxiliary_raw(name: impl AsRef<str>) -> Self {
        Var {
            kind: VarKind::Auxiliary,
            name: Arc::from(name.as_ref()),
        }
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    /// Bare name without the reserved prefix.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_auxiliary(&self) -> bool {
        self.kind == VarKind::Auxiliary
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::User => write!(f, "{}", self.name),
            VarKind::Auxiliary => write!(f, "~{}", self.name),
            VarKind::Fresh => write!(f, "_{}", self.name),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A single set literal.
///
/// `DiffEq`, `DiffNeq` and `Singleton` are the primitive forms; the rest are
/// derived relators that either get expanded by [`desugar`](super::desugar)
/// or are handled natively by the flat decision procedure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    /// `x = y \ z`
    DiffEq(Var, Var, Var),
    /// `x != y \ z`
    DiffNeq(Var, Var, Var),
    /// `x = { y }`
    Singleton(Var, Var),
    /// `x = 0`
    Empty(Var),
    /// `x != 0`
    NotEmpty(Var),
    /// `x sub y`
    Subseteq(Var, Var),
    /// `x nsub y`
    NotSubseteq(Var, Var),
    /// `x = y & z`
    InterEq(Var, Var, Var),
    /// `x != y & z`
    InterNeq(Var, Var, Var),
    /// `x = y | z`
    UnionEq(Var, Var, Var),
    /// `x != y | z`
    UnionNeq(Var, Var, Var),
    /// `disj(x, y)`
    Disj(Var, Var),
    /// `ndisj(x, y)`
    NotDisj(Var, Var),
    /// `x ssub y`
    StrictSub(Var, Var),
    /// `x = y`
    VarEq(Var, Var),
    /// `x != y`
    VarNeq(Var, Var),
}

impl Literal {
    /// Variables in argument order, repeats included.
    pub fn args(&self) -> Vec<&Var> {
        use Literal::*;
        match self {
            DiffEq(x, y, z)
            | DiffNeq(x, y, z)
            | InterEq(x, y, z)
            | InterNeq(x, y, z)
            | UnionEq(x, y, z)
            | UnionNeq(x, y, z) => vec![x, y, z],
            Singleton(x, y)
            | Subseteq(x, y)
            | NotSubseteq(x, y)
            | Disj(x, y)
            | NotDisj(x, y)
            | StrictSub(x, y)
            | VarEq(x, y)
            | VarNeq(x, y) => vec![x, y],
            Empty(x) | NotEmpty(x) => vec![x],
        }
    }

    pub fn is_singleton(&self) -> bool {
        matches!(self, Literal::Singleton(..))
    }

    /// `true` for `x = y \ z` and `x != y \ z`.
    pub fn is_core(&self) -> bool {
        matches!(self, Literal::DiffEq(..) | Literal::DiffNeq(..))
    }

    pub fn is_derived(&self) -> bool {
        !self.is_core() && !self.is_singleton()
    }
}

/// Propositional combination of literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Lit(Literal),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn lit(l: Literal) -> Self {
        Formula::Lit(l)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Conjunction of the given literals.
    pub fn conj(lits: impl IntoIterator<Item = Literal>) -> Self {
        Formula::And(lits.into_iter().map(Formula::Lit).collect())
    }

    /// Visit every literal, left to right.
    pub fn for_each_literal<'a>(&'a self, f: &mut impl FnMut(&'a Literal)) {
        match self {
            Formula::Lit(l) => f(l),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| g.for_each_literal(f)),
            Formula::Not(g) => g.for_each_literal(f),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.for_each_literal(f);
                b.for_each_literal(f);
            }
        }
    }

    /// Variables in first-occurrence order.
    pub fn vars(&self) -> Vec<Var> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.for_each_literal(&mut |l| {
            for v in l.args() {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
        });
        out
    }

    pub fn contains_singleton(&self) -> bool {
        let mut found = false;
        self.for_each_literal(&mut |l| found |= l.is_singleton());
        found
    }

    /// Evaluate the propositional structure, delegating literals to `atom`.
    pub fn eval<E>(&self, atom: &mut impl FnMut(&Literal) -> Result<bool, E>) -> Result<bool, E> {
        Ok(match self {
            Formula::Lit(l) => atom(l)?,
            Formula::And(fs) => {
                for g in fs {
                    if !g.eval(atom)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for g in fs {
                    if g.eval(atom)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Not(g) => !g.eval(atom)?,
            Formula::Implies(a, b) => !a.eval(atom)? || b.eval(atom)?,
            Formula::Iff(a, b) => a.eval(atom)? == b.eval(atom)?,
        })
    }
}

impl From<Literal> for Formula {
    fn from(l: Literal) -> Self {
        Formula::Lit(l)
    }
}

/// A singleton atom `set = { member }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingletonAtom {
    pub set: Var,
    pub member: Var,
}

impl fmt::Display for SingletonAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {{ {} }}", self.set, self.member)
    }
}
