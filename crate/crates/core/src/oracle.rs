//! Brute-force ground truth and instance generators.
//!
//! Everything here evaluates literals with its own code, independent of the
//! decision procedure and of [`SetAssignment`](crate::models::SetAssignment)
//! evaluation, so that agreement between the two means something.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hf::{enumerate_level, HfError, HfSet, MAX_ENUMERATED_LEVEL};
use crate::syntax::{Formula, Literal, Problem, Var};

/// Largest search space either oracle will walk.
pub const BUDGET_LOG2: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search space of 2^{log2} assignments exceeds the budget of 2^{BUDGET_LOG2}")]
    BudgetExceeded { log2: u32 },
    #[error("singleton atom `{0}` in a flat formula")]
    SingletonAtom(Literal),
    #[error(transparent)]
    Level(#[from] HfError),
}

/// Subsets of a universe of at most 24 elements, as bit masks.
fn flat_literal(l: &Literal, val: &impl Fn(&Var) -> u32) -> Result<bool, OracleError> {
    use Literal::*;
    Ok(match l {
        DiffEq(x, y, z) => val(x) == val(y) & !val(z),
        DiffNeq(x, y, z) => val(x) != val(y) & !val(z),
        Empty(x) => val(x) == 0,
        NotEmpty(x) => val(x) != 0,
        Subseteq(x, y) => val(x) & !val(y) == 0,
        NotSubseteq(x, y) => val(x) & !val(y) != 0,
        InterEq(x, y, z) => val(x) == val(y) & val(z),
        InterNeq(x, y, z) => val(x) != val(y) & val(z),
        UnionEq(x, y, z) => val(x) == val(y) | val(z),
        UnionNeq(x, y, z) => val(x) != val(y) | val(z),
        Disj(x, y) => val(x) & val(y) == 0,
        NotDisj(x, y) => val(x) & val(y) != 0,
        StrictSub(x, y) => val(x) & !val(y) == 0 && val(x) != val(y),
        VarEq(x, y) => val(x) == val(y),
        VarNeq(x, y) => val(x) != val(y),
        Singleton(..) => return Err(OracleError::SingletonAtom(l.clone())),
    })
}

/// Is `f` satisfiable over a universe of `k` elements? Tries every
/// assignment of subsets to the variables of `f`.
pub fn flat_sat(f: &Formula, k: u32) -> Result<bool, OracleError> {
    let vars = f.vars();
    let log2 = k.saturating_mul(vars.len() as u32);
    if log2 > BUDGET_LOG2 {
        return Err(OracleError::BudgetExceeded { log2 });
    }
    let mut singleton = None;
    f.for_each_literal(&mut |l| {
        if l.is_singleton() {
            singleton.get_or_insert_with(|| l.clone());
        }
    });
    if let Some(l) = singleton {
        return Err(OracleError::SingletonAtom(l));
    }
    let mask = (1u32 << k) - 1;
    for code in 0u64..1 << log2 {
        let val = |v: &Var| {
            let i = vars.iter().position(|w| w == v).expect("formula variable");
            (code >> (i as u32 * k)) as u32 & mask
        };
        if f.eval(&mut |l| flat_literal(l, &val))? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn nested_literal(l: &Literal, val: &impl Fn(&Var) -> HfSet) -> bool {
    use Literal::*;
    let sub = |a: &HfSet, b: &HfSet| a.members().iter().all(|u| b.contains(u));
    let meets = |a: &HfSet, b: &HfSet| a.members().iter().any(|u| b.contains(u));
    let minus = |a: &HfSet, b: &HfSet| {
        HfSet::from_members(a.members().iter().filter(|u| !b.contains(u)).cloned())
    };
    let both = |a: &HfSet, b: &HfSet| {
        HfSet::from_members(a.members().iter().filter(|u| b.contains(u)).cloned())
    };
    let either =
        |a: &HfSet, b: &HfSet| HfSet::from_members(a.members().iter().chain(b.members()).cloned());
    match l {
        DiffEq(x, y, z) => val(x) == minus(&val(y), &val(z)),
        DiffNeq(x, y, z) => val(x) != minus(&val(y), &val(z)),
        Singleton(x, y) => val(x) == HfSet::from_members([val(y)]),
        Empty(x) => val(x).is_empty(),
        NotEmpty(x) => !val(x).is_empty(),
        Subseteq(x, y) => sub(&val(x), &val(y)),
        NotSubseteq(x, y) => !sub(&val(x), &val(y)),
        InterEq(x, y, z) => val(x) == both(&val(y), &val(z)),
        InterNeq(x, y, z) => val(x) != both(&val(y), &val(z)),
        UnionEq(x, y, z) => val(x) == either(&val(y), &val(z)),
        UnionNeq(x, y, z) => val(x) != either(&val(y), &val(z)),
        Disj(x, y) => !meets(&val(x), &val(y)),
        NotDisj(x, y) => meets(&val(x), &val(y)),
        StrictSub(x, y) => sub(&val(x), &val(y)) && val(x) != val(y),
        VarEq(x, y) => val(x) == val(y),
        VarNeq(x, y) => val(x) != val(y),
    }
}

/// Search every assignment of sets from the von Neumann level `V_level` to
/// the problem's variables and return the first model found.
pub fn nested_witness(p: &Problem, level: u32) -> Result<Option<Vec<(Var, HfSet)>>, OracleError> {
    if level > MAX_ENUMERATED_LEVEL {
        return Err(HfError::LevelTooLarge {
            n: level,
            max: MAX_ENUMERATED_LEVEL,
        }
        .into());
    }
    let pool = enumerate_level(level)?.sets;
    let vars = p.vars();
    let bits_per_var = (pool.len() as f64).log2().ceil() as u32;
    let log2 = bits_per_var.saturating_mul(vars.len() as u32);
    if log2 > BUDGET_LOG2 {
        return Err(OracleError::BudgetExceeded { log2 });
    }
    if pool.is_empty() {
        // Only the empty problem has a model over the empty level.
        return Ok(vars.is_empty().then(Vec::new));
    }
    let total = (pool.len() as u64).pow(vars.len() as u32);
    for code in 0..total {
        let mut rest = code;
        let values: Vec<HfSet> = vars
            .iter()
            .map(|_| {
                let s = pool[(rest % pool.len() as u64) as usize].clone();
                rest /= pool.len() as u64;
                s
            })
            .collect();
        let val =
            |v: &Var| values[vars.iter().position(|w| w == v).expect("problem variable")].clone();
        if p.literals().iter().all(|l| nested_literal(l, &val)) {
            return Ok(Some(
                vars.iter().cloned().zip(values.iter().cloned()).collect(),
            ));
        }
    }
    Ok(None)
}

/// Is `p` satisfiable with every variable ranging over `V_level`? A negative
/// answer says nothing about larger levels.
pub fn nested_sat(p: &Problem, level: u32) -> Result<bool, OracleError> {
    nested_witness(p, level).map(|w| w.is_some())
}

/// Instance shapes for [`generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Empty,
    /// A model is drawn first and only literals it satisfies are emitted.
    Planted {
        vars: usize,
        diffs: usize,
        singletons: usize,
    },
    /// Literals drawn independently of any model.
    Random {
        vars: usize,
        diffs: usize,
        singletons: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad profile `{0}`: expected `empty`, `planted:V:D:S` or `random:V:D:S`")]
pub struct ParseProfileError(String);

impl FromStr for Profile {
    type Err = ParseProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseProfileError(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["empty"] => Ok(Profile::Empty),
            [kind @ ("planted" | "random"), v, d, k] => {
                let n = |t: &str| t.parse::<usize>().map_err(|_| err());
                let (vars, diffs, singletons) = (n(v)?, n(d)?, n(k)?);
                if vars == 0 || (singletons > 0 && vars < 2) {
                    return Err(err());
                }
                Ok(if *kind == "planted" {
                    Profile::Planted {
                        vars,
                        diffs,
                        singletons,
                    }
                } else {
                    Profile::Random {
                        vars,
                        diffs,
                        singletons,
                    }
                })
            }
            _ => Err(err()),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Empty => write!(f, "empty"),
            Profile::Planted {
                vars,
                diffs,
                singletons,
            } => write!(f, "planted:{vars}:{diffs}:{singletons}"),
            Profile::Random {
                vars,
                diffs,
                singletons,
            } => write!(f, "random:{vars}:{diffs}:{singletons}"),
        }
    }
}

fn var_name(i: usize) -> Var {
    const NAMES: [&str; 8] = ["x", "y", "z", "u", "v", "w", "s", "t"];
    match NAMES.get(i) {
        Some(n) => Var::user(n),
        None => Var::user(format!("v{i}")),
    }
}

/// A reproducible random problem.
///
/// Every one of the requested variables occurs. Planted problems are
/// satisfied by an assignment into `V_3`, so the nested oracle at level 3
/// confirms them.
pub fn generate(seed: u64, profile: Profile) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match profile {
        Profile::Empty => Problem::default(),
        Profile::Planted {
            vars,
            diffs,
            singletons,
        } => planted(&mut rng, vars, diffs, singletons),
        Profile::Random {
            vars,
            diffs,
            singletons,
        } => random(&mut rng, vars, diffs, singletons),
    }
}

fn diff_literal(x: usize, y: usize, z: usize, eq: bool) -> Literal {
    let (x, y, z) = (var_name(x), var_name(y), var_name(z));
    if eq {
        Literal::DiffEq(x, y, z)
    } else {
        Literal::DiffNeq(x, y, z)
    }
}

fn planted(rng: &mut ChaCha8Rng, n: usize, diffs: usize, singletons: usize) -> Problem {
    let v3 = enumerate_level(3).expect("level 3").sets;
    let mut set_side: Vec<usize> = (1..n).collect();
    set_side.shuffle(rng);
    set_side.truncate(singletons.min(n - 1));
    let mut values: Vec<HfSet> = Vec::with_capacity(n);
    let mut atoms: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        if i == 0 {
            // Always a legal member for later atoms.
            values.push(v3[rng.gen_range(0..2)].clone());
        } else if set_side.contains(&i) {
            let members: Vec<usize> = (0..i).filter(|&j| values[j].rank() <= 1).collect();
            let j = *members.choose(rng).expect("variable 0 has rank at most 1");
            values.push(HfSet::singleton(&values[j]));
            atoms.push((i, j));
        } else {
            values.push(v3.choose(rng).expect("nonempty level").clone());
        }
    }
    let mut lits: Vec<Literal> = atoms
        .iter()
        .map(|&(x, y)| Literal::Singleton(var_name(x), var_name(y)))
        .collect();
    let mut add_diff = |rng: &mut ChaCha8Rng, x: Option<usize>| {
        let (y, z) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let target = values[y].diff(&values[z]);
        let matching: Vec<usize> = (0..n).filter(|&i| values[i] == target).collect();
        let lit = match x {
            Some(x) => diff_literal(x, y, z, values[x] == target),
            None if rng.gen_bool(0.5) && !matching.is_empty() => {
                diff_literal(*matching.choose(rng).expect("nonempty"), y, z, true)
            }
            None => {
                let x = rng.gen_range(0..n);
                diff_literal(x, y, z, values[x] == target)
            }
        };
        lits.push(lit);
    };
    for _ in 0..diffs {
        add_diff(rng, None);
    }
    cover_and_shuffle(rng, n, lits, |rng, x, lits| {
        let (y, z) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let eq = values[x] == values[y].diff(&values[z]);
        lits.push(diff_literal(x, y, z, eq));
    })
}

fn random(rng: &mut ChaCha8Rng, n: usize, diffs: usize, singletons: usize) -> Problem {
    let mut lits = Vec::new();
    for _ in 0..singletons {
        let x = rng.gen_range(0..n);
        let y = rng.gen_range(0..n);
        lits.push(Literal::Singleton(var_name(x), var_name(y)));
    }
    for _ in 0..diffs {
        let eq = rng.gen_bool(0.5);
        lits.push(diff_literal(
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            eq,
        ));
    }
    cover_and_shuffle(rng, n, lits, |rng, x, lits| {
        let eq = rng.gen_bool(0.5);
        lits.push(diff_literal(
            x,
            rng.gen_range(0..n),
            rng.gen_range(0..n),
            eq,
        ));
    })
}

/// Add a literal on each variable that does not occur yet, then shuffle.
fn cover_and_shuffle(
    rng: &mut ChaCha8Rng,
    n: usize,
    mut lits: Vec<Literal>,
    mut cover: impl FnMut(&mut ChaCha8Rng, usize, &mut Vec<Literal>),
) -> Problem {
    for i in 0..n {
        let v = var_name(i);
        if !lits.iter().any(|l| l.args().contains(&&v)) {
            cover(rng, i, &mut lits);
        }
    }
    lits.shuffle(rng);
    Problem::new(lits)
}

/// A random propositional combination of `atoms` flat literals over the
/// first `vars` variable names.
pub fn random_flat_formula(rng: &mut impl Rng, vars: usize, atoms: usize) -> Formula {
    let v = |rng: &mut dyn rand::RngCore| var_name(rng.gen_range(0..vars));
    let mut leaves: Vec<Formula> = (0..atoms)
        .map(|_| {
            use Literal::*;
            let lit = match rng.gen_range(0..15) {
                0 => DiffEq(v(rng), v(rng), v(rng)),
                1 => DiffNeq(v(rng), v(rng), v(rng)),
                2 => Empty(v(rng)),
                3 => NotEmpty(v(rng)),
                4 => Subseteq(v(rng), v(rng)),
                5 => NotSubseteq(v(rng), v(rng)),
                6 => InterEq(v(rng), v(rng), v(rng)),
                7 => InterNeq(v(rng), v(rng), v(rng)),
                8 => UnionEq(v(rng), v(rng), v(rng)),
                9 => UnionNeq(v(rng), v(rng), v(rng)),
                10 => Disj(v(rng), v(rng)),
                11 => NotDisj(v(rng), v(rng)),
                12 => StrictSub(v(rng), v(rng)),
                13 => VarEq(v(rng), v(rng)),
                _ => VarNeq(v(rng), v(rng)),
            };
            Formula::Lit(lit)
        })
        .collect();
    while leaves.len() > 1 {
        let a = leaves.swap_remove(rng.gen_range(0..leaves.len()));
        let b = leaves.swap_remove(rng.gen_range(0..leaves.len()));
        let node = match rng.gen_range(0..6) {
            0 | 1 => Formula::And(vec![a, b]),
            2 => Formula::Or(vec![a, b]),
            3 => Formula::implies(a, b),
            4 => Formula::iff(a, b),
            _ => Formula::And(vec![Formula::not(a), b]),
        };
        leaves.push(node);
    }
    leaves.pop().unwrap_or(Formula::And(Vec::new()))
}
