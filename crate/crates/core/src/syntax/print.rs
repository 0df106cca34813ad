use std::fmt;

use super::ast::{Formula, Literal};
use super::problem::Problem;

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Literal::*;
        match self {
            DiffEq(x, y, z) => write!(f, "{x} = {y} \\ {z}"),
            DiffNeq(x, y, z) => write!(f, "{x} != {y} \\ {z}"),
            Singleton(x, y) => write!(f, "{x} = {{ {y} }}"),
            Empty(x) => write!(f, "{x} = 0"),
            NotEmpty(x) => write!(f, "{x} != 0"),
            Subseteq(x, y) => write!(f, "{x} sub {y}"),
            NotSubseteq(x, y) => write!(f, "{x} nsub {y}"),
            InterEq(x, y, z) => write!(f, "{x} = {y} & {z}"),
            InterNeq(x, y, z) => write!(f, "{x} != {y} & {z}"),
            UnionEq(x, y, z) => write!(f, "{x} = {y} | {z}"),
            UnionNeq(x, y, z) => write!(f, "{x} != {y} | {z}"),
            Disj(x, y) => write!(f, "disj({x}, {y})"),
            NotDisj(x, y) => write!(f, "ndisj({x}, {y})"),
            StrictSub(x, y) => write!(f, "{x} ssub {y}"),
            VarEq(x, y) => write!(f, "{x} = {y}"),
            VarNeq(x, y) => write!(f, "{x} != {y}"),
        }
    }
}

struct Operand<'a>(&'a Formula);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::Lit(l) => write!(f, "{l}"),
            other => write!(f, "({other})"),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, parts: &[Formula], sep: &str) -> fmt::Result {
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{}", Operand(p))?;
    }
    Ok(())
}

/// Compound operands are always parenthesised, so the printed text parses
/// back to the same tree regardless of precedence and associativity.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Lit(l) => write!(f, "{l}"),
            Formula::And(parts) => join(f, parts, " and "),
            Formula::Or(parts) => join(f, parts, " or "),
            Formula::Not(g) => write!(f, "not {}", Operand(g)),
            Formula::Implies(a, b) => write!(f, "{} -> {}", Operand(a), Operand(b)),
            Formula::Iff(a, b) => write!(f, "{} <-> {}", Operand(a), Operand(b)),
        }
    }
}

/// Literals joined by ` ; ` in source order.
impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.literals().iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{parse_formula, parse_problem};

    #[test]
    fn example_one_prints_in_source_order() {
        let p = parse_problem("x = { y }\ny = { z }\nz = { x }\na = b \\ c").unwrap();
        assert_eq!(
            p.to_string(),
            "x = { y } ; y = { z } ; z = { x } ; a = b \\ c"
        );
    }

    #[test]
    fn empty_problem_prints_nothing() {
        assert_eq!(parse_problem("").unwrap().to_string(), "");
    }

    #[test]
    fn nested_formula_round_trips() {
        let src = "(a = 0 and not (b sub c)) -> (disj(a, b) <-> (a = b | c or c != 0))";
        let f = parse_formula(src).unwrap();
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }
}
