//! Constraint AST, the textual format, and expansion of derived literals.

mod ast;
mod desugar;
mod parse;
mod print;
mod problem;

pub use ast::{Formula, Literal, SingletonAtom, Var, VarKind};
pub use desugar::{desugar, FreshSupply};
pub use parse::{parse, parse_formula, parse_problem, ParseError, Parsed};
pub use problem::Problem;
