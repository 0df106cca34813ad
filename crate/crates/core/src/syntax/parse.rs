//! Lexer and recursive-descent parser for the constraint language.
//!
//! One literal per line or `;`-separated. Files that use `and`, `or`, `not`,
//! `->`, `<->` or parentheses are propositional formulas; singleton atoms
//! are only legal in plain conjunctions.

use thiserror::Error;

use super::ast::{Formula, Literal, Var};
use super::problem::Problem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unknown operator `{op}`")]
    UnknownOperator { line: usize, col: usize, op: String },
    #[error("{line}:{col}: singleton atoms are only allowed in a plain conjunction")]
    Singleton { line: usize, col: usize },
    #[error(
        "{line}:{col}: propositional connectives are not allowed in a conjunction of constraints"
    )]
    Connective { line: usize, col: usize },
}

/// Result of [`parse`]: files without connectives are problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Problem(Problem),
    Formula(Formula),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Fresh(String),
    Aux(String),
    Zero,
    Eq,
    Neq,
    Backslash,
    LBrace,
    RBrace,
    Amp,
    Pipe,
    LParen,
    RParen,
    Comma,
    Semi,
    Newline,
    Arrow,
    DArrow,
    And,
    Or,
    Not,
    Sub,
    Nsub,
    Ssub,
    DisjKw,
    NdisjKw,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Fresh(s) => format!("`_{s}`"),
            Tok::Aux(s) => format!("`~{s}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Zero => "0",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::Backslash => "\\",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Arrow => "->",
            Tok::DArrow => "<->",
            Tok::And => "and",
            Tok::Or => "or",
            Tok::Not => "not",
            Tok::Sub => "sub",
            Tok::Nsub => "nsub",
            Tok::Ssub => "ssub",
            Tok::DisjKw => "disj",
            Tok::NdisjKw => "ndisj",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: tl,
                col: tc,
            })
        };
        match c {
            '\n' => {
                push(&mut out, Tok::Newline);
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '=' => push(&mut out, Tok::Eq),
            '\\' => push(&mut out, Tok::Backslash),
            '{' => push(&mut out, Tok::LBrace),
            '}' => push(&mut out, Tok::RBrace),
            '&' => push(&mut out, Tok::Amp),
            '|' => push(&mut out, Tok::Pipe),
            '(' => push(&mut out, Tok::LParen),
            ')' => push(&mut out, Tok::RParen),
            ',' => push(&mut out, Tok::Comma),
            ';' => push(&mut out, Tok::Semi),
            '!' if chars.get(i + 1) == Some(&'=') => {
                push(&mut out, Tok::Neq);
                i += 2;
                col += 2;
                continue;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(&mut out, Tok::Arrow);
                i += 2;
                col += 2;
                continue;
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(&mut out, Tok::DArrow);
                i += 3;
                col += 3;
                continue;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word != "0" {
                    return Err(ParseError::Syntax {
                        line: tl,
                        col: tc,
                        message: format!(
                            "unexpected number `{word}` (only `0` denotes the empty set)"
                        ),
                    });
                }
                push(&mut out, Tok::Zero);
                col += i - start;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' || c == '~' => {
                let start = i;
                let aux = c == '~';
                if aux {
                    i += 1;
                }
                let word_start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[word_start..i].iter().collect();
                col += i - start;
                let bad = |what: &str| ParseError::Syntax {
                    line: tl,
                    col: tc,
                    message: format!(
                        "malformed {what} `{}`",
                        chars[start..i].iter().collect::<String>()
                    ),
                };
                let tok = if aux {
                    let ok = match word.strip_prefix('_') {
                        Some(rest) => !rest.is_empty(),
                        None => word.starts_with(|c: char| c.is_ascii_alphabetic()),
                    };
                    if !ok {
                        return Err(bad("auxiliary variable"));
                    }
                    Tok::Aux(word)
                } else if let Some(rest) = word.strip_prefix('_') {
                    if rest.is_empty() {
                        return Err(bad("fresh variable"));
                    }
                    Tok::Fresh(rest.to_owned())
                } else {
                    match word.as_str() {
                        "and" => Tok::And,
                        "or" => Tok::Or,
                        "not" => Tok::Not,
                        "sub" => Tok::Sub,
                        "nsub" => Tok::Nsub,
                        "ssub" => Tok::Ssub,
                        "disj" => Tok::DisjKw,
                        "ndisj" => Tok::NdisjKw,
                        _ => Tok::Ident(word),
                    }
                };
                push(&mut out, tok);
                continue;
            }
            other => {
                let mut op = other.to_string();
                if other == '!' || other == '<' || other == '-' {
                    if let Some(n) = chars.get(i + 1) {
                        if !n.is_whitespace() && !is_ident_char(*n) {
                            op.push(*n);
                        }
                    }
                }
                return Err(ParseError::UnknownOperator {
                    line: tl,
                    col: tc,
                    op,
                });
            }
        }
        i += 1;
        col += 1;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// One top-level item together with what the checks below need to know.
struct Item {
    formula: Formula,
    line: usize,
    col: usize,
    singleton_at: Option<(usize, usize)>,
    connective_at: Option<(usize, usize)>,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    depth: usize,
    singleton_at: Option<(usize, usize)>,
    connective_at: Option<(usize, usize)>,
}

impl Parser {
    fn new(toks: Vec<Spanned>) -> Self {
        Parser {
            toks,
            pos: 0,
            depth: 0,
            singleton_at: None,
            connective_at: None,
        }
    }

    fn skip_inner_newlines(&mut self) {
        if self.depth > 0 {
            while self.toks[self.pos].tok == Tok::Newline {
                self.pos += 1;
            }
        }
    }

    fn peek(&mut self) -> &Spanned {
        self.skip_inner_newlines();
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        self.skip_inner_newlines();
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, t: &Spanned, expected: &str) -> ParseError {
        match &t.tok {
            Tok::Ident(w) if expected.contains("operator") => ParseError::UnknownOperator {
                line: t.line,
                col: t.col,
                op: w.clone(),
            },
            tok => ParseError::Syntax {
                line: t.line,
                col: t.col,
                message: format!("expected {expected}, found {}", tok.describe()),
            },
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let t = self.bump();
        if t.tok == want {
            Ok(())
        } else {
            Err(self.unexpected(&t, &format!("`{}`", want.text())))
        }
    }

    fn note_connective(&mut self, t: &Spanned) {
        if self.connective_at.is_none() {
            self.connective_at = Some((t.line, t.col));
        }
    }

    fn items(&mut self) -> Result<Vec<Item>, ParseError> {
        let mut items = Vec::new();
        loop {
            while matches!(self.peek().tok, Tok::Newline | Tok::Semi) {
                self.bump();
            }
            if self.peek().tok == Tok::Eof {
                return Ok(items);
            }
            let start = self.peek().clone();
            self.singleton_at = None;
            self.connective_at = None;
            let formula = self.iff()?;
            let end = self.peek().clone();
            if !matches!(end.tok, Tok::Newline | Tok::Semi | Tok::Eof) {
                return Err(self.unexpected(&end, "`;`, end of line, or a connective"));
            }
            items.push(Item {
                formula,
                line: start.line,
                col: start.col,
                singleton_at: self.singleton_at,
                connective_at: self.connective_at,
            });
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while self.peek().tok == Tok::DArrow {
            let t = self.bump();
            self.note_connective(&t);
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek().tok == Tok::Arrow {
            let t = self.bump();
            self.note_connective(&t);
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let first = self.and()?;
        if self.peek().tok != Tok::Or {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.peek().tok == Tok::Or {
            let t = self.bump();
            self.note_connective(&t);
            parts.push(self.and()?);
        }
        Ok(Formula::Or(parts))
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let first = self.unary()?;
        if self.peek().tok != Tok::And {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.peek().tok == Tok::And {
            let t = self.bump();
            self.note_connective(&t);
            parts.push(self.unary()?);
        }
        Ok(Formula::And(parts))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Not => {
                self.bump();
                self.note_connective(&t);
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                self.note_connective(&t);
                self.depth += 1;
                let inner = self.iff();
                let close = inner.and_then(|f| self.expect(Tok::RParen).map(|_| f));
                self.depth -= 1;
                close
            }
            _ => Ok(Formula::Lit(self.literal()?)),
        }
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(name) => Ok(Var::user(name)),
            Tok::Fresh(name) => Ok(Var::fresh(name)),
            Tok::Aux(name) => Ok(Var::auxiliary_raw(name)),
            _ => Err(self.unexpected(&t, "a variable")),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::DisjKw | Tok::NdisjKw => {
                self.bump();
                self.expect(Tok::LParen)?;
                let x = self.var()?;
                self.expect(Tok::Comma)?;
                let y = self.var()?;
                self.expect(Tok::RParen)?;
                return Ok(if t.tok == Tok::DisjKw {
                    Literal::Disj(x, y)
                } else {
                    Literal::NotDisj(x, y)
                });
            }
            Tok::Ident(_) | Tok::Fresh(_) | Tok::Aux(_) => {}
            _ => return Err(self.unexpected(&t, "a literal")),
        }
        let x = self.var()?;
        let op = self.bump();
        match op.tok {
            Tok::Sub => Ok(Literal::Subseteq(x, self.var()?)),
            Tok::Nsub => Ok(Literal::NotSubseteq(x, self.var()?)),
            Tok::Ssub => Ok(Literal::StrictSub(x, self.var()?)),
            Tok::Eq | Tok::Neq => {
                let positive = op.tok == Tok::Eq;
                let rhs = self.peek().clone();
                match rhs.tok {
                    Tok::Zero => {
                        self.bump();
                        Ok(if positive {
                            Literal::Empty(x)
                        } else {
                            Literal::NotEmpty(x)
                        })
                    }
                    Tok::LBrace => {
                        if !positive {
                            return Err(ParseError::Syntax {
                                line: rhs.line,
                                col: rhs.col,
                                message: "singleton atoms cannot be negated".into(),
                            });
                        }
                        self.bump();
                        let y = self.var()?;
                        self.expect(Tok::RBrace)?;
                        if self.singleton_at.is_none() {
                            self.singleton_at = Some((t.line, t.col));
                        }
                        Ok(Literal::Singleton(x, y))
                    }
                    _ => {
                        let y = self.var()?;
                        let next = self.peek().tok.clone();
                        let build = match next {
                            Tok::Backslash => Some((
                                Literal::DiffEq as fn(_, _, _) -> _,
                                Literal::DiffNeq as fn(_, _, _) -> _,
                            )),
                            Tok::Amp => Some((
                                Literal::InterEq as fn(_, _, _) -> _,
                                Literal::InterNeq as fn(_, _, _) -> _,
                            )),
                            Tok::Pipe => Some((
                                Literal::UnionEq as fn(_, _, _) -> _,
                                Literal::UnionNeq as fn(_, _, _) -> _,
                            )),
                            _ => None,
                        };
                        match build {
                            Some((eq, neq)) => {
                                self.bump();
                                let z = self.var()?;
                                Ok(if positive { eq(x, y, z) } else { neq(x, y, z) })
                            }
                            None => Ok(if positive {
                                Literal::VarEq(x, y)
                            } else {
                                Literal::VarNeq(x, y)
                            }),
                        }
                    }
                }
            }
            _ => Err(self.unexpected(&op, "an operator")),
        }
    }
}

fn parse_items(text: &str) -> Result<Vec<Item>, ParseError> {
    Parser::new(lex(text)?).items()
}

fn is_compound(item: &Item) -> bool {
    !matches!(item.formula, Formula::Lit(_))
}

fn reject_singletons(items: &[Item]) -> Result<(), ParseError> {
    match items.iter().find_map(|it| it.singleton_at) {
        Some((line, col)) => Err(ParseError::Singleton { line, col }),
        None => Ok(()),
    }
}

fn into_formula(items: Vec<Item>) -> Formula {
    let mut fs: Vec<Formula> = items.into_iter().map(|it| it.formula).collect();
    if fs.len() == 1 {
        fs.pop().unwrap()
    } else {
        Formula::And(fs)
    }
}

fn into_problem(items: Vec<Item>) -> Result<Problem, ParseError> {
    let mut lits = Vec::with_capacity(items.len());
    for it in items {
        match it.formula {
            Formula::Lit(l) => lits.push(l),
            _ => {
                let (line, col) = it.connective_at.unwrap_or((it.line, it.col));
                return Err(ParseError::Connective { line, col });
            }
        }
    }
    Ok(Problem::new(lits))
}

/// Parse a file, deciding from its shape whether it is a problem or a
/// propositional formula.
pub fn parse(text: &str) -> Result<Parsed, ParseError> {
    let items = parse_items(text)?;
    if items
        .iter()
        .any(|it| is_compound(it) || it.connective_at.is_some())
    {
        reject_singletons(&items)?;
        Ok(Parsed::Formula(into_formula(items)))
    } else {
        Ok(Parsed::Problem(into_problem(items)?))
    }
}

/// Parse a conjunction of literals, singleton atoms included. Derived
/// literals are expanded.
pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let items = parse_items(text)?;
    if items.iter().any(is_compound) {
        // A singleton inside a connective is the more useful diagnosis.
        if let Some(it) = items
            .iter()
            .find(|it| is_compound(it) && it.singleton_at.is_some())
        {
            let (line, col) = it.singleton_at.unwrap();
            return Err(ParseError::Singleton { line, col });
        }
    }
    into_problem(items)
}

/// Parse a propositional formula over non-singleton literals. Multiple
/// top-level items are conjoined; derived literals are kept as written.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let items = parse_items(text)?;
    reject_singletons(&items)?;
    Ok(into_formula(items))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Var {
        Var::user(s)
    }

    #[test]
    fn single_difference() {
        let p = parse_problem("x = y \\ z").unwrap();
        assert_eq!(p.literals(), &[Literal::DiffEq(v("x"), v("y"), v("z"))]);
        assert!(p.psi().is_empty());
    }

    #[test]
    fn example_two_shape() {
        let p = parse_problem("y = x \\ z ; x = { y } ; y = { z }").unwrap();
        assert_eq!(
            p.phi().cloned().collect::<Vec<_>>(),
            vec![Literal::DiffEq(v("y"), v("x"), v("z"))]
        );
        let psi = p.psi();
        assert_eq!(psi.len(), 2);
        assert_eq!((psi[0].set.name(), psi[0].member.name()), ("x", "y"));
        assert_eq!((psi[1].set.name(), psi[1].member.name()), ("y", "z"));
    }

    #[test]
    fn singleton_under_connective_is_rejected() {
        assert!(matches!(
            parse("x = { y } or y = z \\ z"),
            Err(ParseError::Singleton { line: 1, col: 1 })
        ));
        assert!(matches!(
            parse_problem("x = { y } or y = z \\ z"),
            Err(ParseError::Singleton { .. })
        ));
    }

    #[test]
    fn every_surface_form() {
        let src = "a = b \\ c\na != b \\ c\na = { b }\na sub b\na nsub b\na ssub b\n\
                   a = b & c\na != b & c\na = b | c\na != b | c\ndisj(a,b)\nndisj(a, b)\n\
                   a = 0\na != 0\na = b\na != b";
        let items = parse_items(src).unwrap();
        assert_eq!(items.len(), 16);
        let (a, b, c) = (v("a"), v("b"), v("c"));
        let lits: Vec<_> = items
            .into_iter()
            .map(|it| match it.formula {
                Formula::Lit(l) => l,
                _ => panic!(),
            })
            .collect();
        use Literal::*;
        assert_eq!(
            lits,
            vec![
                DiffEq(a.clone(), b.clone(), c.clone()),
                DiffNeq(a.clone(), b.clone(), c.clone()),
                Singleton(a.clone(), b.clone()),
                Subseteq(a.clone(), b.clone()),
                NotSubseteq(a.clone(), b.clone()),
                StrictSub(a.clone(), b.clone()),
                InterEq(a.clone(), b.clone(), c.clone()),
                InterNeq(a.clone(), b.clone(), c.clone()),
                UnionEq(a.clone(), b.clone(), c.clone()),
                UnionNeq(a.clone(), b.clone(), c.clone()),
                Disj(a.clone(), b.clone()),
                NotDisj(a.clone(), b.clone()),
                Empty(a.clone()),
                NotEmpty(a.clone()),
                VarEq(a.clone(), b.clone()),
                VarNeq(a, b),
            ]
        );
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = parse_problem("# header\n\n x = y \\ z # trailing\n;;\n").unwrap();
        assert_eq!(p.literals().len(), 1);
    }

    #[test]
    fn connective_precedence() {
        let f = parse_formula("not a = 0 and b = 0 or c = 0 -> a = b <-> b = c").unwrap();
        let Formula::Iff(lhs, _) = f else {
            panic!("{f:?}")
        };
        let Formula::Implies(or, _) = *lhs else {
            panic!()
        };
        let Formula::Or(parts) = *or else { panic!() };
        assert!(matches!(&parts[0], Formula::And(xs) if matches!(xs[0], Formula::Not(_))));
    }

    #[test]
    fn parenthesised_formula_may_span_lines() {
        let f = parse_formula("(a = 0\n or b = 0)\nc = 0").unwrap();
        let Formula::And(items) = f else { panic!() };
        assert_eq!(items.len(), 2);
    }

    #[test]
    fn reserved_prefixes() {
        let f = parse_formula("~x = ~_3 \\ _3").unwrap();
        let Formula::Lit(Literal::DiffEq(a, b, c)) = f else {
            panic!()
        };
        assert_eq!(a, v("x").tilde());
        assert_eq!(b, Var::fresh("3").tilde());
        assert_eq!(c, Var::fresh("3"));
    }

    #[test]
    fn error_positions() {
        match parse_problem("x = y \\ z\nx < y") {
            Err(ParseError::UnknownOperator {
                line: 2,
                col: 3,
                op,
            }) => assert_eq!(op, "<"),
            other => panic!("{other:?}"),
        }
        match parse_problem("x foo y") {
            Err(ParseError::UnknownOperator {
                line: 1,
                col: 3,
                op,
            }) => assert_eq!(op, "foo"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_problem("x = y \\"),
            Err(ParseError::Syntax {
                line: 1,
                col: 8,
                ..
            })
        ));
        assert!(matches!(
            parse_problem("x = 1"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_problem("x != { y }"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_problem("(a = 0"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn connectives_rejected_in_problem() {
        assert!(matches!(
            parse_problem("a = 0 or b = 0"),
            Err(ParseError::Connective { line: 1, col: 7 })
        ));
    }

    #[test]
    fn self_singleton_is_accepted() {
        let p = parse_problem("x = { x }").unwrap();
        assert_eq!(p.psi().len(), 1);
    }

    #[test]
    fn empty_input() {
        assert_eq!(parse("").unwrap(), Parsed::Problem(Problem::default()));
        assert_eq!(parse_formula("# nothing").unwrap(), Formula::And(vec![]));
    }
}
