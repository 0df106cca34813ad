use std::fmt::Write as _;
use std::io;

/// A CNF formula with DIMACS-style literals: variable `v` is `v`, its
/// negation `-v`, variables numbered from 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfInstance {
    pub fn new_var(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    pub fn add(&mut self, clause: impl IntoIterator<Item = i32>) {
        self.clauses.push(clause.into_iter().collect());
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{l} ");
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn write_dimacs(&self, mut w: impl io::Write) -> io::Result<()> {
        w.write_all(self.to_dimacs().as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_text() {
        let mut c = CnfInstance::default();
        let a = c.new_var();
        let b = c.new_var();
        c.add([a, -b]);
        c.add([b]);
        assert_eq!(c.to_dimacs(), "p cnf 2 2\n1 -2 0\n2 0\n");
    }
}
