use super::{ModelError, SetAssignment};
use crate::syntax::SingletonAtom;

/// The order on singleton atoms induced by a model: `a -> b` when the set
/// side of `a` meets the member side of `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomOrder {
    pub atoms: Vec<SingletonAtom>,
    /// `edges[i]` lists the `j` with `i -> j`, ascending.
    pub edges: Vec<Vec<usize>>,
    /// Transitive closure: `closure[i][j]` iff `i` precedes `j`.
    pub closure: Vec<Vec<bool>>,
    /// A topological order; among available atoms the earliest is taken.
    pub topo: Vec<usize>,
}

impl AtomOrder {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.closure[i][j]
    }

    /// The earliest atom among `pending` with no pending predecessor.
    pub fn first_minimal(&self, pending: &[bool]) -> Option<usize> {
        (0..self.len())
            .find(|&i| pending[i] && !(0..self.len()).any(|j| pending[j] && self.closure[j][i]))
    }
}

/// Build the order for `psi` under `m`. Fails with
/// [`ModelError::CycleDetected`] when the relation has a cycle, which
/// cannot happen for a model of the translated problem.
pub fn order(psi: &[SingletonAtom], m: &SetAssignment) -> Result<AtomOrder, ModelError> {
    let n = psi.len();
    let mut edges = vec![Vec::new(); n];
    for (i, a) in psi.iter().enumerate() {
        let x = m.value(&a.set)?;
        for (j, b) in psi.iter().enumerate() {
            if !x.is_disjoint(m.value(&b.member)?) {
                edges[i].push(j);
            }
        }
    }
    let mut closure = vec![vec![false; n]; n];
    for (i, out) in edges.iter().enumerate() {
        for &j in out {
            closure[i][j] = true;
        }
    }
    for k in 0..n {
        let through = closure[k].clone();
        for row in closure.iter_mut().filter(|row| row[k]) {
            for (cell, &b) in row.iter_mut().zip(&through) {
                *cell |= b;
            }
        }
    }
    let on_cycle: Vec<usize> = (0..n).filter(|&i| closure[i][i]).collect();
    if !on_cycle.is_empty() {
        return Err(ModelError::CycleDetected {
            atoms: on_cycle.iter().map(|&i| psi[i].clone()).collect(),
        });
    }
    let mut indegree: Vec<usize> = vec![0; n];
    for out in &edges {
        for &j in out {
            indegree[j] += 1;
        }
    }
    let mut done = vec![false; n];
    let mut topo = Vec::with_capacity(n);
    while let Some(i) = (0..n).find(|&i| !done[i] && indegree[i] == 0) {
        done[i] = true;
        topo.push(i);
        for &j in &edges[i] {
            indegree[j] -= 1;
        }
    }
    Ok(AtomOrder {
        atoms: psi.to_vec(),
        edges,
        closure,
        topo,
    })
}
