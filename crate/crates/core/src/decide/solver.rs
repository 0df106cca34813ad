//! A small CDCL solver: two watched literals, first-UIP learning and
//! non-chronological backjumping.
//!
//! By default the branching variable is the lowest-numbered unassigned one,
//! tried `false` first, so runs are reproducible. [`SolverOptions::activity`]
//! switches to a VSIDS-style heap with Luby restarts.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::cnf::CnfInstance;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverOptions {
    pub activity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    /// Value of variable `i + 1` at index `i`.
    Sat(Vec<bool>),
    Unsat,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub learned: u64,
    pub restarts: u64,
}

pub fn solve(cnf: &CnfInstance) -> SolveResult {
    solve_with(cnf, SolverOptions::default()).0
}

pub fn solve_with(cnf: &CnfInstance, options: SolverOptions) -> (SolveResult, SolverStats) {
    let mut s = Solver::new(cnf.num_vars, options);
    for clause in &cnf.clauses {
        if !s.add_clause(clause) {
            return (SolveResult::Unsat, s.stats);
        }
    }
    let result = s.search();
    (result, s.stats)
}

// Internal literal: 2v for v, 2v + 1 for !v.
type Lit = u32;

fn lit_of(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() - 1;
    2 * v + u32::from(dimacs < 0)
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn neg(l: Lit) -> Lit {
    l ^ 1
}

const UNDEF: u8 = 2;

#[derive(Clone, Copy)]
struct HeapEntry {
    activity: f64,
    var: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    // Highest activity first, lowest index on ties.
    fn cmp(&self, other: &Self) -> Ordering {
        self.activity
            .total_cmp(&other.activity)
            .then_with(|| other.var.cmp(&self.var))
    }
}

struct Solver {
    options: SolverOptions,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    // 0 false, 1 true, UNDEF unassigned, indexed by variable.
    values: Vec<u8>,
    levels: Vec<usize>,
    reasons: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    next_var: usize,
    activity: Vec<f64>,
    bump: f64,
    heap: BinaryHeap<HeapEntry>,
    seen: Vec<bool>,
    unsat: bool,
    stats: SolverStats,
}

impl Solver {
    fn new(num_vars: usize, options: SolverOptions) -> Self {
        let mut heap = BinaryHeap::new();
        if options.activity {
            heap.extend((0..num_vars).map(|var| HeapEntry { activity: 0.0, var }));
        }
        Solver {
            options,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            values: vec![UNDEF; num_vars],
            levels: vec![0; num_vars],
            reasons: vec![None; num_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            next_var: 0,
            activity: vec![0.0; num_vars],
            bump: 1.0,
            heap,
            seen: vec![false; num_vars],
            unsat: false,
            stats: SolverStats::default(),
        }
    }

    fn value(&self, l: Lit) -> u8 {
        match self.values[var(l)] {
            UNDEF => UNDEF,
            v => v ^ (l & 1) as u8,
        }
    }

    fn level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = var(l);
        self.values[v] = 1 ^ (l & 1) as u8;
        self.levels[v] = self.level();
        self.reasons[v] = reason;
        self.trail.push(l);
    }

    /// Add an input clause at level 0. Returns `false` once the instance is
    /// known to be unsatisfiable.
    fn add_clause(&mut self, dimacs: &[i32]) -> bool {
        if self.unsat {
            return false;
        }
        let mut lits: Vec<Lit> = dimacs.iter().map(|&d| lit_of(d)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits
            .windows(2)
            .any(|w| w[0] == neg(w[1]) && var(w[0]) == var(w[1]))
        {
            return true;
        }
        lits.retain(|&l| self.value(l) != 0);
        if lits.iter().any(|&l| self.value(l) == 1) {
            return true;
        }
        match lits.len() {
            0 => {
                self.unsat = true;
                false
            }
            1 => {
                self.enqueue(lits[0], None);
                if self.propagate().is_some() {
                    self.unsat = true;
                    return false;
                }
                true
            }
            _ => {
                self.attach(lits);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>) -> usize {
        let idx = self.clauses.len();
        self.watches[lits[0] as usize].push(idx);
        self.watches[lits[1] as usize].push(idx);
        self.clauses.push(lits);
        idx
    }

    /// Unit propagation; returns a conflicting clause.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                let clause = &mut self.clauses[ci];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.value(first) == 1 {
                    i += 1;
                    continue;
                }
                let clause = &self.clauses[ci];
                let replacement = (2..clause.len()).find(|&k| self.value(clause[k]) != 0);
                if let Some(k) = replacement {
                    let clause = &mut self.clauses[ci];
                    clause.swap(1, k);
                    let w = clause[1];
                    self.watches[w as usize].push(ci);
                    ws.swap_remove(i);
                    continue;
                }
                if self.value(first) == 0 {
                    conflict = Some(ci);
                    break;
                }
                self.enqueue(first, Some(ci));
                i += 1;
            }
            let rest = std::mem::replace(&mut self.watches[false_lit as usize], ws);
            self.watches[false_lit as usize].extend(rest);
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: usize) {
        if !self.options.activity {
            return;
        }
        self.activity[v] += self.bump;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.bump *= 1e-100;
            self.heap = (0..self.values.len())
                .filter(|&v| self.values[v] == UNDEF)
                .map(|var| HeapEntry {
                    activity: self.activity[var],
                    var,
                })
                .collect();
        }
        self.heap.push(HeapEntry {
            activity: self.activity[v],
            var: v,
        });
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut conflict: usize) -> (Vec<Lit>, usize) {
        let mut learned: Vec<Lit> = vec![0];
        let mut pending = 0usize;
        let mut index = self.trail.len();
        let mut p: Option<Lit> = None;
        loop {
            let clause = self.clauses[conflict].clone();
            let start = usize::from(p.is_some());
            for &q in &clause[start..] {
                let v = var(q);
                if self.seen[v] || self.levels[v] == 0 {
                    continue;
                }
                self.seen[v] = true;
                self.bump_var(v);
                if self.levels[v] >= self.level() {
                    pending += 1;
                } else {
                    learned.push(q);
                }
            }
            loop {
                index -= 1;
                if self.seen[var(self.trail[index])] {
                    break;
                }
            }
            let lit = self.trail[index];
            self.seen[var(lit)] = false;
            pending -= 1;
            p = Some(lit);
            if pending == 0 {
                break;
            }
            conflict = self.reasons[var(lit)].expect("implied literal has a reason");
        }
        learned[0] = neg(p.expect("conflict analysis visits a literal"));
        for &l in &learned[1..] {
            self.seen[var(l)] = false;
        }
        let mut back = 0;
        if learned.len() > 1 {
            let (k, lvl) = learned
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &l)| (k, self.levels[var(l)]))
                .max_by_key(|&(k, lvl)| (lvl, std::cmp::Reverse(k)))
                .expect("nonempty tail");
            learned.swap(1, k);
            back = lvl;
        }
        self.bump *= 1.0 / 0.95;
        (learned, back)
    }

    fn backjump(&mut self, level: usize) {
        if self.level() <= level {
            return;
        }
        let keep = self.trail_lim[level];
        for &l in &self.trail[keep..] {
            let v = var(l);
            self.values[v] = UNDEF;
            self.reasons[v] = None;
            self.next_var = self.next_var.min(v);
            if self.options.activity {
                self.heap.push(HeapEntry {
                    activity: self.activity[v],
                    var: v,
                });
            }
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(level);
        self.qhead = keep;
    }

    fn pick_branch(&mut self) -> Option<usize> {
        if self.options.activity {
            while let Some(e) = self.heap.pop() {
                if self.values[e.var] == UNDEF && e.activity == self.activity[e.var] {
                    return Some(e.var);
                }
            }
            // Stale entries may hide a variable; fall back to a scan.
            return (0..self.values.len()).find(|&v| self.values[v] == UNDEF);
        }
        while self.next_var < self.values.len() {
            if self.values[self.next_var] == UNDEF {
                return Some(self.next_var);
            }
            self.next_var += 1;
        }
        None
    }

    fn search(&mut self) -> SolveResult {
        if self.unsat || self.propagate().is_some() {
            return SolveResult::Unsat;
        }
        let mut restart_index = 1u64;
        let mut budget = luby(restart_index) * 100;
        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                if self.level() == 0 {
                    return SolveResult::Unsat;
                }
                let (learned, back) = self.analyze(conflict);
                self.backjump(back);
                let assert_lit = learned[0];
                if learned.len() == 1 {
                    self.enqueue(assert_lit, None);
                } else {
                    let ci = self.attach(learned);
                    self.enqueue(assert_lit, Some(ci));
                }
                self.stats.learned += 1;
                if self.options.activity {
                    budget = budget.saturating_sub(1);
                    if budget == 0 {
                        self.stats.restarts += 1;
                        restart_index += 1;
                        budget = luby(restart_index) * 100;
                        self.backjump(0);
                    }
                }
                continue;
            }
            match self.pick_branch() {
                None => {
                    let model = self.values.iter().map(|&v| v == 1).collect();
                    return SolveResult::Sat(model);
                }
                Some(v) => {
                    self.stats.decisions += 1;
                    self.trail_lim.push(self.trail.len());
                    self.enqueue(2 * v as u32 + 1, None);
                }
            }
        }
    }
}

/// The Luby sequence 1, 1, 2, 1, 1, 2, 4, ...
fn luby(mut i: u64) -> u64 {
    loop {
        let mut k = 1;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if (1u64 << k) - 1 == i {
            return 1 << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cnf(num_vars: usize, clauses: &[&[i32]]) -> CnfInstance {
        CnfInstance {
            num_vars,
            clauses: clauses.iter().map(|c| c.to_vec()).collect(),
        }
    }

    fn satisfies(c: &CnfInstance, model: &[bool]) -> bool {
        c.clauses.iter().all(|cl| {
            cl.iter()
                .any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    fn brute_force(c: &CnfInstance) -> bool {
        (0u32..1 << c.num_vars).any(|mask| {
            let model: Vec<bool> = (0..c.num_vars).map(|i| mask >> i & 1 == 1).collect();
            satisfies(c, &model)
        })
    }

    /// Pigeons `p` into holes `h`.
    fn pigeonhole(p: usize, h: usize) -> CnfInstance {
        let x = |i: usize, j: usize| (i * h + j + 1) as i32;
        let mut clauses: Vec<Vec<i32>> =
            (0..p).map(|i| (0..h).map(|j| x(i, j)).collect()).collect();
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    clauses.push(vec![-x(a, j), -x(b, j)]);
                }
            }
        }
        CnfInstance {
            num_vars: p * h,
            clauses,
        }
    }

    #[test]
    fn empty_instance_is_sat() {
        assert!(solve(&cnf(0, &[])).is_sat());
        assert!(solve(&cnf(3, &[])).is_sat());
    }

    #[test]
    fn complementary_units_are_unsat() {
        assert_eq!(solve(&cnf(1, &[&[1], &[-1]])), SolveResult::Unsat);
        assert_eq!(solve(&cnf(1, &[&[]])), SolveResult::Unsat);
    }

    #[test]
    fn pigeonhole_four_into_three() {
        let php = pigeonhole(4, 3);
        assert!(!brute_force(&php));
        assert_eq!(solve(&php), SolveResult::Unsat);
        let with_activity = solve_with(&php, SolverOptions { activity: true }).0;
        assert_eq!(with_activity, SolveResult::Unsat);
        assert!(solve(&pigeonhole(3, 3)).is_sat());
    }

    #[test]
    fn larger_pigeonhole() {
        assert_eq!(solve(&pigeonhole(7, 6)), SolveResult::Unsat);
    }

    #[test]
    fn default_branching_prefers_false() {
        assert_eq!(
            solve(&cnf(3, &[&[1, 2, 3]])),
            SolveResult::Sat(vec![false, false, true])
        );
    }

    #[test]
    fn random_three_sat_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..400 {
            let n = rng.gen_range(1..=10);
            let m = rng.gen_range(0..=45);
            let clauses: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.gen_range(1..=n) as i32;
                            if rng.gen_bool(0.5) {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let c = CnfInstance {
                num_vars: n,
                clauses,
            };
            let expected = brute_force(&c);
            for activity in [false, true] {
                match solve_with(&c, SolverOptions { activity }).0 {
                    SolveResult::Sat(model) => {
                        assert!(expected);
                        assert!(satisfies(&c, &model));
                    }
                    SolveResult::Unsat => assert!(!expected),
                }
            }
        }
    }

    #[test]
    fn luby_prefix() {
        let got: Vec<u64> = (1..=15).map(luby).collect();
        assert_eq!(got, [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }
}
