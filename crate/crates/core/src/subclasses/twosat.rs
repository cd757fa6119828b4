use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, positive: false }
    }

    /// From a DIMACS literal: `+v` / `-v`, variables numbered from 1.
    pub fn from_dimacs(lit: i64) -> Option<Lit> {
        (lit != 0).then(|| Lit {
            var: lit.unsigned_abs() as usize - 1,
            positive: lit > 0,
        })
    }

    pub fn negate(self) -> Lit {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }

    fn node(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }

    fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

/// A CNF whose clauses have one or two literals. Unit clauses are stored as a
/// literal paired with itself.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwoSatFormula {
    vars: usize,
    clauses: Vec<(Lit, Lit)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoSatResult {
    Sat(Vec<bool>),
    /// The variable shares a strongly connected component with its negation.
    Unsat {
        var: usize,
    },
}

impl TwoSatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, TwoSatResult::Sat(_))
    }
}

impl TwoSatFormula {
    pub fn new(vars: usize) -> Self {
        TwoSatFormula {
            vars,
            clauses: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[(Lit, Lit)] {
        &self.clauses
    }

    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        assert!(a.var < self.vars && b.var < self.vars, "literal out of range");
        self.clauses.push((a, b));
    }

    pub fn add_unit(&mut self, a: Lit) {
        self.add_clause(a, a);
    }

    /// Adds a clause given as a literal list of length one or two.
    pub fn push(&mut self, clause: &[Lit]) -> Result<()> {
        match *clause {
            [a] => self.add_unit(a),
            [a, b] => self.add_clause(a, b),
            _ => return Err(Error::InvalidFormula(alloc::format!("clause of width {}", clause.len()))),
        }
        Ok(())
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|&(a, b)| a.holds(assignment) || b.holds(assignment))
    }

    /// Decides satisfiability on the implication graph in linear time.
    pub fn solve(&self) -> TwoSatResult {
        let nodes = 2 * self.vars;
        let mut offsets = vec![0u32; nodes + 1];
        for &(a, b) in &self.clauses {
            offsets[a.negate().node() + 1] += 1;
            offsets[b.negate().node() + 1] += 1;
        }
        for i in 0..nodes {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[nodes] as usize];
        for &(a, b) in &self.clauses {
            for (from, to) in [(a.negate(), b), (b.negate(), a)] {
                let slot = &mut fill[from.node()];
                targets[*slot as usize] = to.node() as u32;
                *slot += 1;
            }
        }
        let comp = tarjan(nodes, |u| &targets[offsets[u] as usize..offsets[u + 1] as usize]);
        let mut assignment = vec![false; self.vars];
        for (v, value) in assignment.iter_mut().enumerate() {
            let (p, n) = (comp[2 * v], comp[2 * v + 1]);
            if p == n {
                return TwoSatResult::Unsat { var: v };
            }
            // Components come out in reverse topological order.
            *value = p < n;
        }
        TwoSatResult::Sat(assignment)
    }
}

/// Strongly connected components, numbered in the order they are completed.
fn tarjan<'a>(n: usize, succ: impl Fn(usize) -> &'a [u32]) -> Vec<u32> {
    const NONE: u32 = u32::MAX;
    let mut index = vec![NONE; n];
    let mut low = vec![0u32; n];
    let mut comp = vec![NONE; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0u32;
    let mut comps = 0u32;
    for root in 0..n {
        if index[root] != NONE {
            continue;
        }
        call.push((root, 0));
        while let Some(&(u, i)) = call.last() {
            if i == 0 && index[u] == NONE {
                index[u] = counter;
                low[u] = counter;
                counter += 1;
                stack.push(u);
                on_stack[u] = true;
            }
            if let Some(&w) = succ(u).get(i) {
                call.last_mut().unwrap().1 += 1;
                let w = w as usize;
                if index[w] == NONE {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[u] = low[u].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == index[u] {
                while let Some(w) = stack.pop() {
                    on_stack[w] = false;
                    comp[w] = comps;
                    if w == u {
                        break;
                    }
                }
                comps += 1;
            }
        }
    }
    comp
}
