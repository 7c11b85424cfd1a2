//! 2-SAT via the implication graph and strongly connected components.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A signed variable; variables are 1-indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    var: usize,
    positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, positive: false }
    }

    pub fn new(var: usize, positive: bool) -> Self {
        Lit { var, positive }
    }

    pub fn var(self) -> usize {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn negate(self) -> Self {
        Lit { var: self.var, positive: !self.positive }
    }

    /// Value under `model`, where `model[v - 1]` is variable `v`.
    pub fn eval(self, model: &[bool]) -> bool {
        model[self.var - 1] == self.positive
    }

    fn node(self) -> usize {
        2 * (self.var - 1) + usize::from(!self.positive)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "¬x{}", self.var)
        }
    }
}

/// Two-literal clause; a unit clause repeats its literal.
pub type Clause = (Lit, Lit);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoSatInstance {
    var_count: usize,
    clauses: Vec<Clause>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("formula is unsatisfiable")]
pub struct Unsatisfiable;

impl TwoSatInstance {
    pub fn new(var_count: usize) -> Self {
        TwoSatInstance { var_count, clauses: Vec::new() }
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Panics if a literal names a variable outside `1..=var_count`.
    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        assert!(
            (1..=self.var_count).contains(&a.var) && (1..=self.var_count).contains(&b.var),
            "literal out of range"
        );
        self.clauses.push((a, b));
    }

    pub fn add_unit(&mut self, a: Lit) {
        self.add_clause(a, a);
    }

    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        model.len() == self.var_count && self.clauses.iter().all(|&(a, b)| a.eval(model) || b.eval(model))
    }
}

/// A satisfying model (`model[v - 1]` is variable `v`) or `Unsatisfiable`.
/// Deterministic: the same clause list always yields the same model.
pub fn solve(ts: &TwoSatInstance) -> Result<Vec<bool>, Unsatisfiable> {
    let nodes = 2 * ts.var_count;
    // implication graph in CSR form, arcs in clause order
    let mut degree = vec![0usize; nodes + 1];
    for &(a, b) in &ts.clauses {
        degree[a.negate().node() + 1] += 1;
        degree[b.negate().node() + 1] += 1;
    }
    for v in 0..nodes {
        degree[v + 1] += degree[v];
    }
    let start = degree.clone();
    let mut fill = degree;
    let mut targets = vec![0usize; 2 * ts.clauses.len()];
    for &(a, b) in &ts.clauses {
        let u = a.negate().node();
        targets[fill[u]] = b.node();
        fill[u] += 1;
        let u = b.negate().node();
        targets[fill[u]] = a.node();
        fill[u] += 1;
    }

    let comp = tarjan(nodes, &start, &targets);
    let mut model = Vec::with_capacity(ts.var_count);
    for v in 0..ts.var_count {
        let (p, n) = (comp[2 * v], comp[2 * v + 1]);
        if p == n {
            return Err(Unsatisfiable);
        }
        // Tarjan numbers components in reverse topological order.
        model.push(p < n);
    }
    Ok(model)
}

fn tarjan(nodes: usize, start: &[usize], targets: &[usize]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; nodes];
    let mut low = vec![0; nodes];
    let mut on_stack = vec![false; nodes];
    let mut comp = vec![UNSEEN; nodes];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let (mut counter, mut comps) = (0, 0);

    for root in 0..nodes {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, start[root]));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < start[v + 1] {
                let w = targets[top.1];
                top.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, start[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("v is on the stack");
                    on_stack[w] = false;
                    comp[w] = comps;
                    if w == v {
                        break;
                    }
                }
                comps += 1;
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(ts: &TwoSatInstance) -> bool {
        let v = ts.var_count();
        (0u32..1 << v).any(|mask| {
            let model: Vec<bool> = (0..v).map(|i| mask >> i & 1 == 1).collect();
            ts.is_satisfied_by(&model)
        })
    }

    #[test]
    fn contradiction() {
        let mut ts = TwoSatInstance::new(1);
        ts.add_unit(Lit::pos(1));
        ts.add_unit(Lit::neg(1));
        assert_eq!(solve(&ts), Err(Unsatisfiable));
    }

    #[test]
    fn empty_formula() {
        assert_eq!(solve(&TwoSatInstance::new(0)), Ok(vec![]));
        assert_eq!(solve(&TwoSatInstance::new(3)).map(|m| m.len()), Ok(3));
    }

    #[test]
    fn chain_forces_values() {
        // x1, x1 -> x2, x2 -> ¬x3
        let mut ts = TwoSatInstance::new(3);
        ts.add_unit(Lit::pos(1));
        ts.add_clause(Lit::neg(1), Lit::pos(2));
        ts.add_clause(Lit::neg(2), Lit::neg(3));
        assert_eq!(solve(&ts), Ok(vec![true, true, false]));
    }

    #[test]
    fn small_exhaustive() {
        // every formula over 2 variables with up to 3 clauses
        let lits = [Lit::pos(1), Lit::neg(1), Lit::pos(2), Lit::neg(2)];
        let clauses: Vec<Clause> = lits.iter().flat_map(|&a| lits.iter().map(move |&b| (a, b))).collect();
        for x in 0..clauses.len() {
            for y in x..clauses.len() {
                for z in y..clauses.len() {
                    let mut ts = TwoSatInstance::new(2);
                    for &c in [clauses[x], clauses[y], clauses[z]].iter() {
                        ts.add_clause(c.0, c.1);
                    }
                    match solve(&ts) {
                        Ok(m) => assert!(ts.is_satisfied_by(&m)),
                        Err(_) => assert!(!brute(&ts)),
                    }
                }
            }
        }
    }
}
