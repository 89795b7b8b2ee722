//! Minimal 2-SAT via implication-graph strongly connected components.

/// A literal: variable index with polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, positive: false }
    }

    fn index(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }

    fn inverse(self) -> Self {
        Lit { var: self.var, positive: !self.positive }
    }
}

/// Conjunction of 2-literal clauses.
#[derive(Debug, Default, Clone)]
pub struct TwoSat {
    nvars: usize,
    clauses: Vec<(Lit, Lit)>,
}

impl TwoSat {
    pub fn new(nvars: usize) -> Self {
        TwoSat { nvars, clauses: Vec::new() }
    }

    pub fn clause(&mut self, a: Lit, b: Lit) {
        self.clauses.push((a, b));
    }

    /// a <-> b
    pub fn equal(&mut self, a: usize, b: usize) {
        self.clause(Lit::neg(a), Lit::pos(b));
        self.clause(Lit::pos(a), Lit::neg(b));
    }

    /// a <-> !b
    pub fn differ(&mut self, a: usize, b: usize) {
        self.clause(Lit::pos(a), Lit::pos(b));
        self.clause(Lit::neg(a), Lit::neg(b));
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    /// A satisfying assignment, or None.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let n = 2 * self.nvars;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &self.clauses {
            adj[a.inverse().index()].push(b.index());
            adj[b.inverse().index()].push(a.index());
        }
        // iterative Tarjan SCC
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut comp = vec![usize::MAX; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut next_index = 0usize;
        let mut ncomp = 0usize;
        let mut call: Vec<(usize, usize)> = Vec::new();
        for s in 0..n {
            if index[s] != usize::MAX {
                continue;
            }
            call.push((s, 0));
            index[s] = next_index;
            low[s] = next_index;
            next_index += 1;
            stack.push(s);
            on_stack[s] = true;
            while let Some(&mut (v, ref mut i)) = call.last_mut() {
                if *i < adj[v].len() {
                    let w = adj[v][*i];
                    *i += 1;
                    if index[w] == usize::MAX {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(p, _)) = call.last() {
                        low[p] = low[p].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp[w] = ncomp;
                            if w == v {
                                break;
                            }
                        }
                        ncomp += 1;
                    }
                }
            }
        }
        let mut assignment = vec![false; self.nvars];
        for v in 0..self.nvars {
            let (p, q) = (comp[2 * v], comp[2 * v + 1]);
            if p == q {
                return None;
            }
            // Tarjan numbers components in reverse topological order
            assignment[v] = p < q;
        }
        Some(assignment)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equalities_and_differences() {
        let mut f = TwoSat::new(3);
        f.equal(0, 1);
        f.differ(1, 2);
        let a = f.solve().unwrap();
        assert_eq!(a[0], a[1]);
        assert_ne!(a[1], a[2]);
    }

    #[test]
    fn contradiction_detected() {
        let mut f = TwoSat::new(2);
        f.equal(0, 1);
        f.differ(0, 1);
        assert!(f.solve().is_none());
    }

    #[test]
    fn chain_of_equalities() {
        let mut f = TwoSat::new(10);
        for i in 0..9 {
            f.equal(i, i + 1);
        }
        let a = f.solve().unwrap();
        assert!(a.iter().all(|&x| x == a[0]));
    }
}
