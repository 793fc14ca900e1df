//! Two-literal satisfiability via strongly connected components of the
//! implication graph. Variables are dense indices; a solution assigns each
//! variable so that every added clause holds.

/// A literal: variable index plus polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lit {
    var: usize,
    positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, positive: false }
    }

    fn index(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }

    pub fn negated(self) -> Lit {
        Lit { var: self.var, positive: !self.positive }
    }
}

pub struct TwoSat {
    n_vars: usize,
    edges: Vec<Vec<usize>>,
}

impl TwoSat {
    pub fn new(n_vars: usize) -> Self {
        TwoSat { n_vars, edges: vec![Vec::new(); 2 * n_vars] }
    }

    /// Require `a || b`.
    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        self.edges[a.negated().index()].push(b.index());
        self.edges[b.negated().index()].push(a.index());
    }

    /// Require `a -> b`.
    pub fn imply(&mut self, a: Lit, b: Lit) {
        self.add_clause(a.negated(), b);
    }

    /// Force `a` to hold.
    pub fn set_true(&mut self, a: Lit) {
        self.add_clause(a, a);
    }

    /// Returns one satisfying assignment, or None when unsatisfiable.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let comp = self.tarjan_components();
        let mut assignment = vec![false; self.n_vars];
        for v in 0..self.n_vars {
            let c_pos = comp[Lit::pos(v).index()];
            let c_neg = comp[Lit::neg(v).index()];
            if c_pos == c_neg {
                return None;
            }
            // Components are numbered in completion order, which is reverse
            // topological: the earlier component is closer to a sink, and
            // picking the sink side of each pair satisfies all implications.
            assignment[v] = c_pos < c_neg;
        }
        Some(assignment)
    }

    /// Iterative Tarjan; returns the component id of every literal node.
    fn tarjan_components(&self) -> Vec<usize> {
        let n = 2 * self.n_vars;
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut comp = vec![usize::MAX; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut next_index = 0usize;
        let mut next_comp = 0usize;
        // Call stack entries: (node, next child position).
        let mut call: Vec<(usize, usize)> = Vec::new();

        for start in 0..n {
            if index[start] != usize::MAX {
                continue;
            }
            call.push((start, 0));
            index[start] = next_index;
            low[start] = next_index;
            next_index += 1;
            stack.push(start);
            on_stack[start] = true;

            while let Some(&mut (v, ref mut child)) = call.last_mut() {
                if *child < self.edges[v].len() {
                    let w = self.edges[v][*child];
                    *child += 1;
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
                    if let Some(&mut (parent, _)) = call.last_mut() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().expect("scc stack nonempty");
                            on_stack[w] = false;
                            comp[w] = next_comp;
                            if w == v {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                }
            }
        }
        comp
    }
}
