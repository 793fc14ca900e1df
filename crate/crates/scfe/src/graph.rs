//! Signed graphs, their positive parts, and sign completions.
//!
//! Vertices are dense ids `1..=n`. Edge sets are kept in sorted order so that
//! iteration, hashing and serialized output are deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

pub type Vertex = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: u32 },
    #[error("self-pair {0} is not a vertex pair")]
    SelfPair(Vertex),
    #[error("vertex id 0 is not allowed (ids are 1-based)")]
    ZeroVertex,
    #[error("pair {pair} carries both signs")]
    ContradictorySign { pair: VertexPair },
    #[error("completion does not assign exactly the missing pairs (offending pair: {pair})")]
    CompletionDomainMismatch { pair: VertexPair },
}

/// An unordered vertex pair, stored with the smaller id first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexPair {
    u: Vertex,
    v: Vertex,
}

impl VertexPair {
    pub fn new(a: Vertex, b: Vertex) -> Result<Self, GraphError> {
        if a == 0 || b == 0 {
            return Err(GraphError::ZeroVertex);
        }
        if a == b {
            return Err(GraphError::SelfPair(a));
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Ok(VertexPair { u, v })
    }

    pub fn u(&self) -> Vertex {
        self.u
    }

    pub fn v(&self) -> Vertex {
        self.v
    }

    pub fn other(&self, w: Vertex) -> Option<Vertex> {
        if w == self.u {
            Some(self.v)
        } else if w == self.v {
            Some(self.u)
        } else {
            None
        }
    }
}

impl fmt::Debug for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

impl fmt::Display for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn symbol(&self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

/// A graph whose edges are partitioned into positive (friend) and negative
/// (enemy) relations; the two sets are disjoint and need not cover all pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct SignedGraph {
    n: u32,
    positive: BTreeSet<VertexPair>,
    negative: BTreeSet<VertexPair>,
}

impl SignedGraph {
    pub fn new<P, N>(n: u32, positive: P, negative: N) -> Result<Self, GraphError>
    where
        P: IntoIterator<Item = VertexPair>,
        N: IntoIterator<Item = VertexPair>,
    {
        let positive: BTreeSet<VertexPair> = positive.into_iter().collect();
        let negative: BTreeSet<VertexPair> = negative.into_iter().collect();
        for pair in positive.iter().chain(negative.iter()) {
            if pair.v > n {
                return Err(GraphError::VertexOutOfRange { vertex: pair.v, n });
            }
        }
        if let Some(pair) = positive.intersection(&negative).next() {
            return Err(GraphError::ContradictorySign { pair: *pair });
        }
        Ok(SignedGraph { n, positive, negative })
    }

    /// Convenience constructor from `(u, v)` tuples; panics on malformed
    /// input, so it is meant for literals in tests and generators.
    pub fn from_edges(n: u32, positive: &[(Vertex, Vertex)], negative: &[(Vertex, Vertex)]) -> Self {
        let pos = positive.iter().map(|&(a, b)| VertexPair::new(a, b).expect("valid pair"));
        let neg = negative.iter().map(|&(a, b)| VertexPair::new(a, b).expect("valid pair"));
        SignedGraph::new(n, pos, neg).expect("valid signed graph")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    pub fn positive_edges(&self) -> &BTreeSet<VertexPair> {
        &self.positive
    }

    pub fn negative_edges(&self) -> &BTreeSet<VertexPair> {
        &self.negative
    }

    pub fn sign(&self, pair: VertexPair) -> Option<Sign> {
        if self.positive.contains(&pair) {
            Some(Sign::Positive)
        } else if self.negative.contains(&pair) {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    fn check_vertex(&self, i: Vertex) -> Result<(), GraphError> {
        if i == 0 {
            Err(GraphError::ZeroVertex)
        } else if i > self.n {
            Err(GraphError::VertexOutOfRange { vertex: i, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Friends of `i`, ascending.
    pub fn positive_neighbors(&self, i: Vertex) -> Result<Vec<Vertex>, GraphError> {
        self.check_vertex(i)?;
        Ok(self
            .positive
            .iter()
            .filter_map(|p| p.other(i))
            .collect())
    }

    /// Enemies of `i`, ascending.
    pub fn negative_neighbors(&self, i: Vertex) -> Result<Vec<Vertex>, GraphError> {
        self.check_vertex(i)?;
        Ok(self
            .negative
            .iter()
            .filter_map(|p| p.other(i))
            .collect())
    }

    /// Unrelated pairs, in lexicographic order.
    pub fn missing_pairs(&self) -> Vec<VertexPair> {
        let mut missing = Vec::new();
        for u in 1..self.n {
            for v in (u + 1)..=self.n {
                let pair = VertexPair { u, v };
                if !self.positive.contains(&pair) && !self.negative.contains(&pair) {
                    missing.push(pair);
                }
            }
        }
        missing
    }

    pub fn is_complete(&self) -> bool {
        let total = u64::from(self.n) * u64::from(self.n.saturating_sub(1)) / 2;
        (self.positive.len() + self.negative.len()) as u64 == total
    }

    /// Extends the graph with the signs a completion chooses for the missing
    /// pairs. The completion must assign exactly the missing pairs.
    pub fn apply_completion(&self, completion: &Completion) -> Result<SignedGraph, GraphError> {
        let missing = self.missing_pairs();
        if missing.len() != completion.assignments.len() {
            let pair = completion
                .assignments
                .keys()
                .find(|p| !missing.contains(p))
                .copied()
                .or_else(|| missing.iter().find(|p| !completion.assignments.contains_key(p)).copied())
                .unwrap_or(VertexPair { u: 1, v: 2 });
            return Err(GraphError::CompletionDomainMismatch { pair });
        }
        let mut positive = self.positive.clone();
        let mut negative = self.negative.clone();
        for (pair, sign) in &completion.assignments {
            if !missing.contains(pair) {
                return Err(GraphError::CompletionDomainMismatch { pair: *pair });
            }
            match sign {
                Sign::Positive => positive.insert(*pair),
                Sign::Negative => negative.insert(*pair),
            };
        }
        SignedGraph::new(self.n, positive, negative)
    }

    /// The plain graph formed by the positive edges alone.
    pub fn positive_subgraph(&self) -> PlainGraph {
        PlainGraph::new(self.n, self.positive.iter().copied()).expect("positive part is valid")
    }
}

impl fmt::Debug for SignedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SignedGraph(n={}, +{:?}, -{:?})",
            self.n, self.positive, self.negative
        )
    }
}

/// A sign for every missing pair of some signed graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    assignments: BTreeMap<VertexPair, Sign>,
}

impl Completion {
    pub fn new(assignments: BTreeMap<VertexPair, Sign>) -> Self {
        Completion { assignments }
    }

    pub fn empty() -> Self {
        Completion { assignments: BTreeMap::new() }
    }

    pub fn assignments(&self) -> &BTreeMap<VertexPair, Sign> {
        &self.assignments
    }

    pub fn positive_count(&self) -> usize {
        self.assignments.values().filter(|s| **s == Sign::Positive).count()
    }
}

/// An unsigned simple graph on `1..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct PlainGraph {
    n: u32,
    edges: BTreeSet<VertexPair>,
    adjacency: Vec<BTreeSet<Vertex>>,
}

impl PlainGraph {
    pub fn new<E>(n: u32, edges: E) -> Result<Self, GraphError>
    where
        E: IntoIterator<Item = VertexPair>,
    {
        let edges: BTreeSet<VertexPair> = edges.into_iter().collect();
        let mut adjacency = vec![BTreeSet::new(); n as usize + 1];
        for pair in &edges {
            if pair.v > n {
                return Err(GraphError::VertexOutOfRange { vertex: pair.v, n });
            }
            adjacency[pair.u as usize].insert(pair.v);
            adjacency[pair.v as usize].insert(pair.u);
        }
        Ok(PlainGraph { n, edges, adjacency })
    }

    pub fn from_edges(n: u32, edges: &[(Vertex, Vertex)]) -> Self {
        let pairs = edges.iter().map(|&(a, b)| VertexPair::new(a, b).expect("valid pair"));
        PlainGraph::new(n, pairs).expect("valid graph")
    }

    pub fn complete(n: u32) -> Self {
        let mut edges = BTreeSet::new();
        for u in 1..n {
            for v in (u + 1)..=n {
                edges.insert(VertexPair { u, v });
            }
        }
        PlainGraph::new(n, edges).expect("complete graph")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    pub fn edges(&self) -> &BTreeSet<VertexPair> {
        &self.edges
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        match VertexPair::new(a, b) {
            Ok(pair) => self.edges.contains(&pair),
            Err(_) => false,
        }
    }

    pub fn neighbors(&self, v: Vertex) -> &BTreeSet<Vertex> {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn is_complete(&self) -> bool {
        let total = u64::from(self.n) * u64::from(self.n.saturating_sub(1)) / 2;
        self.edges.len() as u64 == total
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n as usize + 1];
        let mut components = Vec::new();
        for start in 1..=self.n {
            if seen[start as usize] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start as usize] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in self.neighbors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    /// The subgraph induced by `keep` (sorted, deduplicated by the caller),
    /// relabeled onto `1..=keep.len()` in the given order.
    pub fn induced(&self, keep: &[Vertex]) -> PlainGraph {
        let mut index = BTreeMap::new();
        for (i, &v) in keep.iter().enumerate() {
            index.insert(v, (i + 1) as Vertex);
        }
        let mut edges = BTreeSet::new();
        for pair in &self.edges {
            if let (Some(&a), Some(&b)) = (index.get(&pair.u), index.get(&pair.v)) {
                edges.insert(VertexPair::new(a, b).expect("relabeled pair"));
            }
        }
        PlainGraph::new(keep.len() as u32, edges).expect("induced graph")
    }
}

impl fmt::Debug for PlainGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlainGraph(n={}, {:?})", self.n, self.edges)
    }
}
