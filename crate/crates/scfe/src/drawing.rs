//! Vertex placements on the circumference and the closeness conditions.
//!
//! A drawing is valid when every vertex is strictly closer to each of its
//! friends than to each of its enemies. The relaxed form asks for a single
//! threshold `delta` with all relevant friend distances at most `delta` and
//! all relevant enemy distances at least `delta`; the set of admissible
//! thresholds is an interval, reported here as a `Window`.

use crate::angle::Angle;
use crate::graph::{SignedGraph, Vertex};
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DrawingError {
    #[error("drawing must place all {expected} vertices, got {got}")]
    WrongArity { expected: u32, got: usize },
    #[error("vertices {0} and {1} share the same position")]
    DuplicatePosition(Vertex, Vertex),
}

/// An injective placement of vertices `1..=n` on the circumference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Drawing {
    positions: Vec<Angle>,
}

impl Drawing {
    pub fn new(positions: Vec<Angle>) -> Result<Self, DrawingError> {
        let mut seen: Vec<(Angle, Vertex)> = positions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as Vertex + 1))
            .collect();
        seen.sort_by(|a, b| a.0.turns().cmp(b.0.turns()));
        for w in seen.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(DrawingError::DuplicatePosition(w[0].1, w[1].1));
            }
        }
        Ok(Drawing { positions })
    }

    pub fn n(&self) -> u32 {
        self.positions.len() as u32
    }

    pub fn position(&self, v: Vertex) -> &Angle {
        &self.positions[v as usize - 1]
    }

    pub fn positions(&self) -> &[Angle] {
        &self.positions
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> BigRational {
        self.position(u).distance(self.position(v))
    }

    /// Vertices in counterclockwise order starting from the one with the
    /// smallest angle.
    pub fn cyclic_order(&self) -> Vec<Vertex> {
        let mut order: Vec<Vertex> = (1..=self.n()).collect();
        order.sort_by(|a, b| self.position(*a).turns().cmp(self.position(*b).turns()));
        order
    }

    /// Counterclockwise neighbor of `v` in the cyclic order.
    pub fn ccw_neighbor(&self, v: Vertex) -> Vertex {
        let order = self.cyclic_order();
        let idx = order.iter().position(|&u| u == v).expect("vertex in order");
        order[(idx + 1) % order.len()]
    }

    /// Clockwise neighbor of `v` in the cyclic order.
    pub fn cw_neighbor(&self, v: Vertex) -> Vertex {
        let order = self.cyclic_order();
        let idx = order.iter().position(|&u| u == v).expect("vertex in order");
        order[(idx + order.len() - 1) % order.len()]
    }

    /// Smallest counterclockwise gap between cyclically consecutive vertices.
    pub fn min_cyclic_gap(&self) -> BigRational {
        let order = self.cyclic_order();
        let n = order.len();
        let mut best: Option<BigRational> = None;
        for i in 0..n {
            let a = self.position(order[i]);
            let b = self.position(order[(i + 1) % n]);
            let gap = a.ccw_to(b);
            if best.as_ref().map_or(true, |g| gap < *g) {
                best = Some(gap);
            }
        }
        best.expect("nonempty drawing")
    }

    pub fn rotated(&self, by: &BigRational) -> Drawing {
        Drawing { positions: self.positions.iter().map(|p| p.shifted(by)).collect() }
    }
}

/// A triple `(vertex, friend, enemy)` where the friend is not strictly
/// closer than the enemy.
pub type Violation = (Vertex, Vertex, Vertex);

/// All violating triples, in ascending lexicographic order.
pub fn violations(graph: &SignedGraph, drawing: &Drawing) -> Vec<Violation> {
    let mut out = Vec::new();
    for i in graph.vertices() {
        let friends = graph.positive_neighbors(i).expect("vertex in range");
        let enemies = graph.negative_neighbors(i).expect("vertex in range");
        for &j in &friends {
            for &k in &enemies {
                if drawing.distance(i, j) >= drawing.distance(i, k) {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

pub fn is_valid_drawing(graph: &SignedGraph, drawing: &Drawing) -> bool {
    violations(graph, drawing).is_empty()
}

/// The closed interval of thresholds under which a drawing is almost valid.
///
/// `lo` is the largest friend distance that some triple constrains from
/// below; it is zero when no friendship is constrained, in which case any
/// positive threshold satisfies the lower side. `hi` is the smallest
/// constrained enemy distance, capped at a half turn (no distance exceeds
/// that, so larger thresholds are never needed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Window {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, delta: &BigRational) -> bool {
        *delta > BigRational::zero() && self.lo <= *delta && *delta <= self.hi
    }

    /// The canonical threshold: the tightest friend bound when one exists,
    /// otherwise the enemy bound.
    pub fn canonical_delta(&self) -> Option<BigRational> {
        if self.is_empty() {
            return None;
        }
        if self.lo.is_zero() {
            Some(self.hi.clone())
        } else {
            Some(self.lo.clone())
        }
    }
}

/// Threshold window of a drawing.
///
/// A friend distance `d(i, j)` constrains the window only if `i` or `j`
/// also has an enemy, and an enemy distance `d(i, k)` only if `i` or `k`
/// also has a friend: pairs that never appear together with an edge of the
/// opposite sign at a shared vertex impose nothing.
pub fn almost_valid_window(graph: &SignedGraph, drawing: &Drawing) -> Window {
    let has_friend: Vec<bool> = std::iter::once(false)
        .chain(graph.vertices().map(|v| {
            !graph.positive_neighbors(v).expect("vertex in range").is_empty()
        }))
        .collect();
    let has_enemy: Vec<bool> = std::iter::once(false)
        .chain(graph.vertices().map(|v| {
            !graph.negative_neighbors(v).expect("vertex in range").is_empty()
        }))
        .collect();

    let mut lo = BigRational::zero();
    for pair in graph.positive_edges() {
        let (u, v) = (pair.u(), pair.v());
        if has_enemy[u as usize] || has_enemy[v as usize] {
            let d = drawing.distance(u, v);
            if d > lo {
                lo = d;
            }
        }
    }
    let mut hi = crate::angle::half();
    for pair in graph.negative_edges() {
        let (u, v) = (pair.u(), pair.v());
        if has_friend[u as usize] || has_friend[v as usize] {
            let d = drawing.distance(u, v);
            if d < hi {
                hi = d;
            }
        }
    }
    Window { lo, hi }
}

pub fn is_almost_valid(graph: &SignedGraph, drawing: &Drawing) -> bool {
    !almost_valid_window(graph, drawing).is_empty()
}
