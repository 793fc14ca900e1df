//! Circular arcs with per-end open/closed flags, and arc models.
//!
//! An `Arc` is the set of points swept counterclockwise from `start` over
//! `length` turns. Flags decide whether the two boundary points belong to the
//! arc; every interior point always does. Single-point overlaps therefore
//! count as intersections exactly when both incident ends are closed.

use crate::angle::Angle;
use crate::graph::{PlainGraph, Vertex, VertexPair};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArcError {
    #[error("arc length must lie strictly between 0 and 1 turn, got {0}")]
    BadLength(BigRational),
    #[error("arc model must have one arc per vertex")]
    WrongArity,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Arc {
    start: Angle,
    length: BigRational,
    closed_start: bool,
    closed_end: bool,
}

impl Arc {
    pub fn new(
        start: Angle,
        length: BigRational,
        closed_start: bool,
        closed_end: bool,
    ) -> Result<Self, ArcError> {
        if length <= BigRational::zero() || length >= BigRational::one() {
            return Err(ArcError::BadLength(length));
        }
        Ok(Arc { start, length, closed_start, closed_end })
    }

    pub fn closed(start: Angle, length: BigRational) -> Result<Self, ArcError> {
        Arc::new(start, length, true, true)
    }

    pub fn start(&self) -> &Angle {
        &self.start
    }

    pub fn length(&self) -> &BigRational {
        &self.length
    }

    pub fn end(&self) -> Angle {
        self.start.shifted(&self.length)
    }

    pub fn closed_start(&self) -> bool {
        self.closed_start
    }

    pub fn closed_end(&self) -> bool {
        self.closed_end
    }

    pub fn with_flags(&self, closed_start: bool, closed_end: bool) -> Arc {
        Arc { closed_start, closed_end, ..self.clone() }
    }

    pub fn contains(&self, point: &Angle) -> bool {
        let offset = self.start.ccw_to(point);
        if offset.is_zero() {
            self.closed_start
        } else if offset < self.length {
            true
        } else if offset == self.length {
            self.closed_end
        } else {
            false
        }
    }

    /// The arc as linear flagged intervals over offsets from `frame`,
    /// split at the frame origin if it passes through it.
    fn pieces_in_frame(&self, frame: &Angle) -> Vec<Interval> {
        let t0 = frame.ccw_to(&self.start);
        let t1 = &t0 + &self.length;
        let one = BigRational::one();
        if t1 < one {
            vec![Interval { lo: t0, hi: t1, closed_lo: self.closed_start, closed_hi: self.closed_end }]
        } else if t1 == one {
            // End lands exactly on the frame origin, i.e. at offset 0.
            let mut pieces = vec![Interval {
                lo: t0,
                hi: one.clone(),
                closed_lo: self.closed_start,
                closed_hi: false,
            }];
            if self.closed_end {
                pieces.push(Interval {
                    lo: BigRational::zero(),
                    hi: BigRational::zero(),
                    closed_lo: true,
                    closed_hi: true,
                });
            }
            pieces
        } else {
            vec![
                Interval {
                    lo: t0,
                    hi: one.clone(),
                    closed_lo: self.closed_start,
                    closed_hi: false,
                },
                Interval {
                    lo: BigRational::zero(),
                    hi: t1 - one,
                    closed_lo: true,
                    closed_hi: self.closed_end,
                },
            ]
        }
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lb = if self.closed_start { '[' } else { '(' };
        let rb = if self.closed_end { ']' } else { ')' };
        write!(f, "{}{:?}, {:?}{}", lb, self.start, self.end(), rb)
    }
}

/// A linear interval of frame offsets with flagged ends; `lo <= hi`.
#[derive(Clone)]
struct Interval {
    lo: BigRational,
    hi: BigRational,
    closed_lo: bool,
    closed_hi: bool,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.closed_lo && self.closed_hi))
    }

    fn intersect(&self, other: &Interval) -> Interval {
        let (lo, closed_lo) = if self.lo > other.lo {
            (self.lo.clone(), self.closed_lo)
        } else if self.lo < other.lo {
            (other.lo.clone(), other.closed_lo)
        } else {
            (self.lo.clone(), self.closed_lo && other.closed_lo)
        };
        let (hi, closed_hi) = if self.hi < other.hi {
            (self.hi.clone(), self.closed_hi)
        } else if self.hi > other.hi {
            (other.hi.clone(), other.closed_hi)
        } else {
            (self.hi.clone(), self.closed_hi && other.closed_hi)
        };
        Interval { lo, hi, closed_lo, closed_hi }
    }

    /// Point-set containment of `other` in `self`.
    fn covers(&self, other: &Interval) -> bool {
        if other.is_empty() {
            return true;
        }
        let lo_ok = self.lo < other.lo
            || (self.lo == other.lo && (self.closed_lo || !other.closed_lo));
        let hi_ok = self.hi > other.hi
            || (self.hi == other.hi && (self.closed_hi || !other.closed_hi));
        lo_ok && hi_ok
    }
}

/// Do the two arcs share at least one point?
pub fn arcs_intersect(a: &Arc, b: &Arc) -> bool {
    let frame = a.start().clone();
    let a_pieces = a.pieces_in_frame(&frame);
    let b_pieces = b.pieces_in_frame(&frame);
    for pa in &a_pieces {
        for pb in &b_pieces {
            if !pa.intersect(pb).is_empty() {
                return true;
            }
        }
    }
    false
}

/// Is `inner`'s point set a subset of `outer`'s?
pub fn arc_covers(outer: &Arc, inner: &Arc) -> bool {
    let frame = outer.start().clone();
    let outer_pieces = outer.pieces_in_frame(&frame);
    'inner: for pi in inner.pieces_in_frame(&frame) {
        if pi.is_empty() {
            continue;
        }
        for po in &outer_pieces {
            if po.covers(&pi) {
                continue 'inner;
            }
        }
        // A piece could straddle the seam between outer's two pieces only if
        // outer wrapped, which it cannot in its own frame; single coverage
        // per piece is exact because inner pieces never cross offset 0.
        return false;
    }
    true
}

/// One arc per vertex `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcModel {
    arcs: Vec<Arc>,
}

impl ArcModel {
    pub fn new(arcs: Vec<Arc>) -> Self {
        ArcModel { arcs }
    }

    pub fn n(&self) -> u32 {
        self.arcs.len() as u32
    }

    pub fn arc(&self, v: Vertex) -> &Arc {
        &self.arcs[v as usize - 1]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn rotated(&self, by: &BigRational) -> ArcModel {
        ArcModel {
            arcs: self
                .arcs
                .iter()
                .map(|a| Arc {
                    start: a.start.shifted(by),
                    length: a.length.clone(),
                    closed_start: a.closed_start,
                    closed_end: a.closed_end,
                })
                .collect(),
        }
    }

    /// Mirror image through angle 0 (angles negated).
    pub fn reflected(&self) -> ArcModel {
        ArcModel {
            arcs: self
                .arcs
                .iter()
                .map(|a| Arc {
                    start: Angle::new(-(a.end().turns().clone())),
                    length: a.length.clone(),
                    closed_start: a.closed_end,
                    closed_end: a.closed_start,
                })
                .collect(),
        }
    }

    /// Drop the arcs of all vertices except `keep`, relabeling onto
    /// `1..=keep.len()` in the given order.
    pub fn induced(&self, keep: &[Vertex]) -> ArcModel {
        ArcModel { arcs: keep.iter().map(|&v| self.arc(v).clone()).collect() }
    }
}

/// The graph whose edges are exactly the intersecting arc pairs.
pub fn intersection_graph(model: &ArcModel) -> PlainGraph {
    let n = model.n();
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in (u + 1)..=n {
            if arcs_intersect(model.arc(u), model.arc(v)) {
                edges.push(VertexPair::new(u, v).expect("distinct vertices"));
            }
        }
    }
    PlainGraph::new(n, edges).expect("intersection graph")
}

/// A model is proper when no arc's point set strictly contains another's.
pub fn is_proper_model(model: &ArcModel) -> bool {
    let n = model.n();
    for u in 1..=n {
        for v in 1..=n {
            if u == v {
                continue;
            }
            let a = model.arc(u);
            let b = model.arc(v);
            if arc_covers(a, b) && !arc_covers(b, a) {
                return false;
            }
        }
    }
    true
}
