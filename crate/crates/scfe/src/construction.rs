//! The constructive pipeline between arc models and drawings:
//! - re-embed a proper model so every arc has one common length δ,
//! - read a drawing off the equal-length model (each vertex at its arc end),
//! - break exact friend/enemy distance ties by nudging tied vertices,
//! - and the reverse: complete a signed graph from a valid drawing and build
//!   the midpoint arc model of the completed positive part.
//!
//! Every step that constructs a model or drawing re-checks its own
//! postcondition; a failed check surfaces as an error, never a bad value.

use crate::angle::{half, rational, Angle};
use crate::arcs::{intersection_graph, is_proper_model, Arc, ArcModel};
use crate::drawing::{almost_valid_window, is_valid_drawing, Drawing};
use crate::graph::{Completion, PlainGraph, Sign, SignedGraph, Vertex, VertexPair};
use log::warn;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("arc model does not realize the positive part of the graph")]
    ModelMismatch,
    #[error("graph must be complete for this step")]
    NotComplete,
    #[error("drawing is not valid for the graph")]
    NotValidDrawing,
    #[error("threshold lies outside the drawing's feasible window")]
    NotAlmostValid,
    #[error("vertex {0} has no friend/enemy tie at the threshold")]
    NotViolating(Vertex),
    #[error("model has two arcs with the same start")]
    DuplicateStarts,
    #[error("no equal-length re-embedding found; input model is suspect")]
    Unequalizable,
    #[error("internal postcondition failed at stage: {0}")]
    VerificationFailed(&'static str),
}

/// A proper arc model in which every arc has the same length.
#[derive(Clone, Debug)]
pub struct EqualLengthModel {
    model: ArcModel,
    delta: BigRational,
}

impl EqualLengthModel {
    /// Wraps a model after checking all lengths agree and nothing nests.
    pub fn new(model: ArcModel) -> Result<Self, ConstructionError> {
        let delta = match model.arcs().first() {
            Some(arc) => arc.length().clone(),
            None => rational(1, 4),
        };
        if model.arcs().iter().any(|a| *a.length() != delta) {
            return Err(ConstructionError::VerificationFailed("lengths not equal"));
        }
        if !is_proper_model(&model) {
            return Err(ConstructionError::VerificationFailed("equal-length model nests"));
        }
        Ok(EqualLengthModel { model, delta })
    }

    pub fn model(&self) -> &ArcModel {
        &self.model
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    pub fn n(&self) -> u32 {
        self.model.n()
    }
}

/// One symbolic difference constraint `y[to] - y[from] <= c0 + cd·δ + ce·ε`
/// where ε is an infinitesimal enforcing strictness.
#[derive(Clone, Copy)]
struct CEdge {
    from: usize,
    to: usize,
    c0: i8,
    cd: i8,
    ce: i8,
}

/// Re-embed a verified proper model with one common arc length.
///
/// The start order and, per adjacent pair, the overlap direction(s) of the
/// input are kept; with those fixed, arc starts and the common length δ
/// satisfy a system of difference constraints solved exactly over the
/// rationals. A mirrored attempt backs up the primary orientation. The
/// output is re-verified against the input's intersection graph.
pub fn equalize_lengths(model: &ArcModel) -> Result<EqualLengthModel, ConstructionError> {
    let n = model.n();
    if n == 0 {
        return EqualLengthModel::new(ArcModel::new(Vec::new()));
    }
    let first_len = model.arc(1).length().clone();
    if model.arcs().iter().all(|a| *a.length() == first_len) {
        return EqualLengthModel::new(model.clone());
    }
    let mut starts: Vec<&Angle> = model.arcs().iter().map(|a| a.start()).collect();
    starts.sort();
    if starts.windows(2).any(|w| w[0] == w[1]) {
        return Err(ConstructionError::DuplicateStarts);
    }
    let target = intersection_graph(model);
    if let Some(out) = equalize_oriented(model, &target) {
        return Ok(out);
    }
    warn!("equal-length embedding failed in model orientation; retrying mirrored");
    let mirrored = model.reflected();
    match equalize_oriented(&mirrored, &target) {
        Some(out) => Ok(out),
        None => Err(ConstructionError::Unequalizable),
    }
}

fn equalize_oriented(model: &ArcModel, target: &PlainGraph) -> Option<EqualLengthModel> {
    let n = model.n() as usize;
    let mut order: Vec<Vertex> = (1..=n as Vertex).collect();
    order.sort_by(|&a, &b| model.arc(a).start().cmp(model.arc(b).start()));

    let mut edges: Vec<CEdge> = Vec::new();
    // Strictly increasing starts, last one strictly before the wrap.
    for q in 0..n - 1 {
        edges.push(CEdge { from: q + 1, to: q, c0: 0, cd: 0, ce: -1 });
    }
    edges.push(CEdge { from: 0, to: n - 1, c0: 1, cd: 0, ce: -1 });
    for q in 0..n {
        for q2 in (q + 1)..n {
            let (i, j) = (order[q], order[q2]);
            if target.has_edge(i, j) {
                // Keep the input's overlap direction(s): an arc reaching the
                // other's start caps the gap at δ in that direction.
                let fwd = model.arc(i).contains(model.arc(j).start());
                let bwd = model.arc(j).contains(model.arc(i).start());
                if fwd {
                    edges.push(CEdge { from: q, to: q2, c0: 0, cd: 1, ce: 0 });
                }
                if bwd {
                    edges.push(CEdge { from: q2, to: q, c0: -1, cd: 1, ce: 0 });
                }
                if !fwd && !bwd {
                    debug_assert!(false, "intersecting arcs with no start coverage");
                    edges.push(CEdge { from: q, to: q2, c0: 0, cd: 1, ce: 0 });
                }
            } else {
                // Disjoint arcs keep at least δ of clearance both ways;
                // exact touches are disarmed by the end flags later.
                edges.push(CEdge { from: q2, to: q, c0: 0, cd: -1, ce: 0 });
                edges.push(CEdge { from: q, to: q2, c0: 1, cd: -1, ce: 0 });
            }
        }
    }

    // The feasible δ form an interval; probe it, tightening with the
    // violated-cycle certificate after each failed probe.
    let mut lo = (BigRational::zero(), true);
    let mut hi = (BigRational::one(), true);
    let budget = 8 * n * n + 64;
    for _ in 0..budget {
        if lo.0 > hi.0 || (lo.0 == hi.0 && (lo.1 || hi.1)) {
            return None;
        }
        let cand = if !lo.1 {
            lo.0.clone()
        } else if !hi.1 {
            hi.0.clone()
        } else {
            (&lo.0 + &hi.0) / rational(2, 1)
        };
        match bellman_ford(n, &edges, &cand) {
            Ok(dist) => return materialize(target, &order, &edges, &cand, &dist),
            Err((a, b, e)) => {
                // The offending cycle demands a + b·δ + e·ε ≥ 0.
                if b == 0 {
                    return None;
                }
                let bound = BigRational::new((-a).into(), b.into());
                let open = e < 0;
                if b > 0 {
                    if bound > lo.0 {
                        lo = (bound, open);
                    } else if bound == lo.0 {
                        lo.1 = lo.1 || open;
                    } else {
                        return None; // no progress: certificate out of range
                    }
                } else if bound < hi.0 {
                    hi = (bound, open);
                } else if bound == hi.0 {
                    hi.1 = hi.1 || open;
                } else {
                    return None;
                }
            }
        }
    }
    warn!("equal-length search exhausted its probe budget");
    None
}

type SymbolicSum = (i64, i64, i64);
type Dist = (BigRational, i64);

/// Shortest paths from node 0 under lexicographic (rational, ε-count)
/// weights, or the symbolic coefficient sum of a negative cycle.
fn bellman_ford(n: usize, edges: &[CEdge], delta: &BigRational) -> Result<Vec<Dist>, SymbolicSum> {
    let weights: Vec<Dist> = edges
        .iter()
        .map(|e| {
            let r = BigRational::from_integer(e.c0.into())
                + BigRational::from_integer(e.cd.into()) * delta;
            (r, e.ce as i64)
        })
        .collect();
    let mut dist: Vec<Option<Dist>> = vec![None; n];
    dist[0] = Some((BigRational::zero(), 0));
    let mut pred: Vec<Option<usize>> = vec![None; n];
    for round in 0..=n {
        let mut changed = false;
        for (idx, e) in edges.iter().enumerate() {
            let from_dist = match &dist[e.from] {
                Some(d) => d.clone(),
                None => continue,
            };
            let cand = (&from_dist.0 + &weights[idx].0, from_dist.1 + weights[idx].1);
            let better = match &dist[e.to] {
                Some(d) => cand < *d,
                None => true,
            };
            if better {
                dist[e.to] = Some(cand);
                pred[e.to] = Some(idx);
                changed = true;
                if round == n {
                    // Still relaxing after n rounds: walk predecessors into
                    // the negative cycle and report its coefficient sums.
                    let mut v = e.to;
                    for _ in 0..n {
                        v = edges[pred[v].expect("relaxed node has predecessor")].from;
                    }
                    let anchor = v;
                    let mut sum = (0i64, 0i64, 0i64);
                    loop {
                        let pe = pred[v].expect("cycle node has predecessor");
                        sum.0 += edges[pe].c0 as i64;
                        sum.1 += edges[pe].cd as i64;
                        sum.2 += edges[pe].ce as i64;
                        v = edges[pe].from;
                        if v == anchor {
                            return Err(sum);
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(dist.into_iter().map(|d| d.expect("constraint graph is strongly connected")).collect())
}

/// Turn feasible symbolic distances into concrete starts and flagged arcs.
fn materialize(
    target: &PlainGraph,
    order: &[Vertex],
    edges: &[CEdge],
    delta: &BigRational,
    dist: &[Dist],
) -> Option<EqualLengthModel> {
    let n = order.len();
    // ε must stay below every positive rational slack that strictness eats.
    let mut eps = rational(1, 4 * (n as i64 + 2) * (n as i64 + 2));
    for e in edges {
        let w_r = BigRational::from_integer(e.c0.into())
            + BigRational::from_integer(e.cd.into()) * delta;
        let s_r = &dist[e.from].0 + &w_r - &dist[e.to].0;
        let s_e = dist[e.from].1 + e.ce as i64 - dist[e.to].1;
        debug_assert!(s_r > BigRational::zero() || (s_r == BigRational::zero() && s_e >= 0));
        if s_r > BigRational::zero() && s_e < 0 {
            let cap = s_r / BigRational::from_integer((2 * -s_e).into());
            if cap < eps {
                eps = cap;
            }
        }
    }
    let y: Vec<BigRational> =
        dist.iter().map(|(r, e)| r + BigRational::from_integer((*e).into()) * &eps).collect();
    let angles: Vec<Angle> = y.iter().map(|v| Angle::new(v.clone())).collect();

    let mut arcs: Vec<Option<Arc>> = vec![None; n + 1];
    for q in 0..n {
        // An end falling exactly on a non-neighbor's start stays open so the
        // touch does not register as an intersection.
        let closed_end = !(0..n).any(|q2| {
            q2 != q
                && !target.has_edge(order[q], order[q2])
                && angles[q].ccw_to(&angles[q2]) == *delta
        });
        let arc = Arc::new(angles[q].clone(), delta.clone(), true, closed_end).ok()?;
        arcs[order[q] as usize] = Some(arc);
    }
    let model = ArcModel::new(arcs.into_iter().skip(1).map(|a| a.expect("arc per vertex")).collect());
    if is_proper_model(&model) && intersection_graph(&model).edges() == target.edges() {
        Some(EqualLengthModel { model, delta: delta.clone() })
    } else {
        warn!("equal-length candidate failed re-verification; discarding");
        None
    }
}

/// Drawing read off an equal-length model: each vertex sits at its arc's
/// counterclockwise end. Friends then lie within δ, enemies at least δ away.
pub fn model_to_almost_valid(
    meq: &EqualLengthModel,
    g: &SignedGraph,
) -> Result<(Drawing, BigRational), ConstructionError> {
    if !g.is_complete() {
        return Err(ConstructionError::NotComplete);
    }
    if meq.n() != g.n() {
        return Err(ConstructionError::ModelMismatch);
    }
    if intersection_graph(meq.model()).edges() != g.positive_subgraph().edges() {
        return Err(ConstructionError::ModelMismatch);
    }
    // Distances never exceed a half turn, so the effective threshold caps
    // there; beyond it the positive part is complete and enemies are absent.
    let delta = meq.delta().clone().min(half());
    let mut positions: Vec<Angle> = (1..=meq.n()).map(|v| meq.model().arc(v).end()).collect();
    dedupe_positions(&mut positions, &delta);
    let d = Drawing::new(positions).map_err(|_| ConstructionError::DuplicateStarts)?;
    if !almost_valid_window(g, &d).contains(&delta) {
        return Err(ConstructionError::VerificationFailed("threshold outside window"));
    }
    Ok((d, delta))
}

/// Identical arcs give identical ends; spread such runs by tiny distinct
/// offsets, small enough to stay below every other pairwise distance.
fn dedupe_positions(positions: &mut [Angle], delta: &BigRational) {
    let mut sorted: Vec<Angle> = positions.to_vec();
    sorted.sort();
    let mut min_gap = delta.clone();
    for w in sorted.windows(2) {
        let gap = w[0].ccw_to(&w[1]);
        if gap > BigRational::zero() && gap < min_gap {
            min_gap = gap;
        }
    }
    let eta = min_gap / rational(4 * positions.len() as i64 + 4, 1);
    let mut seen: BTreeMap<Angle, usize> = BTreeMap::new();
    for p in positions.iter_mut() {
        let count = seen.entry(p.clone()).or_insert(0);
        if *count > 0 {
            *p = p.shifted(&(rational(*count as i64, 1) * &eta));
        }
        *count += 1;
    }
}

/// Farthest friend and nearest enemy on each side of a vertex. A vertex
/// exactly opposite counts for both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieWitnesses {
    pub right_friend: Option<Vertex>,
    pub left_friend: Option<Vertex>,
    pub right_enemy: Option<Vertex>,
    pub left_enemy: Option<Vertex>,
    /// Friend tied at the threshold on the right with an enemy tied on the
    /// left: resolved by a counterclockwise nudge.
    pub right_pattern: bool,
    /// The mirrored pattern, resolved by a clockwise nudge.
    pub left_pattern: bool,
}

struct SideWitnesses {
    right_friend: Option<(Vertex, BigRational)>,
    left_friend: Option<(Vertex, BigRational)>,
    right_enemy: Option<(Vertex, BigRational)>,
    left_enemy: Option<(Vertex, BigRational)>,
}

fn side_witnesses(g: &SignedGraph, d: &Drawing, a: Vertex) -> SideWitnesses {
    let pa = d.position(a);
    let mut out = SideWitnesses {
        right_friend: None,
        left_friend: None,
        right_enemy: None,
        left_enemy: None,
    };
    let update_max = |slot: &mut Option<(Vertex, BigRational)>, v: Vertex, dist: &BigRational| {
        if slot.as_ref().map_or(true, |(_, best)| dist > best) {
            *slot = Some((v, dist.clone()));
        }
    };
    let update_min = |slot: &mut Option<(Vertex, BigRational)>, v: Vertex, dist: &BigRational| {
        if slot.as_ref().map_or(true, |(_, best)| dist < best) {
            *slot = Some((v, dist.clone()));
        }
    };
    for b in g.vertices() {
        if b == a {
            continue;
        }
        let sign = match VertexPair::new(a, b).ok().and_then(|p| g.sign(p)) {
            Some(s) => s,
            None => continue,
        };
        let pb = d.position(b);
        let dist = d.distance(a, b);
        let on_right = pa.in_right_half(pb);
        let on_left = pa.in_left_half(pb);
        match sign {
            Sign::Positive => {
                if on_right {
                    update_max(&mut out.right_friend, b, &dist);
                }
                if on_left {
                    update_max(&mut out.left_friend, b, &dist);
                }
            }
            Sign::Negative => {
                if on_right {
                    update_min(&mut out.right_enemy, b, &dist);
                }
                if on_left {
                    update_min(&mut out.left_enemy, b, &dist);
                }
            }
        }
    }
    out
}

/// The vertices whose friend/enemy distances tie exactly at the threshold,
/// with their per-side extremal witnesses.
#[derive(Clone, Debug, Default)]
pub struct ViolationProfile {
    entries: BTreeMap<Vertex, TieWitnesses>,
}

impl ViolationProfile {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.entries.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.entries.keys().copied()
    }

    pub fn witnesses(&self, v: Vertex) -> Option<&TieWitnesses> {
        self.entries.get(&v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

pub fn violating_vertices(
    g: &SignedGraph,
    d: &Drawing,
    delta: &BigRational,
) -> Result<ViolationProfile, ConstructionError> {
    if !almost_valid_window(g, d).contains(delta) {
        return Err(ConstructionError::NotAlmostValid);
    }
    let mut entries = BTreeMap::new();
    for a in g.vertices() {
        let sw = side_witnesses(g, d, a);
        let tied =
            |slot: &Option<(Vertex, BigRational)>| matches!(slot, Some((_, dist)) if dist == delta);
        let right_pattern = tied(&sw.right_friend) && tied(&sw.left_enemy);
        let left_pattern = tied(&sw.left_friend) && tied(&sw.right_enemy);
        if right_pattern || left_pattern {
            entries.insert(
                a,
                TieWitnesses {
                    right_friend: sw.right_friend.map(|(v, _)| v),
                    left_friend: sw.left_friend.map(|(v, _)| v),
                    right_enemy: sw.right_enemy.map(|(v, _)| v),
                    left_enemy: sw.left_enemy.map(|(v, _)| v),
                    right_pattern,
                    left_pattern,
                },
            );
        }
    }
    Ok(ViolationProfile { entries })
}

/// Nudge one tied vertex by a quarter of the smallest gap, toward its tied
/// friend. The move is too small to reorder the circle or create new ties.
pub fn perturb_step(
    g: &SignedGraph,
    d: &Drawing,
    delta: &BigRational,
    a: Vertex,
) -> Result<Drawing, ConstructionError> {
    let profile = violating_vertices(g, d, delta)?;
    let tw = profile.witnesses(a).ok_or(ConstructionError::NotViolating(a))?;
    let eps = d.min_cyclic_gap() / rational(4, 1);
    let shift = if tw.right_pattern { eps } else { -eps };
    let mut positions: Vec<Angle> = d.positions().to_vec();
    positions[a as usize - 1] = positions[a as usize - 1].shifted(&shift);
    let moved = Drawing::new(positions).expect("sub-gap nudge keeps positions distinct");
    let canonical = |mut order: Vec<Vertex>| {
        let at = order.iter().position(|&v| v == 1).expect("vertex 1 present");
        order.rotate_left(at);
        order
    };
    assert_eq!(
        canonical(d.cyclic_order()),
        canonical(moved.cyclic_order()),
        "nudge must preserve the cyclic order"
    );
    Ok(moved)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerturbStats {
    pub steps: usize,
    pub initial_ties: usize,
}

/// Resolve all exact ties in an almost-valid drawing, yielding a valid one.
/// Each pass fixes the first tied vertex in circle order and rescans.
pub fn almost_valid_to_valid(
    g: &SignedGraph,
    d: &Drawing,
) -> Result<(Drawing, PerturbStats), ConstructionError> {
    if is_valid_drawing(g, d) {
        return Ok((d.clone(), PerturbStats { steps: 0, initial_ties: 0 }));
    }
    let delta = almost_valid_window(g, d)
        .canonical_delta()
        .ok_or(ConstructionError::NotAlmostValid)?;
    let mut initial_ties = 0usize;
    for u in g.vertices() {
        for v in (u + 1)..=g.n() {
            let pair = VertexPair::new(u, v).expect("distinct vertices");
            if g.sign(pair).is_some() && d.distance(u, v) == delta {
                initial_ties += 1;
            }
        }
    }
    let mut cur = d.clone();
    let mut steps = 0usize;
    loop {
        let profile = violating_vertices(g, &cur, &delta)?;
        if profile.is_empty() {
            break;
        }
        let order = cur.cyclic_order();
        let a = order
            .into_iter()
            .find(|&v| profile.contains(v))
            .expect("nonempty profile has a first vertex in circle order");
        cur = perturb_step(g, &cur, &delta, a)?;
        steps += 1;
        assert!(steps <= initial_ties, "tie resolution exceeded the initial tie count");
    }
    if !is_valid_drawing(g, &cur) {
        return Err(ConstructionError::VerificationFailed("tie-free drawing still invalid"));
    }
    Ok((cur, PerturbStats { steps, initial_ties }))
}

/// Per-vertex extremal friends with the vertex itself as fallback: the
/// farthest friend in each half, treating each vertex as its own friend.
fn reach_witnesses(g: &SignedGraph, d: &Drawing, a: Vertex) -> (Vertex, Vertex) {
    let sw = side_witnesses(g, d, a);
    let right = sw.right_friend.map(|(v, _)| v).unwrap_or(a);
    let left = sw.left_friend.map(|(v, _)| v).unwrap_or(a);
    (left, right)
}

/// True when x lies strictly between a and b walking counterclockwise; the
/// interval from a vertex to itself is empty.
fn strictly_between(labels: &BTreeMap<Vertex, usize>, n: usize, a: Vertex, x: Vertex, b: Vertex) -> bool {
    if a == b {
        return false;
    }
    let la = labels[&a];
    let lx = labels[&x];
    let lb = labels[&b];
    let span = (lb + n - la) % n;
    let off = (lx + n - la) % n;
    off > 0 && off < span
}

/// Sign the missing pairs of a graph from a valid drawing: a missing pair
/// becomes positive exactly when one endpoint lies strictly inside the
/// other's span toward its farthest same-side friend.
pub fn drawing_to_completion(
    g: &SignedGraph,
    d: &Drawing,
) -> Result<Completion, ConstructionError> {
    if g.n() != d.n() {
        return Err(ConstructionError::NotValidDrawing);
    }
    if !is_valid_drawing(g, d) {
        return Err(ConstructionError::NotValidDrawing);
    }
    let n = g.n() as usize;
    let order = d.cyclic_order();
    let labels: BTreeMap<Vertex, usize> =
        order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let reach: BTreeMap<Vertex, (Vertex, Vertex)> =
        g.vertices().map(|v| (v, reach_witnesses(g, d, v))).collect();
    let mut assignments = BTreeMap::new();
    for pair in g.missing_pairs() {
        let (i, j) = (pair.u(), pair.v());
        let covered = |i: Vertex, j: Vertex| {
            let (left, right) = reach[&i];
            strictly_between(&labels, n, i, j, right) || strictly_between(&labels, n, left, j, i)
        };
        let sign = if covered(i, j) || covered(j, i) { Sign::Positive } else { Sign::Negative };
        assignments.insert(pair, sign);
    }
    Ok(Completion::new(assignments))
}

/// Midpoint arc model of a complete signed graph from a drawing: each arc
/// runs from the midpoint toward the farthest clockwise friend to the
/// midpoint toward the farthest counterclockwise friend. Friendless vertices
/// get a short arc in the clear space around their point.
///
/// The drawing must come from a valid drawing of a graph this one completes;
/// signing missing pairs can introduce exact ties, so strict validity against
/// the completed graph itself is deliberately not required. The final
/// verification gate is the contract.
pub fn drawing_to_model(cg: &SignedGraph, d: &Drawing) -> Result<ArcModel, ConstructionError> {
    if !cg.is_complete() {
        return Err(ConstructionError::NotComplete);
    }
    if cg.n() != d.n() {
        return Err(ConstructionError::NotValidDrawing);
    }
    let n = cg.n();
    let two = rational(2, 1);
    let mut spans: Vec<(Angle, BigRational)> = Vec::with_capacity(n as usize);
    for v in 1..=n {
        let (left, right) = reach_witnesses(cg, d, v);
        let d_left = d.distance(v, left);
        let d_right = d.distance(v, right);
        let start = d.position(v).shifted(&(-&d_left / &two));
        let length = (&d_left + &d_right) / &two;
        spans.push((start, length));
    }
    // Inflate point spans of friendless vertices within a quarter of the
    // clearance to the nearest other endpoint.
    let mut arcs: Vec<Arc> = Vec::with_capacity(n as usize);
    for v in 1..=n {
        let (start, length) = &spans[v as usize - 1];
        if !length.is_zero() {
            arcs.push(
                Arc::closed(start.clone(), length.clone())
                    .map_err(|_| ConstructionError::VerificationFailed("arc span out of range"))?,
            );
            continue;
        }
        let p = d.position(v);
        let mut clearance: Option<BigRational> = None;
        for (u, (other_start, other_len)) in spans.iter().enumerate() {
            if u as Vertex + 1 == v {
                continue;
            }
            let other_end = other_start.shifted(other_len);
            for endpoint in [other_start, &other_end] {
                let gap = p.distance(endpoint);
                if clearance.as_ref().map_or(true, |c| gap < *c) {
                    clearance = Some(gap);
                }
            }
        }
        let clearance = clearance.unwrap_or_else(|| rational(1, 2));
        if clearance.is_zero() {
            return Err(ConstructionError::VerificationFailed("no clearance for point arc"));
        }
        let quarter = &clearance / rational(4, 1);
        arcs.push(
            Arc::closed(p.shifted(&-&quarter), &quarter * &two)
                .map_err(|_| ConstructionError::VerificationFailed("inflated arc out of range"))?,
        );
    }
    let model = ArcModel::new(arcs);
    let positive = cg.positive_subgraph();
    if !is_proper_model(&model) || intersection_graph(&model).edges() != positive.edges() {
        return Err(ConstructionError::VerificationFailed("midpoint model mismatch"));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlainGraph;
    use crate::recognition::{recognize_pca, verify_model};
    use proptest::prelude::*;

    fn angle(num: i64, den: i64) -> Angle {
        Angle::from_ratio(num, den)
    }

    fn square_cycle_model(len_num: i64, len_den: i64) -> ArcModel {
        let arcs = (0..4)
            .map(|q| Arc::closed(angle(q, 4), rational(len_num, len_den)).unwrap())
            .collect();
        ArcModel::new(arcs)
    }

    fn square_graph() -> SignedGraph {
        SignedGraph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (1, 4)], &[(1, 3), (2, 4)])
    }

    #[test]
    fn equalize_keeps_already_equal_models_untouched() {
        let m = square_cycle_model(3, 10);
        let eq = equalize_lengths(&m).unwrap();
        assert_eq!(*eq.delta(), rational(3, 10));
        for v in 1..=4 {
            assert_eq!(eq.model().arc(v).start(), m.arc(v).start());
            assert_eq!(eq.model().arc(v).length(), m.arc(v).length());
        }
    }

    #[test]
    fn equalize_reconciles_mixed_lengths() {
        // Interval-style path: lengths 1/10, 2/10, 1/10.
        let arcs = vec![
            Arc::closed(angle(0, 1), rational(1, 10)).unwrap(),
            Arc::closed(angle(1, 20), rational(1, 5)).unwrap(),
            Arc::closed(angle(1, 5), rational(1, 10)).unwrap(),
        ];
        let m = ArcModel::new(arcs);
        let before = intersection_graph(&m);
        let eq = equalize_lengths(&m).unwrap();
        assert_eq!(intersection_graph(eq.model()).edges(), before.edges());
        assert!(eq.model().arcs().iter().all(|a| a.length() == eq.delta()));
        assert!(is_proper_model(eq.model()));
    }

    #[test]
    fn equalize_handles_complete_and_recognized_models() {
        for g in [PlainGraph::complete(5), PlainGraph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])] {
            let m = recognize_pca(&g).expect("representable");
            let eq = equalize_lengths(&m).expect("equalizable");
            assert_eq!(intersection_graph(eq.model()).edges(), g.edges());
            assert!(eq.model().arcs().iter().all(|a| a.length() == eq.delta()));
        }
    }

    #[test]
    fn drawing_off_equal_model_matches_pinned_positions() {
        let eq = EqualLengthModel::new(square_cycle_model(3, 10)).unwrap();
        let (d, delta) = model_to_almost_valid(&eq, &square_graph()).unwrap();
        assert_eq!(delta, rational(3, 10));
        assert_eq!(*d.position(1), angle(3, 10));
        assert_eq!(*d.position(2), angle(11, 20));
        assert_eq!(*d.position(3), angle(4, 5));
        assert_eq!(*d.position(4), angle(1, 20));
        assert!(almost_valid_window(&square_graph(), &d).contains(&delta));
    }

    fn tie_triangle() -> (SignedGraph, Drawing) {
        let g = SignedGraph::from_edges(3, &[(1, 2)], &[(1, 3)]);
        let d = Drawing::new(vec![angle(0, 1), angle(1, 4), angle(3, 4)]).unwrap();
        (g, d)
    }

    #[test]
    fn tie_detection_reports_the_pinned_witnesses() {
        let (g, d) = tie_triangle();
        let delta = rational(1, 4);
        let profile = violating_vertices(&g, &d, &delta).unwrap();
        assert_eq!(profile.vertices().collect::<Vec<_>>(), vec![1]);
        let tw = profile.witnesses(1).unwrap();
        assert_eq!(tw.right_friend, Some(2));
        assert_eq!(tw.left_enemy, Some(3));
        assert!(tw.right_pattern);
        assert!(!tw.left_pattern);
    }

    #[test]
    fn nudge_breaks_the_tie_exactly_as_pinned() {
        let (g, d) = tie_triangle();
        let delta = rational(1, 4);
        let moved = perturb_step(&g, &d, &delta, 1).unwrap();
        assert_eq!(*moved.position(1), angle(1, 16));
        assert_eq!(moved.distance(1, 2), rational(3, 16));
        assert_eq!(moved.distance(1, 3), rational(5, 16));
        assert!(is_valid_drawing(&g, &moved));
        let (done, stats) = almost_valid_to_valid(&g, &d).unwrap();
        assert!(is_valid_drawing(&g, &done));
        assert_eq!(stats.steps, 1);
    }

    #[test]
    fn mirrored_tie_shifts_clockwise() {
        let g = SignedGraph::from_edges(3, &[(1, 2)], &[(1, 3)]);
        let d = Drawing::new(vec![angle(0, 1), angle(3, 4), angle(1, 4)]).unwrap();
        let delta = rational(1, 4);
        let profile = violating_vertices(&g, &d, &delta).unwrap();
        let tw = profile.witnesses(1).unwrap();
        assert!(tw.left_pattern && !tw.right_pattern);
        let moved = perturb_step(&g, &d, &delta, 1).unwrap();
        assert_eq!(*moved.position(1), angle(15, 16));
        assert!(is_valid_drawing(&g, &moved));
    }

    #[test]
    fn multi_vertex_tie_resolution_stays_within_budget() {
        // Complete K4, friends {12} and {34}, everything else hostile, drawn
        // as a square: every vertex starts tied.
        let g = SignedGraph::from_edges(
            4,
            &[(1, 2), (3, 4)],
            &[(1, 3), (1, 4), (2, 3), (2, 4)],
        );
        let d = Drawing::new(vec![angle(0, 1), angle(1, 4), angle(1, 2), angle(3, 4)]).unwrap();
        let before = d.cyclic_order();
        let (done, stats) = almost_valid_to_valid(&g, &d).unwrap();
        assert!(is_valid_drawing(&g, &done));
        assert_eq!(stats.initial_ties, 4);
        assert_eq!(stats.steps, 2);
        assert_eq!(done.cyclic_order(), before);
    }

    #[test]
    fn already_valid_drawing_is_returned_unchanged() {
        let g = square_graph();
        let d = Drawing::new(vec![angle(0, 1), angle(1, 4), angle(1, 2), angle(3, 4)]).unwrap();
        let (done, stats) = almost_valid_to_valid(&g, &d).unwrap();
        assert_eq!(stats.steps, 0);
        assert_eq!(done.positions(), d.positions());
    }

    fn square_drawing() -> Drawing {
        Drawing::new(vec![angle(0, 1), angle(1, 4), angle(1, 2), angle(3, 4)]).unwrap()
    }

    #[test]
    fn complete_graphs_get_empty_completions() {
        let g = square_graph();
        let c = drawing_to_completion(&g, &square_drawing()).unwrap();
        assert!(c.assignments().is_empty());
    }

    #[test]
    fn missing_pair_outside_every_friend_span_goes_negative() {
        // Square graph minus {2,3}: vertex 2's only friend is behind it, so
        // neither endpoint reaches over the other; the pair turns negative.
        let g = SignedGraph::from_edges(4, &[(1, 2), (3, 4), (1, 4)], &[(1, 3), (2, 4)]);
        let d = square_drawing();
        assert!(is_valid_drawing(&g, &d));
        let c = drawing_to_completion(&g, &d).unwrap();
        let pair = VertexPair::new(2, 3).unwrap();
        assert_eq!(c.assignments().get(&pair), Some(&Sign::Negative));
        // Round trip: the completed positive part (a path) has a verified
        // midpoint model.
        let cg = g.apply_completion(&c).unwrap();
        let model = drawing_to_model(&cg, &d).unwrap();
        assert!(verify_model(&cg.positive_subgraph(), &model));
        assert_eq!(*model.arc(2).start(), angle(1, 8));
        assert_eq!(model.arc(2).end(), angle(1, 4));
    }

    #[test]
    fn missing_pair_inside_a_friend_span_goes_positive() {
        // All-positive K4 minus {2,3}: vertex 2 reaches its antipode 4, and
        // 3 sits strictly inside that sweep.
        let g = SignedGraph::from_edges(4, &[(1, 2), (1, 3), (1, 4), (2, 4), (3, 4)], &[]);
        let d = square_drawing();
        let c = drawing_to_completion(&g, &d).unwrap();
        let pair = VertexPair::new(2, 3).unwrap();
        assert_eq!(c.assignments().get(&pair), Some(&Sign::Positive));
        let cg = g.apply_completion(&c).unwrap();
        let model = drawing_to_model(&cg, &d).unwrap();
        assert!(verify_model(&cg.positive_subgraph(), &model));
    }

    #[test]
    fn square_midpoint_model_matches_pinned_spans() {
        let g = square_graph();
        let model = drawing_to_model(&g, &square_drawing()).unwrap();
        assert_eq!(*model.arc(1).start(), angle(7, 8));
        assert_eq!(model.arc(1).end(), angle(1, 8));
        for v in 1..=4 {
            assert_eq!(*model.arc(v).length(), rational(1, 4));
        }
        assert!(verify_model(&g.positive_subgraph(), &model));
    }

    #[test]
    fn all_positive_triangle_arcs_span_a_third() {
        let g = SignedGraph::from_edges(3, &[(1, 2), (1, 3), (2, 3)], &[]);
        let d = Drawing::new(vec![angle(0, 1), angle(1, 3), angle(2, 3)]).unwrap();
        let model = drawing_to_model(&g, &d).unwrap();
        for v in 1..=3 {
            assert_eq!(*model.arc(v).length(), rational(1, 3));
        }
        assert_eq!(*model.arc(1).start(), angle(5, 6));
        assert!(verify_model(&g.positive_subgraph(), &model));
    }

    #[test]
    fn friendless_vertices_get_clear_point_arcs() {
        let g = SignedGraph::from_edges(2, &[], &[(1, 2)]);
        let d = Drawing::new(vec![angle(0, 1), angle(1, 4)]).unwrap();
        let model = drawing_to_model(&g, &d).unwrap();
        assert!(verify_model(&g.positive_subgraph(), &model));
        let pos = SignedGraph::from_edges(2, &[(1, 2)], &[]);
        let model = drawing_to_model(&pos, &d).unwrap();
        assert!(verify_model(&pos.positive_subgraph(), &model));
    }

    fn arb_drawing(n: u32) -> impl Strategy<Value = Drawing> {
        proptest::sample::subsequence((0i64..120).collect::<Vec<_>>(), n as usize).prop_map(
            |picks| {
                Drawing::new(picks.into_iter().map(|p| Angle::from_ratio(p, 120)).collect())
                    .unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        // Signing every pair by a global distance threshold yields a valid
        // drawing; the reverse pipeline must then reproduce a verified model,
        // with or without pairs deleted beforehand.
        #[test]
        fn round_trip_from_threshold_graphs(
            d in arb_drawing(6),
            threshold_idx in 1i64..60,
            drop_mask in any::<u16>(),
        ) {
            let n = 6u32;
            let tau = rational(2 * threshold_idx + 1, 240);
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            let mut idx = 0;
            for u in 1..=n {
                for v in (u + 1)..=n {
                    if drop_mask & (1 << (idx % 16)) != 0 && idx % 3 == 0 {
                        idx += 1;
                        continue;
                    }
                    if d.distance(u, v) < tau {
                        pos.push((u, v));
                    } else {
                        neg.push((u, v));
                    }
                    idx += 1;
                }
            }
            let g = SignedGraph::from_edges(n, &pos, &neg);
            prop_assume!(is_valid_drawing(&g, &d));
            let c = drawing_to_completion(&g, &d).unwrap();
            let cg = g.apply_completion(&c).unwrap();
            let model = drawing_to_model(&cg, &d).unwrap();
            prop_assert!(verify_model(&cg.positive_subgraph(), &model));
        }

        #[test]
        fn equalize_preserves_recognized_graphs(g in crate::construction::tests::arb_plain(6)) {
            if let Some(m) = recognize_pca(&g) {
                let eq = equalize_lengths(&m).unwrap();
                let realized = intersection_graph(eq.model());
                prop_assert_eq!(realized.edges(), g.edges());
                prop_assert!(eq.model().arcs().iter().all(|a| a.length() == eq.delta()));
                prop_assert!(is_proper_model(eq.model()));
            }
        }
    }

    prop_compose! {
        pub(crate) fn arb_plain(n: u32)(bits in proptest::collection::vec(any::<bool>(), (n * (n - 1) / 2) as usize)) -> PlainGraph {
            let pairs: Vec<(u32, u32)> =
                (1..=n).flat_map(|u| ((u + 1)..=n).map(move |v| (u, v))).collect();
            let edges: Vec<(u32, u32)> = pairs
                .iter()
                .zip(bits)
                .filter_map(|(&p, b)| if b { Some(p) } else { None })
                .collect();
            PlainGraph::from_edges(n, &edges)
        }
    }
}
