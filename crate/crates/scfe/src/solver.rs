//! End-to-end decisions: the complete-graph pipeline (recognize the positive
//! part, equalize, read off a drawing, break ties) and the completion search
//! that signs missing pairs one assignment at a time.

use crate::angle::{rational, Angle};
use crate::arcs::{Arc, ArcModel};
use crate::construction::{
    almost_valid_to_valid, equalize_lengths, model_to_almost_valid, ConstructionError,
    EqualLengthModel,
};
use crate::drawing::{almost_valid_window, is_valid_drawing, violations, Drawing, Window};
use crate::graph::{Completion, Sign, SignedGraph, Vertex};
use crate::recognition::recognize_pca;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("graph must be complete for the fast path")]
    NotComplete,
    #[error("graph has {missing} unsigned pairs; the search limit is {limit}")]
    TooManyMissingPairs { missing: usize, limit: u32 },
    #[error("drawing has {drawing} positions but the graph has {graph} vertices")]
    SizeMismatch { graph: u32, drawing: u32 },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

#[derive(Clone, Debug)]
pub enum SolveResult {
    Drawable {
        /// Signs chosen for the missing pairs (empty for complete inputs).
        completion: Completion,
        /// Proper arc model of the completed graph's positive part.
        model: ArcModel,
        /// The same model re-embedded with one common arc length.
        equal_length: EqualLengthModel,
        /// Valid drawing of the completed graph, hence of the input graph.
        drawing: Drawing,
        completions_examined: u64,
        /// Total drawable completions; present only under exhaustive search.
        drawable_completions: Option<u64>,
    },
    NotDrawable {
        completions_examined: u64,
    },
}

impl SolveResult {
    pub fn is_drawable(&self) -> bool {
        matches!(self, SolveResult::Drawable { .. })
    }

    pub fn completions_examined(&self) -> u64 {
        match self {
            SolveResult::Drawable { completions_examined, .. } => *completions_examined,
            SolveResult::NotDrawable { completions_examined } => *completions_examined,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Refuse to search beyond this many unsigned pairs.
    pub max_missing: u32,
    /// Examine every completion and count the drawable ones instead of
    /// stopping at the first witness.
    pub exhaustive: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_missing: 25, exhaustive: false }
    }
}

/// Equally spaced arcs realizing the two extreme positive parts: length a
/// half turn pairwise-intersects everything, a quarter gap isolates.
fn trivial_equal_model(n: u32, complete: bool) -> ArcModel {
    let length = if complete { rational(1, 2) } else { rational(1, 4 * n as i64) };
    let arcs = (0..n)
        .map(|q| {
            Arc::closed(Angle::from_ratio(q as i64, n as i64), length.clone())
                .expect("trivial length in range")
        })
        .collect();
    ArcModel::new(arcs)
}

/// Decide a fully signed graph: its positive part must admit a proper arc
/// model, which the pipeline then turns into a verified valid drawing.
pub fn decide_complete(g: &SignedGraph) -> Result<SolveResult, SolveError> {
    if !g.is_complete() {
        return Err(SolveError::NotComplete);
    }
    let positive = g.positive_subgraph();
    // All-friends or all-enemies: every equally spaced drawing works, so
    // skip recognition and feed a canned model through the same pipeline.
    let model = if positive.is_complete() || positive.edges().is_empty() {
        Some(trivial_equal_model(g.n(), positive.is_complete()))
    } else {
        recognize_pca(&positive)
    };
    let model = match model {
        Some(m) => m,
        None => return Ok(SolveResult::NotDrawable { completions_examined: 1 }),
    };
    let equal_length = equalize_lengths(&model)?;
    let (rough, _delta) = model_to_almost_valid(&equal_length, g)?;
    let (drawing, _stats) = almost_valid_to_valid(g, &rough)?;
    debug_assert!(is_valid_drawing(g, &drawing));
    Ok(SolveResult::Drawable {
        completion: Completion::empty(),
        model,
        equal_length,
        drawing,
        completions_examined: 1,
        drawable_completions: None,
    })
}

/// Decide any signed graph by searching over all sign assignments for its
/// missing pairs, lexicographically with "+" tried before "−" on each pair.
pub fn decide_general(g: &SignedGraph, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    let missing = g.missing_pairs();
    let k = missing.len();
    if k == 0 {
        return decide_complete(g);
    }
    if k as u32 > opts.max_missing || k >= 63 {
        return Err(SolveError::TooManyMissingPairs { missing: k, limit: opts.max_missing.min(62) });
    }
    let mut examined = 0u64;
    let mut drawable_count = 0u64;
    let mut first: Option<SolveResult> = None;
    for mask in 0u64..(1u64 << k) {
        let mut assignments = BTreeMap::new();
        for (j, pair) in missing.iter().enumerate() {
            let negative = (mask >> (k - 1 - j)) & 1 == 1;
            assignments.insert(*pair, if negative { Sign::Negative } else { Sign::Positive });
        }
        let completion = Completion::new(assignments);
        let completed = g.apply_completion(&completion).expect("completion covers missing pairs");
        examined += 1;
        if let SolveResult::Drawable { model, equal_length, drawing, .. } =
            decide_complete(&completed)?
        {
            debug_assert!(is_valid_drawing(g, &drawing));
            drawable_count += 1;
            if first.is_none() {
                first = Some(SolveResult::Drawable {
                    completion,
                    model,
                    equal_length,
                    drawing,
                    completions_examined: 0,
                    drawable_completions: None,
                });
            }
            if !opts.exhaustive {
                break;
            }
        }
    }
    match first {
        Some(SolveResult::Drawable { completion, model, equal_length, drawing, .. }) => {
            Ok(SolveResult::Drawable {
                completion,
                model,
                equal_length,
                drawing,
                completions_examined: examined,
                drawable_completions: opts.exhaustive.then_some(drawable_count),
            })
        }
        _ => Ok(SolveResult::NotDrawable { completions_examined: examined }),
    }
}

/// Validity report for a drawing against a graph: overall verdict, the
/// feasible threshold window, and every violating (vertex, friend, enemy)
/// triple where the friend is not strictly closer.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub valid: bool,
    pub window: Window,
    pub violations: Vec<(Vertex, Vertex, Vertex)>,
}

pub fn verify(g: &SignedGraph, d: &Drawing) -> Result<VerifyReport, SolveError> {
    if g.n() != d.n() {
        return Err(SolveError::SizeMismatch { graph: g.n(), drawing: d.n() });
    }
    let violations = violations(g, d);
    Ok(VerifyReport {
        valid: violations.is_empty(),
        window: almost_valid_window(g, d),
        violations,
    })
}
