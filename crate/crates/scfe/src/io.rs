//! Text formats and instance generation.
//!
//! Graph files: header `n <count>`, then one `<u> <v> <+|->` line per signed
//! pair with 1 ≤ u < v ≤ n. Drawing files: one `<id> <p>/<q> <radians>` line
//! per vertex; the fraction of a turn is authoritative, the radians column is
//! advisory. `#` starts a comment in both formats.

use crate::angle::Angle;
use crate::arcs::{intersection_graph, Arc, ArcModel};
use crate::drawing::Drawing;
use crate::graph::{Sign, SignedGraph, VertexPair};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Parse { line, msg: msg.into() })
}

/// Strict parse of the graph format; every error names its line.
pub fn parse_graph(text: &str) -> Result<SignedGraph, IoError> {
    let mut n: Option<u32> = None;
    let mut positive: Vec<VertexPair> = Vec::new();
    let mut negative: Vec<VertexPair> = Vec::new();
    let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> =
            raw.split('#').next().unwrap_or("").split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let Some(count) = n else {
            if tokens.len() != 2 || tokens[0] != "n" {
                return parse_err(line, "expected header \"n <count>\"");
            }
            let count: u32 = match tokens[1].parse() {
                Ok(c) => c,
                Err(_) => return parse_err(line, format!("bad vertex count {:?}", tokens[1])),
            };
            if count == 0 {
                return parse_err(line, "vertex count must be at least 1");
            }
            n = Some(count);
            continue;
        };
        if tokens.len() != 3 {
            return parse_err(line, "expected \"<u> <v> <+|->\"");
        }
        let u: u32 = match tokens[0].parse() {
            Ok(u) => u,
            Err(_) => return parse_err(line, format!("bad vertex id {:?}", tokens[0])),
        };
        let v: u32 = match tokens[1].parse() {
            Ok(v) => v,
            Err(_) => return parse_err(line, format!("bad vertex id {:?}", tokens[1])),
        };
        if u < 1 || v <= u || v > count {
            return parse_err(line, format!("endpoints must satisfy 1 <= u < v <= {count}"));
        }
        if !seen.insert((u, v)) {
            return parse_err(line, format!("pair {u} {v} already signed"));
        }
        let pair = VertexPair::new(u, v).expect("validated distinct ids");
        match tokens[2] {
            "+" => positive.push(pair),
            "-" => negative.push(pair),
            other => return parse_err(line, format!("sign must be + or -, got {other:?}")),
        }
    }
    let Some(count) = n else {
        return parse_err(1, "missing header \"n <count>\"");
    };
    SignedGraph::new(count, positive, negative)
        .map_err(|e| IoError::Invalid(e.to_string()))
}

pub fn write_graph(g: &SignedGraph) -> String {
    let mut out = format!("n {}\n", g.n());
    let mut edges: Vec<(VertexPair, Sign)> = g
        .positive_edges()
        .iter()
        .map(|&p| (p, Sign::Positive))
        .chain(g.negative_edges().iter().map(|&p| (p, Sign::Negative)))
        .collect();
    edges.sort_by_key(|(p, _)| *p);
    for (pair, sign) in edges {
        writeln!(out, "{} {} {}", pair.u(), pair.v(), sign.symbol()).expect("string write");
    }
    out
}

/// Parse a drawing; ids must cover 1..count exactly and the exact fractions
/// must stay pairwise distinct once normalized into [0,1).
pub fn parse_drawing(text: &str) -> Result<Drawing, IoError> {
    let mut entries: Vec<(usize, u32, Angle)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> =
            raw.split('#').next().unwrap_or("").split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 2 && tokens.len() != 3 {
            return parse_err(line, "expected \"<id> <p>/<q> [<radians>]\"");
        }
        let id: u32 = match tokens[0].parse() {
            Ok(v) if v >= 1 => v,
            _ => return parse_err(line, format!("bad vertex id {:?}", tokens[0])),
        };
        let turns = match BigRational::from_str(tokens[1]) {
            Ok(r) => r,
            Err(_) => {
                return parse_err(line, format!("bad fraction of a turn {:?}", tokens[1]))
            }
        };
        entries.push((line, id, Angle::new(turns)));
    }
    if entries.is_empty() {
        return parse_err(1, "drawing file has no positions");
    }
    let count = entries.len() as u32;
    let mut positions: Vec<Option<Angle>> = vec![None; count as usize];
    for (line, id, angle) in entries {
        if id > count {
            return parse_err(line, format!("vertex id {id} exceeds the {count} lines present"));
        }
        let slot = &mut positions[id as usize - 1];
        if slot.is_some() {
            return parse_err(line, format!("vertex {id} positioned twice"));
        }
        *slot = Some(angle);
    }
    let positions: Vec<Angle> = positions
        .into_iter()
        .map(|p| p.expect("count lines covering 1..=count leave no gaps"))
        .collect();
    Drawing::new(positions).map_err(|e| IoError::Invalid(e.to_string()))
}

pub fn write_drawing(d: &Drawing) -> String {
    let mut out = String::new();
    for v in 1..=d.n() {
        let p = d.position(v);
        writeln!(out, "{} {} {:.12}", v, p, p.to_radians_f64()).expect("string write");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    /// Complete signed graph whose positive part is the intersection graph
    /// of a random equal-length arc model — drawable by construction.
    Pca,
    /// Uniform random signs with a per-pair missing probability.
    Random,
}

impl FromStr for GenMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pca" => Ok(GenMode::Pca),
            "random" => Ok(GenMode::Random),
            other => Err(format!("unknown mode {other:?} (expected pca or random)")),
        }
    }
}

/// Deterministic instance generator: the same (seed, n, mode, missing
/// probability) always yields the same graph.
pub fn gen_instance(
    seed: u64,
    n: u32,
    mode: GenMode,
    missing_prob: &BigRational,
) -> Result<SignedGraph, IoError> {
    if n == 0 {
        return Err(IoError::Invalid("vertex count must be at least 1".into()));
    }
    if missing_prob < &BigRational::zero() || missing_prob > &BigRational::one() {
        return Err(IoError::Invalid("missing probability must lie in [0,1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        GenMode::Pca => {
            let slots = 8 * n as usize;
            let picks = rand::seq::index::sample(&mut rng, slots, n as usize);
            let mut starts: Vec<i64> = picks.iter().map(|i| i as i64).collect();
            starts.sort_unstable();
            let delta_num = rng.gen_range(1..=(4 * n as i64));
            let arcs: Vec<Arc> = starts
                .into_iter()
                .map(|s| {
                    Arc::closed(
                        Angle::from_ratio(s, slots as i64),
                        crate::angle::rational(delta_num, slots as i64),
                    )
                    .expect("generated length in range")
                })
                .collect();
            let positive = intersection_graph(&ArcModel::new(arcs));
            let mut pos: Vec<VertexPair> = Vec::new();
            let mut neg: Vec<VertexPair> = Vec::new();
            for u in 1..=n {
                for v in (u + 1)..=n {
                    let pair = VertexPair::new(u, v).expect("distinct");
                    if positive.has_edge(u, v) {
                        pos.push(pair);
                    } else {
                        neg.push(pair);
                    }
                }
            }
            SignedGraph::new(n, pos, neg).map_err(|e| IoError::Invalid(e.to_string()))
        }
        GenMode::Random => {
            let mut pos: Vec<VertexPair> = Vec::new();
            let mut neg: Vec<VertexPair> = Vec::new();
            for u in 1..=n {
                for v in (u + 1)..=n {
                    if bernoulli_exact(&mut rng, missing_prob) {
                        continue;
                    }
                    let pair = VertexPair::new(u, v).expect("distinct");
                    if rng.gen_range(0..2) == 0 {
                        pos.push(pair);
                    } else {
                        neg.push(pair);
                    }
                }
            }
            SignedGraph::new(n, pos, neg).map_err(|e| IoError::Invalid(e.to_string()))
        }
    }
}

/// True with probability exactly p: narrow a uniform draw on [0,1) until its
/// enclosing interval falls entirely on one side of p.
fn bernoulli_exact(rng: &mut ChaCha8Rng, p: &BigRational) -> bool {
    let block = BigRational::from_integer((1u64 << 32).into());
    let mut low = BigRational::zero();
    let mut width = BigRational::one();
    loop {
        width /= &block;
        low += BigRational::from_integer(rng.gen_range(0u64..(1 << 32)).into()) * &width;
        if &low + &width <= *p {
            return true;
        }
        if low >= *p {
            return false;
        }
    }
}
