//! End-to-end acceptance checks, one test per numbered criterion. The two
//! heavy shared workloads — the small-graph census and the generated
//! instance scan — run once and are reused by the criteria that need them.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scfe::angle::Angle;
use scfe::arcs::{intersection_graph, ArcModel};
use scfe::construction::{
    almost_valid_to_valid, drawing_to_completion, drawing_to_model, equalize_lengths,
};
use scfe::drawing::Drawing;
use scfe::graph::{Completion, PlainGraph, Sign, SignedGraph, Vertex, VertexPair};
use scfe::io::{gen_instance, GenMode};
use scfe::recognition::{oracle_pca, verify_model};
use scfe::solver::{decide_complete, decide_general, verify, SolveOptions, SolveResult};
use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

/// Triangle with a pendant vertex on each corner: the smallest graph whose
/// arcs would need a proper containment, hence never representable.
fn net_positive() -> PlainGraph {
    PlainGraph::from_edges(6, &[(1, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 6)])
}

/// Complete signed graph whose friendships are exactly the given graph.
fn complete_from_positive(h: &PlainGraph) -> SignedGraph {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for u in 1..=h.n() {
        for v in (u + 1)..=h.n() {
            if h.has_edge(u, v) {
                pos.push((u, v));
            } else {
                neg.push((u, v));
            }
        }
    }
    SignedGraph::from_edges(h.n(), &pos, &neg)
}

/// Graph whose edge set is the bitmask over pairs (1,2),(1,3),...,(n-1,n).
fn graph_from_mask(n: u32, mask: u32) -> PlainGraph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 1..=n {
        for v in (u + 1)..=n {
            if mask & (1 << bit) != 0 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    PlainGraph::from_edges(n, &edges)
}

fn drawing(turns: &[(i64, i64)]) -> Drawing {
    Drawing::new(turns.iter().map(|&(p, q)| Angle::from_ratio(p, q)).collect())
        .expect("distinct positions")
}

fn canonical_cycle(order: &[Vertex]) -> Vec<Vertex> {
    let k = order.iter().position(|&v| v == 1).expect("vertex 1 present");
    order[k..].iter().chain(order[..k].iter()).copied().collect()
}

/// Shared workload for criteria 2 and 5: every labeled friendship graph on
/// up to five vertices plus one representative per six-vertex isomorphism
/// class, each decided and cross-checked against the exhaustive oracle.
struct Census {
    accepted: Vec<(PlainGraph, ArcModel)>,
    graphs_checked: usize,
    class_count: usize,
    elapsed: Duration,
}

fn census() -> &'static Census {
    static DATA: OnceLock<Census> = OnceLock::new();
    DATA.get_or_init(|| {
        let t0 = Instant::now();
        let mut accepted = Vec::new();
        let mut graphs_checked = 0usize;
        for n in 1..=5u32 {
            let bits = n * (n - 1) / 2;
            for mask in 0u32..(1u32 << bits) {
                check_against_oracle(&graph_from_mask(n, mask), &mut accepted);
                graphs_checked += 1;
            }
        }
        let reps = six_vertex_class_representatives();
        let class_count = reps.len();
        for &mask in &reps {
            check_against_oracle(&graph_from_mask(6, mask), &mut accepted);
            graphs_checked += 1;
        }
        Census { accepted, graphs_checked, class_count, elapsed: t0.elapsed() }
    })
}

fn check_against_oracle(h: &PlainGraph, accepted: &mut Vec<(PlainGraph, ArcModel)>) {
    let decided = decide_complete(&complete_from_positive(h)).expect("complete input");
    let oracle = oracle_pca(h, 7).expect("within oracle size").is_some();
    assert_eq!(decided.is_drawable(), oracle, "solver and oracle disagree on {h:?}");
    if let SolveResult::Drawable { model, .. } = decided {
        accepted.push((h.clone(), model));
    }
}

/// Lexicographically least relabeling of each six-vertex edge mask picks
/// one representative per isomorphism class.
fn six_vertex_class_representatives() -> Vec<u32> {
    let mut pair_at = [[0usize; 7]; 7];
    let mut pairs = Vec::new();
    for u in 1..=6usize {
        for v in (u + 1)..=6 {
            pair_at[u][v] = pairs.len();
            pairs.push((u, v));
        }
    }
    let mut perm = [1usize, 2, 3, 4, 5, 6];
    let mut maps: Vec<[usize; 15]> = Vec::with_capacity(720);
    heap_permutations(&mut perm, 6, &mut |p| {
        let mut map = [0usize; 15];
        for (i, &(u, v)) in pairs.iter().enumerate() {
            let (a, b) = (p[u - 1].min(p[v - 1]), p[u - 1].max(p[v - 1]));
            map[i] = pair_at[a][b];
        }
        maps.push(map);
    });
    let canonical = |mask: u32| -> u32 {
        maps.iter()
            .map(|map| {
                let mut image = 0u32;
                for (i, &target) in map.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        image |= 1 << target;
                    }
                }
                image
            })
            .min()
            .expect("at least the identity relabeling")
    };
    (0u32..(1 << 15)).filter(|&mask| canonical(mask) == mask).collect()
}

fn heap_permutations(items: &mut [usize; 6], k: usize, visit: &mut impl FnMut(&[usize; 6])) {
    if k == 1 {
        visit(items);
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, visit);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Shared workload for criteria 3 and 6: 500 seeded generator instances
/// with 5 <= n <= 40, each solved and kept with its witness drawing.
struct Scan {
    instances: Vec<(SignedGraph, Drawing)>,
    worst: Duration,
}

fn scan() -> &'static Scan {
    static DATA: OnceLock<Scan> = OnceLock::new();
    DATA.get_or_init(|| {
        let zero = BigRational::zero();
        let mut instances = Vec::new();
        let mut worst = Duration::ZERO;
        for seed in 0u64..500 {
            let n = 5 + (seed * 7919) % 36;
            let g = gen_instance(seed, n as u32, GenMode::Pca, &zero).expect("generator");
            let t0 = Instant::now();
            let result = decide_complete(&g).expect("complete instance");
            let dt = t0.elapsed();
            worst = worst.max(dt);
            assert!(dt < Duration::from_secs(1), "seed {seed} (n={n}) took {dt:?}");
            match result {
                SolveResult::Drawable { drawing, .. } => instances.push((g, drawing)),
                SolveResult::NotDrawable { .. } => panic!("seed {seed} (n={n}) judged undrawable"),
            }
        }
        Scan { instances, worst }
    })
}

#[test]
fn criterion_1_net_rejection() {
    let t0 = Instant::now();
    let decided = decide_complete(&complete_from_positive(&net_positive())).expect("complete");
    assert!(!decided.is_drawable(), "net-based graph must be undrawable");
    assert!(
        oracle_pca(&net_positive(), 7).expect("small enough").is_none(),
        "oracle must refuse the net"
    );
    let dt = t0.elapsed();
    assert!(dt < Duration::from_secs(1), "took {dt:?}");
    println!("criterion 1: pass - solver and oracle both reject the net in {dt:?}");
}

#[test]
fn criterion_2_small_graph_census_matches_oracle() {
    let c = census();
    assert_eq!(c.class_count, 156, "six-vertex isomorphism class count");
    assert!(c.elapsed < Duration::from_secs(300), "census took {:?}", c.elapsed);
    println!(
        "criterion 2: pass - {} graphs ({} six-vertex classes) agree with the oracle in {:?}",
        c.graphs_checked, c.class_count, c.elapsed
    );
}

#[test]
fn criterion_3_generated_instances_are_drawable_and_verified() {
    let s = scan();
    assert_eq!(s.instances.len(), 500);
    for (g, d) in &s.instances {
        let report = verify(g, d).expect("sizes match");
        assert!(report.valid && report.violations.is_empty(), "violations in {g:?}");
    }
    println!(
        "criterion 3: pass - 500 generated instances drawable and verified; worst solve {:?}",
        s.worst
    );
}

#[test]
fn criterion_4_tie_resolution_stays_in_budget_and_preserves_order() {
    let cases: Vec<(&str, SignedGraph, Drawing)> = vec![
        (
            "single tie",
            SignedGraph::from_edges(3, &[(1, 2)], &[(1, 3)]),
            drawing(&[(0, 1), (1, 4), (3, 4)]),
        ),
        (
            "mirrored single tie",
            SignedGraph::from_edges(3, &[(1, 2)], &[(1, 3)]),
            drawing(&[(0, 1), (3, 4), (1, 4)]),
        ),
        (
            // Two tied vertices; the lone friendly pair also faces an enemy
            // at exactly half a turn, the distance with both halves closed.
            "antipodal double tie",
            SignedGraph::from_edges(4, &[(1, 2)], &[(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]),
            drawing(&[(0, 1), (1, 4), (3, 4), (1, 2)]),
        ),
        (
            "every vertex tied",
            SignedGraph::from_edges(4, &[(1, 2), (3, 4)], &[(1, 3), (1, 4), (2, 3), (2, 4)]),
            drawing(&[(0, 1), (1, 4), (1, 2), (3, 4)]),
        ),
        (
            "already valid hexagon",
            SignedGraph::from_edges(
                6,
                &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)],
                &[(1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (2, 6), (3, 5), (3, 6), (4, 6)],
            ),
            drawing(&[(0, 6), (1, 6), (2, 6), (3, 6), (4, 6), (5, 6)]),
        ),
    ];
    let total = cases.len();
    for (name, g, d) in &cases {
        let before = canonical_cycle(&d.cyclic_order());
        let (out, stats) = almost_valid_to_valid(g, d).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(stats.steps <= stats.initial_ties, "{name}: {stats:?}");
        assert_eq!(canonical_cycle(&out.cyclic_order()), before, "{name}: labeling changed");
        let report = verify(g, &out).expect("sizes match");
        assert!(report.valid, "{name}: output invalid: {:?}", report.violations);
    }
    println!("criterion 4: pass - {total} tie cases resolved within budget, labelings preserved");
}

#[test]
fn criterion_5_equal_length_embedding_preserves_the_graph() {
    let c = census();
    for (g, model) in &c.accepted {
        let eq = equalize_lengths(model).unwrap_or_else(|e| panic!("equalize failed on {g:?}: {e}"));
        for arc in eq.model().arcs() {
            assert_eq!(arc.length(), eq.delta(), "unequal arc for {g:?}");
        }
        assert_eq!(intersection_graph(eq.model()).edges(), g.edges(), "graph changed for {g:?}");
    }
    println!(
        "criterion 5: pass - {} accepted models re-embedded at one length, graphs unchanged",
        c.accepted.len()
    );
}

#[test]
fn criterion_6_round_trip_from_drawings() {
    let s = scan();
    for (g, d) in &s.instances {
        let completion = drawing_to_completion(g, d).expect("witness drawings are valid");
        let cg = g.apply_completion(&completion).expect("signs every missing pair");
        let model = drawing_to_model(&cg, d).expect("midpoint model");
        assert!(verify_model(&cg.positive_subgraph(), &model), "round trip failed on {g:?}");
    }
    println!("criterion 6: pass - {} drawings rebuilt into verified models", s.instances.len());
}

fn delete_pairs(g: &SignedGraph, drop: &[VertexPair]) -> SignedGraph {
    let keep = |pairs: &std::collections::BTreeSet<VertexPair>| -> Vec<(Vertex, Vertex)> {
        pairs.iter().filter(|p| !drop.contains(p)).map(|p| (p.u(), p.v())).collect()
    };
    SignedGraph::from_edges(g.n(), &keep(g.positive_edges()), &keep(g.negative_edges()))
}

fn nth_pair(n: u32, index: usize) -> VertexPair {
    let mut i = index;
    for u in 1..=n {
        let row = (n - u) as usize;
        if i < row {
            return VertexPair::new(u, u + 1 + i as u32).expect("in range");
        }
        i -= row;
    }
    panic!("pair index {index} out of range for n={n}");
}

#[test]
fn criterion_7_missing_pair_search_is_budgeted_and_correct() {
    let opts = SolveOptions::default();
    // Drawable base: restoring the deleted signs is always a witness, so
    // the search stops somewhere within its 2^k budget.
    let base = gen_instance(1, 12, GenMode::Pca, &BigRational::zero()).expect("generator");
    assert!(decide_complete(&base).expect("complete").is_drawable(), "base must be drawable");
    for k in 1..=10usize {
        let drop: Vec<VertexPair> = (0..k).map(|i| nth_pair(12, i)).collect();
        let r = decide_general(&delete_pairs(&base, &drop), &opts).expect("within budget");
        assert!(r.is_drawable(), "k={k}: drawable base stayed drawable");
        assert!(r.completions_examined() <= 1 << k, "k={k}: {}", r.completions_examined());
    }
    // Undrawable base: the rejected six-vertex friendship shape sits among
    // vertices 1..=6 and deletions stay inside the hostile block 7..=12, so
    // every completion keeps it induced and the search must visit all 2^k.
    let net = [(1, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 6)];
    let mut neg = Vec::new();
    for u in 1..=12u32 {
        for v in (u + 1)..=12 {
            if !net.contains(&(u, v)) {
                neg.push((u, v));
            }
        }
    }
    let hostile = SignedGraph::from_edges(12, &net, &neg);
    let block: Vec<VertexPair> = (7..=12u32)
        .flat_map(|u| ((u + 1)..=12).map(move |v| VertexPair::new(u, v).expect("in range")))
        .collect();
    for k in 1..=10usize {
        let r = decide_general(&delete_pairs(&hostile, &block[..k]), &opts).expect("in budget");
        assert!(!r.is_drawable(), "k={k}: hostile base must stay undrawable");
        assert_eq!(r.completions_examined(), 1 << k, "k={k}: must visit every completion");
    }
    // Small random instances against a double oracle: every completion of
    // the missing pairs, each judged by the exhaustive model search.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..30 {
        let n: u32 = rng.gen_range(4..=6);
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut pairs = Vec::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                pairs.push(VertexPair::new(u, v).expect("distinct"));
            }
        }
        for &p in &pairs {
            if rng.gen_bool(0.5) {
                pos.push((p.u(), p.v()));
            } else {
                neg.push((p.u(), p.v()));
            }
        }
        let complete = SignedGraph::from_edges(n, &pos, &neg);
        let k = rng.gen_range(1..=4usize);
        let mut drop: Vec<VertexPair> = Vec::new();
        while drop.len() < k {
            let p = pairs[rng.gen_range(0..pairs.len())];
            if !drop.contains(&p) {
                drop.push(p);
            }
        }
        let g = delete_pairs(&complete, &drop);
        let ours = decide_general(&g, &opts).expect("small instance").is_drawable();
        let missing = g.missing_pairs();
        let mut oracle_drawable = false;
        for mask in 0u32..(1 << missing.len()) {
            let assign: BTreeMap<VertexPair, Sign> = missing
                .iter()
                .enumerate()
                .map(|(j, &p)| {
                    (p, if mask & (1 << j) != 0 { Sign::Positive } else { Sign::Negative })
                })
                .collect();
            let cg = g.apply_completion(&Completion::new(assign)).expect("completion");
            if oracle_pca(&cg.positive_subgraph(), 7).expect("small").is_some() {
                oracle_drawable = true;
                break;
            }
        }
        assert_eq!(ours, oracle_drawable, "double oracle disagrees on {g:?}");
    }
    println!(
        "criterion 7: pass - budgets hold on both 10-step deletion ladders; \
         30 random small instances match the double oracle"
    );
}

#[test]
fn criterion_8_outputs_are_byte_identical_across_runs() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_scfe");
    let dir = std::env::temp_dir().join(format!("scfe-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let gen = |args: &[&str]| -> Vec<u8> {
        let out = Command::new(bin).arg("gen").args(args).output().expect("gen runs");
        assert!(out.status.success(), "gen failed: {}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let pca_args = ["--seed", "7", "--n", "9", "--mode", "pca"];
    let first = gen(&pca_args);
    assert_eq!(first, gen(&pca_args), "generator output differs between runs");
    let random_args =
        ["--seed", "3", "--n", "7", "--mode", "random", "--missing-prob", "1/3"];
    assert_eq!(gen(&random_args), gen(&random_args), "random mode differs between runs");

    let graph_path = dir.join("instance.graph");
    std::fs::write(&graph_path, &first).expect("write instance");
    let draw = |tag: &str| -> (Vec<u8>, Vec<u8>, Vec<u8>) {
        let drawing = dir.join(format!("{tag}.drawing"));
        let svg = dir.join(format!("{tag}.svg"));
        let model_svg = dir.join(format!("{tag}-model.svg"));
        let out = Command::new(bin)
            .arg("draw")
            .arg(&graph_path)
            .arg("-o")
            .arg(&drawing)
            .arg("--svg")
            .arg(&svg)
            .arg("--model-svg")
            .arg(&model_svg)
            .output()
            .expect("draw runs");
        assert!(out.status.success(), "draw failed: {}", String::from_utf8_lossy(&out.stderr));
        (
            std::fs::read(&drawing).expect("drawing file"),
            std::fs::read(&svg).expect("svg file"),
            std::fs::read(&model_svg).expect("model svg file"),
        )
    };
    let a = draw("first");
    let b = draw("second");
    assert_eq!(a.0, b.0, "drawing bytes differ");
    assert_eq!(a.1, b.1, "svg bytes differ");
    assert_eq!(a.2, b.2, "model svg bytes differ");
    std::fs::remove_dir_all(&dir).ok();
    println!("criterion 8: pass - generator, drawing, and SVG outputs byte-identical across runs");
}
