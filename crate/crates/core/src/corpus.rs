//! Fixed and seeded graph collections for tests, acceptance runs and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eig::EIGraph;
use crate::moves::{expand, ExpandSpec};
use crate::rigidity::{g24_family, triangle_graph};

pub const RANDOM_MAX_VERTICES: usize = 8;
pub const RANDOM_MAX_INDEX: u64 = 9;

/// Connected graph: a random spanning tree plus up to three extra edges
/// (loops allowed), indices uniform in `1..=max_index`.
pub fn random_graph(rng: &mut impl Rng, max_vertices: usize, max_index: u64) -> EIGraph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut b = EIGraph::builder();
    let vs: Vec<usize> = (0..n).map(|k| b.vertex(&format!("v{k}"))).collect();
    let mut k = 0;
    let idx = |rng: &mut dyn rand::RngCore| rng.gen_range(1..=max_index);
    for t in 1..n {
        let p = vs[rng.gen_range(0..t)];
        let (x, y) = (idx(rng), idx(rng));
        b.edge(&format!("e{k}"), p, vs[t], x, y);
        k += 1;
    }
    let extra = rng.gen_range(if n == 1 { 1 } else { 0 }..=3);
    for _ in 0..extra {
        let (u, w) = (vs[rng.gen_range(0..n)], vs[rng.gen_range(0..n)]);
        let (x, y) = (idx(rng), idx(rng));
        b.edge(&format!("e{k}"), u, w, x, y);
        k += 1;
    }
    b.build()
}

pub fn random_corpus(seed: u64, count: usize) -> Vec<EIGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_graph(&mut rng, RANDOM_MAX_VERTICES, RANDOM_MAX_INDEX))
        .collect()
}

fn graph(vertices: &[&str], edges: &[(&str, usize, usize, u64, u64)]) -> EIGraph {
    let mut b = EIGraph::builder();
    let vs: Vec<usize> = vertices.iter().map(|v| b.vertex(v)).collect();
    for &(id, u, w, x, y) in edges {
        b.edge(id, vs[u], vs[w], x, y);
    }
    b.build()
}

fn expanded_triangle() -> EIGraph {
    let mut g = triangle_graph(3, 5, 7);
    for t in 1..=3 {
        let spec = ExpandSpec::new(
            &format!("v{t}"),
            &format!("w{t}"),
            &format!("x{t}"),
            &[&format!("e{t}")],
            1,
        );
        g = expand(&g, &spec).expect("expansion of a triangle vertex").0;
    }
    g
}

/// Twenty named non-elementary graphs.
pub fn commation_corpus() -> Vec<(String, EIGraph)> {
    let family = |k| g24_family(k).expect("family member").graph;
    let list = vec![
        ("loop-2-4", EIGraph::single_loop(2, 4)),
        ("loop-2-6", EIGraph::single_loop(2, 6)),
        ("loop-3-5", EIGraph::single_loop(3, 5)),
        ("loop-1-2", EIGraph::single_loop(1, 2)),
        ("loop-2-3", EIGraph::single_loop(2, 3)),
        ("loop-4-6", EIGraph::single_loop(4, 6)),
        ("triangle-11-13-17", triangle_graph(11, 13, 17)),
        ("triangle-3-5-7", triangle_graph(3, 5, 7)),
        ("family-1", family(1)),
        ("family-2", family(2)),
        ("bridge-and-loop", graph(&["u", "w"], &[("a", 0, 1, 2, 3), ("l", 1, 1, 1, 2)])),
        ("rose-2", graph(&["v"], &[("x", 0, 0, 1, 1), ("y", 0, 0, 1, 1)])),
        ("theta-2-2", graph(&["u", "w"], &[("a", 0, 1, 2, 2), ("b", 0, 1, 2, 2), ("c", 0, 1, 1, 1)])),
        ("loops-2-3-1-1", graph(&["v"], &[("x", 0, 0, 2, 3), ("y", 0, 0, 1, 1)])),
        ("parallel-2-3-2-5", graph(&["u", "w"], &[("a", 0, 1, 2, 3), ("b", 0, 1, 2, 5)])),
        (
            "path-with-loop",
            graph(&["p", "q", "r"], &[("a", 0, 1, 3, 2), ("b", 1, 2, 1, 4), ("l", 2, 2, 2, 3)]),
        ),
        (
            "small-triangle",
            graph(&["a", "b", "c"], &[("x", 0, 1, 2, 3), ("y", 1, 2, 2, 2), ("z", 2, 0, 3, 4)]),
        ),
        ("expanded-triangle-3-5-7", expanded_triangle()),
        ("loops-2-4-1-3", graph(&["v"], &[("x", 0, 0, 2, 4), ("y", 0, 0, 1, 3)])),
        (
            "square",
            graph(
                &["a", "b", "c", "d"],
                &[("p", 0, 1, 2, 2), ("q", 1, 2, 2, 3), ("r", 2, 3, 2, 2), ("s", 3, 0, 2, 2)],
            ),
        ),
    ];
    list.into_iter().map(|(n, g)| (n.to_string(), g)).collect()
}

/// The twenty named graphs plus ten seeded random ones.
pub fn flattening_corpus(seed: u64) -> Vec<(String, EIGraph)> {
    let mut out = commation_corpus();
    out.extend(
        random_corpus(seed, 10)
            .into_iter()
            .enumerate()
            .map(|(k, g)| (format!("random-{seed}-{k}"), g)),
    );
    out
}

/// Ten pairs of non-unimodular graphs from the named corpus.
pub fn diameter_pairs() -> Vec<(String, EIGraph, EIGraph)> {
    let c = commation_corpus();
    let get = |name: &str| {
        c.iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g.clone())
            .expect("named corpus graph")
    };
    [
        ("loop-2-4", "loop-2-6"),
        ("loop-2-4", "loop-3-5"),
        ("loop-2-3", "loop-4-6"),
        ("loop-2-4", "triangle-3-5-7"),
        ("triangle-3-5-7", "family-1"),
        ("triangle-11-13-17", "loop-2-4"),
        ("family-1", "family-2"),
        ("parallel-2-3-2-5", "loop-2-6"),
        ("path-with-loop", "small-triangle"),
        ("loops-2-4-1-3", "square"),
    ]
    .into_iter()
    .map(|(a, b)| (format!("{a} / {b}"), get(a), get(b)))
    .collect()
}
