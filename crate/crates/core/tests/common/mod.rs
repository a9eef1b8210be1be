#![allow(dead_code)]

use eigraph::corpus::{random_graph, RANDOM_MAX_INDEX, RANDOM_MAX_VERTICES};
use eigraph::eig::is_one;
use eigraph::modular::invariant_primes;
use eigraph::moves::{
    collapse, expand, general_blow_up, is_minimal, minimalize, slide, standard_blow_up,
    uncollapse_spec, ExpandSpec, MoveWitness,
};
use eigraph::{isomorphic, EIGraph};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn graph_from(seed: u64) -> EIGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_graph(&mut rng, RANDOM_MAX_VERTICES, RANDOM_MAX_INDEX)
}

fn collapsible(g: &EIGraph) -> Vec<usize> {
    (0..g.edge_count())
        .filter(|&e| !g.is_loop(e) && is_one(g.index(e)))
        .collect()
}

fn iso(g: &EIGraph, h: &EIGraph) -> bool {
    matches!(isomorphic(g, h), Ok(Some(_)))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn collapse_then_expand(g: &EIGraph) -> Check {
    for e in collapsible(g) {
        let spec = uncollapse_spec(g, e);
        let (c, _) = collapse(g, e).map_err(|x| x.to_string())?;
        let (back, _) = expand(&c, &spec).map_err(|x| x.to_string())?;
        ensure(back.same_as(g) || iso(&back, g), || {
            format!("collapse/expand of {} is not a round trip", g.edge_id(e))
        })?;
    }
    Ok(())
}

/// Expands the first vertex with divisor `n`, moving every edge it divides.
pub fn expand_then_collapse(g: &EIGraph, n: u64) -> Check {
    let v = g.vertices_sorted()[0];
    let moved: Vec<String> = g
        .out_edges_sorted(v)
        .into_iter()
        .filter(|&f| g.index(f) % n == BigUint::from(0u8))
        .map(|f| g.edge_id(f).to_string())
        .collect();
    let refs: Vec<&str> = moved.iter().map(String::as_str).collect();
    let spec = ExpandSpec::new(g.vertex_id(v), "fresh.v", "fresh.e", &refs, n);
    let (x, _) = expand(g, &spec).map_err(|e| e.to_string())?;
    let e = x.edge("fresh.e").map_err(|e| e.to_string())?;
    let (back, _) = collapse(&x, e).map_err(|e| e.to_string())?;
    ensure(iso(&back, g), || format!("expand/collapse with n = {n} changes the graph"))
}

pub fn slide_is_expand_then_collapse(g: &EIGraph) -> Check {
    for e in collapsible(g) {
        let u = g.origin(e);
        for f in g.out_edges_sorted(u) {
            if f == e || f == g.inverse(e) {
                continue;
            }
            let (s, _) = slide(g, f, e).map_err(|x| x.to_string())?;
            let spec = ExpandSpec::new(
                g.vertex_id(u),
                "fresh.v",
                "fresh.e",
                &[g.edge_id(f), g.edge_id(e)],
                1,
            );
            let (x, _) = expand(g, &spec).map_err(|x| x.to_string())?;
            let moved = x.edge(g.edge_id(e)).map_err(|x| x.to_string())?;
            let (y, _) = collapse(&x, moved).map_err(|x| x.to_string())?;
            ensure(iso(&s, &y), || {
                format!("slide {} across {} differs", g.edge_id(f), g.edge_id(e))
            })?;
        }
    }
    Ok(())
}

fn cover_of(rec_witness: Option<MoveWitness>, out: &EIGraph, g: &EIGraph) -> Check {
    let Some(MoveWitness::Cover(map)) = rec_witness else {
        return Err("blow-up without a cover witness".into());
    };
    ensure(map.check().is_valid(), || "blow-up projection fails the cover check".into())?;
    ensure(map.domain.same_as(out) && map.codomain.same_as(g), || {
        "blow-up projection has the wrong ends".into()
    })
}

/// Standard blow-ups of every edge and a two-part general blow-up whose
/// first part is `(1 + split mod (a-1), 1)`.
pub fn blow_up_projections(g: &EIGraph, split: u64) -> Check {
    let one = BigUint::from(1u8);
    for e in 0..g.edge_count() {
        if g.representative(e) != e {
            continue;
        }
        if let Ok((out, rec)) = standard_blow_up(g, e) {
            cover_of(rec.witness, &out, g)?;
        }
        let (a, b) = (g.index(e).clone(), g.index(g.inverse(e)).clone());
        if a > one && b > one {
            let k = BigUint::from(split) % (&a - &one) + &one;
            let parts = [(k.clone(), one.clone()), (&a - &k, &b - &one)];
            let (out, rec) = general_blow_up(g, e, &parts).map_err(|x| x.to_string())?;
            cover_of(rec.witness, &out, g)?;
        }
    }
    Ok(())
}

pub fn blow_up_keeps_index_sum(g: &EIGraph) -> Check {
    for e in 0..g.edge_count() {
        if let Ok((out, _)) = standard_blow_up(g, e) {
            ensure(out.directed_index_sum() == g.directed_index_sum(), || {
                format!("blow-up of {} changes the directed index sum", g.edge_id(e))
            })?;
        }
    }
    Ok(())
}

pub fn minimal_collapses_keep_primes(g: &EIGraph) -> Check {
    let m = minimalize(g).map_err(|e| e.to_string())?.graph;
    if m.edge_count() == 0 {
        return Ok(());
    }
    let primes = invariant_primes(&m).map_err(|e| e.to_string())?;
    for e in collapsible(&m) {
        let (c, _) = collapse(&m, e).map_err(|x| x.to_string())?;
        if is_minimal(&c) {
            let after = invariant_primes(&c).map_err(|x| x.to_string())?;
            ensure(after == primes, || {
                format!("collapse of {} changes {primes:?} to {after:?}", m.edge_id(e))
            })?;
        }
    }
    Ok(())
}

pub const PROPERTIES: [&str; 6] = [
    "collapse/expand round trip",
    "expand/collapse round trip",
    "slide = expand then collapse",
    "blow-up projections are covers",
    "directed index sum under standard blow-up",
    "invariant primes across minimal collapses",
];

/// Runs every property on the graph drawn from `seed`.
pub fn all_properties(seed: u64) -> Vec<Check> {
    let g = graph_from(seed);
    vec![
        collapse_then_expand(&g),
        expand_then_collapse(&g, 1 + seed % 3),
        slide_is_expand_then_collapse(&g),
        blow_up_projections(&g, seed % 8 + 1),
        blow_up_keeps_index_sum(&g),
        minimal_collapses_keep_primes(&g),
    ]
}
