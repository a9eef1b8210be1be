//! Deformation moves: collapse, expansion, slide, blow-ups, subdivision and
//! the minimal and essential reductions.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::covers::CoveringMap;
use crate::eig::{DirectedEdge, EIGraph, IndexValue, IsoWitness};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    Collapse,
    Expand,
    Slide,
    StandardBlowUp,
    GeneralBlowUp,
    Subdivide,
    MinReduce,
    EssReduce,
    GraphCover,
}

/// Direction of the induced injection between fundamental groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arrow {
    IntoResult,
    IntoSource,
    Isomorphism,
}

/// Data needed to redo a move on its source graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum MoveParams {
    Collapse { edge: String },
    Expand(ExpandSpec),
    Slide { edge: String, across: String },
    StandardBlowUp { edge: String, new_edge: String },
    GeneralBlowUp {
        edge: String,
        parts: Vec<(IndexValue, IndexValue)>,
        new_edges: Vec<String>,
    },
    Subdivide { edge: String, new_vertex: String, new_edge: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveWitness {
    Cover(CoveringMap),
    Iso(IsoWitness),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub params: MoveParams,
    pub arrow: Arrow,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<MoveWitness>,
}

/// Expansion at `vertex`: the edges in `moved` leave for a new vertex
/// `new_vertex`, joined to `vertex` by a new edge indexed 1 at the new vertex
/// and `n` at `vertex`. Moved indices are divided by `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandSpec {
    pub vertex: String,
    pub new_vertex: String,
    /// Directed from the new vertex to `vertex`.
    pub new_edge: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub new_edge_inverse: Option<String>,
    pub moved: Vec<String>,
    pub n: IndexValue,
}

impl ExpandSpec {
    pub fn new(vertex: &str, new_vertex: &str, new_edge: &str, moved: &[&str], n: u64) -> Self {
        ExpandSpec {
            vertex: vertex.to_string(),
            new_vertex: new_vertex.to_string(),
            new_edge: new_edge.to_string(),
            new_edge_inverse: None,
            moved: moved.iter().map(|s| s.to_string()).collect(),
            n: IndexValue(BigUint::from(n)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveStep {
    pub record: MoveRecord,
    pub result: EIGraph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSequence {
    pub start: EIGraph,
    pub steps: Vec<MoveStep>,
}

impl MoveSequence {
    pub fn new(start: EIGraph) -> Self {
        MoveSequence {
            start,
            steps: Vec::new(),
        }
    }

    pub fn end(&self) -> &EIGraph {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.start)
    }

    pub fn push(&mut self, record: MoveRecord, result: EIGraph) {
        self.steps.push(MoveStep { record, result });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies a replayable move to the current end and appends it.
    pub fn apply(&mut self, params: &MoveParams) -> Result<&EIGraph> {
        let (g, rec) = apply(self.end(), params)?;
        self.push(rec, g);
        Ok(self.end())
    }

    /// Re-applies every step from `start` and compares the results exactly.
    pub fn replay(&self) -> Result<()> {
        let mut cur = self.start.clone();
        for (k, step) in self.steps.iter().enumerate() {
            let (g, _) = apply(&cur, &step.record.params)?;
            if !g.same_as(&step.result) {
                return Err(Error::Invalid(format!("step {k} does not reproduce its result")));
            }
            cur = g;
        }
        Ok(())
    }
}

/// Redoes a move from its parameters.
pub fn apply(g: &EIGraph, params: &MoveParams) -> Result<(EIGraph, MoveRecord)> {
    match params {
        MoveParams::Collapse { edge } => collapse(g, g.edge(edge)?),
        MoveParams::Expand(spec) => expand(g, spec),
        MoveParams::Slide { edge, across } => slide(g, g.edge(edge)?, g.edge(across)?),
        MoveParams::StandardBlowUp { edge, new_edge } => {
            standard_blow_up_named(g, g.edge(edge)?, new_edge)
        }
        MoveParams::GeneralBlowUp {
            edge,
            parts,
            new_edges,
        } => {
            let parts: Vec<(BigUint, BigUint)> =
                parts.iter().map(|(a, b)| (a.0.clone(), b.0.clone())).collect();
            general_blow_up_named(g, g.edge(edge)?, &parts, new_edges)
        }
        MoveParams::Subdivide {
            edge,
            new_vertex,
            new_edge,
        } => subdivide_named(g, g.edge(edge)?, new_vertex, new_edge),
    }
}

fn rebuild(vertices: &[String], edges: &[DirectedEdge], drop_vertex: Option<usize>) -> EIGraph {
    let remap: Vec<Option<usize>> = {
        let mut next = 0;
        (0..vertices.len())
            .map(|v| {
                if Some(v) == drop_vertex {
                    None
                } else {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect()
    };
    let vs = vertices
        .iter()
        .enumerate()
        .filter(|(v, _)| Some(*v) != drop_vertex)
        .map(|(_, s)| s.clone())
        .collect();
    let es = edges
        .iter()
        .map(|e| DirectedEdge {
            origin: remap[e.origin].expect("no edge at dropped vertex"),
            ..e.clone()
        })
        .collect();
    EIGraph::from_raw(vs, es)
}

/// Removes the directed pair at positions `a` and `b`, fixing inverse links.
fn drop_pair(edges: Vec<DirectedEdge>, a: usize, b: usize) -> Vec<DirectedEdge> {
    let shift = |k: usize| k - usize::from(k > a) - usize::from(k > b);
    edges
        .into_iter()
        .enumerate()
        .filter(|(k, _)| *k != a && *k != b)
        .map(|(_, mut e)| {
            e.inverse = shift(e.inverse);
            e
        })
        .collect()
}

fn push_pair(
    edges: &mut Vec<DirectedEdge>,
    id: &str,
    inv_id: &str,
    from: usize,
    to: usize,
    a: BigUint,
    b: BigUint,
) {
    let k = edges.len();
    edges.push(DirectedEdge {
        id: id.to_string(),
        origin: from,
        inverse: k + 1,
        index: a,
    });
    edges.push(DirectedEdge {
        id: inv_id.to_string(),
        origin: to,
        inverse: k,
        index: b,
    });
}

/// First of `base`, `base'`, `base''`, ... unused as an edge id (together
/// with its `!` partner).
pub fn fresh_edge_id(g: &EIGraph, base: &str) -> String {
    let mut id = base.to_string();
    while g.edge(&id).is_ok() || g.edge(&format!("{id}!")).is_ok() {
        id.push('\'');
    }
    id
}

pub fn fresh_vertex_id(g: &EIGraph, base: &str) -> String {
    let mut id = base.to_string();
    while g.vertex(&id).is_ok() {
        id.push('\'');
    }
    id
}

/// Collapses the non-loop edge `e` with `i(e) = 1`: its origin is merged
/// into its terminus and edges leaving the origin are multiplied by `i(ē)`.
/// Removing a hair leaves the group unchanged.
pub fn collapse(g: &EIGraph, e: usize) -> Result<(EIGraph, MoveRecord)> {
    if g.is_loop(e) || !g.index(e).is_one() {
        return Err(Error::NotCollapsible(g.edge_id(e).to_string()));
    }
    let ebar = g.inverse(e);
    let (u, w) = (g.origin(e), g.terminus(e));
    let n = g.index(ebar).clone();
    let mut edges = g.edges().to_vec();
    for f in edges.iter_mut() {
        if f.origin == u {
            f.origin = w;
            f.index *= &n;
        }
    }
    let edges = drop_pair(edges, e, ebar);
    let out = rebuild(g.vertices(), &edges, Some(u));
    let arrow = if n.is_one() || g.out_edges(u).len() == 1 {
        Arrow::Isomorphism
    } else {
        Arrow::IntoResult
    };
    Ok((
        out,
        MoveRecord {
            kind: MoveKind::Collapse,
            params: MoveParams::Collapse {
                edge: g.edge_id(e).to_string(),
            },
            arrow,
            witness: None,
        },
    ))
}

pub fn expand(g: &EIGraph, spec: &ExpandSpec) -> Result<(EIGraph, MoveRecord)> {
    let v = g.vertex(&spec.vertex)?;
    let n = &spec.n.0;
    if n.is_zero() {
        return Err(Error::Invalid("expansion divisor must be >= 1".into()));
    }
    if g.vertex(&spec.new_vertex).is_ok() {
        return Err(Error::Invalid(format!(
            "vertex `{}` already exists",
            spec.new_vertex
        )));
    }
    let inv_id = spec
        .new_edge_inverse
        .clone()
        .unwrap_or_else(|| format!("{}!", spec.new_edge));
    for id in [&spec.new_edge, &inv_id] {
        if g.edge(id).is_ok() {
            return Err(Error::Invalid(format!("edge `{id}` already exists")));
        }
    }
    let mut moved = BTreeSet::new();
    for id in &spec.moved {
        let f = g.edge(id)?;
        if g.origin(f) != v {
            return Err(Error::Invalid(format!(
                "edge `{id}` does not start at `{}`",
                spec.vertex
            )));
        }
        let (_, r) = g.index(f).div_rem(n);
        if !r.is_zero() {
            return Err(Error::NonDivisibleIndex {
                edge: id.clone(),
                index: g.index(f).to_string(),
                divisor: n.to_string(),
            });
        }
        moved.insert(f);
    }
    let mut vertices = g.vertices().to_vec();
    vertices.push(spec.new_vertex.clone());
    let w = vertices.len() - 1;
    let mut edges = g.edges().to_vec();
    for &f in &moved {
        edges[f].origin = w;
        edges[f].index = g.index(f) / n;
    }
    push_pair(
        &mut edges,
        &spec.new_edge,
        &inv_id,
        w,
        v,
        BigUint::one(),
        n.clone(),
    );
    let out = EIGraph::from_raw(vertices, edges);
    let arrow = if n.is_one() {
        Arrow::Isomorphism
    } else {
        Arrow::IntoSource
    };
    Ok((
        out,
        MoveRecord {
            kind: MoveKind::Expand,
            params: MoveParams::Expand(spec.clone()),
            arrow,
            witness: None,
        },
    ))
}

/// The expansion that undoes `collapse(g, e)`, reusing the original ids.
pub fn uncollapse_spec(g: &EIGraph, e: usize) -> ExpandSpec {
    let u = g.origin(e);
    ExpandSpec {
        vertex: g.vertex_id(g.terminus(e)).to_string(),
        new_vertex: g.vertex_id(u).to_string(),
        new_edge: g.edge_id(e).to_string(),
        new_edge_inverse: Some(g.edge_id(g.inverse(e)).to_string()),
        moved: g
            .out_edges_sorted(u)
            .into_iter()
            .filter(|&f| f != e)
            .map(|f| g.edge_id(f).to_string())
            .collect(),
        n: IndexValue(g.index(g.inverse(e)).clone()),
    }
}

/// Slides `f` across the non-loop edge `e` (same origin, `i(e) = 1`).
pub fn slide(g: &EIGraph, f: usize, e: usize) -> Result<(EIGraph, MoveRecord)> {
    let fail = |m: &str| Err(Error::SlidePreconditionFailed(m.to_string()));
    if g.origin(e) != g.origin(f) {
        return fail("edges must share their origin");
    }
    if !g.index(e).is_one() {
        return fail("the edge slid across must have index 1");
    }
    if f == e || f == g.inverse(e) {
        return fail("cannot slide an edge across itself");
    }
    if g.is_loop(e) {
        return fail("the edge slid across must not be a loop");
    }
    let mut edges = g.edges().to_vec();
    edges[f].origin = g.terminus(e);
    edges[f].index = g.index(f) * g.index(g.inverse(e));
    let arrow = if g.index(g.inverse(e)).is_one() {
        Arrow::Isomorphism
    } else {
        Arrow::IntoResult
    };
    Ok((
        EIGraph::from_raw(g.vertices().to_vec(), edges),
        MoveRecord {
            kind: MoveKind::Slide,
            params: MoveParams::Slide {
                edge: g.edge_id(f).to_string(),
                across: g.edge_id(e).to_string(),
            },
            arrow,
            witness: None,
        },
    ))
}

/// Splits `{e, ē}` into parallel edges with the given index pairs (oriented
/// like `e`). The first part keeps the ids of `e`; the others get the
/// default names `<rep>.b1`, `<rep>.b2`, ...
pub fn general_blow_up(
    g: &EIGraph,
    e: usize,
    parts: &[(BigUint, BigUint)],
) -> Result<(EIGraph, MoveRecord)> {
    let rep = g.edge_id(g.representative(e)).to_string();
    let mut names = Vec::new();
    let mut taken = BTreeSet::new();
    for t in 1..parts.len() {
        let mut id = fresh_edge_id(g, &format!("{rep}.b{t}"));
        while taken.contains(&id) {
            id.push('\'');
        }
        taken.insert(id.clone());
        names.push(id);
    }
    general_blow_up_named(g, e, parts, &names)
}

pub fn general_blow_up_named(
    g: &EIGraph,
    e: usize,
    parts: &[(BigUint, BigUint)],
    new_edges: &[String],
) -> Result<(EIGraph, MoveRecord)> {
    let ebar = g.inverse(e);
    let sa: BigUint = parts.iter().map(|p| &p.0).sum();
    let sb: BigUint = parts.iter().map(|p| &p.1).sum();
    if parts.is_empty()
        || parts.iter().any(|(a, b)| a.is_zero() || b.is_zero())
        || &sa != g.index(e)
        || &sb != g.index(ebar)
    {
        return Err(Error::PartitionMismatch(g.edge_id(e).to_string()));
    }
    if new_edges.len() + 1 != parts.len() {
        return Err(Error::Invalid("one new edge id is needed per extra part".into()));
    }
    let mut edges = g.edges().to_vec();
    edges[e].index = parts[0].0.clone();
    edges[ebar].index = parts[0].1.clone();
    let (from, to) = (g.origin(e), g.terminus(e));
    let mut emap: BTreeMap<String, String> = g
        .edges()
        .iter()
        .map(|d| (d.id.clone(), d.id.clone()))
        .collect();
    for (id, (a, b)) in new_edges.iter().zip(&parts[1..]) {
        let inv = format!("{id}!");
        if g.edge(id).is_ok() || g.edge(&inv).is_ok() || emap.contains_key(id) {
            return Err(Error::Invalid(format!("edge `{id}` already exists")));
        }
        push_pair(&mut edges, id, &inv, from, to, a.clone(), b.clone());
        emap.insert(id.clone(), g.edge_id(e).to_string());
        emap.insert(inv, g.edge_id(ebar).to_string());
    }
    let out = EIGraph::from_raw(g.vertices().to_vec(), edges);
    let cover = CoveringMap {
        domain: out.clone(),
        codomain: g.clone(),
        vmap: g.vertices().iter().map(|v| (v.clone(), v.clone())).collect(),
        emap,
    };
    Ok((
        out,
        MoveRecord {
            kind: MoveKind::GeneralBlowUp,
            params: MoveParams::GeneralBlowUp {
                edge: g.edge_id(e).to_string(),
                parts: parts
                    .iter()
                    .map(|(a, b)| (IndexValue(a.clone()), IndexValue(b.clone())))
                    .collect(),
                new_edges: new_edges.to_vec(),
            },
            arrow: Arrow::IntoSource,
            witness: Some(MoveWitness::Cover(cover)),
        },
    ))
}

/// `(m, n)` becomes `(m-1, n-1)` plus a parallel `(1, 1)` edge `<rep>.b1`.
pub fn standard_blow_up(g: &EIGraph, e: usize) -> Result<(EIGraph, MoveRecord)> {
    let rep = g.edge_id(g.representative(e));
    let name = fresh_edge_id(g, &format!("{rep}.b1"));
    standard_blow_up_named(g, e, &name)
}

pub fn standard_blow_up_named(
    g: &EIGraph,
    e: usize,
    new_edge: &str,
) -> Result<(EIGraph, MoveRecord)> {
    let one = BigUint::one();
    let (m, n) = (g.index(e), g.index(g.inverse(e)));
    if m <= &one || n <= &one {
        return Err(Error::IndexTooSmall(g.edge_id(e).to_string()));
    }
    let parts = [(m - &one, n - &one), (one.clone(), one.clone())];
    let (out, mut rec) = general_blow_up_named(g, e, &parts, &[new_edge.to_string()])?;
    rec.kind = MoveKind::StandardBlowUp;
    rec.params = MoveParams::StandardBlowUp {
        edge: g.edge_id(e).to_string(),
        new_edge: new_edge.to_string(),
    };
    Ok((out, rec))
}

/// Inserts a midpoint on `e`: `e` keeps `(i(e), 1)` up to the midpoint and
/// a new edge `<rep>.s` carries `(1, i(ē))` onwards.
pub fn subdivide(g: &EIGraph, e: usize) -> Result<(EIGraph, MoveRecord)> {
    let rep = g.edge_id(g.representative(e));
    let w = fresh_vertex_id(g, &format!("{rep}.m"));
    let x = fresh_edge_id(g, &format!("{rep}.s"));
    subdivide_named(g, e, &w, &x)
}

pub fn subdivide_named(
    g: &EIGraph,
    e: usize,
    new_vertex: &str,
    new_edge: &str,
) -> Result<(EIGraph, MoveRecord)> {
    let ebar = g.inverse(e);
    let spec = ExpandSpec {
        vertex: g.vertex_id(g.terminus(e)).to_string(),
        new_vertex: new_vertex.to_string(),
        new_edge: new_edge.to_string(),
        new_edge_inverse: None,
        moved: vec![g.edge_id(ebar).to_string()],
        n: IndexValue(g.index(ebar).clone()),
    };
    let (out, mut rec) = expand(g, &spec)?;
    rec.kind = MoveKind::Subdivide;
    rec.params = MoveParams::Subdivide {
        edge: g.edge_id(e).to_string(),
        new_vertex: new_vertex.to_string(),
        new_edge: new_edge.to_string(),
    };
    rec.arrow = Arrow::IntoSource;
    Ok((out, rec))
}

/// A vertex with a single outgoing edge, of index 1.
pub fn find_hair(g: &EIGraph) -> Option<usize> {
    g.vertices_sorted().into_iter().find_map(|v| match g.out_edges(v) {
        [f] if g.index(*f).is_one() => Some(*f),
        _ => None,
    })
}

/// A vertex with exactly two outgoing edges, both of index 1 and not the
/// two ends of one loop; returns the smaller edge id.
pub fn find_inessential(g: &EIGraph) -> Option<usize> {
    g.vertices_sorted().into_iter().find_map(|v| {
        let es = g.out_edges_sorted(v);
        match es.as_slice() {
            [a, b] if g.index(*a).is_one() && g.index(*b).is_one() && g.inverse(*a) != *b => {
                Some(*a)
            }
            _ => None,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub graph: EIGraph,
    pub sequence: MoveSequence,
    /// Every edge was collapsed away.
    pub degenerate: bool,
}

fn reduce(g: &EIGraph, essential: bool) -> Result<Reduction> {
    let mut seq = MoveSequence::new(g.clone());
    loop {
        let cur = seq.end().clone();
        let (e, kind) = if let Some(e) = find_hair(&cur) {
            (e, MoveKind::MinReduce)
        } else if let Some(e) = find_inessential(&cur).filter(|_| essential) {
            (e, MoveKind::EssReduce)
        } else {
            break;
        };
        let (next, mut rec) = collapse(&cur, e)?;
        rec.kind = kind;
        seq.push(rec, next);
    }
    let graph = seq.end().clone();
    Ok(Reduction {
        degenerate: graph.edge_count() == 0,
        graph,
        sequence: seq,
    })
}

/// Removes index-1 hairs until none remain (smallest vertex id first).
pub fn minimalize(g: &EIGraph) -> Result<Reduction> {
    reduce(g, false)
}

/// Minimalizes and also collapses inessential vertices.
pub fn essentialize(g: &EIGraph) -> Result<Reduction> {
    reduce(g, true)
}

pub fn is_minimal(g: &EIGraph) -> bool {
    find_hair(g).is_none()
}

pub fn is_essential(g: &EIGraph) -> bool {
    find_hair(g).is_none() && find_inessential(g).is_none()
}

/// Collapses index-1 non-loop edges (smallest id first) until none remain.
pub fn collapse_all_unit_edges(g: &EIGraph) -> Result<MoveSequence> {
    let mut seq = MoveSequence::new(g.clone());
    loop {
        let cur = seq.end();
        let mut es: Vec<usize> = (0..cur.edge_count())
            .filter(|&e| !cur.is_loop(e) && cur.index(e).is_one())
            .collect();
        es.sort_by(|a, b| cur.edge_id(*a).cmp(cur.edge_id(*b)));
        let Some(&e) = es.first() else { break };
        let (next, rec) = collapse(cur, e)?;
        seq.push(rec, next);
    }
    Ok(seq)
}
