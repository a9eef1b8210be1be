//! Edge-indexed graphs.
//!
//! A graph is stored by its directed edges: every directed edge knows its
//! origin and its inverse, and the terminus is the origin of the inverse.
//! Each directed edge carries a positive index `i(e)`. Geometric edges are a
//! derived view over inverse pairs.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exhaustive isomorphism search refuses graphs larger than this.
pub const ISO_VERTEX_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedEdge {
    pub id: String,
    pub origin: usize,
    pub inverse: usize,
    pub index: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EIGraph {
    vertices: Vec<String>,
    edges: Vec<DirectedEdge>,
    out: Vec<Vec<usize>>,
    vertex_ids: HashMap<String, usize>,
    edge_ids: HashMap<String, usize>,
}

/// Unordered pair `{e, ē}` seen from its representative direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricEdge {
    pub rep: usize,
    pub inverse: usize,
    pub from: usize,
    pub to: usize,
    pub idx_at_from: BigUint,
    pub idx_at_to: BigUint,
    pub is_loop: bool,
}

impl EIGraph {
    /// Builds a graph from raw parts without checking anything; use
    /// [`EIGraph::validate`] to list violations.
    pub fn from_raw(vertices: Vec<String>, edges: Vec<DirectedEdge>) -> Self {
        let mut out = vec![Vec::new(); vertices.len()];
        for (k, e) in edges.iter().enumerate() {
            if e.origin < vertices.len() {
                out[e.origin].push(k);
            }
        }
        let vertex_ids = vertices
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), k))
            .collect();
        let edge_ids = edges
            .iter()
            .enumerate()
            .map(|(k, e)| (e.id.clone(), k))
            .collect();
        EIGraph {
            vertices,
            edges,
            out,
            vertex_ids,
            edge_ids,
        }
    }

    pub fn builder() -> EIGraphBuilder {
        EIGraphBuilder::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edges[e].id
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vertex_ids
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge(&self, id: &str) -> Result<usize> {
        self.edge_ids
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn origin(&self, e: usize) -> usize {
        self.edges[e].origin
    }

    pub fn inverse(&self, e: usize) -> usize {
        self.edges[e].inverse
    }

    pub fn terminus(&self, e: usize) -> usize {
        self.edges[self.edges[e].inverse].origin
    }

    pub fn index(&self, e: usize) -> &BigUint {
        &self.edges[e].index
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.origin(e) == self.terminus(e)
    }

    /// Outgoing directed edges at `v`, in storage order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Outgoing edges sorted by edge id.
    pub fn out_edges_sorted(&self, v: usize) -> Vec<usize> {
        let mut es = self.out[v].clone();
        es.sort_by(|a, b| self.edges[*a].id.cmp(&self.edges[*b].id));
        es
    }

    /// Vertex indices sorted by id.
    pub fn vertices_sorted(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = (0..self.vertices.len()).collect();
        vs.sort_by(|a, b| self.vertices[*a].cmp(&self.vertices[*b]));
        vs
    }

    /// Sum of outgoing indices at `v`: the degree of every universal-cover
    /// vertex above `v`.
    pub fn cover_degree(&self, v: usize) -> BigUint {
        self.out[v].iter().map(|&e| &self.edges[e].index).sum()
    }

    pub fn degree_profile(&self) -> BTreeMap<String, BigUint> {
        (0..self.vertices.len())
            .map(|v| (self.vertices[v].clone(), self.cover_degree(v)))
            .collect()
    }

    /// Sum of `i(e)` over all directed edges.
    pub fn directed_index_sum(&self) -> BigUint {
        self.edges.iter().map(|e| &e.index).sum()
    }

    pub fn geometric_edge_count(&self) -> usize {
        self.edges.len() / 2
    }

    /// First Betti number of the underlying graph (assumes connected).
    pub fn betti_number(&self) -> usize {
        (self.geometric_edge_count() + 1).saturating_sub(self.vertices.len())
    }

    /// Representative direction of the pair containing `e`: the edge whose
    /// inverse id is its own id suffixed with `!`, otherwise the smaller id.
    pub fn representative(&self, e: usize) -> usize {
        let f = self.inverse(e);
        let (a, b) = (&self.edges[e].id, &self.edges[f].id);
        if b.len() == a.len() + 1 && b.starts_with(a.as_str()) && b.ends_with('!') {
            e
        } else if a.len() == b.len() + 1 && a.starts_with(b.as_str()) && a.ends_with('!') {
            f
        } else if a <= b {
            e
        } else {
            f
        }
    }

    pub fn geometric_edges(&self) -> Vec<GeometricEdge> {
        (0..self.edges.len())
            .filter(|&e| self.representative(e) == e)
            .map(|e| self.geometric(e))
            .collect()
    }

    pub fn geometric(&self, e: usize) -> GeometricEdge {
        let f = self.inverse(e);
        GeometricEdge {
            rep: e,
            inverse: f,
            from: self.origin(e),
            to: self.origin(f),
            idx_at_from: self.edges[e].index.clone(),
            idx_at_to: self.edges[f].index.clone(),
            is_loop: self.origin(e) == self.origin(f),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        self.reachable_from(0, |_| true).iter().all(|&r| r)
    }

    /// Removing the geometric edge of `e` keeps the graph connected.
    pub fn is_non_separating(&self, e: usize) -> bool {
        let ebar = self.inverse(e);
        self.reachable_from(0, |f| f != e && f != ebar)
            .iter()
            .all(|&r| r)
    }

    /// Vertices reachable from `start` using only edges accepted by `allow`.
    pub fn reachable_from(&self, start: usize, allow: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &e in &self.out[v] {
                if !allow(e) {
                    continue;
                }
                let w = self.terminus(e);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Breadth-first spanning tree from the lexicographically smallest vertex,
    /// exploring edges in id order. Returns one directed edge per tree edge
    /// (pointing away from the root) restricted to edges accepted by `allow`.
    pub fn spanning_tree(&self, allow: impl Fn(usize) -> bool) -> Vec<usize> {
        let Some(&root) = self.vertices_sorted().first() else {
            return Vec::new();
        };
        let mut seen = vec![false; self.vertices.len()];
        let mut tree = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for e in self.out_edges_sorted(v) {
                if !allow(e) {
                    continue;
                }
                let w = self.terminus(e);
                if !seen[w] {
                    seen[w] = true;
                    tree.push(e);
                    queue.push_back(w);
                }
            }
        }
        tree
    }

    /// Structural equality on ids: same vertex ids, and every edge id has the
    /// same origin id, inverse id and index. Storage order is ignored.
    pub fn same_as(&self, other: &EIGraph) -> bool {
        if self.vertices.len() != other.vertices.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        if self.vertices.iter().any(|v| !other.vertex_ids.contains_key(v)) {
            return false;
        }
        self.edges.iter().all(|e| match other.edge_ids.get(&e.id) {
            None => false,
            Some(&k) => {
                let f = &other.edges[k];
                f.index == e.index
                    && other.vertices[f.origin] == self.vertices[e.origin]
                    && other.edges[f.inverse].id == self.edges[e.inverse].id
            }
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let nv = self.vertices.len();
        let ne = self.edges.len();
        if nv == 0 {
            violations.push(Violation::new(ViolationKind::Empty, "graph has no vertices"));
        }
        if self.vertex_ids.len() != nv {
            violations.push(Violation::new(
                ViolationKind::DuplicateId,
                "vertex ids must be distinct",
            ));
        }
        if self.edge_ids.len() != ne {
            violations.push(Violation::new(
                ViolationKind::DuplicateId,
                "edge ids must be distinct",
            ));
        }
        let mut structural_ok = true;
        for (k, e) in self.edges.iter().enumerate() {
            if e.origin >= nv {
                structural_ok = false;
                violations.push(Violation::at_edge(
                    ViolationKind::DanglingVertex,
                    &e.id,
                    "origin is not a vertex",
                ));
            }
            if e.inverse >= ne {
                structural_ok = false;
                violations.push(Violation::at_edge(
                    ViolationKind::Involution,
                    &e.id,
                    "inverse is not an edge",
                ));
                continue;
            }
            if e.inverse == k {
                structural_ok = false;
                violations.push(Violation::at_edge(
                    ViolationKind::Involution,
                    &e.id,
                    "inverse must not be a fixed point",
                ));
            } else if self.edges[e.inverse].inverse != k {
                structural_ok = false;
                violations.push(Violation::at_edge(
                    ViolationKind::Involution,
                    &e.id,
                    "inverse(inverse(e)) != e",
                ));
            }
            if e.index.is_zero() {
                violations.push(Violation::at_edge(
                    ViolationKind::IndexNotPositive,
                    &e.id,
                    "index must be >= 1",
                ));
            }
        }
        if structural_ok && nv > 0 && !self.is_connected() {
            violations.push(Violation::new(
                ViolationKind::Disconnected,
                "graph must be connected",
            ));
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::Invalid(report.to_string()))
        }
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertices.clone(),
            edges: self
                .geometric_edges()
                .into_iter()
                .map(|g| EdgeEntry {
                    id: self.edges[g.rep].id.clone(),
                    from: self.vertices[g.from].clone(),
                    to: self.vertices[g.to].clone(),
                    idx_at_from: IndexValue(g.idx_at_from),
                    idx_at_to: IndexValue(g.idx_at_to),
                    inverse_id: {
                        let inv = &self.edges[g.inverse].id;
                        (*inv != format!("{}!", self.edges[g.rep].id)).then(|| inv.clone())
                    },
                })
                .collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let mut b = EIGraph::builder();
        for v in &file.vertices {
            b.vertex(v);
        }
        for e in &file.edges {
            let from = b
                .lookup(&e.from)
                .ok_or_else(|| Error::UnknownVertex(e.from.clone()))?;
            let to = b
                .lookup(&e.to)
                .ok_or_else(|| Error::UnknownVertex(e.to.clone()))?;
            let inv = e.inverse_id.clone().unwrap_or_else(|| format!("{}!", e.id));
            b.edge_pair(
                &e.id,
                &inv,
                from,
                to,
                e.idx_at_from.0.clone(),
                e.idx_at_to.0.clone(),
            );
        }
        Ok(b.build())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        EIGraph::from_file(&file)
    }

    /// Single vertex with one loop indexed `(a, b)`.
    pub fn single_loop(a: u64, b: u64) -> Self {
        let mut g = EIGraph::builder();
        let v = g.vertex("v");
        g.edge("e", v, v, a, b);
        g.build()
    }
}

impl Serialize for EIGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for EIGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = GraphFile::deserialize(d)?;
        EIGraph::from_file(&file).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for EIGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices;", self.vertices.len())?;
        for g in self.geometric_edges() {
            write!(
                f,
                " {}:{}-{}({},{})",
                self.edges[g.rep].id,
                self.vertices[g.from],
                self.vertices[g.to],
                g.idx_at_from,
                g.idx_at_to
            )?;
        }
        Ok(())
    }
}

/// Interchange format: vertices plus geometric edges.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeEntry {
    pub id: String,
    pub from: String,
    pub to: String,
    pub idx_at_from: IndexValue,
    pub idx_at_to: IndexValue,
    /// Only present when the inverse is not named `<id>!`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse_id: Option<String>,
}

/// Arbitrary-precision index, written as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexValue(pub BigUint);

impl Serialize for IndexValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for IndexValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(u64),
        }
        match Raw::deserialize(d)? {
            Raw::Number(n) => Ok(IndexValue(BigUint::from(n))),
            Raw::Text(t) => t
                .trim()
                .parse::<BigUint>()
                .map(IndexValue)
                .map_err(|_| serde::de::Error::custom(format!("bad index `{t}`"))),
        }
    }
}

#[derive(Default)]
pub struct EIGraphBuilder {
    vertices: Vec<String>,
    vertex_ids: HashMap<String, usize>,
    edges: Vec<DirectedEdge>,
}

impl EIGraphBuilder {
    /// Adds a vertex (or returns the existing one with that id).
    pub fn vertex(&mut self, id: &str) -> usize {
        if let Some(&v) = self.vertex_ids.get(id) {
            return v;
        }
        self.vertices.push(id.to_string());
        self.vertex_ids.insert(id.to_string(), self.vertices.len() - 1);
        self.vertices.len() - 1
    }

    pub fn lookup(&self, id: &str) -> Option<usize> {
        self.vertex_ids.get(id).copied()
    }

    /// Adds the geometric edge `id` from `from` to `to`; its inverse is `id!`.
    pub fn edge(
        &mut self,
        id: &str,
        from: usize,
        to: usize,
        idx_at_from: impl Into<BigUint>,
        idx_at_to: impl Into<BigUint>,
    ) -> usize {
        let inv = format!("{id}!");
        self.edge_pair(id, &inv, from, to, idx_at_from.into(), idx_at_to.into())
    }

    /// Adds a directed pair with explicit ids; returns the index of `id`.
    pub fn edge_pair(
        &mut self,
        id: &str,
        inverse_id: &str,
        from: usize,
        to: usize,
        idx_at_from: BigUint,
        idx_at_to: BigUint,
    ) -> usize {
        let k = self.edges.len();
        self.edges.push(DirectedEdge {
            id: id.to_string(),
            origin: from,
            inverse: k + 1,
            index: idx_at_from,
        });
        self.edges.push(DirectedEdge {
            id: inverse_id.to_string(),
            origin: to,
            inverse: k,
            index: idx_at_to,
        });
        k
    }

    pub fn build(self) -> EIGraph {
        EIGraph::from_raw(self.vertices, self.edges)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    Empty,
    DuplicateId,
    DanglingVertex,
    Involution,
    IndexNotPositive,
    Disconnected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub edge: Option<String>,
    pub message: String,
}

impl Violation {
    fn new(kind: ViolationKind, message: &str) -> Self {
        Violation {
            kind,
            edge: None,
            message: message.to_string(),
        }
    }

    fn at_edge(kind: ViolationKind, edge: &str, message: &str) -> Self {
        Violation {
            kind,
            edge: Some(edge.to_string()),
            message: message.to_string(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            match &v.edge {
                Some(e) => write!(f, "{}: {}", e, v.message)?,
                None => write!(f, "{}", v.message)?,
            }
        }
        Ok(())
    }
}

/// Vertex and directed-edge bijections `g -> h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoWitness {
    pub vmap: BTreeMap<String, String>,
    pub emap: BTreeMap<String, String>,
}

impl IsoWitness {
    pub fn inverse(&self) -> IsoWitness {
        IsoWitness {
            vmap: self.vmap.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            emap: self.emap.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    pub fn compose(&self, then: &IsoWitness) -> Option<IsoWitness> {
        let vmap = self
            .vmap
            .iter()
            .map(|(a, b)| then.vmap.get(b).map(|c| (a.clone(), c.clone())))
            .collect::<Option<_>>()?;
        let emap = self
            .emap
            .iter()
            .map(|(a, b)| then.emap.get(b).map(|c| (a.clone(), c.clone())))
            .collect::<Option<_>>()?;
        Some(IsoWitness { vmap, emap })
    }

    /// Checks that the maps are bijections commuting with origin and inverse
    /// and preserving indices.
    pub fn check(&self, g: &EIGraph, h: &EIGraph) -> bool {
        if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
            return false;
        }
        if self.vmap.len() != g.vertex_count() || self.emap.len() != g.edge_count() {
            return false;
        }
        let mut vimg = std::collections::HashSet::new();
        for (a, b) in &self.vmap {
            if g.vertex(a).is_err() || h.vertex(b).is_err() || !vimg.insert(b) {
                return false;
            }
        }
        let mut eimg = std::collections::HashSet::new();
        for (a, b) in &self.emap {
            let (Ok(e), Ok(f)) = (g.edge(a), h.edge(b)) else {
                return false;
            };
            if !eimg.insert(b) || g.index(e) != h.index(f) {
                return false;
            }
            if self.vmap[g.vertex_id(g.origin(e))] != h.vertex_id(h.origin(f)) {
                return false;
            }
            match self.emap.get(g.edge_id(g.inverse(e))) {
                Some(fi) if fi == h.edge_id(h.inverse(f)) => {}
                _ => return false,
            }
        }
        true
    }
}

/// Index-preserving isomorphism search, pruned by cover degree, out-degree
/// and the multiset of outgoing index pairs.
pub fn isomorphic(g: &EIGraph, h: &EIGraph) -> Result<Option<IsoWitness>> {
    for x in [g, h] {
        if x.vertex_count() > ISO_VERTEX_CAP {
            return Err(Error::SizeExceeded {
                actual: x.vertex_count(),
                cap: ISO_VERTEX_CAP,
            });
        }
    }
    Ok(isomorphic_uncapped(g, h))
}

pub(crate) fn isomorphic_uncapped(g: &EIGraph, h: &EIGraph) -> Option<IsoWitness> {
    let vc = |x: &EIGraph| -> Vec<(BigUint, Vec<(BigUint, BigUint)>)> {
        (0..x.vertex_count())
            .map(|v| {
                let mut sig: Vec<_> = x
                    .out_edges(v)
                    .iter()
                    .map(|&e| (x.index(e).clone(), x.index(x.inverse(e)).clone()))
                    .collect();
                sig.sort();
                (x.cover_degree(v), sig)
            })
            .collect()
    };
    let ec = |x: &EIGraph| -> Vec<BigUint> { x.edges().iter().map(|e| e.index.clone()).collect() };
    find_isomorphism(g, h, &vc(g), &vc(h), &ec(g), &ec(h))
}

/// Generic colored isomorphism search. Vertices of `g` are assigned in id
/// order, candidates tried in id order, so the first witness is the
/// lexicographically least vertex assignment.
pub fn find_isomorphism<VC: Ord, EC: Ord + Clone>(
    g: &EIGraph,
    h: &EIGraph,
    vcol_g: &[VC],
    vcol_h: &[VC],
    ecol_g: &[EC],
    ecol_h: &[EC],
) -> Option<IsoWitness> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut cg: Vec<&VC> = vcol_g.iter().collect();
    let mut ch: Vec<&VC> = vcol_h.iter().collect();
    cg.sort();
    ch.sort();
    if cg != ch {
        return None;
    }
    let order = g.vertices_sorted();
    let cands = h.vertices_sorted();
    // signature multiset of edges from a to b
    let sig = |x: &EIGraph, ec: &[EC], a: usize, b: usize| -> Vec<(EC, EC)> {
        let mut s: Vec<(EC, EC)> = x
            .out_edges(a)
            .iter()
            .filter(|&&e| x.terminus(e) == b)
            .map(|&e| (ec[e].clone(), ec[x.inverse(e)].clone()))
            .collect();
        s.sort();
        s
    };
    let mut assign: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut used = vec![false; h.vertex_count()];

    fn search<VC: Ord, EC: Ord + Clone>(
        depth: usize,
        order: &[usize],
        cands: &[usize],
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(usize, usize, &[Option<usize>]) -> bool,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let v = order[depth];
        for &w in cands {
            if used[w] || !ok(v, w, assign) {
                continue;
            }
            assign[v] = Some(w);
            used[w] = true;
            if search::<VC, EC>(depth + 1, order, cands, assign, used, ok) {
                return true;
            }
            assign[v] = None;
            used[w] = false;
        }
        false
    }

    let ok = |v: usize, w: usize, assign: &[Option<usize>]| -> bool {
        if vcol_g[v] != vcol_h[w] {
            return false;
        }
        if sig(g, ecol_g, v, v) != sig(h, ecol_h, w, w) {
            return false;
        }
        for (u, a) in assign.iter().enumerate() {
            if let Some(x) = a {
                if sig(g, ecol_g, v, u) != sig(h, ecol_h, w, *x) {
                    return false;
                }
            }
        }
        true
    };
    if !search::<VC, EC>(0, &order, &cands, &mut assign, &mut used, &ok) {
        return None;
    }
    let vmap: Vec<usize> = assign.into_iter().map(|a| a.expect("assigned")).collect();

    // Edge bijection: pair edges with equal signatures between matched
    // endpoints, in id order; inverses follow.
    let mut emap: Vec<Option<usize>> = vec![None; g.edge_count()];
    for e in 0..g.edge_count() {
        if emap[e].is_some() {
            continue;
        }
        let (a, b) = (g.origin(e), g.terminus(e));
        let key = (ecol_g[e].clone(), ecol_g[g.inverse(e)].clone());
        let pick = |x: &EIGraph, ec: &[EC], p: usize, q: usize, taken: &dyn Fn(usize) -> bool| {
            let mut es: Vec<usize> = x
                .out_edges(p)
                .iter()
                .copied()
                .filter(|&f| x.terminus(f) == q)
                .filter(|&f| (ec[f].clone(), ec[x.inverse(f)].clone()) == key)
                .filter(|&f| !taken(f))
                .collect();
            es.sort_by(|s, t| x.edge_id(*s).cmp(x.edge_id(*t)));
            es
        };
        let taken_h: std::collections::HashSet<usize> = emap.iter().flatten().copied().collect();
        let cand = pick(h, ecol_h, vmap[a], vmap[b], &|f| taken_h.contains(&f));
        let f = *cand.first()?;
        emap[e] = Some(f);
        emap[g.inverse(e)] = Some(h.inverse(f));
    }
    let witness = IsoWitness {
        vmap: (0..g.vertex_count())
            .map(|v| (g.vertex_id(v).to_string(), h.vertex_id(vmap[v]).to_string()))
            .collect(),
        emap: (0..g.edge_count())
            .map(|e| {
                (
                    g.edge_id(e).to_string(),
                    h.edge_id(emap[e].expect("mapped")).to_string(),
                )
            })
            .collect(),
    };
    Some(witness)
}

pub fn to_u64(x: &BigUint) -> Option<u64> {
    u64::try_from(x).ok()
}

pub fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

pub fn is_one(x: &BigUint) -> bool {
    x.is_one()
}
