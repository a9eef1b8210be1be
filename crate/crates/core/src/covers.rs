//! Covering maps, cyclic covers and finite balls in universal covers.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::eig::EIGraph;
use crate::error::{Error, Result};

pub const DEFAULT_BALL_BUDGET: usize = 1_000_000;

/// Vertex and directed-edge maps from `domain` onto `codomain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringMap {
    pub domain: EIGraph,
    pub codomain: EIGraph,
    pub vmap: BTreeMap<String, String>,
    pub emap: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverViolation {
    pub vertex: Option<String>,
    pub edge: Option<String>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub violations: Vec<CoverViolation>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, vertex: Option<&str>, edge: Option<&str>, message: String) {
        self.violations.push(CoverViolation {
            vertex: vertex.map(str::to_string),
            edge: edge.map(str::to_string),
            message,
        });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            if let Some(x) = &v.vertex {
                write!(f, "at {x} ")?;
            }
            if let Some(e) = &v.edge {
                write!(f, "over {e} ")?;
            }
            write!(f, "{}", v.message)?;
        }
        Ok(())
    }
}

impl CoveringMap {
    pub fn identity(g: &EIGraph) -> Self {
        CoveringMap {
            domain: g.clone(),
            codomain: g.clone(),
            vmap: g.vertices().iter().map(|v| (v.clone(), v.clone())).collect(),
            emap: g.edges().iter().map(|e| (e.id.clone(), e.id.clone())).collect(),
        }
    }

    /// `self: A -> B` followed by `then: B -> C`.
    pub fn compose(&self, then: &CoveringMap) -> Result<CoveringMap> {
        let look = |m: &BTreeMap<String, String>, k: &String, what: &str| {
            m.get(k)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("composition: {what} `{k}` is unmapped")))
        };
        let vmap = self
            .vmap
            .iter()
            .map(|(a, b)| Ok((a.clone(), look(&then.vmap, b, "vertex")?)))
            .collect::<Result<_>>()?;
        let emap = self
            .emap
            .iter()
            .map(|(a, b)| Ok((a.clone(), look(&then.emap, b, "edge")?)))
            .collect::<Result<_>>()?;
        Ok(CoveringMap {
            domain: self.domain.clone(),
            codomain: then.codomain.clone(),
            vmap,
            emap,
        })
    }

    pub fn check(&self) -> VerificationReport {
        check(self)
    }

    pub fn is_graph_cover(&self) -> bool {
        is_graph_cover(self)
    }

    /// Number of preimages of each codomain vertex.
    pub fn fiber_sizes(&self) -> BTreeMap<String, usize> {
        let mut out: BTreeMap<String, usize> = self
            .codomain
            .vertices()
            .iter()
            .map(|v| (v.clone(), 0))
            .collect();
        for w in self.vmap.values() {
            *out.entry(w.clone()).or_default() += 1;
        }
        out
    }
}

/// Verifies the morphism, surjectivity and index-sum conditions.
pub fn check(p: &CoveringMap) -> VerificationReport {
    let (a, b) = (&p.domain, &p.codomain);
    let mut rep = VerificationReport::default();
    let mut vimg = vec![None; a.vertex_count()];
    for v in 0..a.vertex_count() {
        let id = a.vertex_id(v);
        match p.vmap.get(id).map(|w| b.vertex(w)) {
            Some(Ok(w)) => vimg[v] = Some(w),
            Some(Err(_)) => rep.push(Some(id), None, "image is not a codomain vertex".into()),
            None => rep.push(Some(id), None, "vertex is unmapped".into()),
        }
    }
    let mut eimg = vec![None; a.edge_count()];
    for e in 0..a.edge_count() {
        let id = a.edge_id(e);
        match p.emap.get(id).map(|f| b.edge(f)) {
            Some(Ok(f)) => eimg[e] = Some(f),
            Some(Err(_)) => rep.push(None, Some(id), "image is not a codomain edge".into()),
            None => rep.push(None, Some(id), "edge is unmapped".into()),
        }
    }
    for k in p.vmap.keys() {
        if a.vertex(k).is_err() {
            rep.push(Some(k), None, "map names a vertex outside the domain".into());
        }
    }
    for k in p.emap.keys() {
        if a.edge(k).is_err() {
            rep.push(None, Some(k), "map names an edge outside the domain".into());
        }
    }
    if !rep.is_valid() {
        return rep;
    }
    let vimg: Vec<usize> = vimg.into_iter().map(Option::unwrap).collect();
    let eimg: Vec<usize> = eimg.into_iter().map(Option::unwrap).collect();
    for e in 0..a.edge_count() {
        let f = eimg[e];
        if vimg[a.origin(e)] != b.origin(f) {
            rep.push(
                Some(a.vertex_id(a.origin(e))),
                Some(a.edge_id(e)),
                "map does not commute with origin".into(),
            );
        }
        if eimg[a.inverse(e)] != b.inverse(f) {
            rep.push(None, Some(a.edge_id(e)), "map does not commute with inverse".into());
        }
    }
    let hit_v: BTreeSet<usize> = vimg.iter().copied().collect();
    let hit_e: BTreeSet<usize> = eimg.iter().copied().collect();
    for w in 0..b.vertex_count() {
        if !hit_v.contains(&w) {
            rep.push(Some(b.vertex_id(w)), None, "codomain vertex has no preimage".into());
        }
    }
    for f in 0..b.edge_count() {
        if !hit_e.contains(&f) {
            rep.push(None, Some(b.edge_id(f)), "codomain edge has no preimage".into());
        }
    }
    for v in 0..a.vertex_count() {
        let mut sums: HashMap<usize, BigUint> = HashMap::new();
        for &e in a.out_edges(v) {
            *sums.entry(eimg[e]).or_default() += a.index(e);
        }
        for f in b.out_edges_sorted(vimg[v]) {
            let s = sums.get(&f).cloned().unwrap_or_else(BigUint::zero);
            if &s != b.index(f) {
                rep.push(
                    Some(a.vertex_id(v)),
                    Some(b.edge_id(f)),
                    format!("lift indices sum to {s}, expected {}", b.index(f)),
                );
            }
        }
    }
    rep
}

/// True when `p` is a valid covering that is bijective on every star and
/// preserves indices edgewise.
pub fn is_graph_cover(p: &CoveringMap) -> bool {
    if !check(p).is_valid() {
        return false;
    }
    let (a, b) = (&p.domain, &p.codomain);
    (0..a.vertex_count()).all(|v| {
        let w = b.vertex(&p.vmap[a.vertex_id(v)]).expect("checked");
        if a.out_edges(v).len() != b.out_edges(w).len() {
            return false;
        }
        let mut seen = BTreeSet::new();
        a.out_edges(v).iter().all(|&e| {
            let f = b.edge(&p.emap[a.edge_id(e)]).expect("checked");
            seen.insert(f) && a.index(e) == b.index(f)
        })
    })
}

/// Connected `k`-sheeted graph cover by a cyclic voltage: one non-tree edge
/// carries voltage 1, every other edge voltage 0.
pub fn cyclic_cover(g: &EIGraph, k: usize) -> Result<(EIGraph, CoveringMap)> {
    cyclic_cover_with(g, k, None)
}

/// As [`cyclic_cover`], with an explicit voltage edge (must not be a
/// bridge). The default is the non-tree geometric edge with the smallest id.
pub fn cyclic_cover_with(
    g: &EIGraph,
    k: usize,
    voltage_edge: Option<usize>,
) -> Result<(EIGraph, CoveringMap)> {
    if k == 0 {
        return Err(Error::Invalid("number of sheets must be at least 1".into()));
    }
    let tree: BTreeSet<usize> = g
        .spanning_tree(|_| true)
        .into_iter()
        .flat_map(|e| [e, g.inverse(e)])
        .collect();
    let mut non_tree: Vec<usize> = g
        .geometric_edges()
        .into_iter()
        .map(|ge| ge.rep)
        .filter(|e| !tree.contains(e))
        .collect();
    if non_tree.is_empty() {
        return Err(Error::TreeInput);
    }
    non_tree.sort_by(|x, y| g.edge_id(*x).cmp(g.edge_id(*y)));
    let volt = match voltage_edge {
        None => non_tree[0],
        Some(e) if !g.is_non_separating(e) => {
            return Err(Error::Invalid(format!(
                "voltage edge `{}` is a bridge",
                g.edge_id(e)
            )))
        }
        Some(e) => g.representative(e),
    };
    let voltage = |e: usize| -> usize {
        if e == volt {
            1
        } else if g.inverse(e) == volt {
            k - 1
        } else {
            0
        }
    };
    let mut b = EIGraph::builder();
    let mut vmap = BTreeMap::new();
    let mut emap = BTreeMap::new();
    for t in 0..k {
        for v in g.vertices() {
            let id = format!("{v}.{t}");
            b.vertex(&id);
            vmap.insert(id, v.clone());
        }
    }
    for ge in g.geometric_edges() {
        let e = ge.rep;
        let inv = g.inverse(e);
        let base = g.edge_id(e);
        for t in 0..k {
            let s = (t + voltage(e)) % k;
            let from = b.lookup(&format!("{}.{t}", g.vertex_id(ge.from))).unwrap();
            let to = b.lookup(&format!("{}.{s}", g.vertex_id(ge.to))).unwrap();
            let id = format!("{base}.{t}");
            let inv_id = format!("{base}.{t}!");
            b.edge_pair(
                &id,
                &inv_id,
                from,
                to,
                g.index(e).clone(),
                g.index(inv).clone(),
            );
            emap.insert(id, base.to_string());
            emap.insert(inv_id, g.edge_id(inv).to_string());
        }
    }
    let cover = b.build();
    let map = CoveringMap {
        domain: cover.clone(),
        codomain: g.clone(),
        vmap,
        emap,
    };
    Ok((cover, map))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallNode {
    pub parent: Option<u32>,
    /// Base-graph vertex this node projects to.
    pub vertex: u32,
    /// Base-graph edge that the tree edge parent -> node projects to.
    pub via: Option<u32>,
    pub depth: u32,
    pub degree: u32,
}

/// Ball of the given radius around a lift of `base` in the universal cover.
/// The tree is stored compactly; [`TreeBall::to_graph`] materializes it.
#[derive(Clone, Debug)]
pub struct TreeBall {
    pub radius: u32,
    pub base: usize,
    pub nodes: Vec<BallNode>,
}

pub fn universal_ball(g: &EIGraph, base: usize, radius: u32) -> Result<TreeBall> {
    universal_ball_with_budget(g, base, radius, DEFAULT_BALL_BUDGET)
}

pub fn universal_ball_with_budget(
    g: &EIGraph,
    base: usize,
    radius: u32,
    budget: usize,
) -> Result<TreeBall> {
    let sorted_out: Vec<Vec<usize>> = (0..g.vertex_count())
        .map(|v| g.out_edges_sorted(v))
        .collect();
    let idx = |e: usize| -> Result<usize> {
        g.index(e)
            .to_usize()
            .filter(|&n| n <= budget)
            .ok_or(Error::BallTooLarge(budget))
    };
    let mut nodes = vec![BallNode {
        parent: None,
        vertex: base as u32,
        via: None,
        depth: 0,
        degree: 0,
    }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let node = nodes[x];
        if node.depth >= radius {
            continue;
        }
        let back = node.via.map(|e| g.inverse(e as usize));
        for &f in &sorted_out[node.vertex as usize] {
            let mut count = idx(f)?;
            if Some(f) == back {
                count -= 1;
            }
            for _ in 0..count {
                if nodes.len() >= budget {
                    return Err(Error::BallTooLarge(budget));
                }
                nodes.push(BallNode {
                    parent: Some(x as u32),
                    vertex: g.terminus(f) as u32,
                    via: Some(f as u32),
                    depth: node.depth + 1,
                    degree: 0,
                });
                queue.push_back(nodes.len() - 1);
            }
        }
    }
    for k in 1..nodes.len() {
        let p = nodes[k].parent.unwrap() as usize;
        nodes[p].degree += 1;
        nodes[k].degree += 1;
    }
    Ok(TreeBall {
        radius,
        base,
        nodes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Recognition {
    Regular(u64),
    Mixed(Vec<u64>),
    Degenerate,
}

impl Recognition {
    pub fn degree(&self) -> Option<u64> {
        match self {
            Recognition::Regular(n) => Some(*n),
            _ => None,
        }
    }
}

impl TreeBall {
    pub fn is_interior(&self, node: usize) -> bool {
        self.nodes[node].depth < self.radius
    }

    /// Degrees of interior vertices other than 2.
    pub fn essential_degrees(&self) -> BTreeSet<u64> {
        (0..self.nodes.len())
            .filter(|&x| self.is_interior(x))
            .map(|x| self.nodes[x].degree as u64)
            .filter(|&d| d != 2)
            .collect()
    }

    pub fn recognize(&self) -> Recognition {
        recognize_regular(self)
    }

    /// Checks that every interior node has exactly `i(f)` tree edges over
    /// each base edge `f` at its image.
    pub fn projection_is_exact(&self, g: &EIGraph) -> bool {
        let mut lifts: Vec<BTreeMap<u32, u64>> = vec![BTreeMap::new(); self.nodes.len()];
        for (k, n) in self.nodes.iter().enumerate() {
            if let (Some(p), Some(e)) = (n.parent, n.via) {
                *lifts[p as usize].entry(e).or_default() += 1;
                *lifts[k].entry(g.inverse(e as usize) as u32).or_default() += 1;
            }
        }
        (0..self.nodes.len()).filter(|&x| self.is_interior(x)).all(|x| {
            let v = self.nodes[x].vertex as usize;
            let want: BTreeMap<u32, u64> = g
                .out_edges(v)
                .iter()
                .map(|&f| (f as u32, g.index(f).to_u64().unwrap_or(u64::MAX)))
                .collect();
            want == lifts[x]
        })
    }

    /// The ball as an edge-indexed tree with all indices 1; node `k` is
    /// named `t{k}` and the edge into it `s{k}`.
    pub fn to_graph(&self) -> EIGraph {
        let mut b = EIGraph::builder();
        for k in 0..self.nodes.len() {
            b.vertex(&format!("t{k}"));
        }
        for (k, n) in self.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                b.edge(&format!("s{k}"), p as usize, k, 1u64, 1u64);
            }
        }
        b.build()
    }

    /// Projection of [`TreeBall::to_graph`] onto the base graph, as maps.
    pub fn projection(
        &self,
        g: &EIGraph,
    ) -> (BTreeMap<String, String>, BTreeMap<String, String>) {
        let mut vmap = BTreeMap::new();
        let mut emap = BTreeMap::new();
        for (k, n) in self.nodes.iter().enumerate() {
            vmap.insert(format!("t{k}"), g.vertex_id(n.vertex as usize).to_string());
            if let Some(e) = n.via {
                let e = e as usize;
                emap.insert(format!("s{k}"), g.edge_id(e).to_string());
                emap.insert(format!("s{k}!"), g.edge_id(g.inverse(e)).to_string());
            }
        }
        (vmap, emap)
    }
}

/// Suppresses degree-2 vertices and reports whether all remaining interior
/// vertices share one degree `n >= 3`.
pub fn recognize_regular(ball: &TreeBall) -> Recognition {
    let degs = ball.essential_degrees();
    if degs.iter().all(|&d| d <= 2) {
        return Recognition::Degenerate;
    }
    if degs.len() == 1 {
        Recognition::Regular(*degs.iter().next().unwrap())
    } else {
        Recognition::Mixed(degs.into_iter().collect())
    }
}
