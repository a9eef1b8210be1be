use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::TriangleSpec;
use crate::covers::CoveringMap;
use crate::eig::{find_isomorphism, EIGraph};
use crate::error::{Error, Result};

/// An exponent in `ℕ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Fin(u32),
    Inf,
}

impl Label {
    pub fn is_zero(self) -> bool {
        self == Label::Fin(0)
    }

    pub fn dec(self) -> Label {
        match self {
            Label::Fin(0) => Label::Fin(0),
            Label::Fin(k) => Label::Fin(k - 1),
            Label::Inf => Label::Inf,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Fin(k) => write!(f, "{k}"),
            Label::Inf => write!(f, "inf"),
        }
    }
}

/// Exponents `(k_2, k_q, k_r, k_s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubgroupLabel(pub [Label; 4]);

impl SubgroupLabel {
    pub fn zero() -> Self {
        SubgroupLabel([Label::Fin(0); 4])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|l| l.is_zero())
    }
}

impl fmt::Display for SubgroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl Serialize for SubgroupLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Number of lifts at a vertex labelled `label` of an edge of prime index
/// `p` sitting in coordinate `coord`, and the label each lift carries.
pub fn lift_rule(label: SubgroupLabel, coord: usize, p: u64) -> (u64, SubgroupLabel) {
    let mut out = label;
    if label.0[coord].is_zero() {
        (1, out)
    } else {
        out.0[coord] = label.0[coord].dec();
        (p, out)
    }
}

/// Quotient graph over the triangle with labels on vertices and geometric
/// edges. Vertex `b{k}` maps to `v{t}`; edge `f{k}` runs over some `e_t`.
#[derive(Clone, Debug, Serialize)]
pub struct LabelledQuotient {
    pub graph: EIGraph,
    pub vmap: BTreeMap<String, String>,
    pub emap: BTreeMap<String, String>,
    pub vertex_labels: BTreeMap<String, SubgroupLabel>,
    /// Keyed by the edge id lying over some `e_t` (not its inverse).
    pub edge_labels: BTreeMap<String, SubgroupLabel>,
}

impl LabelledQuotient {
    pub fn projection(&self, spec: &TriangleSpec) -> CoveringMap {
        CoveringMap {
            domain: self.graph.clone(),
            codomain: spec.graph.clone(),
            vmap: self.vmap.clone(),
            emap: self.emap.clone(),
        }
    }

    /// The triangle itself, or its `m`-sheeted cyclic cover, with zero labels.
    pub fn zero_cycle(spec: &TriangleSpec, m: usize) -> Self {
        let mut st = State::default();
        for k in 0..3 * m {
            st.verts.push(Vert {
                t: (k % 3) as u8,
                label: SubgroupLabel::zero(),
                fwd: 1,
                back: 1,
                fwd_left: 0,
                back_left: 0,
                last_fwd: 0,
                last_back: 0,
            });
        }
        for k in 0..3 * m {
            st.edges.push((k, (k + 1) % (3 * m)));
        }
        st.to_quotient(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Clause {
    /// Zero exponent: exactly one lift, exponent stays 0, others copied.
    OneLift,
    /// Positive exponent: `p` lifts, exponent decremented, others copied.
    PLifts,
    /// Along a monotone cycle, finite exponents vanish.
    Cycle,
    /// The projection is not a graph morphism onto the triangle.
    Projection,
}

#[derive(Clone, Debug, Serialize)]
pub struct LabelViolation {
    pub clause: Clause,
    pub location: String,
    pub message: String,
}

fn coord_of(t: usize) -> usize {
    t + 1
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LabelReport {
    pub violations: Vec<LabelViolation>,
}

impl LabelReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks lift counts, label propagation and the monotone-cycle rule.
pub fn admissible(spec: &TriangleSpec, lq: &LabelledQuotient) -> LabelReport {
    LabelReport {
        violations: violations(spec, lq),
    }
}

fn violations(spec: &TriangleSpec, lq: &LabelledQuotient) -> Vec<LabelViolation> {
    let mut out = Vec::new();
    let b = &lq.graph;
    let a = &spec.graph;
    let p = spec.primes();
    let push = |out: &mut Vec<LabelViolation>, clause, location: &str, message: String| {
        out.push(LabelViolation {
            clause,
            location: location.to_string(),
            message,
        })
    };
    let mut ok = true;
    for v in b.vertices() {
        if !lq.vmap.get(v).is_some_and(|w| a.vertex(w).is_ok()) {
            push(&mut out, Clause::Projection, v, "vertex does not map to the triangle".into());
            ok = false;
        }
        if !lq.vertex_labels.contains_key(v) {
            push(&mut out, Clause::Projection, v, "vertex has no label".into());
            ok = false;
        }
    }
    for e in 0..b.edge_count() {
        let id = b.edge_id(e);
        match lq.emap.get(id).map(|f| a.edge(f)) {
            Some(Ok(f)) => {
                let good_origin = a.vertex_id(a.origin(f)) == lq.vmap[b.vertex_id(b.origin(e))];
                let good_inv = lq.emap.get(b.edge_id(b.inverse(e))).map(String::as_str)
                    == Some(a.edge_id(a.inverse(f)));
                if !good_origin || !good_inv {
                    push(&mut out, Clause::Projection, id, "edge map is not a morphism".into());
                    ok = false;
                }
            }
            _ => {
                push(&mut out, Clause::Projection, id, "edge does not map to the triangle".into());
                ok = false;
            }
        }
    }
    if !ok {
        return out;
    }
    let tri_t = |name: &str| -> usize { a.vertex(name).expect("triangle vertex") };
    let edge_label = |e: usize| -> Option<SubgroupLabel> {
        lq.edge_labels
            .get(b.edge_id(e))
            .or_else(|| lq.edge_labels.get(b.edge_id(b.inverse(e))))
            .copied()
    };
    for v in 0..b.vertex_count() {
        let vid = b.vertex_id(v);
        let t = tri_t(&lq.vmap[vid]);
        let label = lq.vertex_labels[vid];
        for f in a.out_edges_sorted(t) {
            let forward = !a.edge_id(f).ends_with('!');
            let (coord, prime) = if forward { (coord_of(t), p[t]) } else { (0, 2) };
            let (count, lifted) = lift_rule(label, coord, prime);
            let clause = if label.0[coord].is_zero() {
                Clause::OneLift
            } else {
                Clause::PLifts
            };
            let lifts: Vec<usize> = b
                .out_edges_sorted(v)
                .into_iter()
                .filter(|&e| lq.emap[b.edge_id(e)] == a.edge_id(f))
                .collect();
            if lifts.len() as u64 != count {
                push(
                    &mut out,
                    clause,
                    vid,
                    format!(
                        "{} lifts of {} with label {label}, expected {count}",
                        lifts.len(),
                        a.edge_id(f)
                    ),
                );
            }
            for e in lifts {
                match edge_label(e) {
                    Some(l) if l == lifted => {}
                    Some(l) => push(
                        &mut out,
                        clause,
                        b.edge_id(e),
                        format!("edge label {l} at {vid}, rule gives {lifted}"),
                    ),
                    None => push(&mut out, clause, b.edge_id(e), "edge has no label".into()),
                }
            }
        }
    }
    // monotone cycles: forward edges only
    let fwd: Vec<Vec<usize>> = (0..b.vertex_count())
        .map(|v| {
            b.out_edges(v)
                .iter()
                .filter(|&&e| !lq.emap[b.edge_id(e)].ends_with('!'))
                .map(|&e| b.terminus(e))
                .collect()
        })
        .collect();
    for v in b.vertices_sorted() {
        let Some(cycle) = directed_cycle_through(&fwd, v) else {
            continue;
        };
        for coord in 0..4 {
            let labels: Vec<Label> = cycle
                .iter()
                .map(|&x| lq.vertex_labels[b.vertex_id(x)].0[coord])
                .collect();
            if labels.iter().all(|l| *l != Label::Inf) && labels.iter().any(|l| !l.is_zero()) {
                push(
                    &mut out,
                    Clause::Cycle,
                    b.vertex_id(v),
                    format!("finite nonzero exponent in coordinate {coord} on a monotone cycle"),
                );
                break;
            }
        }
    }
    out
}

fn directed_cycle_through(adj: &[Vec<usize>], v: usize) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if y == v {
                let mut cyc = vec![x];
                let mut cur = x;
                while cur != v {
                    cur = prev[cur];
                    cyc.push(cur);
                }
                return Some(cyc);
            }
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    None
}

/// Lower bound on quotient size when some exponent at a vertex over
/// `v_t` is infinite: `|V_{3l}| >= (p_min / 8)^l`.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthAudit {
    pub p_min: u64,
    pub bounds: Vec<(u32, f64)>,
    /// First level whose bound exceeds the vertex budget.
    pub exceeds_at: u32,
}

pub fn growth_audit(spec: &TriangleSpec, max_vertices: usize) -> GrowthAudit {
    let p_min = *spec.primes().iter().min().unwrap();
    let ratio = p_min as f64 / 8.0;
    let mut bounds = Vec::new();
    let mut l = 0;
    loop {
        let b = ratio.powi(l as i32);
        bounds.push((l, b));
        if b > max_vertices as f64 || l > 200 {
            break;
        }
        l += 1;
    }
    GrowthAudit {
        p_min,
        bounds,
        exceeds_at: l,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub max_vertices: usize,
    pub max_label: u32,
    pub roots_tried: usize,
    pub nodes_visited: u64,
    pub results: Vec<LabelledQuotient>,
    /// Partial configurations discarded, by the clause they break.
    pub rejections: BTreeMap<Clause, u64>,
    /// Branches cut because the lift counts force too many vertices.
    pub size_prunes: u64,
    pub growth: GrowthAudit,
}

pub const CLASSIFY_VERTEX_CAP: usize = 30;
pub const CLASSIFY_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug)]
struct Vert {
    t: u8,
    label: SubgroupLabel,
    fwd: u64,
    back: u64,
    fwd_left: u64,
    back_left: u64,
    last_fwd: usize,
    last_back: usize,
}

#[derive(Clone, Debug, Default)]
struct State {
    verts: Vec<Vert>,
    /// Forward edges `(from over v_t, to over v_{t+1})`.
    edges: Vec<(usize, usize)>,
}

impl State {
    fn to_quotient(&self, spec: &TriangleSpec) -> LabelledQuotient {
        let p = spec.primes();
        let mut b = EIGraph::builder();
        let mut vmap = BTreeMap::new();
        let mut vertex_labels = BTreeMap::new();
        for (k, v) in self.verts.iter().enumerate() {
            let id = format!("b{k}");
            b.vertex(&id);
            vmap.insert(id.clone(), format!("v{}", v.t + 1));
            vertex_labels.insert(id, v.label);
        }
        let mut emap = BTreeMap::new();
        let mut edge_labels = BTreeMap::new();
        for (k, &(x, y)) in self.edges.iter().enumerate() {
            let t = self.verts[x].t as usize;
            let id = format!("f{k}");
            let i_from = p[t] / self.verts[x].fwd;
            let i_to = 2 / self.verts[y].back;
            b.edge(&id, x, y, i_from, i_to);
            emap.insert(id.clone(), format!("e{}", t + 1));
            emap.insert(format!("{id}!"), format!("e{}!", t + 1));
            edge_labels.insert(id, lift_rule(self.verts[x].label, coord_of(t), p[t]).1);
        }
        LabelledQuotient {
            graph: b.build(),
            vmap,
            emap,
            vertex_labels,
            edge_labels,
        }
    }
}

struct Search<'a> {
    spec: &'a TriangleSpec,
    shared: &'a AtomicU64,
    max_vertices: usize,
    max_label: u32,
    nodes: u64,
    found: Vec<LabelledQuotient>,
    rejections: BTreeMap<Clause, u64>,
    size_prunes: u64,
}

fn new_vert(spec: &TriangleSpec, t: u8, label: SubgroupLabel) -> Vert {
    let p = spec.primes();
    let fwd = lift_rule(label, coord_of(t as usize), p[t as usize]).0;
    let back = lift_rule(label, 0, 2).0;
    Vert {
        t,
        label,
        fwd,
        back,
        fwd_left: fwd,
        back_left: back,
        last_fwd: 0,
        last_back: 0,
    }
}

/// Values `x` with `x.dec() == y` (within the label cap).
fn preimages(y: Label, cap: u32) -> Vec<Label> {
    match y {
        Label::Inf => vec![Label::Inf],
        Label::Fin(0) => vec![Label::Fin(0), Label::Fin(1)],
        Label::Fin(k) if k < cap => vec![Label::Fin(k + 1)],
        Label::Fin(_) => vec![],
    }
}

impl Search<'_> {
    fn reject(&mut self, clause: Clause) {
        *self.rejections.entry(clause).or_default() += 1;
    }

    /// Edge label seen from the origin (over `e_t`) and from the terminus.
    fn compatible(&self, from: &Vert, to: &Vert) -> std::result::Result<(), Clause> {
        let p = self.spec.primes();
        let t = from.t as usize;
        let a = lift_rule(from.label, coord_of(t), p[t]).1;
        let b = lift_rule(to.label, 0, 2).1;
        if a == b {
            Ok(())
        } else {
            // the terminus side governs coordinate 0, the origin side the rest
            let c = if a.0[0] != b.0[0] { 0 } else { coord_of(t) };
            let decider = if c == 0 { to.label.0[0] } else { from.label.0[c] };
            Err(if decider.is_zero() {
                Clause::OneLift
            } else {
                Clause::PLifts
            })
        }
    }

    fn too_big(&self, st: &State) -> bool {
        let mut n = [0u64; 3];
        let mut f = [0u64; 3];
        let mut bk = [0u64; 3];
        for v in &st.verts {
            n[v.t as usize] += 1;
            f[v.t as usize] += v.fwd;
            bk[v.t as usize] += v.back;
        }
        let mut lo = n;
        for _ in 0..8 {
            for t in 0..3 {
                let u = (t + 1) % 3;
                let edges = (f[t] + lo[t] - n[t]).max(bk[u]);
                lo[u] = lo[u].max(edges.div_ceil(2));
                let back_edges = (bk[u] + lo[u] - n[u]).max(f[t]);
                lo[t] = lo[t].max(back_edges.div_ceil(self.spec.primes()[t].max(1)).max(n[t]));
            }
        }
        lo.iter().sum::<u64>() > self.max_vertices as u64
    }

    fn run(&mut self, st: &mut State) -> Result<()> {
        self.nodes += 1;
        if self.nodes % 1024 == 0
            && self.shared.fetch_add(1024, Ordering::Relaxed) > CLASSIFY_NODE_BUDGET
        {
            return Err(Error::BudgetExceeded(format!(
                "more than {CLASSIFY_NODE_BUDGET} search nodes"
            )));
        }
        if self.too_big(st) {
            self.size_prunes += 1;
            return Ok(());
        }
        let Some(v) = st.verts.iter().position(|x| x.fwd_left > 0 || x.back_left > 0) else {
            let lq = st.to_quotient(self.spec);
            let bad = admissible(self.spec, &lq);
            if bad.is_valid() {
                self.found.push(lq);
            } else {
                for x in bad.violations {
                    self.reject(x.clause);
                }
            }
            return Ok(());
        };
        let forward = st.verts[v].fwd_left > 0;
        let t = st.verts[v].t;
        let other_t = if forward { (t + 1) % 3 } else { (t + 2) % 3 };
        let start = if forward {
            st.verts[v].last_fwd
        } else {
            st.verts[v].last_back
        };
        // existing partners
        for w in start..st.verts.len() {
            let cand = &st.verts[w];
            let free = if forward { cand.back_left } else { cand.fwd_left };
            if cand.t != other_t || free == 0 {
                continue;
            }
            let check = if forward {
                self.compatible(&st.verts[v], cand)
            } else {
                self.compatible(cand, &st.verts[v])
            };
            if let Err(c) = check {
                self.reject(c);
                continue;
            }
            let old = self.connect(st, v, w, forward);
            self.run(st)?;
            self.disconnect(st, v, w, forward, old);
        }
        // a new partner
        if st.verts.len() < self.max_vertices {
            for label in self.new_labels(&st.verts[v], forward) {
                let w = st.verts.len();
                st.verts.push(new_vert(self.spec, other_t, label));
                let old = self.connect(st, v, w, forward);
                self.run(st)?;
                self.disconnect(st, v, w, forward, old);
                st.verts.pop();
            }
        }
        Ok(())
    }

    fn new_labels(&self, v: &Vert, forward: bool) -> Vec<SubgroupLabel> {
        let p = self.spec.primes();
        let t = v.t as usize;
        if forward {
            // v -> w over e_t: coordinate of p_t drops by the rule at v,
            // coordinate 0 at w decrements to v's value
            let c = coord_of(t);
            let mut base = v.label;
            base.0[c] = lift_rule(v.label, c, p[t]).1 .0[c];
            preimages(v.label.0[0], self.max_label)
                .into_iter()
                .map(|x| {
                    let mut l = base;
                    l.0[0] = x;
                    l
                })
                .collect()
        } else {
            // u -> v over e_{t-1}
            let s = (t + 2) % 3;
            let c = coord_of(s);
            let mut base = v.label;
            base.0[0] = v.label.0[0].dec();
            preimages(v.label.0[c], self.max_label)
                .into_iter()
                .map(|x| {
                    let mut l = base;
                    l.0[c] = x;
                    l
                })
                .collect()
        }
    }

    fn connect(&self, st: &mut State, v: usize, w: usize, forward: bool) -> usize {
        if forward {
            st.verts[v].fwd_left -= 1;
            st.verts[w].back_left -= 1;
            st.edges.push((v, w));
            std::mem::replace(&mut st.verts[v].last_fwd, w)
        } else {
            st.verts[v].back_left -= 1;
            st.verts[w].fwd_left -= 1;
            st.edges.push((w, v));
            std::mem::replace(&mut st.verts[v].last_back, w)
        }
    }

    fn disconnect(&self, st: &mut State, v: usize, w: usize, forward: bool, old: usize) {
        st.edges.pop();
        if forward {
            st.verts[v].fwd_left += 1;
            st.verts[w].back_left += 1;
            st.verts[v].last_fwd = old;
        } else {
            st.verts[v].back_left += 1;
            st.verts[w].fwd_left += 1;
            st.verts[v].last_back = old;
        }
    }
}

fn all_labels(max_label: u32) -> Vec<SubgroupLabel> {
    let vals: Vec<Label> = (0..=max_label)
        .map(Label::Fin)
        .chain(std::iter::once(Label::Inf))
        .collect();
    let mut out = Vec::new();
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                for &d in &vals {
                    out.push(SubgroupLabel([a, b, c, d]));
                }
            }
        }
    }
    out
}

/// Enumerates connected labelled quotients over the triangle with at most
/// `max_vertices` vertices and finite exponents at most `max_label`, up to
/// labelled isomorphism.
pub fn classify_quotients(
    spec: &TriangleSpec,
    max_vertices: usize,
    max_label: u32,
) -> Result<Classification> {
    if max_vertices > CLASSIFY_VERTEX_CAP {
        return Err(Error::BudgetExceeded(format!(
            "max_vertices {max_vertices} exceeds {CLASSIFY_VERTEX_CAP}"
        )));
    }
    let shared = AtomicU64::new(0);
    let roots = all_labels(max_label);
    let runs: Vec<Search> = roots
        .par_iter()
        .map(|&label| {
            let mut search = Search {
                spec,
                shared: &shared,
                max_vertices,
                max_label,
                nodes: 0,
                found: Vec::new(),
                rejections: BTreeMap::new(),
                size_prunes: 0,
            };
            let mut st = State::default();
            st.verts.push(new_vert(spec, 0, label));
            search.run(&mut st).map(|_| search)
        })
        .collect::<Result<_>>()?;
    let mut rejections: BTreeMap<Clause, u64> = BTreeMap::new();
    let (mut nodes, mut size_prunes) = (0, 0);
    let mut found = Vec::new();
    for run in runs {
        nodes += run.nodes;
        size_prunes += run.size_prunes;
        for (c, k) in run.rejections {
            *rejections.entry(c).or_default() += k;
        }
        found.extend(run.found);
    }
    let mut unique: Vec<LabelledQuotient> = Vec::new();
    for lq in found {
        if !unique.iter().any(|u| labelled_isomorphic(u, &lq)) {
            unique.push(lq);
        }
    }
    unique.sort_by_key(|lq| lq.graph.vertex_count());
    Ok(Classification {
        max_vertices,
        max_label,
        roots_tried: roots.len(),
        nodes_visited: nodes,
        results: unique,
        rejections,
        size_prunes,
        growth: growth_audit(spec, max_vertices),
    })
}

fn labelled_isomorphic(a: &LabelledQuotient, b: &LabelledQuotient) -> bool {
    let vcol = |q: &LabelledQuotient| -> Vec<(String, SubgroupLabel)> {
        q.graph
            .vertices()
            .iter()
            .map(|v| (q.vmap[v].clone(), q.vertex_labels[v]))
            .collect()
    };
    let ecol = |q: &LabelledQuotient| -> Vec<(String, SubgroupLabel, String)> {
        q.graph
            .edges()
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let rep = q.graph.representative(k);
                let label = q.edge_labels[q.graph.edge_id(rep)];
                (q.emap[&e.id].clone(), label, e.index.to_string())
            })
            .collect()
    };
    find_isomorphism(&a.graph, &b.graph, &vcol(a), &vcol(b), &ecol(a), &ecol(b)).is_some()
}

/// Vertex sets of the labelled quotients, for reporting.
pub fn cycle_lengths(c: &Classification) -> BTreeSet<usize> {
    c.results.iter().map(|lq| lq.graph.vertex_count()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigidity::make_triangle;

    fn lab(v: [Label; 4]) -> SubgroupLabel {
        SubgroupLabel(v)
    }

    #[test]
    fn lift_rule_cases() {
        use Label::*;
        let z = SubgroupLabel::zero();
        assert_eq!(lift_rule(z, 1, 11), (1, z));
        let l = lab([Fin(3), Fin(0), Inf, Fin(2)]);
        assert_eq!(lift_rule(l, 0, 2), (2, lab([Fin(2), Fin(0), Inf, Fin(2)])));
        assert_eq!(lift_rule(l, 2, 13), (13, l));
    }

    #[test]
    fn zero_cycles_are_admissible() {
        let spec = make_triangle(11, 13, 17).unwrap();
        for m in 1..4 {
            let lq = LabelledQuotient::zero_cycle(&spec, m);
            assert!(admissible(&spec, &lq).is_valid(), "m={m}");
            let p = lq.projection(&spec);
            assert!(p.check().is_valid());
            assert!(p.is_graph_cover());
        }
    }

    #[test]
    fn finite_label_on_a_cycle_is_rejected() {
        let spec = make_triangle(11, 13, 17).unwrap();
        let mut lq = LabelledQuotient::zero_cycle(&spec, 1);
        lq.vertex_labels
            .insert("b0".into(), lab([Label::Fin(0), Label::Fin(1), Label::Fin(0), Label::Fin(0)]));
        let bad = admissible(&spec, &lq).violations;
        assert!(bad.iter().any(|v| v.clause == Clause::Cycle));
        assert!(bad.iter().any(|v| v.clause == Clause::PLifts));
    }

    #[test]
    fn infinite_next_to_zero_is_rejected() {
        let spec = make_triangle(11, 13, 17).unwrap();
        let mut lq = LabelledQuotient::zero_cycle(&spec, 1);
        lq.vertex_labels
            .insert("b0".into(), lab([Label::Inf, Label::Fin(0), Label::Fin(0), Label::Fin(0)]));
        let bad = admissible(&spec, &lq).violations;
        assert!(!bad.is_empty());
        assert!(bad
            .iter()
            .all(|v| matches!(v.clause, Clause::OneLift | Clause::PLifts | Clause::Cycle)));
    }

    #[test]
    fn small_classification() {
        let spec = make_triangle(11, 13, 17).unwrap();
        let c = classify_quotients(&spec, 3, 1).unwrap();
        assert_eq!(c.results.len(), 1);
        assert!(c.results[0].vertex_labels.values().all(|l| l.is_zero()));
        let c = classify_quotients(&spec, 6, 1).unwrap();
        assert_eq!(cycle_lengths(&c), [3, 6].into_iter().collect());
    }

    #[test]
    fn growth_bound_passes_the_budget() {
        let spec = make_triangle(11, 13, 17).unwrap();
        let g = growth_audit(&spec, 9);
        assert_eq!(g.p_min, 11);
        assert!(g.bounds.last().unwrap().1 > 9.0);
        assert_eq!(g.exceeds_at, 7);
    }
}

