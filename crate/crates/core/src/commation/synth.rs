use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{
    compact, Commation, CommationNode, DegreeNote, Direction, Piece, Witness, BASS_KULKARNI,
};
use crate::covers::{cyclic_cover_with, universal_ball_with_budget, Recognition};
use crate::eig::{big, isomorphic, to_u64, EIGraph};
use crate::error::{Error, Result};
use crate::modular::is_unimodular;
use crate::eig::IndexValue;
use crate::moves::{collapse_all_unit_edges, fresh_edge_id, MoveParams, MoveSequence};

use super::verify::VERIFY_BALL_BUDGET;

const CLOSED_FORMULA: &str = "sum of indices - |V| + 1 over the blown-up graph";
const FORMULA_DIRECTED: &str = "sum of indices - 2|V| + 2 over the blown-up graph";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SynthesisPlan {
    Diameter {
        m: i64,
        m_prime: i64,
        sheets: u64,
        sheets_prime: u64,
        degree: u64,
        equalization_slides: u64,
    },
    Radius {
        /// Directed excess `Σ − 2|V|` of the collapsed graph.
        m: i64,
        /// `Σ − |V|` of the collapsed graph.
        m_formula: i64,
        i0: u32,
        i1: u64,
        i2: u64,
        heavy_edge: String,
        e0: String,
        f0: String,
        e: Vec<String>,
        f: Vec<String>,
        slides: usize,
        degree: u64,
    },
    Fallback {
        degree: u64,
        i0: u32,
    },
}

fn sum_dir(g: &EIGraph) -> Result<i64> {
    to_u64(&g.directed_index_sum())
        .and_then(|x| i64::try_from(x).ok())
        .ok_or_else(|| Error::BudgetExceeded("index sum does not fit in 64 bits".into()))
}

fn excess(g: &EIGraph) -> Result<i64> {
    Ok(sum_dir(g)? - 2 * g.vertex_count() as i64)
}

fn closed_formula(g: &EIGraph) -> Result<i64> {
    Ok(sum_dir(g)? - g.vertex_count() as i64 + 1)
}

/// Regular degree of the universal cover, from a ball deep enough to see
/// every vertex.
fn oracle_degree(g: &EIGraph) -> Result<u64> {
    let radius = g.vertex_count().max(1) as u32;
    let ball = universal_ball_with_budget(g, 0, radius, VERIFY_BALL_BUDGET)?;
    match ball.recognize() {
        Recognition::Regular(n) if n >= 3 => Ok(n),
        _ => Err(Error::Elementary),
    }
}

fn idx(g: &EIGraph, e: usize) -> u64 {
    to_u64(g.index(e)).unwrap_or(u64::MAX)
}

fn blow_up_non_loops(seq: &mut MoveSequence) -> Result<()> {
    let cur = seq.end().clone();
    let mut reps: Vec<usize> = cur
        .geometric_edges()
        .into_iter()
        .filter(|ge| !ge.is_loop)
        .map(|ge| ge.rep)
        .collect();
    reps.sort_by(|a, b| cur.edge_id(*a).cmp(cur.edge_id(*b)));
    for e in reps {
        let id = cur.edge_id(e).to_string();
        let new_edge = fresh_edge_id(seq.end(), &format!("{id}.b1"));
        seq.apply(&MoveParams::StandardBlowUp { edge: id, new_edge })?;
    }
    Ok(())
}

fn collapse_unit_tree(seq: &mut MoveSequence) -> Result<()> {
    let cur = seq.end().clone();
    let tree: Vec<String> = cur
        .spanning_tree(|e| {
            !cur.is_loop(e) && idx(&cur, e) == 1 && idx(&cur, cur.inverse(e)) == 1
        })
        .into_iter()
        .map(|e| cur.edge_id(e).to_string())
        .collect();
    for edge in tree {
        seq.apply(&MoveParams::Collapse { edge })?;
    }
    Ok(())
}

/// Collapses unit non-loop edges, blows up every non-loop edge, then
/// collapses a maximal tree of `(1, 1)` edges.
pub fn flatten_to_single_vertex(g: &EIGraph) -> Result<(EIGraph, MoveSequence)> {
    let mut seq = collapse_all_unit_edges(g)?;
    blow_up_non_loops(&mut seq)?;
    collapse_unit_tree(&mut seq)?;
    Ok((seq.end().clone(), seq))
}

/// Formula against oracle for one flattened graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeLedger {
    pub vertices: usize,
    pub blown_vertices: usize,
    pub formula: i64,
    pub directed: i64,
    pub oracle: Option<u64>,
    pub formula_agrees: bool,
    pub directed_agrees: bool,
}

pub fn degree_ledger(g: &EIGraph) -> Result<DegreeLedger> {
    let mut seq = collapse_all_unit_edges(g)?;
    blow_up_non_loops(&mut seq)?;
    let blown = seq.end().clone();
    collapse_unit_tree(&mut seq)?;
    let oracle = oracle_degree(seq.end()).ok();
    let formula = closed_formula(&blown)?;
    let directed = excess(&blown)? + 2;
    Ok(DegreeLedger {
        vertices: g.vertex_count(),
        blown_vertices: blown.vertex_count(),
        formula,
        directed,
        oracle,
        formula_agrees: oracle == Some(formula as u64),
        directed_agrees: oracle == Some(directed as u64),
    })
}

fn check_input(g: &EIGraph) -> Result<()> {
    g.ensure_valid()?;
    if !g.is_connected() {
        return Err(Error::Invalid("graph is not connected".into()));
    }
    Ok(())
}

fn degree_notes(c: &mut Commation, node: usize, blown: &EIGraph, oracle: u64) -> Result<()> {
    c.predicted_degrees.push(DegreeNote {
        node,
        degree: closed_formula(blown)?,
        formula: CLOSED_FORMULA.into(),
    });
    c.predicted_degrees.push(DegreeNote {
        node,
        degree: excess(blown)? + 2,
        formula: FORMULA_DIRECTED.into(),
    });
    c.oracle_degrees.push(DegreeNote {
        node,
        degree: oracle as i64,
        formula: "universal cover ball".into(),
    });
    Ok(())
}

fn good_voltage(b: &EIGraph) -> Option<usize> {
    let mut reps: Vec<usize> = b
        .geometric_edges()
        .into_iter()
        .filter(|ge| {
            ge.idx_at_from > BigUint::from(1u8)
                && ge.idx_at_to > BigUint::from(1u8)
                && b.is_non_separating(ge.rep)
        })
        .map(|ge| ge.rep)
        .collect();
    reps.sort_by(|x, y| b.edge_id(*x).cmp(b.edge_id(*y)));
    reps.first().copied()
}

/// `G ↗ B ↖ D ↗ T_n`, passing through a `sheets`-sheeted cyclic cover of
/// the collapsed graph `B` when `sheets > 1`.
fn branch(g: &EIGraph, sheets: u64) -> Result<Commation> {
    let seq1 = collapse_all_unit_edges(g)?;
    let b = seq1.end().clone();
    let mut pieces = Vec::new();
    let start = if sheets > 1 {
        let volt = good_voltage(&b).ok_or(Error::EqualizationFailed)?;
        let (cover, map) = cyclic_cover_with(&b, sheets as usize, Some(volt))?;
        pieces.push(Piece::CoveringMap { map });
        cover
    } else {
        b.clone()
    };
    let mut seq2 = MoveSequence::new(start);
    blow_up_non_loops(&mut seq2)?;
    let blown = seq2.end().clone();
    collapse_unit_tree(&mut seq2)?;
    let d = seq2.end().clone();
    let n = oracle_degree(&d)?;
    pieces.push(Piece::Moves {
        steps: compact(&seq2),
    });
    let mut c = Commation::single(CommationNode::eig(g));
    c.push(
        Direction::LeftIntoRight,
        false,
        Witness::Chain {
            pieces: vec![Piece::Moves {
                steps: compact(&seq1),
            }],
        },
        CommationNode::eig(&b),
    );
    c.push(
        Direction::RightIntoLeft,
        false,
        Witness::Chain { pieces },
        CommationNode::eig(&d),
    );
    c.push(
        Direction::LeftIntoRight,
        false,
        Witness::RegularTreeEmbedding {
            pieces: Vec::new(),
            radius: d.vertex_count() as u32,
        },
        CommationNode::RegularTree { degree: n },
    );
    degree_notes(&mut c, 3, &blown, n)?;
    Ok(c)
}

/// `G ↗ B ↖ D ↗ Aut(T_n)` with `D` a single vertex.
pub fn to_regular(g: &EIGraph) -> Result<Commation> {
    check_input(g)?;
    branch(g, 1)
}

/// `U ↖ Γ ↗ U′` through a common uniform lattice, taken as an axiom.
pub fn unimodular_bridge(left: CommationNode, right: CommationNode) -> Commation {
    let axiom = || Witness::Axiom {
        name: BASS_KULKARNI.into(),
    };
    let mut c = Commation::single(left);
    c.push(Direction::RightIntoLeft, false, axiom(), CommationNode::lattice());
    c.push(Direction::LeftIntoRight, false, axiom(), right);
    c
}

fn iso_arrow(g: &EIGraph, h: &EIGraph, target: CommationNode) -> Option<Commation> {
    if g.vertex_count() > crate::eig::ISO_VERTEX_CAP || h.vertex_count() > crate::eig::ISO_VERTEX_CAP {
        return None;
    }
    let w = isomorphic(g, h).ok()??;
    let mut c = Commation::single(CommationNode::eig(g));
    c.push(
        Direction::LeftIntoRight,
        false,
        Witness::Chain {
            pieces: vec![Piece::Iso {
                witness: w,
                graph: h.clone(),
            }],
        },
        target,
    );
    Some(c)
}

pub fn diameter_commation(g: &EIGraph, h: &EIGraph) -> Result<Commation> {
    check_input(g)?;
    check_input(h)?;
    if let Some(c) = iso_arrow(g, h, CommationNode::eig(h)) {
        return Ok(c);
    }
    match (is_unimodular(g)?, is_unimodular(h)?) {
        (true, true) => Ok(unimodular_bridge(CommationNode::eig(g), CommationNode::eig(h))),
        (false, true) => {
            let mut c = to_regular(g)?;
            let tree = c.nodes.last().unwrap().clone();
            c.extend(unimodular_bridge(tree, CommationNode::eig(h)));
            Ok(c)
        }
        (true, false) => Ok(diameter_commation(h, g)?.reversed()),
        (false, false) => equalize(g, h),
    }
}

/// Sheet and slide counts `(k, s)` with `k * m + s = total` that the side
/// can realize.
fn realization(total: u64, m: u64, voltage: bool, heavy: Option<bool>) -> Option<(u64, u64)> {
    let (k, s) = (total / m, total % m);
    if k == 0 {
        return None;
    }
    if s == 0 && (k == 1 || voltage) {
        return Some((k, 0));
    }
    match heavy {
        Some(is_loop) if k >= 2 || !is_loop => Some((k, s)),
        _ => None,
    }
}

fn realize(g: &EIGraph, (k, s): (u64, u64)) -> Result<Commation> {
    if s == 0 {
        branch(g, k)
    } else {
        Ok(slide_branch(g, k, s)?.commation)
    }
}

/// Searches `k * m + s = k' * m' + s'` in increasing order, with sheet
/// counts up to `4 m m'` and fewer than `m` (resp. `m'`) slides.
fn equalize(g: &EIGraph, h: &EIGraph) -> Result<Commation> {
    let bg = collapse_all_unit_edges(g)?.end().clone();
    let bh = collapse_all_unit_edges(h)?.end().clone();
    let (m, mp) = (excess(&bg)?, excess(&bh)?);
    if m < 1 || mp < 1 {
        return Err(Error::Elementary);
    }
    let (mu, mpu) = (m as u64, mp as u64);
    let side = |b: &EIGraph| (good_voltage(b).is_some(), heavy_edge(b).map(|e| b.is_loop(e)));
    let ((vg, hg), (vh, hh)) = (side(&bg), side(&bh));
    let max_sheets = 4 * mu * mpu;
    let mut total = mu.max(mpu);
    while total / mu <= max_sheets && total / mpu <= max_sheets {
        let (rl, rr) = (realization(total, mu, vg, hg), realization(total, mpu, vh, hh));
        total += 1;
        let (Some(rl), Some(rr)) = (rl, rr) else {
            continue;
        };
        let (Ok(left), Ok(right)) = (realize(g, rl), realize(h, rr)) else {
            continue;
        };
        let n = left.final_degree();
        if n != right.final_degree() {
            continue;
        }
        let mut c = left;
        c.extend(right.reversed());
        c.plan = Some(SynthesisPlan::Diameter {
            m,
            m_prime: mp,
            sheets: rl.0,
            sheets_prime: rr.0,
            degree: n.unwrap_or(0),
            equalization_slides: rl.1 + rr.1,
        });
        return Ok(c);
    }
    Err(Error::EqualizationFailed)
}

fn power_of_two(x: u64) -> Option<u32> {
    x.is_power_of_two().then(|| x.trailing_zeros())
}

fn g24_arrow(c: &mut Commation, k: u32) {
    c.push(
        Direction::RightIntoLeft,
        false,
        Witness::G24Family { k },
        CommationNode::g24(),
    );
}

/// One of the edges `f_i`: its directed id after the blow-ups, and the
/// blow-up that creates it.
struct Candidate {
    rep: String,
    parts: Option<Vec<(u64, u64)>>,
    names: Vec<String>,
    f: String,
    origin: usize,
}

fn heavy_edge(b: &EIGraph) -> Option<usize> {
    let mut heavy: Vec<usize> = b
        .geometric_edges()
        .into_iter()
        .filter(|ge| {
            let (x, y) = (&ge.idx_at_from, &ge.idx_at_to);
            x >= &big(2) && y >= &big(2) && (x >= &big(3) || y >= &big(3))
        })
        .map(|ge| ge.rep)
        .filter(|&e| b.is_non_separating(e))
        .collect();
    heavy.sort_by(|x, y| b.edge_id(*x).cmp(b.edge_id(*y)));
    heavy.first().copied()
}

/// Chosen data of a cover-and-slide branch.
struct SlideBranch {
    commation: Commation,
    star: String,
    e0: String,
    f0: String,
    e: Vec<String>,
    f: Vec<String>,
    slide_moves: usize,
}

/// `G ↗ B ↖ C ↗ T_n` with `n = sheets * m + slides + 2`: a cyclic cover
/// with voltage on the heavy edge, blow-ups leaving a `(2, 1)` edge `f_0`
/// and `slides` unit edges `f_i`, slides of each `f_i` across `f_0`, and a
/// collapse of the `(1, 1)` tree.
fn slide_branch(g: &EIGraph, sheets: u64, slides: u64) -> Result<SlideBranch> {
    let seq1 = collapse_all_unit_edges(g)?;
    let b = seq1.end().clone();
    let m = excess(&b)?;
    let star = heavy_edge(&b).ok_or_else(|| {
        Error::NoHeavyEdge("no non-separating edge with indices >= 2 and one >= 3".into())
    })?;
    let star_id = b.edge_id(star).to_string();
    let mut pieces = Vec::new();
    let (bt, mut e0) = if sheets > 1 {
        let (bt, map) = cyclic_cover_with(&b, sheets as usize, Some(star))?;
        pieces.push(Piece::CoveringMap { map });
        let e0 = bt.edge(&format!("{star_id}.{}", sheets - 1))?;
        (bt, e0)
    } else if b.is_loop(star) {
        return Err(Error::NoHeavyEdge(format!("`{star_id}` is a loop and there is one sheet")));
    } else {
        (b.clone(), star)
    };
    if idx(&bt, e0) < 3 {
        e0 = bt.inverse(e0);
    }
    let f0 = bt.inverse(e0);
    let x0 = bt.origin(f0);
    let e0_rep = bt.representative(e0);
    let tree: Vec<usize> = bt.spanning_tree(|e| !bt.is_loop(e) && bt.representative(e) != e0_rep);
    if tree.len() + 1 != bt.vertex_count() {
        return Err(Error::NoHeavyEdge(format!("`{star_id}` separates the cover")));
    }
    let tree_reps: BTreeSet<usize> = tree.iter().map(|&e| bt.representative(e)).collect();
    // distance to x0 and the tree edge leading towards it
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); bt.vertex_count()];
    for &t in &tree {
        adj[bt.origin(t)].push(t);
        adj[bt.origin(bt.inverse(t))].push(bt.inverse(t));
    }
    let mut dist = vec![usize::MAX; bt.vertex_count()];
    let mut toward = vec![usize::MAX; bt.vertex_count()];
    dist[x0] = 0;
    let mut queue = VecDeque::from([x0]);
    while let Some(u) = queue.pop_front() {
        for &t in &adj[u] {
            let w = bt.terminus(t);
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                toward[w] = bt.inverse(t);
                queue.push_back(w);
            }
        }
    }
    let mut reps: Vec<usize> = bt
        .geometric_edges()
        .into_iter()
        .map(|ge| ge.rep)
        .filter(|&e| e != e0_rep)
        .collect();
    reps.sort_by(|x, y| bt.edge_id(*x).cmp(bt.edge_id(*y)));
    let nearer = |e: usize, ends: (String, String)| -> (String, usize) {
        let (a, z) = (bt.origin(e), bt.terminus(e));
        if dist[z] < dist[a] {
            (ends.1, z)
        } else {
            (ends.0, a)
        }
    };
    let mut cands = Vec::new();
    for &e in &reps {
        let id = bt.edge_id(e).to_string();
        let inv_id = bt.edge_id(bt.inverse(e)).to_string();
        let (a, z) = (idx(&bt, e), idx(&bt, bt.inverse(e)));
        let (alpha, omega) = (bt.origin(e), bt.terminus(e));
        let n1 = fresh_edge_id(&bt, &format!("{id}.b1"));
        let n2 = fresh_edge_id(&bt, &format!("{id}.b2"));
        let c = if bt.is_loop(e) {
            if a == 1 || z == 1 {
                let f = if a == 1 { id.clone() } else { inv_id };
                Candidate { rep: id, parts: None, names: vec![], f, origin: alpha }
            } else {
                Candidate {
                    rep: id.clone(),
                    parts: Some(vec![(1, 1), (a - 1, z - 1)]),
                    names: vec![n1],
                    f: id,
                    origin: alpha,
                }
            }
        } else if !tree_reps.contains(&e) {
            let (f, origin) = nearer(e, (id.clone(), inv_id));
            Candidate { rep: id, parts: Some(vec![(1, 1), (a - 1, z - 1)]), names: vec![n1], f, origin }
        } else if a == 2 && z == 2 {
            let (f, origin) = nearer(e, (n1.clone(), format!("{n1}!")));
            Candidate { rep: id, parts: Some(vec![(1, 1), (1, 1)]), names: vec![n1], f, origin }
        } else if a == 2 {
            Candidate { rep: id, parts: Some(vec![(1, 1), (1, z - 1)]), names: vec![n1.clone()], f: n1, origin: alpha }
        } else if z == 2 {
            let f = format!("{n1}!");
            Candidate { rep: id, parts: Some(vec![(1, 1), (a - 1, 1)]), names: vec![n1], f, origin: omega }
        } else {
            let (f, origin) = nearer(e, (n1.clone(), format!("{n1}!")));
            Candidate {
                rep: id,
                parts: Some(vec![(1, 1), (1, 1), (a - 2, z - 2)]),
                names: vec![n1, n2],
                f,
                origin,
            }
        };
        cands.push(c);
    }
    cands.sort_by(|x, y| dist[x.origin].cmp(&dist[y.origin]).then(x.rep.cmp(&y.rep)));
    if (cands.len() as u64) < slides {
        return Err(Error::NoHeavyEdge(format!("only {} edges for {slides} slides", cands.len())));
    }
    let chosen: Vec<Candidate> = cands.drain(..slides as usize).collect();
    let chosen_reps: BTreeSet<String> = chosen.iter().map(|c| c.rep.clone()).collect();

    let gen = |edge: String, parts: &[(u64, u64)], new_edges: Vec<String>| MoveParams::GeneralBlowUp {
        edge,
        parts: parts.iter().map(|&(x, y)| (IndexValue(big(x)), IndexValue(big(y)))).collect(),
        new_edges,
    };
    let mut seq2 = MoveSequence::new(bt.clone());
    let (j, jb) = (idx(&bt, e0), idx(&bt, f0));
    let e0_id = bt.edge_id(e0).to_string();
    let e0_new = fresh_edge_id(&bt, &format!("{}.b1", bt.edge_id(e0_rep)));
    seq2.apply(&gen(e0_id.clone(), &[(2, 1), (j - 2, jb - 1)], vec![e0_new]))?;
    for c in &chosen {
        if let Some(parts) = &c.parts {
            seq2.apply(&gen(c.rep.clone(), parts, c.names.clone()))?;
        }
    }
    for &t in &tree_reps {
        let id = bt.edge_id(t).to_string();
        if chosen_reps.contains(&id) {
            continue;
        }
        let (a, z) = (idx(&bt, t), idx(&bt, bt.inverse(t)));
        let n1 = fresh_edge_id(&bt, &format!("{id}.b1"));
        seq2.apply(&gen(id, &[(1, 1), (a - 1, z - 1)], vec![n1]))?;
    }
    let c_graph = seq2.end().clone();
    pieces.push(Piece::Moves { steps: compact(&seq2) });

    let f0_id = bt.edge_id(f0).to_string();
    let mut seq3 = MoveSequence::new(c_graph.clone());
    for c in &chosen {
        let mut v = c.origin;
        while v != x0 {
            let t = toward[v];
            seq3.apply(&MoveParams::Slide {
                edge: c.f.clone(),
                across: bt.edge_id(t).to_string(),
            })?;
            v = bt.terminus(t);
        }
        seq3.apply(&MoveParams::Slide {
            edge: c.f.clone(),
            across: f0_id.clone(),
        })?;
    }
    let slide_moves = seq3.len();
    for &t in &tree {
        seq3.apply(&MoveParams::Collapse {
            edge: bt.edge_id(t).to_string(),
        })?;
    }
    let d = seq3.end().clone();
    let n = oracle_degree(&d)?;

    let mut c = Commation::single(CommationNode::eig(g));
    c.push(
        Direction::LeftIntoRight,
        false,
        Witness::Chain { pieces: vec![Piece::Moves { steps: compact(&seq1) }] },
        CommationNode::eig(&b),
    );
    c.push(Direction::RightIntoLeft, false, Witness::Chain { pieces }, CommationNode::eig(&c_graph));
    c.push(
        Direction::LeftIntoRight,
        false,
        Witness::RegularTreeEmbedding {
            pieces: vec![Piece::Moves { steps: compact(&seq3) }],
            radius: 1,
        },
        CommationNode::RegularTree { degree: n },
    );
    c.predicted_degrees.push(DegreeNote {
        node: 3,
        degree: closed_formula(&c_graph)? + slides as i64,
        formula: format!("{CLOSED_FORMULA}, plus one per slide"),
    });
    c.predicted_degrees.push(DegreeNote {
        node: 3,
        degree: sheets as i64 * m + slides as i64 + 2,
        formula: "sheets * m + slides + 2".into(),
    });
    c.oracle_degrees.push(DegreeNote {
        node: 3,
        degree: n as i64,
        formula: "universal cover ball".into(),
    });
    Ok(SlideBranch {
        commation: c,
        star: star_id,
        e0: e0_id,
        f0: f0_id,
        e: chosen.iter().map(|c| c.rep.clone()).collect(),
        f: chosen.iter().map(|c| c.f.clone()).collect(),
        slide_moves,
    })
}

pub fn radius_commation(g: &EIGraph) -> Result<Commation> {
    check_input(g)?;
    let loop24 = EIGraph::single_loop(2, 4);
    if let Some(c) = iso_arrow(g, &loop24, CommationNode::g24()) {
        return Ok(c);
    }
    if is_unimodular(g)? {
        let mut c = unimodular_bridge(CommationNode::eig(g), CommationNode::RegularTree { degree: 4 });
        g24_arrow(&mut c, 0);
        return Ok(c);
    }
    let b = collapse_all_unit_edges(g)?.end().clone();
    let m = excess(&b)?;
    if m < 1 {
        return Err(Error::Elementary);
    }
    if heavy_edge(&b).is_none() {
        let mut c = to_regular(g)?;
        let n = c.final_degree().unwrap_or(0);
        return match n.checked_sub(3).and_then(power_of_two) {
            Some(k) => {
                g24_arrow(&mut c, k);
                c.plan = Some(SynthesisPlan::Fallback { degree: n, i0: k });
                Ok(c)
            }
            None => Err(Error::NoHeavyEdge(format!(
                "no non-separating edge with indices >= 2 and one >= 3, and degree {n} is not 2^k + 3"
            ))),
        };
    }
    let mu = m as u64;
    let mut i0 = 0u32;
    while (1u64 << i0) + 1 < mu * mu {
        i0 += 1;
    }
    let target = (1u64 << i0) + 1;
    let (i1, i2) = (target / mu, target % mu);
    let sb = slide_branch(g, i1, i2)?;
    let mut c = sb.commation;
    let n = c.final_degree().unwrap_or(0);
    let expected = (1u64 << i0) + 3;
    if n != expected {
        return Err(Error::Invalid(format!("radius plan reached degree {n}, expected {expected}")));
    }
    g24_arrow(&mut c, i0);
    c.plan = Some(SynthesisPlan::Radius {
        m,
        m_formula: sum_dir(&b)? - b.vertex_count() as i64,
        i0,
        i1,
        i2,
        heavy_edge: sb.star,
        e0: sb.e0,
        f0: sb.f0,
        e: sb.e,
        f: sb.f,
        slides: sb.slide_moves,
        degree: n,
    });
    Ok(c)
}
