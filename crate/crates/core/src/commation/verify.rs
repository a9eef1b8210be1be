use serde::Serialize;

use super::{Commation, CommationNode, CompactStep, Direction, Piece, Witness, BASS_KULKARNI, G24, LATTICE};
use crate::covers::{universal_ball_with_budget, Recognition};
use crate::eig::{isomorphic, EIGraph};
use crate::modular::is_unimodular;
use crate::moves::{apply, Arrow, MoveKind, MoveParams, MoveWitness};
use crate::rigidity::g24_family;

pub const VERIFY_BALL_BUDGET: usize = 20_000_000;
const MAX_G24_K: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrowViolation {
    /// Arrow position, or `None` for node-level problems.
    pub arrow: Option<usize>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommationReport {
    pub valid: bool,
    pub length: usize,
    pub word: String,
    /// Arrows taken on trust as axioms.
    pub axioms: usize,
    pub violations: Vec<ArrowViolation>,
}

pub fn verify(c: &Commation) -> CommationReport {
    let mut violations = Vec::new();
    let mut node_fail = |m: String| {
        violations.push(ArrowViolation {
            arrow: None,
            message: m,
        })
    };
    if c.nodes.is_empty() {
        node_fail("no nodes".into());
    } else if c.arrows.len() + 1 != c.nodes.len() {
        node_fail(format!(
            "{} nodes need {} arrows, found {}",
            c.nodes.len(),
            c.nodes.len() - 1,
            c.arrows.len()
        ));
    }
    for (k, n) in c.nodes.iter().enumerate() {
        if let Err(m) = check_node(n) {
            node_fail(format!("node {k}: {m}"));
        }
    }
    for d in &c.oracle_degrees {
        match c.nodes.get(d.node) {
            Some(CommationNode::RegularTree { degree }) if *degree as i64 == d.degree => {}
            _ => node_fail(format!(
                "oracle degree {} does not match node {}",
                d.degree, d.node
            )),
        }
    }
    let mut axioms = 0;
    if c.arrows.len() + 1 == c.nodes.len() {
        for (k, a) in c.arrows.iter().enumerate() {
            if matches!(a.witness, Witness::Axiom { .. }) {
                axioms += 1;
            }
            let (l, r) = (&c.nodes[k], &c.nodes[k + 1]);
            if let Err(message) = check_arrow(l, r, a.dir, a.from_right, &a.witness) {
                violations.push(ArrowViolation {
                    arrow: Some(k),
                    message,
                });
            }
        }
    }
    CommationReport {
        valid: violations.is_empty(),
        length: c.arrows.len(),
        word: c.word(),
        axioms,
        violations,
    }
}

fn check_node(n: &CommationNode) -> Result<(), String> {
    match n {
        CommationNode::Eig { graph } => {
            graph.ensure_valid().map_err(|e| e.to_string())?;
            if !graph.is_connected() {
                return Err("graph is not connected".into());
            }
            Ok(())
        }
        CommationNode::RegularTree { degree } if *degree < 3 => {
            Err(format!("regular tree of degree {degree} is elementary"))
        }
        CommationNode::RegularTree { .. } => Ok(()),
        CommationNode::Named { name, axiom: None } if name == G24 => Ok(()),
        CommationNode::Named {
            name,
            axiom: Some(a),
        } if name == LATTICE && a == BASS_KULKARNI => Ok(()),
        CommationNode::Named { name, .. } => Err(format!("unknown named group `{name}`")),
    }
}

fn is_lattice(n: &CommationNode) -> bool {
    matches!(n, CommationNode::Named { axiom: Some(_), .. })
}

fn check_arrow(
    l: &CommationNode,
    r: &CommationNode,
    dir: Direction,
    from_right: bool,
    w: &Witness,
) -> Result<(), String> {
    // source of the injection first
    let (src, dst) = match dir {
        Direction::LeftIntoRight => (l, r),
        Direction::RightIntoLeft => (r, l),
    };
    match w {
        Witness::Chain { pieces } => {
            let (start, end) = if from_right { (r, l) } else { (l, r) };
            let (Some(g), Some(h)) = (start.graph(), end.graph()) else {
                return Err("chain witness needs graph nodes on both sides".into());
            };
            let forward = (dir == Direction::LeftIntoRight) != from_right;
            let out = run_chain(&g, pieces, forward)?;
            if out.same_as(&h) || iso_small(&out, &h) {
                Ok(())
            } else {
                Err("chain does not end at the neighboring graph".into())
            }
        }
        Witness::RegularTreeEmbedding { pieces, radius } => {
            let CommationNode::RegularTree { degree } = dst else {
                return Err("regular tree embedding must land in a regular tree node".into());
            };
            let Some(g) = src.graph() else {
                return Err("regular tree embedding must start at a graph node".into());
            };
            if from_right != (dir == Direction::RightIntoLeft) {
                return Err("pieces must start at the graph node".into());
            }
            let f = run_chain(&g, pieces, true)?;
            check_regular(&f, 0, *radius, *degree, true)
        }
        Witness::G24Family { k } => {
            let CommationNode::RegularTree { degree } = dst else {
                return Err("g24 witness must land in a regular tree node".into());
            };
            if !matches!(src, CommationNode::Named { name, axiom: None } if name == G24) {
                return Err("g24 witness must start at G24".into());
            }
            if *k > MAX_G24_K {
                return Err(format!("k = {k} exceeds the cap {MAX_G24_K}"));
            }
            if *degree != (1u64 << k) + 3 {
                return Err(format!("degree {degree} is not 2^{k} + 3"));
            }
            let fam = g24_family(*k).map_err(|e| e.to_string())?;
            fam.sequence.replay().map_err(|e| e.to_string())?;
            let base = fam.graph.vertex("r").map_err(|e| e.to_string())?;
            check_regular(&fam.graph, base, 2, *degree, false)
        }
        Witness::Axiom { name } => {
            if name != BASS_KULKARNI {
                return Err(format!("unknown axiom `{name}`"));
            }
            if !is_lattice(src) {
                return Err("axiom arrows must start at the lattice node".into());
            }
            match dst {
                CommationNode::RegularTree { .. } => Ok(()),
                CommationNode::Eig { graph } => match is_unimodular(graph) {
                    Ok(true) => Ok(()),
                    Ok(false) => Err("lattice target is not unimodular".into()),
                    Err(e) => Err(e.to_string()),
                },
                _ => Err("lattice target must be a graph or a regular tree".into()),
            }
        }
    }
}

fn iso_small(g: &EIGraph, h: &EIGraph) -> bool {
    matches!(isomorphic(g, h), Ok(Some(_)))
}

fn check_regular(f: &EIGraph, base: usize, radius: u32, n: u64, full: bool) -> Result<(), String> {
    if radius == 0 {
        return Err("ball radius must be positive".into());
    }
    let ball = universal_ball_with_budget(f, base, radius, VERIFY_BALL_BUDGET)
        .map_err(|e| e.to_string())?;
    if full {
        let mut seen = vec![false; f.vertex_count()];
        for (k, node) in ball.nodes.iter().enumerate() {
            if ball.is_interior(k) {
                seen[node.vertex as usize] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(format!(
                "ball of radius {radius} does not reach vertex `{}` in its interior",
                f.vertex_id(v)
            ));
        }
    }
    match ball.recognize() {
        Recognition::Regular(d) if d == n => Ok(()),
        other => Err(format!("universal cover is {other:?}, expected Regular({n})")),
    }
}

/// Replays `pieces` from `start`; `forward` asks that each piece injects
/// its start into its end, otherwise the reverse.
fn run_chain(start: &EIGraph, pieces: &[Piece], forward: bool) -> Result<EIGraph, String> {
    let mut cur = start.clone();
    for (p, piece) in pieces.iter().enumerate() {
        cur = match piece {
            Piece::CoveringMap { map } => {
                let rep = map.check();
                if !rep.is_valid() {
                    return Err(format!("piece {p}: {rep}"));
                }
                let (from, to) = if forward {
                    (&map.domain, &map.codomain)
                } else {
                    (&map.codomain, &map.domain)
                };
                if !from.same_as(&cur) {
                    return Err(format!("piece {p}: covering map does not attach to the chain"));
                }
                to.clone()
            }
            Piece::Iso { witness, graph } => {
                if !witness.check(&cur, graph) {
                    return Err(format!("piece {p}: isomorphism witness fails"));
                }
                graph.clone()
            }
            Piece::Moves { steps } => {
                let mut g = cur;
                for (s, step) in steps.iter().enumerate() {
                    g = replay_step(&g, step, forward)
                        .map_err(|m| format!("piece {p}, step {s}: {m}"))?;
                }
                g
            }
        };
    }
    Ok(cur)
}

fn replay_step(g: &EIGraph, step: &CompactStep, forward: bool) -> Result<EIGraph, String> {
    let (out, rec) = apply(g, &step.params).map_err(|e| e.to_string())?;
    let arrow = rec.arrow;
    let reduction = matches!(step.params, MoveParams::Collapse { .. })
        && matches!(step.kind, MoveKind::MinReduce | MoveKind::EssReduce);
    if rec.kind != step.kind && !reduction {
        return Err(format!("recorded {:?}, replayed {:?}", step.kind, rec.kind));
    }
    if arrow != step.arrow {
        return Err(format!("recorded arrow {:?}, recomputed {arrow:?}", step.arrow));
    }
    if let Some(MoveWitness::Cover(map)) = &rec.witness {
        if !map.check().is_valid() || !map.domain.same_as(&out) || !map.codomain.same_as(g) {
            return Err("blow-up projection fails the cover check".into());
        }
    }
    let ok = match arrow {
        Arrow::Isomorphism => true,
        Arrow::IntoResult => forward,
        Arrow::IntoSource => !forward,
    };
    if !ok {
        return Err(format!("{:?} arrow points against the chain", step.kind));
    }
    if matches!(step.kind, MoveKind::GraphCover) {
        return Err("graph covers belong in covering-map pieces".into());
    }
    Ok(out)
}
