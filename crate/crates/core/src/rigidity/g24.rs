use num_traits::One;
use serde::Serialize;

use crate::eig::EIGraph;
use crate::error::Result;
use crate::moves::{collapse, expand, ExpandSpec, MoveSequence};

/// The chain from the loop `(2, 4)` to the `k`-th graph of the family:
/// a vertex `v` joined to `r` by an edge indexed `2` at `v` and `2^k` at
/// `r`, with a `(1, 2)` loop at `r`. Its universal cover subdivides the
/// `(2^k + 3)`-regular tree.
#[derive(Clone, Debug, Serialize)]
pub struct G24Family {
    pub k: u32,
    pub graph: EIGraph,
    pub sequence: MoveSequence,
    /// Results of the intermediate expansions, in order.
    pub expanded: Vec<EIGraph>,
}

pub fn g24_family(k: u32) -> Result<G24Family> {
    let start = EIGraph::single_loop(2, 4);
    let mut seq = MoveSequence::new(start.clone());
    let first = ExpandSpec::new("v", "r", "a", &["e", "e!"], 2);
    let (g, rec) = expand(&start, &first)?;
    seq.push(rec, g);
    let mut expanded = Vec::new();
    for j in 0..k {
        let cur = seq.end().clone();
        let r = cur.vertex("r")?;
        let to_v = cur
            .out_edges_sorted(r)
            .into_iter()
            .find(|&e| !cur.is_loop(e))
            .expect("edge towards v");
        let unit_end = cur
            .out_edges_sorted(r)
            .into_iter()
            .find(|&e| cur.is_loop(e) && cur.index(e).is_one())
            .expect("loop end of index 1");
        let (to_v, unit_end) = (cur.edge_id(to_v).to_string(), cur.edge_id(unit_end).to_string());
        let spec = ExpandSpec::new("r", &format!("m{j}"), &format!("c{j}"), &[&to_v, &unit_end], 1);
        let (b, rec) = expand(&cur, &spec)?;
        seq.push(rec, b.clone());
        expanded.push(b.clone());
        let heavy = b.edge(&unit_end)?;
        let (a, rec) = collapse(&b, heavy)?;
        seq.push(rec, a);
    }
    Ok(G24Family {
        k,
        graph: seq.end().clone(),
        sequence: seq,
        expanded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{recognize_regular, universal_ball, Recognition};
    use crate::eig::{big, isomorphic};
    use crate::moves::{essentialize, Arrow};

    fn chain_graph(k: u32) -> EIGraph {
        let mut b = EIGraph::builder();
        let l = b.vertex("L");
        let r = b.vertex("R");
        b.edge("x", l, r, 2u64, 1u64 << k);
        b.edge("y", r, r, 1u64, 2u64);
        b.build()
    }

    #[test]
    fn first_step_matches_the_definition() {
        let f = g24_family(0).unwrap();
        assert!(isomorphic(&f.graph, &chain_graph(0)).unwrap().is_some());
        let p = f.graph.degree_profile();
        assert_eq!(p["r"], big(4));
        assert_eq!(p["v"], big(2));
    }

    #[test]
    fn family_members_match_the_definition() {
        for k in 0..6 {
            let f = g24_family(k).unwrap();
            assert!(isomorphic(&f.graph, &chain_graph(k)).unwrap().is_some(), "k={k}");
            assert_eq!(f.sequence.len(), 1 + 2 * k as usize);
            f.sequence.replay().unwrap();
        }
    }

    #[test]
    fn expansions_are_isomorphisms() {
        let f = g24_family(3).unwrap();
        for step in &f.sequence.steps[1..] {
            if step.record.kind == crate::moves::MoveKind::Expand {
                assert_eq!(step.record.arrow, Arrow::Isomorphism);
            }
        }
    }

    #[test]
    fn degree_ladder() {
        for k in 0..5u32 {
            let f = g24_family(k).unwrap();
            let r = f.graph.vertex("r").unwrap();
            let ball = universal_ball(&f.graph, r, 3).unwrap();
            assert_eq!(recognize_regular(&ball), Recognition::Regular((1 << k) + 3));
        }
    }

    #[test]
    fn expanded_graphs_are_already_essential() {
        let f = g24_family(2).unwrap();
        for b in &f.expanded {
            let r = essentialize(b).unwrap();
            assert!(r.sequence.is_empty());
            assert!(r.graph.same_as(b));
        }
    }

    #[test]
    fn collapsing_the_trivial_edge_goes_back() {
        let f = g24_family(2).unwrap();
        let b = &f.expanded[1];
        let (a, rec) = collapse(b, b.edge("c1").unwrap()).unwrap();
        assert_eq!(rec.arrow, Arrow::Isomorphism);
        assert!(isomorphic(&a, &chain_graph(1)).unwrap().is_some());
    }
}
