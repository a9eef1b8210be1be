use super::*;
use crate::covers::{recognize_regular, universal_ball};
use crate::eig::big;
use crate::rigidity::{g24_family, make_triangle};

fn two_vertex() -> EIGraph {
    let mut b = EIGraph::builder();
    let u = b.vertex("u");
    let w = b.vertex("w");
    b.edge("a", u, w, 2u64, 3u64);
    b.edge("l", w, w, 1u64, 2u64);
    b.build()
}

fn rose(n: usize) -> EIGraph {
    let mut b = EIGraph::builder();
    let v = b.vertex("v");
    for k in 0..n {
        b.edge(&format!("x{k}"), v, v, 1u64, 1u64);
    }
    b.build()
}

fn assert_valid(c: &Commation) -> CommationReport {
    let r = verify(c);
    assert!(r.valid, "{:#?}", r.violations);
    let back = Commation::from_json(&c.to_json()).unwrap();
    assert_eq!(&back, c);
    r
}

#[test]
fn single_node_is_valid() {
    let r = verify(&Commation::single(CommationNode::g24()));
    assert!(r.valid);
    assert_eq!(r.length, 0);
    assert_eq!(r.word, "");
}

#[test]
fn loop_24_reaches_t6() {
    let c = to_regular(&EIGraph::single_loop(2, 4)).unwrap();
    let r = assert_valid(&c);
    assert_eq!(r.word, "↗↖↗");
    assert_eq!(c.final_degree(), Some(6));
}

#[test]
fn family_member_reaches_degree_five() {
    let a1 = g24_family(1).unwrap().graph;
    let c = to_regular(&a1).unwrap();
    assert_valid(&c);
    assert_eq!(c.final_degree(), Some(5));
}

#[test]
fn triangle_degree_comes_from_the_oracle() {
    let t = make_triangle(11, 13, 17).unwrap();
    let c = to_regular(&t.graph).unwrap();
    assert_valid(&c);
    let (flat, seq) = flatten_to_single_vertex(&t.graph).unwrap();
    seq.replay().unwrap();
    assert_eq!(flat.vertex_count(), 1);
    let n = recognize_regular(&universal_ball(&flat, 0, 2).unwrap()).degree();
    assert_eq!(c.final_degree(), n);
    assert_eq!(n, Some(43));
    let mut loops: Vec<(u64, u64)> = flat
        .geometric_edges()
        .iter()
        .map(|ge| {
            let (a, b) = (crate::eig::to_u64(&ge.idx_at_from).unwrap(), crate::eig::to_u64(&ge.idx_at_to).unwrap());
            (a.min(b), a.max(b))
        })
        .collect();
    loops.sort();
    assert_eq!(loops, vec![(1, 1), (1, 10), (1, 12), (1, 16)]);
}

#[test]
fn flatten_two_vertices() {
    let (flat, seq) = flatten_to_single_vertex(&two_vertex()).unwrap();
    seq.replay().unwrap();
    assert_eq!(flat.vertex_count(), 1);
    assert_eq!(flat.directed_index_sum(), big(6));
    let l = degree_ledger(&two_vertex()).unwrap();
    assert_eq!(l.oracle, Some(6));
    assert!(l.directed_agrees);
    assert_eq!(l.formula, 7);
}

#[test]
fn flatten_single_vertex_is_empty() {
    let (flat, seq) = flatten_to_single_vertex(&EIGraph::single_loop(2, 4)).unwrap();
    assert!(seq.is_empty());
    assert!(flat.same_as(&EIGraph::single_loop(2, 4)));
}

#[test]
fn elementary_input_is_rejected() {
    assert!(matches!(to_regular(&EIGraph::single_loop(1, 1)), Err(crate::Error::Elementary)));
}

#[test]
fn diameter_between_two_loops() {
    let c = diameter_commation(&EIGraph::single_loop(2, 4), &EIGraph::single_loop(2, 6)).unwrap();
    let r = assert_valid(&c);
    assert_eq!(r.word, "↗↖↗↖↗↖");
    assert_eq!(c.final_degree(), Some(14));
}

#[test]
fn diameter_identical_inputs_compress() {
    let g = EIGraph::single_loop(2, 4);
    let c = diameter_commation(&g, &g).unwrap();
    assert!(assert_valid(&c).length <= 3);
}

#[test]
fn diameter_unimodular_bridge() {
    let c = diameter_commation(&rose(2), &rose(3)).unwrap();
    let r = assert_valid(&c);
    assert_eq!(r.word, "↖↗");
    assert_eq!(r.axioms, 2);
}

#[test]
fn diameter_mixed_unimodularity() {
    let c = diameter_commation(&rose(2), &EIGraph::single_loop(2, 4)).unwrap();
    let r = assert_valid(&c);
    assert_eq!(r.word, "↖↗↖↗↖");
    assert_eq!(r.axioms, 2);
}

#[test]
fn diameter_equalizes_with_slides() {
    let t = make_triangle(3, 5, 7).unwrap();
    let c = diameter_commation(&EIGraph::single_loop(2, 4), &t.graph).unwrap();
    let r = assert_valid(&c);
    assert_eq!(r.word, "↗↖↗↖↗↖");
    let Some(SynthesisPlan::Diameter { m, m_prime, sheets, sheets_prime, equalization_slides, degree }) = c.plan
    else {
        panic!()
    };
    assert_eq!((m, m_prime), (4, 15));
    // three slides on three sheets would need three spare edges, the cover has two
    assert_eq!((sheets, sheets_prime, equalization_slides), (4, 1, 1));
    assert_eq!(degree, 18);
}

#[test]
fn diameter_fails_without_a_usable_edge() {
    // the only non-separating edge of the second graph is the loop (1, 2)
    let t = make_triangle(3, 5, 7).unwrap();
    assert!(matches!(
        diameter_commation(&t.graph, &two_vertex()),
        Err(crate::Error::EqualizationFailed)
    ));
}

#[test]
fn radius_of_the_defining_loop() {
    let c = radius_commation(&EIGraph::single_loop(2, 4)).unwrap();
    assert!(assert_valid(&c).length <= 1);
}

#[test]
fn radius_of_loop_26() {
    let c = radius_commation(&EIGraph::single_loop(2, 6)).unwrap();
    let r = assert_valid(&c);
    assert_eq!(r.word, "↗↖↗↖");
    let n = c.final_degree().unwrap();
    assert!((n - 3).is_power_of_two());
}

#[test]
fn radius_of_the_triangle() {
    let t = make_triangle(11, 13, 17).unwrap();
    let c = radius_commation(&t.graph).unwrap();
    let r = assert_valid(&c);
    assert_eq!(r.word, "↗↖↗↖");
    let Some(SynthesisPlan::Radius { m, i0, i1, i2, .. }) = c.plan else { panic!() };
    assert_eq!(m, 41);
    assert_eq!(i0, 11);
    assert_eq!(i1 * 41 + i2, (1 << 11) + 1);
    assert_eq!(c.final_degree(), Some((1 << 11) + 3));
}

#[test]
fn radius_falls_back_on_family_members() {
    let a2 = g24_family(2).unwrap().graph;
    let c = radius_commation(&a2).unwrap();
    assert_valid(&c);
    assert_eq!(c.final_degree(), Some(7));
}

#[test]
fn corrupted_cover_is_located() {
    let mut c = diameter_commation(&EIGraph::single_loop(2, 4), &EIGraph::single_loop(2, 6)).unwrap();
    let Witness::Chain { pieces } = &mut c.arrows[1].witness else { panic!() };
    let Piece::CoveringMap { map } = &mut pieces[0] else { panic!() };
    let mut file = map.domain.to_file();
    file.edges[0].idx_at_from = crate::eig::IndexValue(big(3));
    map.domain = EIGraph::from_file(&file).unwrap();
    let r = verify(&c);
    assert!(!r.valid);
    assert_eq!(r.violations[0].arrow, Some(1));
}

#[test]
fn wrong_degree_is_rejected() {
    let mut c = to_regular(&EIGraph::single_loop(2, 4)).unwrap();
    c.nodes[3] = CommationNode::RegularTree { degree: 7 };
    let r = verify(&c);
    assert!(!r.valid);
    assert!(r.violations.iter().any(|v| v.arrow == Some(2)));
}
