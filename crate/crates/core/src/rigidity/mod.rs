//! Triangle graphs, subgroup labels and the rigidity checks built on them,
//! plus the loop-(2,4) family of essential graphs.

mod g24;
mod labels;
mod obstruction;
mod recolor;

pub use g24::{g24_family, G24Family};
pub use labels::{
    admissible, classify_quotients, cycle_lengths, lift_rule, Clause, Classification, GrowthAudit, Label,
    LabelledQuotient, LabelViolation, SubgroupLabel,
};
pub use obstruction::{
    count_set, obstruction_chain, search_smooth_covers, triangle_obstruction, ChainCertificate,
    CoverSearch, ObstructionProof, OBSTRUCTION_SEARCH_TOTAL,
};
pub use recolor::{recolor_collapse, CollapsedBall};

use serde::Serialize;

use crate::eig::EIGraph;
use crate::error::{Error, Result};

/// A 3-cycle `v1 -> v2 -> v3 -> v1`; edge `e_t` carries `p_t` at its origin
/// `v_t` and 2 at its terminus, with `(p_1, p_2, p_3) = (q, r, s)`.
#[derive(Clone, Debug, Serialize)]
pub struct TriangleSpec {
    pub q: u64,
    pub r: u64,
    pub s: u64,
    #[serde(skip)]
    pub graph: EIGraph,
}

impl TriangleSpec {
    pub fn primes(&self) -> [u64; 3] {
        [self.q, self.r, self.s]
    }

    /// `2 q r s`.
    pub fn n(&self) -> u64 {
        2 * self.q * self.r * self.s
    }
}

pub fn make_triangle(q: u64, r: u64, s: u64) -> Result<TriangleSpec> {
    for p in [q, r, s] {
        if p % 2 == 0 || !num_prime::nt_funcs::is_prime64(p) {
            return Err(Error::BadPrimes(format!("{p} is not an odd prime")));
        }
    }
    if q == r || r == s || q == s {
        return Err(Error::BadPrimes(format!(
            "{q}, {r}, {s} are not pairwise distinct"
        )));
    }
    Ok(TriangleSpec {
        q,
        r,
        s,
        graph: triangle_graph(q, r, s),
    })
}

pub(crate) fn triangle_graph(q: u64, r: u64, s: u64) -> EIGraph {
    let mut b = EIGraph::builder();
    let v: Vec<usize> = ["v1", "v2", "v3"].iter().map(|x| b.vertex(x)).collect();
    b.edge("e1", v[0], v[1], q, 2u64);
    b.edge("e2", v[1], v[2], r, 2u64);
    b.edge("e3", v[2], v[0], s, 2u64);
    b.build()
}
