//! Commation certificates: chains of groups joined by copci arrows, each
//! arrow carrying a checkable witness.

mod synth;
mod verify;

pub use synth::{
    degree_ledger, diameter_commation, flatten_to_single_vertex, radius_commation, to_regular,
    unimodular_bridge, DegreeLedger, SynthesisPlan,
};
pub use verify::{verify, ArrowViolation, CommationReport, VERIFY_BALL_BUDGET};

use serde::{Deserialize, Serialize};

use crate::eig::EIGraph;
use crate::moves::{Arrow, MoveKind, MoveParams, MoveSequence};
use crate::covers::CoveringMap;
use crate::eig::IsoWitness;

pub const G24: &str = "G24";
pub const LATTICE: &str = "lattice";
pub const BASS_KULKARNI: &str = "bass-kulkarni";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CommationNode {
    Eig {
        graph: EIGraph,
    },
    RegularTree {
        degree: u64,
    },
    Named {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axiom: Option<String>,
    },
}

impl CommationNode {
    pub fn eig(g: &EIGraph) -> Self {
        CommationNode::Eig { graph: g.clone() }
    }

    pub fn g24() -> Self {
        CommationNode::Named {
            name: G24.into(),
            axiom: None,
        }
    }

    pub fn lattice() -> Self {
        CommationNode::Named {
            name: LATTICE.into(),
            axiom: Some(BASS_KULKARNI.into()),
        }
    }

    /// The edge-indexed graph standing for this node, if any. `G24` stands
    /// for the loop `(2, 4)`.
    pub fn graph(&self) -> Option<EIGraph> {
        match self {
            CommationNode::Eig { graph } => Some(graph.clone()),
            CommationNode::Named { name, .. } if name == G24 => Some(EIGraph::single_loop(2, 4)),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            CommationNode::Eig { graph } => format!(
                "eig({} vertices, {} edges)",
                graph.vertex_count(),
                graph.geometric_edge_count()
            ),
            CommationNode::RegularTree { degree } => format!("Aut(T_{degree})"),
            CommationNode::Named { name, axiom: None } => name.clone(),
            CommationNode::Named {
                name,
                axiom: Some(a),
            } => format!("{name} [axiom: {a}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    LeftIntoRight,
    RightIntoLeft,
}

impl Direction {
    pub fn symbol(self) -> char {
        match self {
            Direction::LeftIntoRight => '↗',
            Direction::RightIntoLeft => '↖',
        }
    }
}

/// A move replayed during verification; intermediate graphs are recomputed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactStep {
    pub kind: MoveKind,
    pub params: MoveParams,
    pub arrow: Arrow,
}

pub fn compact(seq: &MoveSequence) -> Vec<CompactStep> {
    seq.steps
        .iter()
        .map(|s| CompactStep {
            kind: s.record.kind,
            params: s.record.params.clone(),
            arrow: s.record.arrow,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    CoveringMap { map: CoveringMap },
    Moves { steps: Vec<CompactStep> },
    Iso { witness: IsoWitness, graph: EIGraph },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "witness_kind", content = "witness", rename_all = "snake_case")]
pub enum Witness {
    /// Pieces leading from one graph node to the other.
    Chain { pieces: Vec<Piece> },
    /// Pieces leading from the graph node to a graph whose universal cover
    /// subdivides the regular tree of the other node.
    RegularTreeEmbedding { pieces: Vec<Piece>, radius: u32 },
    /// `G24` acts on the regular tree of degree `2^k + 3`.
    G24Family { k: u32 },
    /// A common uniform lattice of two unimodular groups, assumed.
    Axiom { name: String },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Chain { .. } => "chain",
            Witness::RegularTreeEmbedding { .. } => "regular_tree_embedding",
            Witness::G24Family { .. } => "g24_family",
            Witness::Axiom { .. } => "axiom",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommationArrow {
    pub dir: Direction,
    /// The pieces start at the right node instead of the left one.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub from_right: bool,
    #[serde(flatten)]
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeNote {
    pub node: usize,
    pub degree: i64,
    pub formula: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commation {
    pub nodes: Vec<CommationNode>,
    pub arrows: Vec<CommationArrow>,
    #[serde(default)]
    pub predicted_degrees: Vec<DegreeNote>,
    #[serde(default)]
    pub oracle_degrees: Vec<DegreeNote>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<SynthesisPlan>,
}

impl Commation {
    pub fn single(node: CommationNode) -> Self {
        Commation {
            nodes: vec![node],
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn word(&self) -> String {
        self.arrows.iter().map(|a| a.dir.symbol()).collect()
    }

    pub fn push(&mut self, dir: Direction, from_right: bool, witness: Witness, node: CommationNode) {
        self.arrows.push(CommationArrow {
            dir,
            from_right,
            witness,
        });
        self.nodes.push(node);
    }

    /// Appends `other`, whose first node must equal this one's last node.
    pub fn extend(&mut self, other: Commation) {
        let offset = self.nodes.len() - 1;
        self.nodes.extend(other.nodes.into_iter().skip(1));
        self.arrows.extend(other.arrows);
        let shift = |mut d: DegreeNote| {
            d.node += offset;
            d
        };
        self.predicted_degrees
            .extend(other.predicted_degrees.into_iter().map(shift));
        self.oracle_degrees
            .extend(other.oracle_degrees.into_iter().map(shift));
    }

    /// The same chain read from right to left.
    pub fn reversed(mut self) -> Self {
        let n = self.nodes.len();
        self.nodes.reverse();
        self.arrows.reverse();
        for a in self.arrows.iter_mut() {
            a.dir = match a.dir {
                Direction::LeftIntoRight => Direction::RightIntoLeft,
                Direction::RightIntoLeft => Direction::LeftIntoRight,
            };
            a.from_right = !a.from_right;
        }
        for d in self
            .predicted_degrees
            .iter_mut()
            .chain(self.oracle_degrees.iter_mut())
        {
            d.node = n - 1 - d.node;
        }
        self
    }

    pub fn final_degree(&self) -> Option<u64> {
        self.nodes.iter().rev().find_map(|n| match n {
            CommationNode::RegularTree { degree } => Some(*degree),
            _ => None,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("commation serializes")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests;
