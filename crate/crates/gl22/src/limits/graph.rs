//! The degeneration graph. Each limit is labelled by which of the four
//! special points o± = ±1 (where z = 1) and *± = ih/h′, −ih′/h (where z
//! diverges) have been merged; a limit degenerates further exactly when its
//! grouping refines (a relabelling of) the other's.

use serde::{Deserialize, Serialize};

use super::LimitFamily;

/// A directed edge between node labels.
pub type Arrow = (String, String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpecialPoint {
    OPlus,
    OMinus,
    StarPlus,
    StarMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphNode {
    Generic,
    Limit(LimitFamily),
}

impl GraphNode {
    pub const ALL: [GraphNode; 9] = [
        GraphNode::Generic,
        GraphNode::Limit(LimitFamily::SpecialTrigZero),
        GraphNode::Limit(LimitFamily::SpecialTrigInf),
        GraphNode::Limit(LimitFamily::FullRational),
        GraphNode::Limit(LimitFamily::TwistedTrigonometric),
        GraphNode::Limit(LimitFamily::ConventionalTrigonometric),
        GraphNode::Limit(LimitFamily::TwistedRational),
        GraphNode::Limit(LimitFamily::SpecialRational),
        GraphNode::Limit(LimitFamily::ConventionalRational),
    ];

    pub fn label(self) -> &'static str {
        match self {
            GraphNode::Generic => "T(h)",
            GraphNode::Limit(f) => match f {
                LimitFamily::SpecialTrigZero => "T(0)",
                LimitFamily::SpecialTrigInf => "T(inf)",
                LimitFamily::FullRational => "R(full)",
                LimitFamily::TwistedTrigonometric => "T(twist)",
                LimitFamily::ConventionalTrigonometric => "T(conv)",
                LimitFamily::TwistedRational => "R(twist)",
                LimitFamily::SpecialRational => "R(def)",
                LimitFamily::ConventionalRational => "R(conv)",
            },
        }
    }

    pub fn is_rational(self) -> bool {
        self.label().starts_with('R')
    }

    /// Blocks of merged special points, each as a bitmask over
    /// (o+, o−, *+, *−).
    pub fn partition(self) -> Vec<u8> {
        const OP: u8 = 1;
        const OM: u8 = 2;
        const SP: u8 = 4;
        const SM: u8 = 8;
        match self {
            GraphNode::Generic => vec![OP, OM, SP, SM],
            GraphNode::Limit(f) => match f {
                LimitFamily::SpecialTrigZero => vec![OP, OM, SP | SM],
                LimitFamily::SpecialTrigInf => vec![OP, SM, OM | SP],
                LimitFamily::FullRational => vec![OP | OM, SP, SM],
                LimitFamily::TwistedTrigonometric => vec![OP | SP, OM | SM],
                LimitFamily::ConventionalTrigonometric => vec![OP | SP | SM, OM],
                LimitFamily::TwistedRational => vec![SP, OP | OM | SM],
                LimitFamily::SpecialRational => vec![OP | OM, SP | SM],
                LimitFamily::ConventionalRational => vec![OP | OM | SP | SM],
            },
        }
    }
}

/// The arrows drawn in the standard degeneration diagram.
pub const EXPECTED_ARROWS: [(&str, &str); 14] = [
    ("T(h)", "T(0)"),
    ("T(h)", "T(inf)"),
    ("T(h)", "R(full)"),
    ("T(0)", "T(conv)"),
    ("T(0)", "R(def)"),
    ("T(inf)", "T(twist)"),
    ("T(inf)", "T(conv)"),
    ("T(inf)", "R(twist)"),
    ("R(full)", "R(twist)"),
    ("R(full)", "R(def)"),
    ("T(twist)", "R(conv)"),
    ("T(conv)", "R(conv)"),
    ("R(twist)", "R(conv)"),
    ("R(def)", "R(conv)"),
];

fn swap_bits(m: u8, a: u8, b: u8) -> u8 {
    let (ha, hb) = (m & a != 0, m & b != 0);
    let mut out = m & !(a | b);
    if ha {
        out |= b;
    }
    if hb {
        out |= a;
    }
    out
}

/// The grouping under the relabellings o+ ↔ o− and *+ ↔ *−.
fn images(p: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![];
    for so in [false, true] {
        for ss in [false, true] {
            let mut q: Vec<u8> = p
                .iter()
                .map(|&m| {
                    let m = if so { swap_bits(m, 1, 2) } else { m };
                    if ss {
                        swap_bits(m, 4, 8)
                    } else {
                        m
                    }
                })
                .collect();
            q.sort_unstable();
            out.push(q);
        }
    }
    out
}

/// Every block of `fine` lies in a block of `coarse`.
fn refines(fine: &[u8], coarse: &[u8]) -> bool {
    fine.iter().all(|&b| coarse.iter().any(|&c| b & !c == 0))
}

/// `a` degenerates to `b`: a's grouping strictly refines some relabelling
/// of b's.
pub fn reachable(a: GraphNode, b: GraphNode) -> bool {
    let pa = a.partition();
    let pb = b.partition();
    pa.len() > pb.len() && images(&pb).iter().any(|q| refines(&pa, q))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationGraph {
    pub nodes: Vec<String>,
    /// transitive reduction of the reachability relation
    pub arrows: Vec<Arrow>,
}

impl DegenerationGraph {
    pub fn successors(&self, node: &str) -> Vec<&str> {
        self.arrows.iter().filter(|(a, _)| a == node).map(|(_, b)| b.as_str()).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph degenerations {\n");
        for n in &self.nodes {
            s.push_str(&format!("  \"{n}\";\n"));
        }
        for (a, b) in &self.arrows {
            s.push_str(&format!("  \"{a}\" -> \"{b}\";\n"));
        }
        s.push_str("}\n");
        s
    }

    /// Arrows missing from / extra relative to [`EXPECTED_ARROWS`].
    pub fn diff_against_expected(&self) -> (Vec<Arrow>, Vec<Arrow>) {
        let want: Vec<Arrow> = EXPECTED_ARROWS.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let missing = want.iter().filter(|e| !self.arrows.contains(e)).cloned().collect();
        let extra = self.arrows.iter().filter(|e| !want.contains(e)).cloned().collect();
        (missing, extra)
    }
}

pub fn degeneration_graph() -> DegenerationGraph {
    let nodes = GraphNode::ALL;
    let mut arrows = vec![];
    for &a in &nodes {
        for &b in &nodes {
            if !reachable(a, b) {
                continue;
            }
            let via = nodes.iter().any(|&m| reachable(a, m) && reachable(m, b));
            if !via {
                arrows.push((a.label().to_string(), b.label().to_string()));
            }
        }
    }
    DegenerationGraph { nodes: nodes.iter().map(|n| n.label().to_string()).collect(), arrows }
}
