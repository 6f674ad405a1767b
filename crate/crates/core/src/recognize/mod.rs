//! Recognition of graphs of stably matchable pairs.

mod dp;
mod oracle;
mod path;
mod treedec;

pub use dp::{recognize_treewidth_dp, DpStats};
pub use oracle::recognize_oracle;
pub use path::{recognize_path_search, recognize_path_search_with_stats, SearchStats};
pub use treedec::{tree_decompose, NodeKind, TdNode, TreeDecomposition};

use crate::error::Result;
use crate::graph::{BipartiteGraph, Matching};
use crate::rotation::{Rotation, RotationSystem};

/// Resource guards shared by the recognizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest component edge count the oracle accepts.
    pub oracle_max_edges: usize,
    /// Search states (path search) or states per node (DP).
    pub max_states: usize,
    /// Perfect matchings enumerated per component.
    pub max_matchings: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            oracle_max_edges: 14,
            max_states: 20_000_000,
            max_matchings: 1_000_000,
        }
    }
}

/// Which recognizer to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Oracle,
    Path,
    Dp,
}

/// Decision plus witness when the algorithm produces one.
#[derive(Debug, Clone)]
pub struct Recognition {
    pub realizable: bool,
    pub witness: Option<RotationSystem>,
    pub states: u64,
}

/// Runs the chosen recognizer.
pub fn recognize(g: &BipartiteGraph, alg: Algorithm, limits: &Limits) -> Result<Recognition> {
    match alg {
        Algorithm::Oracle => {
            let w = recognize_oracle(g, limits)?;
            Ok(Recognition {
                realizable: w.is_some(),
                witness: w,
                states: 0,
            })
        }
        Algorithm::Path => {
            let (w, stats) = recognize_path_search_with_stats(g, limits)?;
            Ok(Recognition {
                realizable: w.is_some(),
                witness: w,
                states: stats.states,
            })
        }
        Algorithm::Dp => {
            let td = tree_decompose(g);
            let (ok, stats) = recognize_treewidth_dp(g, &td, limits)?;
            Ok(Recognition {
                realizable: ok,
                witness: None,
                states: stats.total_states,
            })
        }
    }
}

/// A connected piece of the input with its vertex map back to the input.
pub(crate) struct Piece {
    pub graph: BipartiteGraph,
    pub map: Vec<usize>,
}

/// Components with at least one edge, each as its own graph.
pub(crate) fn pieces(g: &BipartiteGraph) -> Vec<Piece> {
    g.components()
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            let (graph, map) = g.induced(&c);
            Piece { graph, map }
        })
        .collect()
}

/// The rotation system of a single-edge component.
pub(crate) fn single_edge_system(h: &BipartiteGraph) -> RotationSystem {
    let e = Matching::from_sorted_unchecked(vec![h.edge(0)]);
    RotationSystem::new(h.clone(), e.clone(), e, vec![], &[]).expect("no relations")
}

/// Lifts per-component systems to one system on `g`.
pub(crate) fn assemble(g: &BipartiteGraph, parts: &[(Piece, RotationSystem)]) -> Result<RotationSystem> {
    let nl = g.nl();
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    let mut rotations = Vec::new();
    let mut rel = Vec::new();
    for (piece, rs) in parts {
        let hn = piece.graph.nl();
        let lift = |(l, r): (usize, usize)| (piece.map[l], piece.map[hn + r] - nl);
        top.extend(rs.top().pairs().iter().map(|&e| lift(e)));
        bottom.extend(rs.bottom().pairs().iter().map(|&e| lift(e)));
        let base = rotations.len();
        for rot in rs.rotations() {
            let walk: Vec<(usize, usize)> = rot.edges().into_iter().map(lift).collect();
            rotations.push(Rotation::from_cycle(&walk)?);
        }
        rel.extend(rs.order().hasse().into_iter().map(|(a, b)| (base + a, base + b)));
    }
    RotationSystem::new(g.clone(), Matching::new(top)?, Matching::new(bottom)?, rotations, &rel)
}
