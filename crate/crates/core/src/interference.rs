//! Node-centric interference: conflict graphs and the feasible schedules they
//! admit (their independent sets).

use crate::error::{Error, Result};
use crate::graph::NetworkGraph;
use crate::nodeset::NodeSet;
use crate::DEFAULT_EXACT_LIMIT;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InterferenceModel {
    /// Every node on its own channel; any subset may transmit together.
    NoInterference,
    /// `i` and `j` conflict when either is in range of the other or their
    /// out-neighbourhoods overlap.
    PrimaryInterference,
    /// Conflict pairs given explicitly; interpreted symmetrically.
    ExplicitConflicts(Vec<(usize, usize)>),
}

/// Symmetric, irreflexive conflict relation over the network's nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    node_count: usize,
    adj: Vec<NodeSet>,
}

impl ConflictGraph {
    pub fn edgeless(node_count: usize) -> Self {
        ConflictGraph {
            node_count,
            adj: vec![NodeSet::EMPTY; node_count],
        }
    }

    pub fn complete(node_count: usize) -> Self {
        let all = NodeSet::full(node_count);
        ConflictGraph {
            node_count,
            adj: (0..node_count).map(|i| all.without(i)).collect(),
        }
    }

    /// Builds from unordered pairs; rejects self-conflicts and out-of-range ids.
    pub fn from_pairs(node_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut cg = ConflictGraph::edgeless(node_count);
        for &(u, v) in pairs {
            if u >= node_count || v >= node_count {
                return Err(Error::Validation(format!("conflict ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::Validation(format!("self-conflict at node {u}")));
            }
            cg.add(u, v);
        }
        Ok(cg)
    }

    fn add(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn neighbors(&self, i: usize) -> NodeSet {
        self.adj[i]
    }

    pub fn conflicts(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    /// Unordered conflict pairs `(i, j)` with `i < j`, ascending.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.node_count)
            .flat_map(|i| {
                self.adj[i]
                    .iter()
                    .filter(move |&j| j > i)
                    .map(move |j| (i, j))
            })
            .collect()
    }

    pub fn is_independent(&self, set: NodeSet) -> bool {
        set.iter().all(|i| !self.adj[i].intersects(set))
    }

    pub fn is_maximal_independent(&self, set: NodeSet) -> bool {
        self.is_independent(set)
            && NodeSet::full(self.node_count)
                .difference(set)
                .iter()
                .all(|v| self.adj[v].intersects(set))
    }
}

pub fn build_conflict_graph(g: &NetworkGraph, model: &InterferenceModel) -> ConflictGraph {
    let n = g.node_count();
    match model {
        InterferenceModel::NoInterference => ConflictGraph::edgeless(n),
        InterferenceModel::PrimaryInterference => {
            let mut cg = ConflictGraph::edgeless(n);
            for i in 0..n {
                for j in i + 1..n {
                    let in_range = g.has_edge(i, j) || g.has_edge(j, i);
                    let shared = g.out_neighbors(i).intersects(g.out_neighbors(j));
                    if in_range || shared {
                        cg.add(i, j);
                    }
                }
            }
            cg
        }
        InterferenceModel::ExplicitConflicts(pairs) => ConflictGraph::from_pairs(n, pairs)
            .expect("explicit conflict pairs must be in range and self-loop-free"),
    }
}

/// All independent sets of `cg` (the empty set included), in ascending
/// lexicographic order of their member lists.
pub fn enumerate_schedules(cg: &ConflictGraph) -> Result<Vec<NodeSet>> {
    enumerate_schedules_with_limit(cg, DEFAULT_EXACT_LIMIT)
}

pub fn enumerate_schedules_with_limit(cg: &ConflictGraph, limit: usize) -> Result<Vec<NodeSet>> {
    let n = cg.node_count();
    if n > limit {
        return Err(Error::LimitExceeded { nodes: n, limit });
    }
    let mut out = Vec::new();
    // Depth-first in member-list order yields lexicographic order directly.
    fn grow(cg: &ConflictGraph, cur: NodeSet, blocked: NodeSet, from: usize, out: &mut Vec<NodeSet>) {
        out.push(cur);
        for v in from..cg.node_count() {
            if !blocked.contains(v) {
                grow(cg, cur.with(v), blocked.union(cg.neighbors(v)), v + 1, out);
            }
        }
    }
    grow(cg, NodeSet::EMPTY, NodeSet::EMPTY, 0, &mut out);
    Ok(out)
}

/// Maximal independent sets, in lexicographic order.
pub fn enumerate_maximal_schedules(cg: &ConflictGraph) -> Result<Vec<NodeSet>> {
    enumerate_maximal_schedules_with_limit(cg, DEFAULT_EXACT_LIMIT)
}

pub fn enumerate_maximal_schedules_with_limit(
    cg: &ConflictGraph,
    limit: usize,
) -> Result<Vec<NodeSet>> {
    Ok(enumerate_schedules_with_limit(cg, limit)?
        .into_iter()
        .filter(|&s| cg.is_maximal_independent(s))
        .collect())
}
