//! Connected dominating sets: the broadcast routes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::NetworkGraph;
use crate::nodeset::NodeSet;
use crate::DEFAULT_EXACT_LIMIT;

/// A node set that contains the source, is connected from the source along
/// member-to-member edges, and dominates every node through out-edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConnectedDominatingSet(NodeSet);

impl ConnectedDominatingSet {
    /// Wraps `members` after checking the CDS conditions.
    pub fn new(g: &NetworkGraph, members: NodeSet) -> Option<Self> {
        is_cds(g, members).then_some(ConnectedDominatingSet(members))
    }

    pub(crate) fn new_unchecked(members: NodeSet) -> Self {
        ConnectedDominatingSet(members)
    }

    pub fn members(&self) -> NodeSet {
        self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(v)
    }

    pub fn weight(&self, w: &[f64]) -> f64 {
        self.0.weight(w)
    }

    /// Hop layers: layer 0 is the source, layer k holds members first reached
    /// after k member-to-member hops.
    pub fn layers(&self, g: &NetworkGraph) -> Vec<NodeSet> {
        let mut layers = vec![NodeSet::singleton(g.source())];
        let mut seen = layers[0];
        loop {
            let next = g
                .out_of(*layers.last().unwrap())
                .intersection(self.0)
                .difference(seen);
            if next.is_empty() {
                return layers;
            }
            seen = seen.union(next);
            layers.push(next);
        }
    }
}

pub fn is_cds(g: &NetworkGraph, s: NodeSet) -> bool {
    if !s.contains(g.source()) || !s.is_subset(g.all_nodes()) {
        return false;
    }
    if g.reachable_within(s) != s {
        return false;
    }
    s.union(g.out_of(s)) == g.all_nodes()
}

/// A CDS is minimal when no single non-source member can be dropped.
/// CDSs are closed under adding nodes, so this equals inclusion-minimality.
pub fn is_minimal_cds(g: &NetworkGraph, s: NodeSet) -> bool {
    is_cds(g, s)
        && s
            .iter()
            .filter(|&v| v != g.source())
            .all(|v| !is_cds(g, s.without(v)))
}

/// Every minimal CDS of `g`, in lexicographic order of member lists.
pub fn enumerate_minimal_cds(g: &NetworkGraph) -> Result<Vec<ConnectedDominatingSet>> {
    enumerate_minimal_cds_with_limit(g, DEFAULT_EXACT_LIMIT)
}

pub fn enumerate_minimal_cds_with_limit(
    g: &NetworkGraph,
    limit: usize,
) -> Result<Vec<ConnectedDominatingSet>> {
    let n = g.node_count();
    if n > limit {
        return Err(Error::LimitExceeded { nodes: n, limit });
    }
    let src = g.source();
    // Scan subsets of the non-source nodes; the source is always a member.
    let others: Vec<usize> = (0..n).filter(|&v| v != src).collect();
    let mut found = Vec::new();
    for mask in 0u64..1 << others.len() {
        let mut s = NodeSet::singleton(src);
        for (k, &v) in others.iter().enumerate() {
            if mask >> k & 1 == 1 {
                s.insert(v);
            }
        }
        // Domination is monotone: skip sets that cannot dominate.
        if s.union(g.out_of(s)) != g.all_nodes() {
            continue;
        }
        if is_minimal_cds(g, s) {
            found.push(ConnectedDominatingSet(s));
        }
    }
    found.sort_by(|a, b| a.0.lex_cmp(b.0));
    Ok(found)
}
