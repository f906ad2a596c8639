//! Node-weighted minimum-weight CDS and maximum-weight independent set
//! solvers. Ties are broken towards the lexicographically smallest member
//! list so that simulations replay identically.

use std::cmp::Ordering;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cds::{enumerate_minimal_cds_with_limit, is_cds, ConnectedDominatingSet};
use crate::error::{Error, Result};
use crate::graph::NetworkGraph;
use crate::interference::{enumerate_maximal_schedules_with_limit, ConflictGraph};
use crate::nodeset::NodeSet;
use crate::DEFAULT_EXACT_LIMIT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    #[default]
    Exact,
    Greedy,
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(SolverKind::Exact),
            "greedy" => Ok(SolverKind::Greedy),
            other => Err(format!("unknown solver `{other}` (expected exact|greedy)")),
        }
    }
}

/// Nonnegative, finite per-node weights (virtual-queue packets).
#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeights(pub(crate) Vec<f64>);

impl NodeWeights {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if let Some((i, x)) = w.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::Weights(format!("weight {x} at node {i} is not a finite nonnegative value")));
        }
        Ok(NodeWeights(w))
    }

    pub fn zeros(n: usize) -> Self {
        NodeWeights(vec![0.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Nodes with strictly positive weight.
    pub fn support(&self) -> NodeSet {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.0.len(),
            });
        }
        Ok(())
    }
}

/// Precomputed minimal CDSs for repeated exact routing queries.
#[derive(Debug, Clone)]
pub struct McdsTable {
    candidates: Vec<ConnectedDominatingSet>,
}

impl McdsTable {
    pub fn new(g: &NetworkGraph) -> Result<Self> {
        Self::with_limit(g, DEFAULT_EXACT_LIMIT)
    }

    pub fn with_limit(g: &NetworkGraph, limit: usize) -> Result<Self> {
        Ok(McdsTable {
            candidates: enumerate_minimal_cds_with_limit(g, limit)?,
        })
    }

    pub fn candidates(&self) -> &[ConnectedDominatingSet] {
        &self.candidates
    }

    /// Minimum-weight minimal CDS; candidates are stored in lexicographic
    /// order so the first minimum found is the tie-break winner.
    pub fn best(&self, w: &[f64]) -> ConnectedDominatingSet {
        let mut best = self.candidates[0];
        let mut best_w = best.weight(w);
        for d in &self.candidates[1..] {
            let dw = d.weight(w);
            if dw < best_w {
                best = *d;
                best_w = dw;
            }
        }
        best
    }
}

/// Precomputed maximal independent sets for repeated exact activation queries.
#[derive(Debug, Clone)]
pub struct MwisTable {
    maximal: Vec<NodeSet>,
}

impl MwisTable {
    pub fn new(cg: &ConflictGraph) -> Result<Self> {
        Self::with_limit(cg, DEFAULT_EXACT_LIMIT)
    }

    pub fn with_limit(cg: &ConflictGraph, limit: usize) -> Result<Self> {
        Ok(MwisTable {
            maximal: enumerate_maximal_schedules_with_limit(cg, limit)?,
        })
    }

    pub fn maximal_sets(&self) -> &[NodeSet] {
        &self.maximal
    }

    /// Maximum-weight independent set with zero-weight nodes dropped.
    ///
    /// The positive parts of optimal maximal independent sets are exactly the
    /// positive parts of all optimal independent sets, so scanning maximal
    /// sets suffices for both the optimum and the tie-break.
    pub fn best(&self, w: &[f64]) -> NodeSet {
        let support: NodeSet = w
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0.0)
            .map(|(i, _)| i)
            .collect();
        let mut best = NodeSet::EMPTY;
        let mut best_w = 0.0;
        for s in &self.maximal {
            let p = s.intersection(support);
            let pw = p.weight(w);
            match pw.partial_cmp(&best_w).unwrap() {
                Ordering::Greater => {
                    best = p;
                    best_w = pw;
                }
                Ordering::Equal if p.lex_cmp(best) == Ordering::Less => best = p,
                _ => {}
            }
        }
        best
    }
}

pub fn mcds_exact(g: &NetworkGraph, w: &NodeWeights) -> Result<ConnectedDominatingSet> {
    w.check_len(g.node_count())?;
    Ok(McdsTable::new(g)?.best(w.as_slice()))
}

/// Greedy node-weighted CDS: cover, connect, prune.
///
/// 1. Starting from the source, repeatedly add the node with the smallest
///    weight per newly dominated node until every node is dominated.
/// 2. While some member is not reachable from the source inside the set,
///    add the cheapest (node-weighted) path from the reachable part to the
///    nearest unreachable member.
/// 3. Drop members, heaviest first, whenever the remainder is still a CDS.
///
/// The result is always a minimal CDS.
pub fn mcds_greedy(g: &NetworkGraph, w: &NodeWeights) -> Result<ConnectedDominatingSet> {
    let n = g.node_count();
    w.check_len(n)?;
    let w = w.as_slice();
    let all = g.all_nodes();
    let closed = |v: usize| g.out_neighbors(v).with(v);

    let mut d = NodeSet::singleton(g.source());
    let mut dominated = d.union(g.out_of(d));
    while dominated != all {
        let mut pick: Option<(usize, usize)> = None; // (node, gain)
        for v in all.difference(d).iter() {
            let gain = closed(v).difference(dominated).len();
            if gain == 0 {
                continue;
            }
            let better = match pick {
                None => true,
                // w_v / gain_v < w_p / gain_p
                Some((p, pg)) => w[v] * (pg as f64) < w[p] * (gain as f64),
            };
            if better {
                pick = Some((v, gain));
            }
        }
        let (v, _) = pick.expect("an undominated node can always dominate itself");
        d.insert(v);
        dominated = dominated.union(closed(v));
    }

    loop {
        let reach = g.reachable_within(d);
        if reach == d {
            break;
        }
        let path = cheapest_connection(g, w, d, reach);
        d = d.union(path);
    }

    let mut order: Vec<usize> = d.iter().filter(|&v| v != g.source()).collect();
    order.sort_by(|&a, &b| w[b].partial_cmp(&w[a]).unwrap().then(b.cmp(&a)));
    for v in order {
        if is_cds(g, d.without(v)) {
            d.remove(v);
        }
    }
    debug_assert!(is_cds(g, d));
    Ok(ConnectedDominatingSet::new_unchecked(d))
}

/// Node-weighted shortest path from `reach` to the nearest member of
/// `d \ reach`; entering a node outside `d` costs its weight. Returns the
/// nodes on the path.
fn cheapest_connection(g: &NetworkGraph, w: &[f64], d: NodeSet, reach: NodeSet) -> NodeSet {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    for v in reach.iter() {
        dist[v] = 0.0;
    }
    let targets = d.difference(reach);
    loop {
        let mut u = usize::MAX;
        for v in 0..n {
            if !done[v] && dist[v].is_finite() && (u == usize::MAX || dist[v] < dist[u]) {
                u = v;
            }
        }
        assert!(u != usize::MAX, "every node is reachable from the source");
        done[u] = true;
        if targets.contains(u) {
            let mut path = NodeSet::EMPTY;
            let mut cur = u;
            while !reach.contains(cur) {
                path.insert(cur);
                cur = prev[cur];
            }
            return path;
        }
        for v in g.out_neighbors(u).iter() {
            let step = if d.contains(v) { 0.0 } else { w[v] };
            if dist[u] + step < dist[v] {
                dist[v] = dist[u] + step;
                prev[v] = u;
            }
        }
    }
}

pub fn mwis_exact(cg: &ConflictGraph, w: &NodeWeights) -> Result<NodeSet> {
    w.check_len(cg.node_count())?;
    Ok(MwisTable::new(cg)?.best(w.as_slice()))
}

/// Greedy by descending weight (ties to the lower id), skipping conflicts
/// and zero-weight nodes.
pub fn mwis_greedy(cg: &ConflictGraph, w: &NodeWeights) -> Result<NodeSet> {
    w.check_len(cg.node_count())?;
    let w = w.as_slice();
    let mut order: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 0.0).collect();
    order.sort_by(|&a, &b| w[b].partial_cmp(&w[a]).unwrap().then(a.cmp(&b)));
    let mut chosen = NodeSet::EMPTY;
    for v in order {
        if !cg.neighbors(v).intersects(chosen) {
            chosen.insert(v);
        }
    }
    Ok(chosen)
}
