//! Network topology and the line-oriented graph file format.
//!
//! ```text
//! # 4-node star, source 0
//! n 4
//! src 0
//! cap 0:1 1:1 2:1 3:1
//! biedge 0 1
//! biedge 0 2
//! biedge 0 3
//! ```
//!
//! `edge u v` adds the directed edge `u -> v`, `biedge u v` adds both
//! directions and `conflict u v` records an explicit interference pair.
//! Nodes without a `cap` entry get capacity 1.

use crate::error::{Error, Result};
use crate::nodeset::{NodeSet, MAX_NODES};

/// Directed wireless topology with per-node transmit capacities and a single
/// broadcast source.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGraph {
    node_count: usize,
    source: usize,
    capacity: Vec<u32>,
    out: Vec<NodeSet>,
    inn: Vec<NodeSet>,
}

impl NetworkGraph {
    /// Builds a validated graph. Every node must be reachable from `source`.
    pub fn new(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        capacity: Vec<u32>,
        source: usize,
    ) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::Validation("graph has no nodes".into()));
        }
        if node_count > MAX_NODES {
            return Err(Error::Validation(format!(
                "{node_count} nodes exceeds the supported maximum of {MAX_NODES}"
            )));
        }
        if source >= node_count {
            return Err(Error::Validation(format!(
                "source {source} out of range for {node_count} nodes"
            )));
        }
        if capacity.len() != node_count {
            return Err(Error::Validation(format!(
                "expected {node_count} capacities, got {}",
                capacity.len()
            )));
        }
        let mut out = vec![NodeSet::EMPTY; node_count];
        let mut inn = vec![NodeSet::EMPTY; node_count];
        for (u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::Validation(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop at node {u}")));
            }
            out[u].insert(v);
            inn[v].insert(u);
        }
        let g = NetworkGraph {
            node_count,
            source,
            capacity,
            out,
            inn,
        };
        let reach = g.reachable_within(NodeSet::full(node_count));
        if reach != NodeSet::full(node_count) {
            let missing = NodeSet::full(node_count).difference(reach);
            return Err(Error::Validation(format!(
                "nodes {missing} are unreachable from source {source}"
            )));
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn capacity(&self, i: usize) -> u32 {
        self.capacity[i]
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacity
    }

    pub fn out_neighbors(&self, i: usize) -> NodeSet {
        self.out[i]
    }

    pub fn in_neighbors(&self, i: usize) -> NodeSet {
        self.inn[i]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.node_count)
    }

    /// Directed edges in ascending `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count).flat_map(move |u| self.out[u].iter().map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    /// Union of the out-neighbourhoods of `set`.
    pub fn out_of(&self, set: NodeSet) -> NodeSet {
        set.iter()
            .fold(NodeSet::EMPTY, |acc, u| acc.union(self.out[u]))
    }

    /// Members of `within` reachable from the source along edges whose both
    /// endpoints lie in `within`. Empty if the source is not in `within`.
    pub fn reachable_within(&self, within: NodeSet) -> NodeSet {
        if !within.contains(self.source) {
            return NodeSet::EMPTY;
        }
        let mut seen = NodeSet::singleton(self.source);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = self.out_of(frontier).intersection(within).difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }

    /// Returns a copy with every capacity multiplied by `k`.
    pub fn scaled_capacities(&self, k: u32) -> NetworkGraph {
        let mut g = self.clone();
        for c in &mut g.capacity {
            *c *= k;
        }
        g
    }

    /// Renders the graph in the text format accepted by [`parse_graph_file`].
    pub fn to_file_string(&self) -> String {
        let mut s = format!("n {}\nsrc {}\ncap", self.node_count, self.source);
        for (i, c) in self.capacity.iter().enumerate() {
            s.push_str(&format!(" {i}:{c}"));
        }
        s.push('\n');
        for (u, v) in self.edges() {
            s.push_str(&format!("edge {u} {v}\n"));
        }
        s
    }
}

/// Parsed contents of a graph file.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFile {
    pub graph: NetworkGraph,
    /// `conflict u v` lines, in file order.
    pub conflicts: Vec<(usize, usize)>,
}

/// Parses a graph file and returns just the topology.
pub fn load_graph(text: &str) -> Result<NetworkGraph> {
    parse_graph_file(text).map(|f| f.graph)
}

pub fn parse_graph_file(text: &str) -> Result<GraphFile> {
    let mut n: Option<usize> = None;
    let mut src: Option<usize> = None;
    let mut caps: Vec<(usize, usize, u32)> = Vec::new();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut conflicts = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: line_no, msg };
        let mut tok = line.split_whitespace();
        let key = tok.next().unwrap();
        let rest: Vec<&str> = tok.collect();
        let int = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| perr(format!("expected a non-negative integer, found `{s}`")))
        };
        let pair = |rest: &[&str]| -> Result<(usize, usize)> {
            match rest {
                [a, b] => Ok((int(a)?, int(b)?)),
                _ => Err(perr(format!("`{key}` takes two node ids"))),
            }
        };
        match key {
            "n" => match rest.as_slice() {
                [v] => n = Some(int(v)?),
                _ => return Err(perr("`n` takes one integer".into())),
            },
            "src" => match rest.as_slice() {
                [v] => src = Some(int(v)?),
                _ => return Err(perr("`src` takes one integer".into())),
            },
            "cap" => {
                if rest.is_empty() {
                    return Err(perr("`cap` needs at least one <node>:<int> entry".into()));
                }
                for entry in rest {
                    let (node, val) = entry
                        .split_once(':')
                        .ok_or_else(|| perr(format!("malformed capacity `{entry}`")))?;
                    let val: u32 = val
                        .parse()
                        .map_err(|_| perr(format!("malformed capacity `{entry}`")))?;
                    caps.push((line_no, int(node)?, val));
                }
            }
            "edge" => {
                let (u, v) = pair(&rest)?;
                edges.push((line_no, u, v));
            }
            "biedge" => {
                let (u, v) = pair(&rest)?;
                edges.push((line_no, u, v));
                edges.push((line_no, v, u));
            }
            "conflict" => {
                let (u, v) = pair(&rest)?;
                if u == v {
                    return Err(perr(format!("self-conflict at node {u}")));
                }
                conflicts.push((u, v));
            }
            other => return Err(perr(format!("unknown directive `{other}`"))),
        }
    }

    let n = match n {
        Some(0) | None => {
            return Err(Error::Parse {
                line: 0,
                msg: "missing or empty node list (`n <int>` with n >= 1)".into(),
            })
        }
        Some(n) => n,
    };
    let src = src.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing `src <int>`".into(),
    })?;
    if n > MAX_NODES {
        return Err(Error::Validation(format!(
            "{n} nodes exceeds the supported maximum of {MAX_NODES}"
        )));
    }
    let mut capacity = vec![1u32; n];
    for (line, node, val) in caps {
        if node >= n {
            return Err(Error::Parse {
                line,
                msg: format!("capacity for node {node} out of range"),
            });
        }
        capacity[node] = val;
    }
    for &(line, u, v) in &edges {
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                msg: format!("edge ({u},{v}) out of range"),
            });
        }
    }
    if let Some(&(u, v)) = conflicts.iter().find(|&&(u, v)| u >= n || v >= n) {
        return Err(Error::Validation(format!("conflict ({u},{v}) out of range")));
    }
    let graph = NetworkGraph::new(n, edges.into_iter().map(|(_, u, v)| (u, v)), capacity, src)?;
    Ok(GraphFile { graph, conflicts })
}
