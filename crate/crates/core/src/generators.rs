//! Standard topologies used by the experiments, tests and benches.

use rand::Rng;

use crate::graph::NetworkGraph;

/// Hub 0 (the source) with capacity `hub_cap`, `leaves` unit-capacity
/// leaves, all links bidirectional.
pub fn star(leaves: usize, hub_cap: u32) -> NetworkGraph {
    let n = leaves + 1;
    let mut cap = vec![1; n];
    cap[0] = hub_cap;
    let edges = (1..n).flat_map(|v| [(0, v), (v, 0)]);
    NetworkGraph::new(n, edges, cap, 0).expect("star is valid")
}

/// Bidirectional path `0 - 1 - ... - (n-1)` sourced at 0.
pub fn path(n: usize, cap: u32) -> NetworkGraph {
    let edges = (1..n).flat_map(|v| [(v - 1, v), (v, v - 1)]);
    NetworkGraph::new(n, edges, vec![cap; n], 0).expect("path is valid")
}

/// Bidirectional `rows x cols` grid, node `r * cols + c`, uniform capacity.
pub fn grid(rows: usize, cols: usize, source: usize, cap: u32) -> NetworkGraph {
    let n = rows * cols;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.extend([(v, v + 1), (v + 1, v)]);
            }
            if r + 1 < rows {
                edges.extend([(v, v + cols), (v + cols, v)]);
            }
        }
    }
    NetworkGraph::new(n, edges, vec![cap; n], source).expect("grid is valid")
}

/// Source 0 with capacity `source_cap` and a single directed link `0 -> 1`.
pub fn bottleneck_pair(source_cap: u32) -> NetworkGraph {
    NetworkGraph::new(2, [(0, 1)], vec![source_cap, 1], 0).expect("pair is valid")
}

/// Random topology on `n` nodes in which every node is reachable from the
/// source 0: a random arborescence plus independent extra edges with
/// probability `p`. With `bidirectional` every edge is mirrored.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, bidirectional: bool, max_cap: u32) -> NetworkGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        let parent = rng.random_range(0..v);
        edges.push((parent, v));
    }
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    if bidirectional {
        let mirrored: Vec<_> = edges.iter().map(|&(u, v)| (v, u)).collect();
        edges.extend(mirrored);
    }
    let cap = (0..n).map(|_| rng.random_range(1..=max_cap)).collect();
    NetworkGraph::new(n, edges, cap, 0).expect("arborescence keeps every node reachable")
}
