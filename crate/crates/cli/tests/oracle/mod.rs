//! Brute-force reference implementations. Nothing here calls the library's
//! own predicates; graphs are read only through their edge lists.

use umw_core::NetworkGraph;

pub struct Adjacency {
    pub n: usize,
    pub source: usize,
    pub out: Vec<Vec<usize>>,
}

impl Adjacency {
    pub fn of(g: &NetworkGraph) -> Self {
        let n = g.node_count();
        let mut out = vec![Vec::new(); n];
        for (u, v) in g.edges() {
            out[u].push(v);
        }
        Adjacency { n, source: g.source(), out }
    }

    fn members(&self, mask: u64) -> Vec<usize> {
        (0..self.n).filter(|&i| mask >> i & 1 == 1).collect()
    }

    /// Source inside, every node in the set or hit by a member's out-edge,
    /// and every member reachable from the source through members.
    pub fn is_cds(&self, mask: u64) -> bool {
        if mask >> self.source & 1 == 0 {
            return false;
        }
        let mut covered = mask;
        for u in self.members(mask) {
            for &v in &self.out[u] {
                covered |= 1 << v;
            }
        }
        if covered != (1u64 << self.n) - 1 {
            return false;
        }
        let mut seen = 1u64 << self.source;
        let mut stack = vec![self.source];
        while let Some(u) = stack.pop() {
            for &v in &self.out[u] {
                if mask >> v & 1 == 1 && seen >> v & 1 == 0 {
                    seen |= 1 << v;
                    stack.push(v);
                }
            }
        }
        seen == mask
    }

    pub fn is_minimal_cds(&self, mask: u64) -> bool {
        self.is_cds(mask) && self.members(mask).into_iter().all(|i| !self.is_cds(mask & !(1 << i)))
    }

    pub fn minimal_cdss(&self) -> Vec<u64> {
        let mut all: Vec<u64> = (0..1u64 << self.n).filter(|&m| self.is_minimal_cds(m)).collect();
        all.sort_by_key(|&m| self.members(m));
        all
    }

    /// Lightest minimal CDS, lexicographically smallest member list on ties.
    pub fn min_weight_cds(&self, w: &[f64]) -> (Vec<usize>, f64) {
        let mut best: Option<(f64, Vec<usize>)> = None;
        for m in self.minimal_cdss() {
            let members = self.members(m);
            let weight: f64 = members.iter().map(|&i| w[i]).sum();
            let better = match &best {
                None => true,
                Some((bw, bm)) => weight < *bw || (weight == *bw && members < *bm),
            };
            if better {
                best = Some((weight, members));
            }
        }
        let (w, m) = best.expect("the full node set is a CDS");
        (m, w)
    }

    /// Pairs that clash under primary interference: a link between them in
    /// either direction, or a common out-neighbour.
    pub fn primary_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let linked = self.out[i].contains(&j) || self.out[j].contains(&i);
                let shared = self.out[i].iter().any(|v| self.out[j].contains(v));
                if linked || shared {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }
}

pub fn is_independent(pairs: &[(usize, usize)], mask: u64) -> bool {
    pairs.iter().all(|&(a, b)| mask >> a & 1 == 0 || mask >> b & 1 == 0)
}

pub fn independent_sets(n: usize, pairs: &[(usize, usize)]) -> Vec<u64> {
    (0..1u64 << n).filter(|&m| is_independent(pairs, m)).collect()
}

/// Heaviest independent set using only positive-weight nodes,
/// lexicographically smallest member list on ties.
pub fn max_weight_is(n: usize, pairs: &[(usize, usize)], w: &[f64]) -> (Vec<usize>, f64) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for m in independent_sets(n, pairs) {
        let members: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
        if members.iter().any(|&i| w[i] <= 0.0) {
            continue;
        }
        let weight: f64 = members.iter().map(|&i| w[i]).sum();
        if weight > best.0 || (weight == best.0 && members < best.1) {
            best = (weight, members);
        }
    }
    (best.1, best.0)
}

/// `max over 1 <= tau <= t of (sum_{s=tau}^{t} (a_s - mu_s))^+` for every
/// prefix length `t`, one node at a time.
pub fn skorokhod(a: &[f64], mu: &[f64]) -> f64 {
    let t = a.len();
    (0..t)
        .map(|tau| (tau..t).map(|s| a[s] - mu[s]).sum::<f64>())
        .fold(0.0, f64::max)
}
