//! Monotone Not-All-Equal 3-SAT, its gadget reduction to finite-horizon
//! broadcasting, and exhaustive deciders for both problems.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::NetworkGraph;
use crate::nodeset::NodeSet;

/// Largest variable count accepted by [`decide_mnae3sat`].
pub const MAX_SAT_VARS: usize = 24;
/// Nodes that may transmit in [`decide_broadcast`].
pub const MAX_BRANCHING_NODES: usize = 20;
pub const MAX_PACKETS: usize = 8;
pub const MAX_HORIZON: usize = 4;
/// Joint transmission choices explored per slot before giving up.
const MAX_SLOT_CHOICES: u64 = 1 << 24;

/// Clauses over positive literals only; a clause is satisfied when its three
/// variables are not all assigned the same value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mnae3SatInstance {
    var_count: usize,
    clauses: Vec<[usize; 3]>,
}

impl Mnae3SatInstance {
    pub fn new(var_count: usize, clauses: Vec<[usize; 3]>) -> Result<Self> {
        if let Some(c) = clauses.iter().find(|c| c.iter().any(|&v| v >= var_count)) {
            return Err(Error::Instance(format!(
                "clause {c:?} references a variable outside 0..{var_count}"
            )));
        }
        Ok(Mnae3SatInstance { var_count, clauses })
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    /// Parses `p mnae3 <n> <m>` followed by `m` clause lines of three
    /// 1-based variable indices (an optional trailing `0` is accepted).
    /// Lines starting with `c` or `#` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] == "p" {
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                if toks.len() != 4 || toks[1] != "mnae3" {
                    return Err(err("expected `p mnae3 <vars> <clauses>`".into()));
                }
                let n = toks[2].parse().map_err(|_| err(format!("bad variable count `{}`", toks[2])))?;
                let m = toks[3].parse().map_err(|_| err(format!("bad clause count `{}`", toks[3])))?;
                header = Some((n, m));
                continue;
            }
            let (n, _) = header.ok_or_else(|| err("clause before `p mnae3` header".into()))?;
            let mut lits: Vec<usize> = toks
                .iter()
                .map(|t| t.parse::<usize>().map_err(|_| err(format!("bad literal `{t}`"))))
                .collect::<Result<_>>()?;
            if lits.len() == 4 && lits[3] == 0 {
                lits.pop();
            }
            if lits.len() != 3 {
                return Err(err(format!("clause must have exactly 3 variables, got {}", lits.len())));
            }
            if let Some(&v) = lits.iter().find(|&&v| v == 0 || v > n) {
                return Err(err(format!("variable {v} outside 1..={n}")));
            }
            clauses.push([lits[0] - 1, lits[1] - 1, lits[2] - 1]);
        }
        let (n, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing `p mnae3` header".into(),
        })?;
        if clauses.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares {m} clauses, found {}", clauses.len()),
            });
        }
        Mnae3SatInstance::new(n, clauses)
    }

    /// Whether `assignment` (bit `i` = value of variable `i`) satisfies every
    /// clause.
    pub fn is_satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| {
            let ones = c.iter().filter(|&&v| assignment >> v & 1 == 1).count();
            ones > 0 && ones < 3
        })
    }
}

impl fmt::Display for Mnae3SatInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p mnae3 {} {}", self.var_count, self.clauses.len())?;
        for c in &self.clauses {
            writeln!(f, "{} {} {} 0", c[0] + 1, c[1] + 1, c[2] + 1)?;
        }
        Ok(())
    }
}

/// Deliver `packet_count` packets from the source to every node within
/// `horizon` slots, with no interference between transmitters.
#[derive(Debug, Clone, PartialEq)]
pub struct BroadcastInstance {
    pub graph: NetworkGraph,
    pub packet_count: usize,
    pub horizon: usize,
}

/// Source node 0 (capacity 2) feeds variable nodes `1..=n` (capacity 1);
/// clause `j` becomes node `n + 1 + j` (capacity 1) fed by its variables.
pub fn reduce(inst: &Mnae3SatInstance) -> BroadcastInstance {
    let n = inst.var_count;
    let m = inst.clauses.len();
    let mut edges: Vec<(usize, usize)> = (1..=n).map(|v| (0, v)).collect();
    for (j, c) in inst.clauses.iter().enumerate() {
        edges.extend(c.iter().map(|&v| (1 + v, n + 1 + j)));
    }
    let mut cap = vec![1; n + m + 1];
    cap[0] = 2;
    BroadcastInstance {
        graph: NetworkGraph::new(n + m + 1, edges, cap, 0).expect("gadget graph is valid"),
        packet_count: 2,
        horizon: 2,
    }
}

/// Exhaustive truth-assignment scan.
pub fn decide_mnae3sat(inst: &Mnae3SatInstance) -> Result<bool> {
    if inst.var_count > MAX_SAT_VARS {
        return Err(Error::LimitExceeded {
            nodes: inst.var_count,
            limit: MAX_SAT_VARS,
        });
    }
    Ok((0..1u64 << inst.var_count).any(|a| inst.is_satisfied_by(a)))
}

/// Exhaustive search over per-slot transmission choices. A node may send
/// any `c_i` packets it held at the start of the slot; since receptions
/// only ever help, sending fewer than `min(c_i, held)` packets is dominated
/// and skipped. Failed `(slot, holdings)` states are memoised.
pub fn decide_broadcast(bi: &BroadcastInstance) -> Result<bool> {
    let g = &bi.graph;
    let branching = (0..g.node_count())
        .filter(|&i| !g.out_neighbors(i).is_empty())
        .count();
    if branching > MAX_BRANCHING_NODES {
        return Err(Error::LimitExceeded {
            nodes: branching,
            limit: MAX_BRANCHING_NODES,
        });
    }
    if bi.packet_count == 0 || bi.packet_count > MAX_PACKETS {
        return Err(Error::Instance(format!(
            "packet count must lie in 1..={MAX_PACKETS}, got {}",
            bi.packet_count
        )));
    }
    if bi.horizon == 0 || bi.horizon > MAX_HORIZON {
        return Err(Error::Instance(format!(
            "horizon must lie in 1..={MAX_HORIZON}, got {}",
            bi.horizon
        )));
    }
    let full = (1u32 << bi.packet_count) - 1;
    let mut state = vec![0u32; g.node_count()];
    state[g.source()] = full;
    let mut search = Search {
        g,
        full,
        horizon: bi.horizon,
        failed: HashSet::new(),
    };
    search.run(0, state)
}

struct Search<'a> {
    g: &'a NetworkGraph,
    full: u32,
    horizon: usize,
    failed: HashSet<(usize, Vec<u32>)>,
}

impl Search<'_> {
    fn run(&mut self, slot: usize, state: Vec<u32>) -> Result<bool> {
        if state.iter().all(|&h| h == self.full) {
            return Ok(true);
        }
        if slot == self.horizon || self.failed.contains(&(slot, state.clone())) {
            return Ok(false);
        }
        // Nodes with something new to offer and the packet sets they may send.
        let mut movers: Vec<(NodeSet, Vec<u32>)> = Vec::new();
        let mut combos = 1u64;
        for (i, &held) in state.iter().enumerate() {
            let out = self.g.out_neighbors(i);
            if held == 0 || out.iter().all(|j| state[j] & held == held) {
                continue;
            }
            let k = (self.g.capacity(i) as usize).min(held.count_ones() as usize);
            let choices = subsets_of_size(held, k);
            combos = combos.saturating_mul(choices.len() as u64);
            if combos > MAX_SLOT_CHOICES {
                return Err(Error::LimitExceeded {
                    nodes: movers.len() + 1,
                    limit: MAX_BRANCHING_NODES,
                });
            }
            movers.push((out, choices));
        }
        let mut pick = vec![0usize; movers.len()];
        loop {
            let mut next = state.clone();
            for ((out, choices), &p) in movers.iter().zip(&pick) {
                for j in out.iter() {
                    next[j] |= choices[p];
                }
            }
            if self.run(slot + 1, next)? {
                return Ok(true);
            }
            // Mixed-radix increment; done when every digit wraps.
            let mut d = 0;
            while d < pick.len() {
                pick[d] += 1;
                if pick[d] < movers[d].1.len() {
                    break;
                }
                pick[d] = 0;
                d += 1;
            }
            if d == pick.len() {
                break;
            }
        }
        self.failed.insert((slot, state));
        Ok(false)
    }
}

fn subsets_of_size(mask: u32, k: usize) -> Vec<u32> {
    let bits: Vec<u32> = (0..32).filter(|b| mask >> b & 1 == 1).collect();
    let mut out = Vec::new();
    for sel in 0u32..1 << bits.len() {
        if sel.count_ones() as usize == k {
            out.push(
                bits.iter()
                    .enumerate()
                    .filter(|(i, _)| sel >> i & 1 == 1)
                    .fold(0, |acc, (_, &b)| acc | 1 << b),
            );
        }
    }
    out
}

/// Structured decider for graphs produced by [`reduce`]: in slot 1 the
/// source hands both packets to every variable node, and in slot 2 each
/// variable node forwards one of them, so the question is whether some
/// choice in `{0,1}^n` shows both packets to every clause node.
pub fn decide_gadget(bi: &BroadcastInstance) -> Result<bool> {
    let g = &bi.graph;
    let src = g.source();
    let vars = g.out_neighbors(src);
    let clauses = g.all_nodes().difference(vars).without(src);
    let shaped = bi.packet_count == 2
        && bi.horizon == 2
        && g.capacity(src) >= 2
        && vars.iter().all(|v| g.in_neighbors(v) == NodeSet::singleton(src) && g.capacity(v) == 1)
        && vars.iter().all(|v| g.out_neighbors(v).is_subset(clauses))
        && clauses.iter().all(|c| g.out_neighbors(c).is_empty() && g.in_neighbors(c).is_subset(vars));
    if !shaped {
        return Err(Error::Instance("graph is not a reduction gadget".into()));
    }
    let var_list = vars.to_vec();
    if var_list.len() > MAX_SAT_VARS {
        return Err(Error::LimitExceeded {
            nodes: var_list.len(),
            limit: MAX_SAT_VARS,
        });
    }
    let feeds: Vec<Vec<usize>> = clauses
        .iter()
        .map(|c| {
            var_list
                .iter()
                .enumerate()
                .filter(|(_, &v)| g.in_neighbors(c).contains(v))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    Ok((0..1u64 << var_list.len()).any(|x| {
        feeds.iter().all(|f| {
            let ones = f.iter().filter(|&&k| x >> k & 1 == 1).count();
            ones > 0 && ones < f.len()
        })
    }))
}

/// `m` clauses over `n` variables; each clause uses three distinct
/// variables when `n >= 3`.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, m: usize) -> Mnae3SatInstance {
    random_instance_with(rng, n, m, true)
}

/// Like [`random_instance`], but with `distinct = false` each clause draws
/// its variables independently, so repeats (and unsatisfiable clauses such
/// as `(x, x, x)`) occur.
pub fn random_instance_with<R: Rng>(rng: &mut R, n: usize, m: usize, distinct: bool) -> Mnae3SatInstance {
    assert!(n > 0 || m == 0, "clauses need at least one variable");
    let clauses = (0..m)
        .map(|_| {
            if distinct && n >= 3 {
                let s = sample(rng, n, 3);
                [s.index(0), s.index(1), s.index(2)]
            } else {
                [rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n)]
            }
        })
        .collect();
    Mnae3SatInstance::new(n, clauses).expect("indices drawn below n")
}

/// Checks the restricted form the reduction is claimed to produce: acyclic,
/// at most two distinct capacities, in-degree at most 3.
pub fn check_restricted_form(bi: &BroadcastInstance) -> std::result::Result<(), String> {
    let g = &bi.graph;
    let mut caps = g.capacities().to_vec();
    caps.sort_unstable();
    caps.dedup();
    if caps.len() > 2 {
        return Err(format!("{} distinct capacities", caps.len()));
    }
    if let Some(v) = (0..g.node_count()).find(|&v| g.in_neighbors(v).len() > 3) {
        return Err(format!("node {v} has in-degree {}", g.in_neighbors(v).len()));
    }
    // Kahn's algorithm.
    let mut indeg: Vec<usize> = (0..g.node_count()).map(|v| g.in_neighbors(v).len()).collect();
    let mut ready: Vec<usize> = (0..g.node_count()).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = ready.pop() {
        seen += 1;
        for v in g.out_neighbors(u).iter() {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(v);
            }
        }
    }
    if seen != g.node_count() {
        return Err("graph has a directed cycle".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn inst(n: usize, clauses: &[[usize; 3]]) -> Mnae3SatInstance {
        Mnae3SatInstance::new(n, clauses.to_vec()).unwrap()
    }

    #[test]
    fn single_clause_gadget() {
        let i = inst(3, &[[0, 1, 2]]);
        let bi = reduce(&i);
        assert_eq!(bi.graph.node_count(), 5);
        let mut edges: Vec<_> = bi.graph.edges().collect();
        edges.sort();
        assert_eq!(edges, vec![(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]);
        assert_eq!((bi.packet_count, bi.horizon), (2, 2));
        assert_eq!(bi.graph.capacities(), &[2, 1, 1, 1, 1]);
        assert!(decide_mnae3sat(&i).unwrap());
        assert!(decide_broadcast(&bi).unwrap());
        assert!(decide_gadget(&bi).unwrap());
    }

    #[test]
    fn empty_instance() {
        let i = inst(0, &[]);
        let bi = reduce(&i);
        assert_eq!(bi.graph.node_count(), 1);
        assert!(decide_mnae3sat(&i).unwrap());
        assert!(decide_broadcast(&bi).unwrap());
        assert!(decide_gadget(&bi).unwrap());
    }

    #[test]
    fn duplicated_clause_same_answer() {
        let once = reduce(&inst(3, &[[0, 1, 2]]));
        let twice = reduce(&inst(3, &[[0, 1, 2], [0, 1, 2]]));
        assert_eq!(decide_broadcast(&once).unwrap(), decide_broadcast(&twice).unwrap());
    }

    #[test]
    fn repeated_variable_clause_is_unsatisfiable() {
        let i = inst(1, &[[0, 0, 0]]);
        assert!(!decide_mnae3sat(&i).unwrap());
        let bi = reduce(&i);
        assert_eq!(bi.graph.edge_count(), 2);
        assert!(!decide_broadcast(&bi).unwrap());
        assert!(!decide_gadget(&bi).unwrap());
    }

    #[test]
    fn counts_for_random_instance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let i = random_instance(&mut rng, 6, 4);
        let bi = reduce(&i);
        assert_eq!(bi.graph.node_count(), 6 + 4 + 1);
        assert_eq!(bi.graph.edge_count(), 6 + 3 * 4);
        check_restricted_form(&bi).unwrap();
    }

    #[test]
    fn all_triples_of_five_is_unsat() {
        // Every 3-subset of 5 variables: any 2-colouring of 5 points has a
        // monochromatic triple.
        let mut clauses = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                for c in b + 1..5 {
                    clauses.push([a, b, c]);
                }
            }
        }
        let i = inst(5, &clauses);
        assert!(!decide_mnae3sat(&i).unwrap());
        assert!(!decide_broadcast(&reduce(&i)).unwrap());
    }

    #[test]
    fn general_decider_on_small_graphs() {
        let path = generators::path(3, 1);
        let at = |graph: &NetworkGraph, m, t| {
            decide_broadcast(&BroadcastInstance {
                graph: graph.clone(),
                packet_count: m,
                horizon: t,
            })
            .unwrap()
        };
        assert!(!at(&path, 1, 1));
        assert!(at(&path, 1, 2));
        assert!(!at(&path, 2, 2));
        assert!(at(&path, 2, 3));
        let star = generators::star(3, 1);
        assert!(!at(&star, 2, 1));
        assert!(at(&star, 2, 2));
        let fat = generators::star(3, 2);
        assert!(at(&fat, 2, 1));
    }

    #[test]
    fn decider_limits() {
        let big = Mnae3SatInstance::new(25, vec![]).unwrap();
        assert!(matches!(decide_mnae3sat(&big), Err(Error::LimitExceeded { .. })));
        let bi = BroadcastInstance {
            graph: generators::path(3, 1),
            packet_count: 0,
            horizon: 2,
        };
        assert!(matches!(decide_broadcast(&bi), Err(Error::Instance(_))));
        let not_gadget = BroadcastInstance {
            graph: generators::path(3, 1),
            packet_count: 2,
            horizon: 2,
        };
        assert!(matches!(decide_gadget(&not_gadget), Err(Error::Instance(_))));
    }

    #[test]
    fn parse_and_print() {
        let text = "c demo\np mnae3 4 2\n1 2 3 0\n2 3 4\n";
        let i = Mnae3SatInstance::parse(text).unwrap();
        assert_eq!(i.var_count(), 4);
        assert_eq!(i.clauses(), &[[0, 1, 2], [1, 2, 3]]);
        assert_eq!(Mnae3SatInstance::parse(&i.to_string()).unwrap(), i);
    }

    #[test]
    fn parse_errors() {
        for (text, line) in [
            ("1 2 3\n", 1),
            ("p mnae3 3 1\n1 2\n", 2),
            ("p mnae3 3 1\n1 2 4\n", 2),
            ("p mnae3 3 1\n1 x 3\n", 2),
            ("p mnae3 3 1\n0 1 2\n", 2),
            ("p sat 3 1\n", 1),
            ("p mnae3 3 2\n1 2 3\n", 0),
            ("", 0),
        ] {
            match Mnae3SatInstance::parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn reduction_preserves_answers(seed in any::<u64>(), n in 1usize..7, m in 0usize..8, distinct in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let i = random_instance_with(&mut rng, n, m, distinct);
            let bi = reduce(&i);
            prop_assert!(check_restricted_form(&bi).is_ok());
            let sat = decide_mnae3sat(&i).unwrap();
            prop_assert_eq!(decide_broadcast(&bi).unwrap(), sat);
            prop_assert_eq!(decide_gadget(&bi).unwrap(), sat);
        }
    }
}
