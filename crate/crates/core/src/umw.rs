//! Virtual queues and the per-slot UMW decisions.
//!
//! Each arrival is counted at once in the virtual queue of every node on its
//! route (precedence relaxed). Routing picks the min-weight CDS under weights
//! `q_i`; activation picks the max-weight feasible schedule under weights
//! `q_i * c_i`. Both minimise the policy-dependent part of the one-slot
//! Lyapunov drift bound.

use crate::cds::ConnectedDominatingSet;
use crate::error::{Error, Result};
use crate::graph::NetworkGraph;
use crate::interference::ConflictGraph;
use crate::nodeset::NodeSet;
use crate::solvers::{mcds_greedy, mwis_greedy, McdsTable, MwisTable, NodeWeights, SolverKind};

#[derive(Debug, Clone, PartialEq)]
pub struct VirtualQueueVector {
    q: Vec<f64>,
    slot: u64,
}

impl VirtualQueueVector {
    pub fn zeros(n: usize) -> Self {
        VirtualQueueVector { q: vec![0.0; n], slot: 0 }
    }

    pub fn from_values(q: Vec<f64>, slot: u64) -> Result<Self> {
        NodeWeights::new(q.clone())?;
        Ok(VirtualQueueVector { q, slot })
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    pub fn slot(&self) -> u64 {
        self.slot
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.q.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max(&self) -> f64 {
        self.q.iter().copied().fold(0.0, f64::max)
    }

    /// In-place form of [`vq_step`].
    pub fn step_mut(&mut self, a: &[f64], mu: &[f64]) -> Result<()> {
        for v in [a.len(), mu.len()] {
            if v != self.q.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.q.len(),
                    got: v,
                });
            }
        }
        for ((q, a), mu) in self.q.iter_mut().zip(a).zip(mu) {
            *q = (*q + a - mu).max(0.0);
        }
        self.slot += 1;
        Ok(())
    }
}

/// `q'_i = max(q_i + a_i - mu_i, 0)`.
pub fn vq_step(vq: &VirtualQueueVector, a: &[f64], mu: &[f64]) -> Result<VirtualQueueVector> {
    let mut next = vq.clone();
    next.step_mut(a, mu)?;
    Ok(next)
}

/// One slot's control action and the arrivals/service it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotDecision {
    pub route: ConnectedDominatingSet,
    pub schedule: NodeSet,
    /// `A_i(t)`: external arrivals this slot if `i` is on the route.
    pub arrivals_applied: Vec<f64>,
    /// `mu_i(t) = c_i` if `i` is scheduled.
    pub service_applied: Vec<f64>,
}

impl SlotDecision {
    pub fn new(
        g: &NetworkGraph,
        route: ConnectedDominatingSet,
        schedule: NodeSet,
        external_arrivals: u64,
    ) -> Self {
        let n = g.node_count();
        let arrivals_applied = (0..n)
            .map(|i| if route.contains(i) { external_arrivals as f64 } else { 0.0 })
            .collect();
        let service_applied = (0..n)
            .map(|i| if schedule.contains(i) { g.capacity(i) as f64 } else { 0.0 })
            .collect();
        SlotDecision {
            route,
            schedule,
            arrivals_applied,
            service_applied,
        }
    }
}

pub fn umw_route(
    vq: &VirtualQueueVector,
    g: &NetworkGraph,
    solver: SolverKind,
) -> Result<ConnectedDominatingSet> {
    let w = NodeWeights::new(vq.q.clone())?;
    match solver {
        SolverKind::Exact => crate::solvers::mcds_exact(g, &w),
        SolverKind::Greedy => mcds_greedy(g, &w),
    }
}

fn activation_weights(vq: &VirtualQueueVector, g: &NetworkGraph, available: NodeSet) -> Vec<f64> {
    vq.q.iter()
        .enumerate()
        .map(|(i, q)| if available.contains(i) { q * g.capacity(i) as f64 } else { 0.0 })
        .collect()
}

/// Max-weight schedule among `available` nodes under weights `q_i * c_i`.
///
/// Unavailable nodes get weight zero; zero-weight nodes are never returned
/// and dropping them keeps a set independent, so this equals the argmax over
/// the conflict graph restricted to `available`.
pub fn umw_activate(
    vq: &VirtualQueueVector,
    g: &NetworkGraph,
    cg: &ConflictGraph,
    solver: SolverKind,
    available: NodeSet,
) -> Result<NodeSet> {
    if vq.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            got: vq.len(),
        });
    }
    let w = NodeWeights::new(activation_weights(vq, g, available))?;
    match solver {
        SolverKind::Exact => crate::solvers::mwis_exact(cg, &w),
        SolverKind::Greedy => mwis_greedy(cg, &w),
    }
}

/// `(B + 2 sum q_i A_i - 2 sum q_i mu_i) / (2 ||q||)` for a given constant `b`.
pub fn drift_bound(vq: &VirtualQueueVector, decision: &SlotDecision, b: f64) -> Result<f64> {
    let norm = vq.norm();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let n = vq.len();
    for v in [decision.arrivals_applied.len(), decision.service_applied.len()] {
        if v != n {
            return Err(Error::DimensionMismatch { expected: n, got: v });
        }
    }
    let lin: f64 = (0..n)
        .map(|i| vq.q[i] * (decision.arrivals_applied[i] - decision.service_applied[i]))
        .sum();
    Ok((b + 2.0 * lin) / (2.0 * norm))
}

/// Drift bound evaluated with the realised `B = sum_i (A_i^2 + mu_i^2)`.
pub fn drift_report(vq: &VirtualQueueVector, decision: &SlotDecision) -> Result<f64> {
    let b_hat: f64 = decision
        .arrivals_applied
        .iter()
        .chain(&decision.service_applied)
        .map(|x| x * x)
        .sum();
    drift_bound(vq, decision, b_hat)
}

/// Solver state reused across slots: exact tables are enumerated once.
#[derive(Debug, Clone)]
pub struct UmwController {
    g: NetworkGraph,
    cg: ConflictGraph,
    router: Router,
    activator: Activator,
}

#[derive(Debug, Clone)]
enum Router {
    Exact(McdsTable),
    Greedy,
}

#[derive(Debug, Clone)]
enum Activator {
    Exact(MwisTable),
    Greedy,
}

impl UmwController {
    pub fn new(
        g: &NetworkGraph,
        cg: &ConflictGraph,
        route_solver: SolverKind,
        activation_solver: SolverKind,
    ) -> Result<Self> {
        if cg.node_count() != g.node_count() {
            return Err(Error::DimensionMismatch {
                expected: g.node_count(),
                got: cg.node_count(),
            });
        }
        let router = match route_solver {
            SolverKind::Exact => Router::Exact(McdsTable::new(g)?),
            SolverKind::Greedy => Router::Greedy,
        };
        let activator = match activation_solver {
            SolverKind::Exact => Activator::Exact(MwisTable::new(cg)?),
            SolverKind::Greedy => Activator::Greedy,
        };
        Ok(UmwController {
            g: g.clone(),
            cg: cg.clone(),
            router,
            activator,
        })
    }

    pub fn graph(&self) -> &NetworkGraph {
        &self.g
    }

    pub fn route(&self, vq: &VirtualQueueVector) -> ConnectedDominatingSet {
        match &self.router {
            Router::Exact(t) => t.best(vq.values()),
            Router::Greedy => mcds_greedy(&self.g, &NodeWeights(vq.q.clone()))
                .expect("queue values are valid weights"),
        }
    }

    pub fn activate(&self, vq: &VirtualQueueVector, available: NodeSet) -> NodeSet {
        let w = activation_weights(vq, &self.g, available);
        match &self.activator {
            Activator::Exact(t) => t.best(&w),
            Activator::Greedy => mwis_greedy(&self.cg, &NodeWeights(w)).expect("weights sized to graph"),
        }
    }

    /// Both decisions from the queue state at the start of the slot.
    pub fn decide(&self, vq: &VirtualQueueVector, arrivals: u64, available: NodeSet) -> SlotDecision {
        SlotDecision::new(&self.g, self.route(vq), self.activate(vq, available), arrivals)
    }
}
