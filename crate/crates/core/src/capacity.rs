//! Broadcast capacity as the optimum of a stationary randomized policy.
//!
//! A stationary policy routes a fraction of the traffic along each minimal
//! CDS (rates `a_D`) and picks schedule `s_j` with probability `p_j` each
//! slot. It sustains rate `sum_D a_D` when every node's expected service
//! covers the traffic routed through it:
//!
//! ```text
//! max  sum_D a_D
//! s.t. sum_{D : i in D} a_D - c_i * sum_{j : i in s_j} p_j <= 0   for every node i
//!      sum_j p_j <= 1
//!      a, p >= 0
//! ```
//!
//! Schedules are restricted to maximal independent sets; enlarging a schedule
//! never lowers any node's service, so the optimum is unchanged.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cds::enumerate_minimal_cds;
use crate::error::{Error, Result};
use crate::graph::NetworkGraph;
use crate::interference::{enumerate_maximal_schedules, ConflictGraph};
use crate::lp::{self, rational, Scalar};
use crate::nodeset::NodeSet;

/// Feasibility slack allowed when re-checking a float witness.
pub const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteRate {
    pub members: NodeSet,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleProb {
    pub nodes: NodeSet,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct StationaryPolicy {
    pub cds_rates: Vec<RouteRate>,
    pub schedule_probs: Vec<ScheduleProb>,
}

impl StationaryPolicy {
    pub fn total_rate(&self) -> f64 {
        self.cds_rates.iter().map(|r| r.rate).sum()
    }

    /// Expected per-slot service `mu_i = c_i * P(i scheduled)`.
    pub fn service_rates(&self, g: &NetworkGraph) -> Vec<f64> {
        (0..g.node_count())
            .map(|i| {
                let p: f64 = self
                    .schedule_probs
                    .iter()
                    .filter(|s| s.nodes.contains(i))
                    .map(|s| s.prob)
                    .sum();
                g.capacity(i) as f64 * p
            })
            .collect()
    }

    /// Expected per-slot traffic routed through each node.
    pub fn loads(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| {
                self.cds_rates
                    .iter()
                    .filter(|r| r.members.contains(i))
                    .map(|r| r.rate)
                    .sum()
            })
            .collect()
    }

    /// `mu_i - load_i` per node.
    pub fn slacks(&self, g: &NetworkGraph) -> Vec<f64> {
        let mu = self.service_rates(g);
        let load = self.loads(g.node_count());
        mu.iter().zip(&load).map(|(m, l)| m - l).collect()
    }

    /// Direct substitution into the constraints, allowing `tol` of slack.
    pub fn is_feasible(&self, g: &NetworkGraph, cg: &ConflictGraph, tol: f64) -> bool {
        let probs_ok = self.schedule_probs.iter().all(|s| s.prob >= -tol && cg.is_independent(s.nodes));
        let rates_ok = self
            .cds_rates
            .iter()
            .all(|r| r.rate >= -tol && crate::cds::is_cds(g, r.members));
        let total_p: f64 = self.schedule_probs.iter().map(|s| s.prob).sum();
        probs_ok && rates_ok && total_p <= 1.0 + tol && self.slacks(g).iter().all(|&s| s >= -tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub lambda_star: f64,
    #[serde(flatten)]
    pub witness: StationaryPolicy,
}

/// Exact optimum of the capacity LP together with its optimality certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCapacity {
    pub lambda_star: BigRational,
    /// The rational primal solution satisfies every constraint exactly.
    pub primal_feasible: bool,
    /// The rational dual prices are feasible and their objective equals
    /// `lambda_star`, proving optimality.
    pub dual_certified: bool,
}

impl ExactCapacity {
    pub fn certified(&self) -> bool {
        self.primal_feasible && self.dual_certified
    }

    pub fn to_f64(&self) -> f64 {
        self.lambda_star.to_f64().unwrap_or(f64::NAN)
    }
}

struct CapacityLp<T> {
    routes: Vec<NodeSet>,
    schedules: Vec<NodeSet>,
    c: Vec<T>,
    a: Vec<Vec<T>>,
    b: Vec<T>,
}

fn build_lp<T: Scalar>(
    g: &NetworkGraph,
    cg: &ConflictGraph,
    num: impl Fn(i64) -> T,
) -> Result<CapacityLp<T>> {
    let routes: Vec<NodeSet> = enumerate_minimal_cds(g)?.iter().map(|d| d.members()).collect();
    let schedules = enumerate_maximal_schedules(cg)?;
    let n = g.node_count();
    let (nr, ns) = (routes.len(), schedules.len());
    let mut a = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row = vec![T::zero(); nr + ns];
        for (k, d) in routes.iter().enumerate() {
            if d.contains(i) {
                row[k] = num(1);
            }
        }
        for (k, s) in schedules.iter().enumerate() {
            if s.contains(i) {
                row[nr + k] = -num(g.capacity(i) as i64);
            }
        }
        a.push(row);
    }
    let mut sum_row = vec![T::zero(); nr + ns];
    for v in &mut sum_row[nr..] {
        *v = num(1);
    }
    a.push(sum_row);
    let mut b = vec![T::zero(); n];
    b.push(num(1));
    let mut c = vec![num(1); nr];
    c.extend((0..ns).map(|_| T::zero()));
    Ok(CapacityLp {
        routes,
        schedules,
        c,
        a,
        b,
    })
}

pub fn broadcast_capacity(g: &NetworkGraph, cg: &ConflictGraph) -> Result<CapacityResult> {
    let lp = build_lp(g, cg, |v| v as f64)?;
    let sol = lp::maximize(&lp.c, &lp.a, &lp.b).expect("capacity LP is feasible and bounded");
    let nr = lp.routes.len();
    let cds_rates = lp
        .routes
        .iter()
        .zip(&sol.x[..nr])
        .filter(|(_, &r)| r > 0.0)
        .map(|(&members, &rate)| RouteRate { members, rate })
        .collect();
    let schedule_probs = lp
        .schedules
        .iter()
        .zip(&sol.x[nr..])
        .filter(|(_, &p)| p > 0.0)
        .map(|(&nodes, &prob)| ScheduleProb { nodes, prob })
        .collect();
    let witness = StationaryPolicy {
        cds_rates,
        schedule_probs,
    };
    let lambda_star = sol.objective.max(0.0);
    debug_assert!(witness.is_feasible(g, cg, FEASIBILITY_TOL));
    Ok(CapacityResult { lambda_star, witness })
}

/// Re-solves the capacity LP in exact rational arithmetic and checks the
/// primal solution and dual certificate by substitution.
pub fn broadcast_capacity_exact(g: &NetworkGraph, cg: &ConflictGraph) -> Result<ExactCapacity> {
    let lp = build_lp(g, cg, rational)?;
    let sol = lp::maximize(&lp.c, &lp.a, &lp.b).expect("capacity LP is feasible and bounded");
    let zero = BigRational::zero();
    let cols = lp.c.len();

    let primal_feasible = sol.x.iter().all(|v| *v >= zero)
        && lp.a.iter().zip(&lp.b).all(|(row, b)| {
            let lhs = row
                .iter()
                .zip(&sol.x)
                .fold(zero.clone(), |acc, (a, x)| acc + a * x);
            lhs <= *b
        })
        && lp.c.iter().zip(&sol.x).fold(zero.clone(), |acc, (c, x)| acc + c * x) == sol.objective;

    let dual_feasible = sol.duals.iter().all(|y| *y >= zero)
        && (0..cols).all(|j| {
            let col = lp
                .a
                .iter()
                .zip(&sol.duals)
                .fold(zero.clone(), |acc, (row, y)| acc + &row[j] * y);
            col >= lp.c[j]
        });
    let dual_obj = lp
        .b
        .iter()
        .zip(&sol.duals)
        .fold(zero.clone(), |acc, (b, y)| acc + b * y);

    Ok(ExactCapacity {
        dual_certified: dual_feasible && dual_obj == sol.objective,
        lambda_star: sol.objective,
        primal_feasible,
    })
}

/// Stationary policy sustaining rate `lambda < lambda*` with positive slack
/// at every node of positive capacity.
///
/// With `rho = lambda / lambda*` and `theta = (1 - rho) / 2`, routes are the
/// capacity witness scaled by `rho`, and schedules mix the witness
/// (weight `1 - theta`) with singleton schedules over positive-capacity nodes
/// (total weight `theta`). Every such node then keeps slack at least
/// `(1 - theta - rho) * mu*_i + theta * c_i / k > 0`.
pub fn build_randomized_policy(
    g: &NetworkGraph,
    cg: &ConflictGraph,
    lambda: f64,
) -> Result<StationaryPolicy> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::Config(format!("arrival rate {lambda} must be finite and >= 0")));
    }
    let cap = broadcast_capacity(g, cg)?;
    if lambda >= cap.lambda_star {
        return Err(Error::RateInfeasible {
            lambda,
            capacity: cap.lambda_star,
        });
    }
    let rho = lambda / cap.lambda_star;
    let theta = (1.0 - rho) / 2.0;
    let cds_rates = if lambda == 0.0 {
        Vec::new()
    } else {
        cap.witness
            .cds_rates
            .iter()
            .map(|r| RouteRate {
                members: r.members,
                rate: r.rate * rho,
            })
            .collect()
    };
    let mut schedule_probs: Vec<ScheduleProb> = cap
        .witness
        .schedule_probs
        .iter()
        .map(|s| ScheduleProb {
            nodes: s.nodes,
            prob: s.prob * (1.0 - theta),
        })
        .collect();
    let serving: Vec<usize> = (0..g.node_count()).filter(|&i| g.capacity(i) > 0).collect();
    for &i in &serving {
        schedule_probs.push(ScheduleProb {
            nodes: NodeSet::singleton(i),
            prob: theta / serving.len() as f64,
        });
    }
    Ok(StationaryPolicy {
        cds_rates,
        schedule_probs,
    })
}

/// Upper bound from mandatory transmitters.
///
/// Nodes common to every minimal CDS must transmit every packet, so a node
/// `u` active a fraction `f_u` of slots gives `lambda <= f_u * c_u`. For a
/// clique `K` of such nodes in the conflict graph `sum_K f_u <= 1`, hence
/// `lambda <= 1 / sum_K (1 / c_u)`. Returns the minimum over all cliques.
pub fn clique_upper_bound(g: &NetworkGraph, cg: &ConflictGraph) -> Result<f64> {
    let mandatory = mandatory_transmitters(g)?;
    let nodes = mandatory.to_vec();
    let mut best = f64::INFINITY;
    // Cliques of the mandatory set, grown in increasing id order.
    fn grow(
        g: &NetworkGraph,
        cg: &ConflictGraph,
        nodes: &[usize],
        from: usize,
        inv_sum: f64,
        best: &mut f64,
        clique: NodeSet,
    ) {
        for k in from..nodes.len() {
            let v = nodes[k];
            if clique.iter().all(|u| cg.conflicts(u, v)) {
                let c = g.capacity(v) as f64;
                let s = if c == 0.0 { f64::INFINITY } else { inv_sum + 1.0 / c };
                *best = best.min(1.0 / s);
                grow(g, cg, nodes, k + 1, s, best, clique.with(v));
            }
        }
    }
    grow(g, cg, &nodes, 0, 0.0, &mut best, NodeSet::EMPTY);
    Ok(best)
}

/// Intersection of all minimal CDSs.
pub fn mandatory_transmitters(g: &NetworkGraph) -> Result<NodeSet> {
    Ok(enumerate_minimal_cds(g)?
        .iter()
        .fold(g.all_nodes(), |acc, d| acc.intersection(d.members())))
}
