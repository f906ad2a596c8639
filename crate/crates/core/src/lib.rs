//! Throughput-optimal broadcast in wireless networks with point-to-multipoint
//! transmissions.
//!
//! The crate covers the whole pipeline around the Universal Max Weight (UMW)
//! policy:
//!
//! * [`graph`], [`interference`], [`cds`]: topology, conflict graphs and
//!   connected dominating sets (broadcast routes);
//! * [`solvers`]: exact and greedy min-weight CDS / max-weight independent set;
//! * [`capacity`]: broadcast capacity as a linear program over routes and
//!   schedules, plus a clique-based upper bound;
//! * [`umw`]: the virtual-queue control layer;
//! * [`sim`]: a slotted physical-network simulator with Least Transmitted
//!   First packet scheduling;
//! * [`hardness`]: the MNAE-3SAT gadget for finite-horizon broadcasting.

pub mod capacity;
pub mod cds;
pub mod error;
pub mod generators;
pub mod graph;
pub mod hardness;
pub mod interference;
pub mod lp;
pub mod nodeset;
pub mod sim;
pub mod solvers;
pub mod umw;

/// Largest node count accepted by the exhaustive enumerations.
pub const DEFAULT_EXACT_LIMIT: usize = 16;

pub use capacity::{broadcast_capacity, build_randomized_policy, clique_upper_bound, CapacityResult, StationaryPolicy};
pub use cds::{enumerate_minimal_cds, is_cds, ConnectedDominatingSet};
pub use error::{Error, Result};
pub use graph::{load_graph, parse_graph_file, GraphFile, NetworkGraph};
pub use interference::{build_conflict_graph, enumerate_schedules, ConflictGraph, InterferenceModel};
pub use nodeset::NodeSet;
pub use sim::{measure_saturation, simulate, ArrivalProcess, SimConfig, Trace};
pub use solvers::{mcds_exact, mcds_greedy, mwis_exact, mwis_greedy, NodeWeights, SolverKind};
pub use umw::{drift_report, umw_activate, umw_route, vq_step, SlotDecision, VirtualQueueVector};
