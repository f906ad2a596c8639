use std::collections::VecDeque;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cds::ConnectedDominatingSet;
use crate::error::Result;
use crate::graph::NetworkGraph;
use crate::interference::ConflictGraph;
use crate::nodeset::NodeSet;
use crate::umw::{UmwController, VirtualQueueVector};

use super::buffer::{ltf_pick, NodeBuffer, PacketCopy};
use super::config::SimConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub id: u64,
    pub arrival_slot: u64,
    pub route: ConnectedDominatingSet,
    pub delivered_slot: Option<u64>,
}

impl Packet {
    pub fn delay(&self) -> Option<u64> {
        self.delivered_slot.map(|d| d - self.arrival_slot)
    }
}

/// End-of-slot snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotRecord {
    pub slot: u64,
    /// Total pending copies in physical buffers, `sum_i Q_i(t)`.
    pub sum_pq: u64,
    /// `max_i` of the virtual queues after this slot's update.
    pub max_vq: f64,
    /// `R(t)`: packets received by every node so far.
    pub delivered: u64,
    /// `A(0, t)`: external arrivals so far.
    pub arrivals: u64,
    pub schedule: NodeSet,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub slots: Vec<SlotRecord>,
    pub packets: Vec<Packet>,
    /// Copies sent over hyperedges.
    pub transmissions: u64,
    /// Scheduled nodes that had nothing to send.
    pub wasted_activations: u64,
}

impl Trace {
    pub fn horizon(&self) -> u64 {
        self.slots.last().map_or(0, |r| r.slot)
    }

    pub fn final_record(&self) -> Option<&SlotRecord> {
        self.slots.last()
    }

    /// `R(T) / T`.
    pub fn throughput(&self) -> f64 {
        self.final_record()
            .map_or(0.0, |r| r.delivered as f64 / r.slot as f64)
    }

    /// `sum_i Q_i(T) / T`.
    pub fn backlog_rate(&self) -> f64 {
        self.final_record()
            .map_or(0.0, |r| r.sum_pq as f64 / r.slot as f64)
    }

    /// Mean of `delivered_slot - arrival_slot` over delivered packets.
    pub fn mean_delay(&self) -> Option<f64> {
        let (sum, count) = self
            .packets
            .iter()
            .filter_map(Packet::delay)
            .fold((0u64, 0u64), |(s, c), d| (s + d, c + 1));
        (count > 0).then(|| sum as f64 / count as f64)
    }

    /// First slot violating `A(0,t) - sum_i Q_i(t) <= R(t) <= A(0,t)`.
    pub fn sandwich_violation(&self) -> Option<&SlotRecord> {
        self.slots.iter().find(|r| {
            r.delivered > r.arrivals || r.arrivals > r.delivered + r.sum_pq
        })
    }

    /// `slot,sum_pq,max_vq,delivered,arrivals`
    pub fn write_slots_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "slot,sum_pq,max_vq,delivered,arrivals")?;
        for r in &self.slots {
            writeln!(w, "{},{},{},{},{}", r.slot, r.sum_pq, r.max_vq, r.delivered, r.arrivals)?;
        }
        Ok(())
    }

    /// `id,arrival_slot,delivered_slot,delay`; undelivered packets leave the
    /// last two fields empty.
    pub fn write_packets_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "id,arrival_slot,delivered_slot,delay")?;
        for p in &self.packets {
            match p.delivered_slot {
                Some(d) => writeln!(w, "{},{},{},{}", p.id, p.arrival_slot, d, d - p.arrival_slot)?,
                None => writeln!(w, "{},{},,", p.id, p.arrival_slot)?,
            }
        }
        Ok(())
    }
}

#[derive(Debug)]
struct InFlight {
    route: NodeSet,
    received: NodeSet,
    transmitted: NodeSet,
    pending: u32,
    delivered: bool,
}

/// Tracks undelivered or still-buffered packets; ids are dense, so a deque
/// offset by the oldest live id is enough.
#[derive(Debug, Default)]
struct Tracker {
    base: u64,
    live: VecDeque<Option<InFlight>>,
}

impl Tracker {
    fn push(&mut self, p: InFlight) {
        self.live.push_back(Some(p));
    }

    fn get(&mut self, id: u64) -> &mut InFlight {
        self.live[(id - self.base) as usize]
            .as_mut()
            .expect("packet with pending copies is tracked")
    }

    fn retire_if_done(&mut self, id: u64) {
        // Several copies of one packet may go out in the same slot, so it
        // can already be gone.
        let Some(slot) = id.checked_sub(self.base).and_then(|k| self.live.get_mut(k as usize)) else {
            return;
        };
        if slot.as_ref().is_some_and(|p| p.delivered && p.pending == 0) {
            *slot = None;
        }
        while matches!(self.live.front(), Some(None)) {
            self.live.pop_front();
            self.base += 1;
        }
    }
}

/// Runs the UMW policy with LTF packet scheduling for `cfg.horizon` slots.
///
/// Each slot `t = 1..=T`:
/// 1. draw node availability (each node independently with `p_on`);
/// 2. draw external arrivals at the source;
/// 3. route this slot's arrivals along the min-weight CDS for the current
///    virtual queues, and choose the max-weight schedule among available
///    nodes (both from the queue state at the start of the slot);
/// 4. every scheduled node sends up to `c_i` LTF copies over its hyperedge;
///    an out-neighbour keeps a copy (count + 1) only on first reception and
///    only if it lies on the packet's route;
/// 5. update the virtual queues with the routed arrivals and the nominal
///    service `c_i` of each scheduled node;
/// 6. mark packets held by every node as delivered and record the slot.
pub fn simulate(g: &NetworkGraph, cg: &ConflictGraph, cfg: &SimConfig) -> Result<Trace> {
    cfg.validate()?;
    let ctl = UmwController::new(g, cg, cfg.route_solver, cfg.activation_solver)?;
    let n = g.node_count();
    let all = g.all_nodes();
    let src = g.source();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut vq = VirtualQueueVector::zeros(n);
    let mut buffers = vec![NodeBuffer::new(); n];
    let mut tracker = Tracker::default();
    let mut trace = Trace {
        slots: Vec::with_capacity(cfg.horizon as usize),
        ..Trace::default()
    };
    let mut delivered = 0u64;
    let mut arrived = 0u64;
    let mut sent: Vec<(usize, PacketCopy)> = Vec::new();

    for t in 1..=cfg.horizon {
        let available = if cfg.p_on >= 1.0 {
            all
        } else {
            (0..n).filter(|_| rng.random_bool(cfg.p_on)).collect()
        };
        let a = cfg.draw_arrivals(&mut rng, t);
        let decision = ctl.decide(&vq, a, available);
        debug_assert!(cg.is_independent(decision.schedule) && decision.schedule.is_subset(available));

        for _ in 0..a {
            let id = arrived;
            arrived += 1;
            let route = decision.route.members();
            let mut p = InFlight {
                route,
                received: NodeSet::singleton(src),
                transmitted: NodeSet::EMPTY,
                pending: 1,
                delivered: false,
            };
            buffers[src].push(PacketCopy {
                packet_id: id,
                holder: src,
                transmit_count: 0,
            });
            let mut rec = Packet {
                id,
                arrival_slot: t,
                route: decision.route,
                delivered_slot: None,
            };
            if p.received == all {
                p.delivered = true;
                rec.delivered_slot = Some(t);
                delivered += 1;
            }
            tracker.push(p);
            trace.packets.push(rec);
        }

        sent.clear();
        for i in decision.schedule.iter() {
            let picked = ltf_pick(&mut buffers[i], g.capacity(i));
            if picked.is_empty() {
                trace.wasted_activations += 1;
            }
            sent.extend(picked.into_iter().map(|c| (i, c)));
        }
        for &(i, copy) in &sent {
            trace.transmissions += 1;
            let p = tracker.get(copy.packet_id);
            debug_assert!(!p.transmitted.contains(i), "node {i} sent packet {} twice", copy.packet_id);
            p.transmitted.insert(i);
            p.pending -= 1;
            let fresh = g.out_neighbors(i).difference(p.received);
            p.received = p.received.union(fresh);
            for j in fresh.intersection(p.route).iter() {
                debug_assert!(copy.transmit_count + 1 < n as u32);
                buffers[j].push(PacketCopy {
                    packet_id: copy.packet_id,
                    holder: j,
                    transmit_count: copy.transmit_count + 1,
                });
                p.pending += 1;
            }
            if !p.delivered && p.received == all {
                p.delivered = true;
                trace.packets[copy.packet_id as usize].delivered_slot = Some(t);
                delivered += 1;
            }
        }
        for &(_, copy) in &sent {
            tracker.retire_if_done(copy.packet_id);
        }

        vq.step_mut(&decision.arrivals_applied, &decision.service_applied)?;
        trace.slots.push(SlotRecord {
            slot: t,
            sum_pq: buffers.iter().map(|b| b.len() as u64).sum(),
            max_vq: vq.max(),
            delivered,
            arrivals: arrived,
            schedule: decision.schedule,
        });
    }
    Ok(trace)
}

/// Checks a trace's structural invariants; returns a description of the
/// first violation.
pub fn check_trace(trace: &Trace) -> std::result::Result<(), String> {
    if let Some(r) = trace.sandwich_violation() {
        return Err(format!("delivered-count sandwich violated at slot {}: {r:?}", r.slot));
    }
    for w in trace.slots.windows(2) {
        if w[1].delivered < w[0].delivered {
            return Err(format!("R(t) decreased at slot {}", w[1].slot));
        }
    }
    for p in &trace.packets {
        if p.delivered_slot.is_some_and(|d| d < p.arrival_slot) {
            return Err(format!("packet {} delivered before arrival", p.id));
        }
    }
    Ok(())
}
