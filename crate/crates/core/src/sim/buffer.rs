use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

/// A node's pending copy of a packet. `transmit_count` is the number of
/// transmissions along the chain that delivered it here (0 at the source).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PacketCopy {
    pub packet_id: u64,
    pub holder: usize,
    pub transmit_count: u32,
}

impl PacketCopy {
    fn key(&self) -> (u32, u64) {
        (self.transmit_count, self.packet_id)
    }
}

impl Ord for PacketCopy {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for PacketCopy {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Least-Transmitted-First queue: min-heap on `(transmit_count, packet_id)`.
#[derive(Debug, Clone, Default)]
pub struct NodeBuffer {
    heap: BinaryHeap<Reverse<PacketCopy>>,
}

impl NodeBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, copy: PacketCopy) {
        self.heap.push(Reverse(copy));
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn peek(&self) -> Option<&PacketCopy> {
        self.heap.peek().map(|r| &r.0)
    }
}

/// Removes and returns up to `budget` copies with the fewest transmissions,
/// lowest packet id first among equals.
pub fn ltf_pick(buffer: &mut NodeBuffer, budget: u32) -> Vec<PacketCopy> {
    let take = (budget as usize).min(buffer.len());
    (0..take).filter_map(|_| buffer.heap.pop().map(|r| r.0)).collect()
}
