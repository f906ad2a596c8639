//! Slotted simulation of the physical network under UMW control.

mod buffer;
mod config;
mod engine;
mod saturation;

pub use buffer::{ltf_pick, NodeBuffer, PacketCopy};
pub use config::{ArrivalProcess, SimConfig};
pub use engine::{check_trace, simulate, Packet, SlotRecord, Trace};
pub use saturation::{measure_saturation, saturation_point, write_saturation_csv, SaturationRow, STABILITY_THRESHOLD};
