//! Lifting computation-graph snapshots into running-system models.
//!
//! A snapshot is a JSON document listing nodes, topics with their publishers
//! and subscribers, and services with their server. Topic quintuples that
//! realize an action are folded into one action connection.

mod detect;
mod lift;
mod snapshot;

pub use detect::{detect_actions, ActionCandidate, Detection};
pub use lift::{component_name, lift, LiftOptions, Lifted};
pub use snapshot::{parse_snapshot, GraphSnapshot, ParsedSnapshot, ServiceRecord, SnapshotDiagnostic, TopicRecord};
