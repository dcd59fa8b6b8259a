//! Modeling toolkit for ROS 1 systems.
//!
//! Running systems and developer workspaces are described with the types in
//! [`model`], written and read in the `.meros` language ([`text`]), checked by
//! the rule registry in [`validate`], lifted from computation-graph snapshots
//! ([`ingest`]) or package trees ([`scan`]), rendered as Graphviz DOT
//! ([`render`]), and the action protocol is executable in [`protocol`].

pub mod connection;
pub mod error;
pub mod ingest;
pub mod model;
pub mod protocol;
pub mod render;
pub mod scan;
mod severity;
pub mod stats;
pub mod text;
pub mod validate;

pub use connection::{expand_action, resolve_connections, Connection};
pub use error::ModelError;
pub use model::*;
pub use severity::Severity;
pub use stats::{compute_stats, SystemStats};
pub use validate::{validate, Diagnostic, ValidateOptions};
