use std::collections::{BTreeMap, BTreeSet};

use super::detect::{detect_actions, Detection};
use super::snapshot::{GraphSnapshot, SnapshotDiagnostic};
use crate::connection::{action_topic_name, ACTION_SUFFIXES};
use crate::error::ModelError;
use crate::model::{
    new_running_system, Action, ActionData, Component, Direction, Port, RunningSystem, Service, ServiceData, Topic,
    ROSOUT_NODE,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftOptions {
    /// Name of the resulting running system.
    pub name: String,
    pub compact: bool,
    pub detect_actions: bool,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            name: "snapshot".to_string(),
            compact: false,
            detect_actions: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lifted {
    pub system: RunningSystem,
    pub detection: Detection,
}

impl Lifted {
    pub fn warnings(&self) -> &[SnapshotDiagnostic] {
        &self.detection.warnings
    }
}

/// Snapshot node names are absolute; components drop the leading slash.
pub fn component_name(node: &str) -> &str {
    node.strip_prefix('/').unwrap_or(node)
}

/// Builds a running system from a snapshot. Every node becomes a Node
/// component, detected action quintuples become one action each, and every
/// other topic and service keeps its own declaration. In compact mode the
/// rosout node is elided.
pub fn lift(snapshot: &GraphSnapshot, options: &LiftOptions) -> Result<Lifted, ModelError> {
    let detection = if options.detect_actions {
        detect_actions(snapshot)
    } else {
        Detection::default()
    };
    let mut rs = new_running_system(options.name.clone(), options.compact)?;
    let keep = |node: &str| !(options.compact && component_name(node) == ROSOUT_NODE);

    let mut ports: BTreeMap<String, Vec<Port>> = BTreeMap::new();
    for n in snapshot.nodes.iter().filter(|n| keep(n)) {
        ports.entry(component_name(n).to_string()).or_default();
    }
    let mut add = |node: &str, direction, channel: &str, payload: &str| {
        if keep(node) {
            ports
                .entry(component_name(node).to_string())
                .or_default()
                .push(Port::new(direction, channel, payload));
        }
    };

    let mut consumed = BTreeSet::new();
    for c in &detection.candidates {
        let goal = &c.evidence[0].payload_type;
        let data = ActionData::new(
            goal.clone(),
            c.evidence[3].payload_type.clone(),
            c.evidence[4].payload_type.clone(),
        );
        let port_type = goal.strip_suffix("Goal").unwrap_or(goal);
        if let Some(server) = &c.server {
            add(server, Direction::ActionServe, &c.prefix, port_type);
        }
        for client in &c.clients {
            add(client, Direction::ActionCall, &c.prefix, port_type);
        }
        rs.actions.push(Action::new(c.prefix.clone(), data));
        consumed.extend(ACTION_SUFFIXES.iter().map(|s| action_topic_name(&c.prefix, s)));
    }

    for t in snapshot.topics.iter().filter(|t| !consumed.contains(&t.name)) {
        for p in &t.publishers {
            add(p, Direction::Publish, &t.name, &t.payload_type);
        }
        for s in &t.subscribers {
            add(s, Direction::Subscribe, &t.name, &t.payload_type);
        }
        rs.topics.push(Topic::new(t.name.clone(), t.payload_type.clone()));
    }

    for s in &snapshot.services {
        if let Some(server) = &s.server {
            add(server, Direction::Serve, &s.name, &s.payload_type);
        }
        for c in &s.clients {
            add(c, Direction::Call, &s.name, &s.payload_type);
        }
        let data = ServiceData::for_type(&s.payload_type);
        rs.services
            .push(Service::new(s.name.clone(), data.request, data.response));
    }

    for (name, mut node_ports) in ports {
        node_ports.sort();
        match rs.components.iter_mut().find(|c| c.name == name) {
            Some(existing) => existing.ports.extend(node_ports),
            None => {
                let mut c = Component::node(name);
                c.ports = node_ports;
                rs.components.push(c);
            }
        }
    }
    Ok(Lifted { system: rs, detection })
}
