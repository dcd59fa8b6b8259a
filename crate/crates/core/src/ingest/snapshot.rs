use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::model::QUALIFIER;
use crate::severity::Severity;

/// A dump of a running computation graph, as `rqt_graph` would show it.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GraphSnapshot {
    pub nodes: Vec<String>,
    pub topics: Vec<TopicRecord>,
    pub services: Vec<ServiceRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicRecord {
    pub name: String,
    #[serde(rename = "type")]
    pub payload_type: String,
    pub publishers: Vec<String>,
    pub subscribers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServiceRecord {
    pub name: String,
    #[serde(rename = "type")]
    pub payload_type: String,
    pub server: Option<String>,
    /// Service clients are not observable through ROS introspection.
    #[serde(default)]
    pub clients: Vec<String>,
}

impl GraphSnapshot {
    pub fn topic(&self, name: &str) -> Option<&TopicRecord> {
        self.topics.iter().find(|t| t.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotDiagnostic {
    pub severity: Severity,
    pub message: String,
}

impl SnapshotDiagnostic {
    fn error(message: String) -> Self {
        SnapshotDiagnostic {
            severity: Severity::Error,
            message,
        }
    }

    pub(crate) fn warning(message: String) -> Self {
        SnapshotDiagnostic {
            severity: Severity::Warning,
            message,
        }
    }
}

impl fmt::Display for SnapshotDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.severity, self.message)
    }
}

/// A parsed snapshot together with the warnings raised while reading it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSnapshot {
    pub snapshot: GraphSnapshot,
    pub warnings: Vec<SnapshotDiagnostic>,
}

const TOP_FIELDS: &[&str] = &["nodes", "topics", "services"];
const TOPIC_FIELDS: &[&str] = &["name", "type", "publishers", "subscribers"];
const SERVICE_FIELDS: &[&str] = &["name", "type", "server", "clients"];

/// Reads a snapshot document. Unknown fields are ignored with a warning;
/// malformed JSON, duplicate names, non-absolute names and endpoints that are
/// not listed under `nodes` are errors.
pub fn parse_snapshot(text: &str) -> Result<ParsedSnapshot, Vec<SnapshotDiagnostic>> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        vec![SnapshotDiagnostic::error(format!(
            "malformed snapshot at {}:{}: {e}",
            e.line(),
            e.column()
        ))]
    })?;
    let mut warnings = Vec::new();
    unknown_fields(&value, "snapshot", TOP_FIELDS, &mut warnings);
    for (list, fields) in [("topics", TOPIC_FIELDS), ("services", SERVICE_FIELDS)] {
        if let Some(items) = value.get(list).and_then(Value::as_array) {
            for (i, item) in items.iter().enumerate() {
                unknown_fields(item, &format!("{list}[{i}]"), fields, &mut warnings);
            }
        }
    }
    let snapshot: GraphSnapshot = serde_json::from_value(value)
        .map_err(|e| vec![SnapshotDiagnostic::error(format!("malformed snapshot: {e}"))])?;
    let errors = check(&snapshot);
    if errors.is_empty() {
        Ok(ParsedSnapshot { snapshot, warnings })
    } else {
        Err(errors)
    }
}

fn unknown_fields(value: &Value, at: &str, known: &[&str], out: &mut Vec<SnapshotDiagnostic>) {
    if let Some(obj) = value.as_object() {
        for key in obj.keys().filter(|k| !known.contains(&k.as_str())) {
            out.push(SnapshotDiagnostic::warning(format!(
                "{at}: unknown field `{key}` ignored"
            )));
        }
    }
}

fn check(s: &GraphSnapshot) -> Vec<SnapshotDiagnostic> {
    let mut errors = Vec::new();
    let mut err = |m: String| errors.push(SnapshotDiagnostic::error(m));

    let mut nodes = BTreeSet::new();
    for n in &s.nodes {
        if !n.starts_with('/') || n.len() == 1 || n.contains(QUALIFIER) {
            err(format!("node `{n}` is not an absolute graph name"));
        }
        if !nodes.insert(n.as_str()) {
            err(format!("duplicate node `{n}`"));
        }
    }
    let endpoint = |what: &str, owner: &str, list: &[String], err: &mut dyn FnMut(String)| {
        let mut seen = BTreeSet::new();
        for e in list {
            if !nodes.contains(e.as_str()) {
                err(format!("{what} `{e}` of `{owner}` is not a listed node"));
            }
            if !seen.insert(e) {
                err(format!("{what} `{e}` listed twice for `{owner}`"));
            }
        }
    };
    let mut names: BTreeMap<&str, usize> = BTreeMap::new();
    for t in &s.topics {
        *names.entry(&t.name).or_default() += 1;
        endpoint("publisher", &t.name, &t.publishers, &mut err);
        endpoint("subscriber", &t.name, &t.subscribers, &mut err);
    }
    for (name, n) in std::mem::take(&mut names) {
        if n > 1 {
            err(format!("duplicate topic `{name}`"));
        }
    }
    for sv in &s.services {
        *names.entry(&sv.name).or_default() += 1;
        endpoint("server", &sv.name, sv.server.as_slice(), &mut err);
        endpoint("client", &sv.name, &sv.clients, &mut err);
    }
    for (name, n) in names {
        if n > 1 {
            err(format!("duplicate service `{name}`"));
        }
    }
    for name in s
        .topics
        .iter()
        .map(|t| &t.name)
        .chain(s.services.iter().map(|s| &s.name))
    {
        if !name.starts_with('/') || name.len() == 1 {
            err(format!("channel `{name}` is not an absolute graph name"));
        }
    }
    errors
}
