//! Graphviz DOT output in the style of `rqt_graph`.
//!
//! Components are ellipses and intrasystems are clusters. In blocks mode each
//! topic is a box between its publishers and subscribers; in edges mode each
//! (publisher, subscriber) pair gets one edge labeled with the topic. Every
//! statement list is sorted, so equal inputs give byte-identical output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::connection::{expand_action, resolve_connections, Connection};
use crate::error::ModelError;
use crate::model::{ChannelRef, Component, ComponentKind, Intrasystem, RunningSystem, QUALIFIER};
use crate::validate::{has_errors, validate_running_system, Diagnostic, ValidateOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Blocks,
    Edges,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Level {
    System,
    Medium,
    #[default]
    Connection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RenderOptions {
    pub mode: Mode,
    pub level: Level,
    /// Draw the ROS master and rosout nodes.
    pub show_infrastructure: bool,
    /// Draw actions as their five topics instead of one client-server edge.
    pub expand_actions: bool,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "blocks" => Ok(Mode::Blocks),
            "edges" => Ok(Mode::Edges),
            _ => Err(format!("unknown mode `{s}` (expected blocks or edges)")),
        }
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "system" => Ok(Level::System),
            "medium" => Ok(Level::Medium),
            "connection" => Ok(Level::Connection),
            _ => Err(format!("unknown level `{s}` (expected system, medium or connection)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("model has validation errors")]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Renders a running system that validates without errors.
pub fn render(rs: &RunningSystem, options: &RenderOptions) -> Result<String, RenderError> {
    let diags = validate_running_system(rs, ValidateOptions::default());
    if has_errors(&diags) {
        return Err(RenderError::Invalid(diags));
    }
    let mut g = Graph::default();
    match options.level {
        Level::System => system_level(rs, &mut g),
        Level::Medium | Level::Connection => connection_level(rs, options, &mut g)?,
    }
    Ok(g.finish(&rs.name))
}

/// Quotes `s` as a DOT string.
pub fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn component_id(name: &str) -> String {
    format!("c:{name}")
}

fn topic_id(name: &str) -> String {
    format!("t:{name}")
}

fn medium_id(name: &str) -> String {
    format!("m:{name}")
}

fn cluster_id(name: &str) -> String {
    format!("cluster_{name}")
}

/// Attribute lists are written in the order given.
fn attrs(list: &[(&str, &str)]) -> String {
    if list.is_empty() {
        return String::new();
    }
    let body: Vec<String> = list.iter().map(|(k, v)| format!("{k}={}", dot_quote(v))).collect();
    format!(" [{}]", body.join(", "))
}

fn node_stmt(id: &str, list: &[(&str, &str)]) -> String {
    format!("{}{};", dot_quote(id), attrs(list))
}

fn edge_stmt(tail: &str, head: &str, list: &[(&str, &str)]) -> String {
    format!("{} -> {}{};", dot_quote(tail), dot_quote(head), attrs(list))
}

#[derive(Default)]
struct Cluster {
    label: String,
    nodes: Vec<String>,
    children: BTreeMap<String, Cluster>,
}

impl Cluster {
    fn write(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        let mut nodes = self.nodes.clone();
        nodes.sort();
        for n in nodes {
            out.push_str(&format!("{pad}{n}\n"));
        }
        for (id, child) in &self.children {
            out.push_str(&format!("{pad}subgraph {} {{\n", dot_quote(id)));
            out.push_str(&format!("{pad}  label={};\n", dot_quote(&child.label)));
            child.write(depth + 1, out);
            out.push_str(&format!("{pad}}}\n"));
        }
    }

    /// The cluster for a qualified scope path, created on demand.
    fn scope(&mut self, path: &[&str]) -> &mut Cluster {
        let mut c = self;
        let mut qualified = String::new();
        for seg in path {
            if !qualified.is_empty() {
                qualified.push_str(QUALIFIER);
            }
            qualified.push_str(seg);
            c = c.children.entry(cluster_id(&qualified)).or_insert_with(|| Cluster {
                label: seg.to_string(),
                ..Default::default()
            });
        }
        c
    }
}

#[derive(Default)]
struct Graph {
    root: Cluster,
    edges: Vec<String>,
    compound: bool,
}

impl Graph {
    fn finish(mut self, name: &str) -> String {
        let mut out = format!("digraph {} {{\n", dot_quote(name));
        if self.compound {
            out.push_str("  compound=true;\n");
        }
        self.root.write(1, &mut out);
        self.edges.sort();
        for e in &self.edges {
            out.push_str(&format!("  {e}\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn scope_path(qualified: &str) -> Vec<&str> {
    let mut segs: Vec<&str> = qualified.split(QUALIFIER).collect();
    segs.pop();
    segs
}

fn is_hidden(c: &Component, options: &RenderOptions) -> bool {
    !options.show_infrastructure && c.role().is_some()
}

/// Endpoints of one topic, merged over plain and action-derived declarations.
#[derive(Default)]
struct TopicEnds {
    publishers: BTreeSet<String>,
    subscribers: BTreeSet<String>,
}

fn connection_level(rs: &RunningSystem, options: &RenderOptions, g: &mut Graph) -> Result<(), RenderError> {
    let leaves = rs.flatten();
    let visible: BTreeSet<String> = leaves
        .iter()
        .filter(|c| !is_hidden(c, options))
        .map(|c| c.name.clone())
        .collect();
    for c in leaves.iter().filter(|c| visible.contains(&c.name)) {
        let label = c.name.rsplit(QUALIFIER).next().unwrap_or(&c.name);
        g.root.scope(&scope_path(&c.name)).nodes.push(node_stmt(
            &component_id(&c.name),
            &[("label", label), ("shape", "ellipse")],
        ));
    }
    // containers without leaves still get their cluster
    for (prefix, _) in rs.scopes().into_iter().skip(1) {
        g.root.scope(&prefix.split(QUALIFIER).collect::<Vec<_>>());
    }

    let connections = resolve_connections(rs)?;
    let mut grouped: BTreeSet<ChannelRef> = BTreeSet::new();
    if options.level == Level::Medium {
        for (prefix, scope) in rs.scopes() {
            for m in &scope.mediums {
                draw_medium(rs, &prefix, &m.name, &m.members, &connections, &visible, g);
                grouped.extend(m.members.iter().cloned());
            }
        }
    }

    let show = |n: &String| visible.contains(n);
    let mut topics: BTreeMap<String, TopicEnds> = BTreeMap::new();
    let mut add_topic = |name: &str, pubs: &[String], subs: &[String]| {
        let t = topics.entry(name.to_string()).or_default();
        t.publishers.extend(pubs.iter().filter(|n| show(n)).cloned());
        t.subscribers.extend(subs.iter().filter(|n| show(n)).cloned());
    };
    for conn in connections.iter().filter(|c| !grouped.contains(&c.reference())) {
        match conn {
            Connection::Topic(t) => add_topic(&t.topic.name, &t.publishers, &t.subscribers),
            Connection::Service(s) => {
                if let Some(server) = s.server.as_ref().filter(|n| show(n)) {
                    let label = format!("{} [srv]", s.service.name);
                    for c in s.clients.iter().filter(|n| show(n)) {
                        g.edges
                            .push(edge_stmt(&component_id(c), &component_id(server), &[("label", &label)]));
                    }
                }
            }
            Connection::Action(a) if options.expand_actions => {
                for t in expand_action(&a.action, a.server.as_deref(), &a.clients) {
                    add_topic(&t.topic.name, &t.publishers, &t.subscribers);
                }
            }
            Connection::Action(a) => {
                if let Some(server) = a.server.as_ref().filter(|n| show(n)) {
                    let label = format!("{} [action]", a.action.name);
                    for c in a.clients.iter().filter(|n| show(n)) {
                        g.edges
                            .push(edge_stmt(&component_id(c), &component_id(server), &[("label", &label)]));
                    }
                }
            }
            Connection::NonRos(n) => {
                let ends: Vec<&String> = n.endpoints.iter().filter(|e| show(e)).collect();
                let label = format!("{} [nonros]", n.label);
                for (i, a) in ends.iter().enumerate() {
                    for b in &ends[i + 1..] {
                        g.edges.push(edge_stmt(
                            &component_id(a),
                            &component_id(b),
                            &[("label", &label), ("style", "dotted"), ("dir", "none")],
                        ));
                    }
                }
            }
        }
    }

    for (name, ends) in topics {
        if ends.publishers.is_empty() && ends.subscribers.is_empty() {
            continue;
        }
        match options.mode {
            Mode::Blocks => {
                let id = topic_id(&name);
                g.root.nodes.push(node_stmt(&id, &[("label", &name), ("shape", "box")]));
                for p in &ends.publishers {
                    g.edges.push(edge_stmt(&component_id(p), &id, &[]));
                }
                for s in &ends.subscribers {
                    g.edges.push(edge_stmt(&id, &component_id(s), &[]));
                }
            }
            Mode::Edges => {
                for p in &ends.publishers {
                    for s in &ends.subscribers {
                        g.edges
                            .push(edge_stmt(&component_id(p), &component_id(s), &[("label", &name)]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Where a medium attaches: a leaf component, or a container drawn as a
/// cluster and reached through one of its leaves.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Anchor {
    Leaf(String),
    Container { cluster: String, via: String },
}

impl Anchor {
    fn node(&self) -> &str {
        match self {
            Anchor::Leaf(n) | Anchor::Container { via: n, .. } => n,
        }
    }
}

fn draw_medium(
    rs: &RunningSystem,
    prefix: &str,
    name: &str,
    members: &[ChannelRef],
    connections: &[Connection],
    visible: &BTreeSet<String>,
    g: &mut Graph,
) {
    let scope_of = |p: &str| -> Option<&Intrasystem> { rs.scopes().into_iter().find(|(q, _)| q == p).map(|(_, s)| s) };
    let Some(scope) = scope_of(prefix) else { return };
    let mut anchors: BTreeSet<Anchor> = BTreeSet::new();
    for conn in connections.iter().filter(|c| members.contains(&c.reference())) {
        for ep in conn.endpoints().into_iter().filter(|e| visible.contains(*e)) {
            anchors.extend(anchor(scope, prefix, ep, visible));
        }
    }
    let qualified = crate::model::qualify(prefix, name);
    let edge = |tail: &Anchor, head: &str, head_cluster: Option<&str>, label: Option<&str>| {
        let mut list: Vec<(&str, &str)> = Vec::new();
        if let Some(l) = label {
            list.push(("label", l));
        }
        list.push(("style", "dashed"));
        list.push(("dir", "none"));
        if let Anchor::Container { cluster, .. } = tail {
            list.push(("ltail", cluster));
        }
        if let Some(c) = head_cluster {
            list.push(("lhead", c));
        }
        edge_stmt(&component_id(tail.node()), head, &list)
    };
    let uses_cluster = anchors.iter().any(|a| matches!(a, Anchor::Container { .. }));
    match anchors.iter().collect::<Vec<_>>()[..] {
        [] | [_] => {}
        [a, b] => {
            let head_cluster = match b {
                Anchor::Container { cluster, .. } => Some(cluster.as_str()),
                Anchor::Leaf(_) => None,
            };
            g.edges.push(edge(a, &component_id(b.node()), head_cluster, Some(name)));
            g.compound |= uses_cluster;
        }
        ref many => {
            let hub = medium_id(&qualified);
            g.root.scope(&scope_path(&qualified)).nodes.push(node_stmt(
                &hub,
                &[("label", name), ("shape", "diamond"), ("style", "dashed")],
            ));
            for a in many {
                g.edges.push(edge(a, &hub, None, None));
            }
            g.compound |= uses_cluster;
        }
    }
}

/// The element of `scope` that contains the qualified endpoint `ep`.
fn anchor(scope: &Intrasystem, prefix: &str, ep: &str, visible: &BTreeSet<String>) -> Option<Anchor> {
    let rest = if prefix.is_empty() {
        ep
    } else {
        match ep.strip_prefix(prefix).and_then(|r| r.strip_prefix(QUALIFIER)) {
            Some(r) => r,
            None => return Some(Anchor::Leaf(ep.to_string())),
        }
    };
    let head = rest.split(QUALIFIER).next().unwrap_or(rest);
    let member = scope.component(head)?;
    if member.kind != ComponentKind::Intrasystem {
        return Some(Anchor::Leaf(ep.to_string()));
    }
    let container = crate::model::qualify(prefix, head);
    let inside = format!("{container}{QUALIFIER}");
    let via = visible.iter().find(|n| n.starts_with(&inside))?.clone();
    Some(Anchor::Container {
        cluster: cluster_id(&container),
        via,
    })
}

/// Top-level containers as single nodes, joined by the mediums between them.
fn system_level(rs: &RunningSystem, g: &mut Graph) {
    let containers: BTreeSet<&str> = rs
        .components
        .iter()
        .filter(|c| c.kind == ComponentKind::Intrasystem)
        .map(|c| c.name.as_str())
        .collect();
    for c in &containers {
        g.root
            .nodes
            .push(node_stmt(&component_id(c), &[("label", c), ("shape", "component")]));
    }
    let Ok(connections) = resolve_connections(rs) else {
        return;
    };
    for m in &rs.mediums {
        let mut ends: BTreeSet<&str> = BTreeSet::new();
        for conn in connections.iter().filter(|c| m.members.contains(&c.reference())) {
            for ep in conn.endpoints() {
                let head = ep.split(QUALIFIER).next().unwrap_or(ep);
                if containers.contains(head) {
                    ends.insert(head);
                }
            }
        }
        let ends: Vec<&str> = ends.into_iter().collect();
        match ends[..] {
            [] | [_] => {}
            [a, b] => g.edges.push(edge_stmt(
                &component_id(a),
                &component_id(b),
                &[("label", &m.name), ("style", "dashed"), ("dir", "none")],
            )),
            ref many => {
                let hub = medium_id(&m.name);
                g.root.nodes.push(node_stmt(
                    &hub,
                    &[("label", &m.name), ("shape", "diamond"), ("style", "dashed")],
                ));
                for a in many {
                    g.edges.push(edge_stmt(
                        &component_id(a),
                        &hub,
                        &[("style", "dashed"), ("dir", "none")],
                    ));
                }
            }
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Blocks => "blocks",
            Mode::Edges => "edges",
        })
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::System => "system",
            Level::Medium => "medium",
            Level::Connection => "connection",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{new_running_system, Component};

    fn fan_out() -> RunningSystem {
        new_running_system("S", false)
            .unwrap()
            .add_component(Component::node("P").publishes("/t", "M"))
            .unwrap()
            .add_component(Component::node("A").subscribes("/t", "M"))
            .unwrap()
            .add_component(Component::node("B").subscribes("/t", "M"))
            .unwrap()
    }

    #[test]
    fn blocks_fan_out() {
        let dot = render(&fan_out(), &RenderOptions::default()).unwrap();
        assert_eq!(
            dot,
            "digraph \"S\" {\n  \"c:A\" [label=\"A\", shape=\"ellipse\"];\n  \"c:B\" [label=\"B\", shape=\"ellipse\"];\n  \
             \"c:P\" [label=\"P\", shape=\"ellipse\"];\n  \"t:/t\" [label=\"/t\", shape=\"box\"];\n  \
             \"c:P\" -> \"t:/t\";\n  \"t:/t\" -> \"c:A\";\n  \"t:/t\" -> \"c:B\";\n}\n"
        );
    }

    #[test]
    fn edges_fan_out() {
        let opts = RenderOptions {
            mode: Mode::Edges,
            ..Default::default()
        };
        let dot = render(&fan_out(), &opts).unwrap();
        assert_eq!(dot.matches(" -> ").count(), 2);
        assert_eq!(dot.matches("[label=\"/t\"]").count(), 2);
        assert!(!dot.contains("box"));
    }

    #[test]
    fn infrastructure_toggle() {
        let opts = RenderOptions {
            show_infrastructure: true,
            ..Default::default()
        };
        let dot = render(&fan_out(), &opts).unwrap();
        assert!(dot.contains("\"c:ROS master\""));
        assert!(!render(&fan_out(), &RenderOptions::default())
            .unwrap()
            .contains("rosout"));
    }

    #[test]
    fn refuses_invalid_models() {
        let rs = fan_out()
            .add_component(Component::node("S1").serves("/x", "T"))
            .unwrap()
            .add_component(Component::node("S2").serves("/x", "T"))
            .unwrap();
        assert!(
            matches!(render(&rs, &RenderOptions::default()), Err(RenderError::Invalid(d)) if d[0].rule == "MR-001")
        );
    }

    #[test]
    fn quoting() {
        assert_eq!(dot_quote("a \"b\" \\ c"), "\"a \\\"b\\\" \\\\ c\"");
    }
}
