//! Structural rule registry.
//!
//! Each rule has a stable `MR-nnn` id and names the requirement it enforces.
//! Diagnostics are printed one per line as `<rule-id> <severity> <subject>: <message>`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::connection::{expand_action, join_ports, PortJoin};
use crate::model::{
    ActionData, ChannelKind, ComponentKind, Intrasystem, RosSystem, RunningSystem, Workspace, MASTER_NODE, QUALIFIER,
    ROSOUT_NODE,
};
use crate::severity::Severity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: &'static str,
    /// Requirement label the rule traces to, or "-".
    pub requirement: &'static str,
    pub severity: Severity,
    pub description: &'static str,
}

const RULES: &[Rule] = &[
    Rule {
        id: "MR-001",
        requirement: "R3.2.2",
        severity: Severity::Error,
        description: "a service or action has at most one server",
    },
    Rule {
        id: "MR-002",
        requirement: "R3.2.3",
        severity: Severity::Error,
        description: "declared topics named after an action's constituents carry the constituent types",
    },
    Rule {
        id: "MR-003",
        requirement: "R3.2.3.1",
        severity: Severity::Error,
        description: "an action data structure names goal, feedback and result types",
    },
    Rule {
        id: "MR-004",
        requirement: "R3.1.1.1",
        severity: Severity::Error,
        description: "a running system contains the ROS master and rosout nodes (warning when compact)",
    },
    Rule {
        id: "MR-005",
        requirement: "R3.2.1.1",
        severity: Severity::Error,
        description: "publishers and subscribers of a topic agree on its message type",
    },
    Rule {
        id: "MR-006",
        requirement: "R3.3.2",
        severity: Severity::Error,
        description: "a metapackage composes packages, not files",
    },
    Rule {
        id: "MR-007",
        requirement: "R3.2.3.1",
        severity: Severity::Error,
        description: "action constituent types live in action data structures, not msg data",
    },
    Rule {
        id: "MR-008",
        requirement: "R6.3",
        severity: Severity::Error,
        description: "every communication medium member resolves to a connection",
    },
    Rule {
        id: "MR-009",
        requirement: "-",
        severity: Severity::Warning,
        description: "connection with an empty side",
    },
    Rule {
        id: "MR-010",
        requirement: "-",
        severity: Severity::Error,
        description: "names are unique within their scope",
    },
    Rule {
        id: "MR-011",
        requirement: "R3.1",
        severity: Severity::Error,
        description: "component attributes and ports are well formed",
    },
    Rule {
        id: "MR-012",
        requirement: "R3.3.2",
        severity: Severity::Warning,
        description: "metapackage references a package outside the workspace",
    },
];

/// The rule registry, sorted by id.
pub fn list_rules() -> Vec<Rule> {
    RULES.to_vec()
}

pub fn rule(id: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.id == id)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub rule: &'static str,
    pub severity: Severity,
    /// Qualified name of the offending element.
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.rule, self.severity, self.subject, self.message)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ValidateOptions {
    pub treat_warnings_as_errors: bool,
    /// Validate every running system as if it were compact.
    pub assume_compact: bool,
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

/// Checks a whole model. The result is empty iff the model conforms and is
/// sorted by (rule, subject).
pub fn validate(model: &RosSystem, options: ValidateOptions) -> Vec<Diagnostic> {
    let mut sink = Sink::default();
    let mut systems = BTreeMap::new();
    for rs in &model.running_systems {
        *systems.entry(rs.name.as_str()).or_insert(0) += 1;
        check_running_system(rs, options, &mut sink);
    }
    let mut workspaces = BTreeMap::new();
    for ws in &model.workspaces {
        *workspaces.entry(ws.name.as_str()).or_insert(0) += 1;
        check_workspace(ws, &mut sink);
    }
    for (name, n) in systems.into_iter().chain(workspaces) {
        if n > 1 {
            sink.push("MR-010", name, format!("declared {n} times"));
        }
    }
    sink.finish(options)
}

/// Checks a single running system.
pub fn validate_running_system(rs: &RunningSystem, options: ValidateOptions) -> Vec<Diagnostic> {
    let mut sink = Sink::default();
    check_running_system(rs, options, &mut sink);
    sink.finish(options)
}

#[derive(Default)]
struct Sink {
    diags: Vec<Diagnostic>,
}

impl Sink {
    fn push(&mut self, rule_id: &'static str, subject: &str, message: String) {
        let severity = rule(rule_id).map_or(Severity::Error, |r| r.severity);
        self.push_with(rule_id, severity, subject, message);
    }

    fn push_with(&mut self, rule: &'static str, severity: Severity, subject: &str, message: String) {
        self.diags.push(Diagnostic {
            rule,
            severity,
            subject: subject.to_string(),
            message,
        });
    }

    fn finish(mut self, options: ValidateOptions) -> Vec<Diagnostic> {
        if options.treat_warnings_as_errors {
            for d in &mut self.diags {
                d.severity = Severity::Error;
            }
        }
        self.diags.sort();
        self.diags.dedup();
        self.diags
    }
}

fn check_running_system(rs: &RunningSystem, options: ValidateOptions, sink: &mut Sink) {
    let compact = rs.compact || options.assume_compact;
    for infra in [MASTER_NODE, ROSOUT_NODE] {
        let present = rs
            .components
            .iter()
            .any(|c| c.name == infra && c.kind == ComponentKind::Node);
        if !present {
            let severity = if compact { Severity::Warning } else { Severity::Error };
            sink.push_with("MR-004", severity, &rs.name, format!("missing `{infra}` node"));
        }
    }

    let scopes = rs.scopes();
    for (prefix, scope) in &scopes {
        check_scope(prefix, scope, sink);
    }

    let joins = join_ports(rs);
    check_channels(&scopes, &joins, sink);

    for (prefix, scope) in &scopes {
        let known: BTreeSet<_> = join_ports(scope).iter().map(PortJoin::reference).collect();
        for m in &scope.mediums {
            let subject = crate::model::qualify(prefix, &m.name);
            if m.members.is_empty() {
                sink.push("MR-008", &subject, "medium has no members".into());
            }
            for r in m.members.iter().filter(|r| !known.contains(r)) {
                sink.push("MR-008", &subject, format!("member `{r}` resolves to no connection"));
            }
        }
    }
}

/// Name uniqueness and component well-formedness within one intrasystem.
fn check_scope(prefix: &str, scope: &Intrasystem, sink: &mut Sink) {
    let mut seen = BTreeMap::new();
    for c in &scope.components {
        *seen.entry(c.name.as_str()).or_insert(0) += 1;
    }
    for (name, n) in seen {
        if n > 1 {
            sink.push(
                "MR-010",
                &crate::model::qualify(prefix, name),
                format!("component declared {n} times"),
            );
        }
    }
    let mut mediums = BTreeSet::new();
    for m in &scope.mediums {
        if !mediums.insert(m.name.as_str()) {
            sink.push(
                "MR-010",
                &crate::model::qualify(prefix, &m.name),
                "medium declared more than once".into(),
            );
        }
    }

    for c in &scope.components {
        let subject = crate::model::qualify(prefix, &c.name);
        let mut bad = |msg: String| sink.push("MR-011", &subject, msg);
        if c.name.is_empty() {
            bad("component name is empty".into());
        }
        if c.name.contains(QUALIFIER) {
            bad(format!("component name contains `{QUALIFIER}`"));
        }
        match (c.kind == ComponentKind::Intrasystem, &c.nested) {
            (true, None) => bad("intrasystem component without nested system".into()),
            (false, Some(_)) => bad(format!("{} component carries a nested system", c.kind)),
            (true, Some(n)) if n.name != c.name => bad(format!("nested system is named `{}`", n.name)),
            _ => {}
        }
        if c.kind == ComponentKind::Intrasystem && !c.ports.is_empty() {
            bad("intrasystem containers carry no ports".into());
        }
        if c.manager.is_some() && c.kind != ComponentKind::Nodelet {
            bad("only nodelets have a manager".into());
        }
        if c.host.is_some() && c.kind != ComponentKind::Plugin {
            bad("only plugins have a host".into());
        }
        let mut ports = BTreeSet::new();
        for p in &c.ports {
            if !ports.insert((p.direction, p.channel.as_str())) {
                bad(format!("duplicate {} port `{}`", p.direction.keyword(), p.channel));
            }
            if p.channel.is_empty() {
                bad(format!("{} port with empty channel", p.direction.keyword()));
            } else if p.direction.channel_kind() != ChannelKind::NonRos && !p.channel.starts_with('/') {
                bad(format!("channel `{}` is not an absolute graph name", p.channel));
            }
        }
    }
}

fn check_channels(scopes: &[(String, &Intrasystem)], joins: &[PortJoin], sink: &mut Sink) {
    // declarations are global graph names, so duplicates count across scopes
    let mut declared: BTreeMap<(ChannelKind, &str), usize> = BTreeMap::new();
    let mut topic_types: BTreeMap<&str, &str> = BTreeMap::new();
    for (_, scope) in scopes {
        for t in &scope.topics {
            *declared.entry((ChannelKind::Topic, &t.name)).or_default() += 1;
            topic_types.entry(&t.name).or_insert(&t.message);
        }
        for s in &scope.services {
            *declared.entry((ChannelKind::Service, &s.name)).or_default() += 1;
        }
        for a in &scope.actions {
            *declared.entry((ChannelKind::Action, &a.name)).or_default() += 1;
        }
    }
    for ((kind, name), n) in &declared {
        if *n > 1 {
            sink.push("MR-010", name, format!("{kind} declared {n} times"));
        }
    }
    for (_, scope) in scopes {
        for t in &scope.topics {
            if !t.name.starts_with('/') {
                sink.push("MR-011", &t.name, "topic name is not an absolute graph name".into());
            }
        }
        for a in &scope.actions {
            check_action_data(&a.name, &a.data, sink);
            for c in expand_action(a, None, &[]) {
                if let Some(&ty) = topic_types.get(c.topic.name.as_str()) {
                    if ty != c.topic.message {
                        sink.push(
                            "MR-002",
                            &a.name,
                            format!(
                                "declared topic `{}` has type `{ty}`, expected `{}`",
                                c.topic.name, c.topic.message
                            ),
                        );
                    }
                }
            }
        }
    }

    for j in joins {
        let servers = j.provider_names();
        let consumers = j.consumer_names();
        match j.kind {
            ChannelKind::Topic => {
                let mut types: BTreeSet<&str> = j
                    .providers
                    .iter()
                    .chain(&j.consumers)
                    .map(|e| e.payload.as_str())
                    .collect();
                if let Some(ty) = topic_types.get(j.name.as_str()) {
                    types.insert(ty);
                }
                if types.len() > 1 {
                    let list: Vec<_> = types.into_iter().collect();
                    sink.push(
                        "MR-005",
                        &j.name,
                        format!("payload types disagree: {}", list.join(", ")),
                    );
                }
                if servers.is_empty() || consumers.is_empty() {
                    let side = if servers.is_empty() {
                        "publishers"
                    } else {
                        "subscribers"
                    };
                    sink.push("MR-009", &j.name, format!("topic has no {side}"));
                }
            }
            ChannelKind::Service | ChannelKind::Action => {
                if servers.len() > 1 {
                    sink.push(
                        "MR-001",
                        &j.name,
                        format!("{} has {} servers: {}", j.kind, servers.len(), servers.join(", ")),
                    );
                }
                if servers.is_empty() {
                    sink.push("MR-009", &j.name, format!("{} has no server", j.kind));
                } else if consumers.is_empty() && j.kind == ChannelKind::Action {
                    // service clients are unobservable in snapshots, so only actions warn
                    sink.push("MR-009", &j.name, "action has no clients".into());
                }
            }
            ChannelKind::NonRos => {
                if servers.len() < 2 {
                    sink.push("MR-009", &j.name, "non-ROS link has fewer than two ends".into());
                }
            }
        }
    }
}

fn check_action_data(subject: &str, data: &ActionData, sink: &mut Sink) {
    for (part, ty) in [
        ("goal", &data.goal),
        ("feedback", &data.feedback),
        ("result", &data.result),
    ] {
        if ty.is_empty() {
            sink.push("MR-003", subject, format!("missing {part} type"));
        }
    }
}

/// Types generated from an action definition; none of them belongs in msg data.
fn action_constituents(action: &str) -> [String; 7] {
    [
        "Action",
        "ActionGoal",
        "ActionFeedback",
        "ActionResult",
        "Goal",
        "Feedback",
        "Result",
    ]
    .map(|s| format!("{action}{s}"))
}

fn check_workspace(ws: &Workspace, sink: &mut Sink) {
    let mut names: BTreeMap<&str, usize> = BTreeMap::new();
    for n in ws
        .packages
        .iter()
        .map(|p| &p.name)
        .chain(ws.metapackages.iter().map(|m| &m.name))
    {
        *names.entry(n).or_default() += 1;
    }
    for (name, n) in &names {
        if *n > 1 {
            sink.push("MR-010", name, format!("package declared {n} times"));
        }
    }
    for p in &ws.packages {
        for action in &p.action_data {
            let constituents = action_constituents(action);
            for msg in p.msg_data.iter().filter(|m| constituents.contains(m)) {
                sink.push(
                    "MR-007",
                    &p.name,
                    format!("msg `{msg}` is a constituent of action `{action}`"),
                );
            }
        }
    }
    for m in &ws.metapackages {
        for (kind, file) in &m.artifacts {
            sink.push(
                "MR-006",
                &m.name,
                format!("metapackage owns {} `{file}`", kind.keyword()),
            );
        }
        for p in &m.packages {
            if ws.package(p).is_none() {
                sink.push("MR-012", &m.name, format!("package `{p}` is not in the workspace"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{new_running_system, ArtifactKind, Component, Metapackage, Package, Topic};

    fn model(rs: RunningSystem) -> RosSystem {
        RosSystem {
            workspaces: vec![],
            running_systems: vec![rs],
        }
    }

    fn ids(diags: &[Diagnostic]) -> Vec<&str> {
        diags.iter().map(|d| d.rule).collect()
    }

    #[test]
    fn registry_is_sorted_and_traced() {
        let rules = list_rules();
        assert!(rules.windows(2).all(|w| w[0].id < w[1].id));
        assert_eq!(rule("MR-001").unwrap().requirement, "R3.2.2");
        assert_eq!(rule("MR-004").unwrap().requirement, "R3.1.1.1");
        for id in 1..=9 {
            assert!(rule(&format!("MR-{id:03}")).is_some());
        }
    }

    #[test]
    fn fresh_running_system_is_clean() {
        let rs = new_running_system("S", false).unwrap();
        assert!(validate(&model(rs), ValidateOptions::default()).is_empty());
    }

    #[test]
    fn two_servers() {
        let rs = new_running_system("S", false)
            .unwrap()
            .add_component(Component::node("S1").serves("/x", "T"))
            .unwrap()
            .add_component(Component::node("S2").serves("/x", "T"))
            .unwrap();
        let d = validate(&model(rs), ValidateOptions::default());
        assert_eq!(ids(&d), vec!["MR-001"]);
        assert_eq!(d[0].to_string(), "MR-001 error /x: service has 2 servers: S1, S2");
    }

    #[test]
    fn topic_type_mismatch() {
        let rs = new_running_system("S", false)
            .unwrap()
            .add_component(Component::node("P").publishes("/t", "A"))
            .unwrap()
            .add_component(Component::node("Q").subscribes("/t", "B"))
            .unwrap();
        let d = validate(&model(rs), ValidateOptions::default());
        assert_eq!(ids(&d), vec!["MR-005"]);
        assert_eq!(d[0].subject, "/t");
    }

    #[test]
    fn missing_infrastructure() {
        let mut rs = new_running_system("S", false).unwrap();
        rs.components.clear();
        let d = validate(&model(rs.clone()), ValidateOptions::default());
        assert_eq!(ids(&d), vec!["MR-004", "MR-004"]);
        assert!(has_errors(&d));
        rs.compact = true;
        let d = validate(&model(rs), ValidateOptions::default());
        assert!(!has_errors(&d));
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn orphan_warning_and_promotion() {
        let rs = new_running_system("S", false)
            .unwrap()
            .add_component(Component::node("P").publishes("/t", "A"))
            .unwrap();
        let d = validate(&model(rs.clone()), ValidateOptions::default());
        assert_eq!(ids(&d), vec!["MR-009"]);
        assert_eq!(d[0].severity, Severity::Warning);
        let opts = ValidateOptions {
            treat_warnings_as_errors: true,
            ..Default::default()
        };
        assert!(has_errors(&validate(&model(rs), opts)));
    }

    #[test]
    fn service_without_clients_is_quiet() {
        let rs = new_running_system("S", false)
            .unwrap()
            .add_component(Component::node("P").serves("/s", "T"))
            .unwrap();
        assert!(validate(&model(rs), ValidateOptions::default()).is_empty());
    }

    #[test]
    fn action_shadowed_by_topic() {
        let rs = new_running_system("S", false)
            .unwrap()
            .add_component(Component::node("srv").provides_action("/a", "pkg/DoAction"))
            .unwrap()
            .add_component(Component::node("cli").uses_action("/a", "pkg/DoAction"))
            .unwrap()
            .declare_action(crate::model::Action::new("/a", ActionData::new("G", "F", "")))
            .unwrap()
            .declare_topic(Topic::new("/a/goal", "Other"))
            .unwrap();
        let d = validate(&model(rs), ValidateOptions::default());
        // the shadowing topic is also an orphan
        assert_eq!(ids(&d), vec!["MR-002", "MR-003", "MR-009"]);
    }

    #[test]
    fn workspace_rules() {
        let mut meta = Metapackage::new("m", vec!["p".into(), "ghost".into()]).unwrap();
        meta.artifacts.push((ArtifactKind::Msg, "X".into()));
        let pkg = Package::new("p")
            .unwrap()
            .with(ArtifactKind::ActionDef, "MoveTo")
            .with(ArtifactKind::Msg, "MoveToGoal")
            .with(ArtifactKind::Msg, "Pose");
        let ws = Workspace {
            name: "W".into(),
            packages: vec![pkg],
            metapackages: vec![meta],
        };
        let m = RosSystem {
            workspaces: vec![ws],
            running_systems: vec![],
        };
        let d = validate(&m, ValidateOptions::default());
        assert_eq!(ids(&d), vec!["MR-006", "MR-007", "MR-012"]);
    }

    #[test]
    fn dangling_medium_member() {
        let mut rs = new_running_system("S", false).unwrap();
        rs.mediums.push(crate::model::CommMedium {
            name: "M".into(),
            members: vec![crate::model::ChannelRef::topic("/nope")],
        });
        let d = validate(&model(rs), ValidateOptions::default());
        assert_eq!(ids(&d), vec!["MR-008"]);
    }
}
