//! The metamodel: ROS systems, running systems and intrasystems, communicating
//! components with their ports, communication channels and media, and the
//! developer-side workspace with packages and metapackages.
//!
//! Values are plain data. Operations that change a model take `&self` and
//! return a new value, so a model can be shared freely between threads.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Deref, DerefMut};
use std::str::FromStr;

use crate::connection::join_ports;
use crate::error::ModelError;

/// Name of the master node every non-compact running system carries.
pub const MASTER_NODE: &str = "ROS master";
/// Name of the logging node every non-compact running system carries.
pub const ROSOUT_NODE: &str = "rosout";
/// Separator between an intrasystem name and the names of its members once flattened.
pub const QUALIFIER: &str = "::";

/// Root aggregate: workspaces plus running systems.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RosSystem {
    pub workspaces: Vec<Workspace>,
    pub running_systems: Vec<RunningSystem>,
}

impl RosSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.workspaces.is_empty() && self.running_systems.is_empty()
    }

    pub fn running_system(&self, name: &str) -> Option<&RunningSystem> {
        self.running_systems.iter().find(|s| s.name == name)
    }

    pub fn workspace(&self, name: &str) -> Option<&Workspace> {
        self.workspaces.iter().find(|w| w.name == name)
    }

    /// Copy with every list in a fixed order. Two models describe the same
    /// structure iff their canonical forms are equal.
    pub fn canonical(&self) -> RosSystem {
        let mut out = self.clone();
        out.workspaces.iter_mut().for_each(Workspace::canonicalize);
        out.workspaces.sort_by(|a, b| a.name.cmp(&b.name));
        for rs in &mut out.running_systems {
            rs.system.canonicalize();
        }
        out.running_systems
            .sort_by(|a, b| a.name.cmp(&b.name).then(a.compact.cmp(&b.compact)));
        out
    }

    /// Order-insensitive equality.
    pub fn structurally_eq(&self, other: &RosSystem) -> bool {
        self.canonical() == other.canonical()
    }
}

/// A group of communicating components together with the channels they use.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Intrasystem {
    pub name: String,
    pub components: Vec<Component>,
    pub mediums: Vec<CommMedium>,
    pub topics: Vec<Topic>,
    pub services: Vec<Service>,
    pub actions: Vec<Action>,
}

impl Intrasystem {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        check_identifier(&name, "intrasystem name")?;
        Ok(Intrasystem {
            name,
            ..Default::default()
        })
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn add_component(&self, component: Component) -> Result<Intrasystem, ModelError> {
        check_identifier(&component.name, "component name")?;
        if self.component(&component.name).is_some() {
            return Err(ModelError::DuplicateComponent(component.name));
        }
        let mut out = self.clone();
        out.components.push(component);
        Ok(out)
    }

    pub fn remove_component(&self, name: &str) -> Result<Intrasystem, ModelError> {
        let idx = self
            .components
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| ModelError::UnknownComponent(name.to_string()))?;
        let mut out = self.clone();
        out.components.remove(idx);
        Ok(out)
    }

    pub fn declare_topic(&self, topic: Topic) -> Result<Intrasystem, ModelError> {
        check_identifier(&topic.name, "topic name")?;
        if self.topics.iter().any(|t| t.name == topic.name) {
            return Err(ModelError::DuplicateChannel {
                kind: ChannelKind::Topic,
                name: topic.name,
            });
        }
        let mut out = self.clone();
        out.topics.push(topic);
        Ok(out)
    }

    pub fn declare_service(&self, service: Service) -> Result<Intrasystem, ModelError> {
        check_identifier(&service.name, "service name")?;
        if self.services.iter().any(|s| s.name == service.name) {
            return Err(ModelError::DuplicateChannel {
                kind: ChannelKind::Service,
                name: service.name,
            });
        }
        let mut out = self.clone();
        out.services.push(service);
        Ok(out)
    }

    pub fn declare_action(&self, action: Action) -> Result<Intrasystem, ModelError> {
        check_identifier(&action.name, "action name")?;
        if self.actions.iter().any(|a| a.name == action.name) {
            return Err(ModelError::DuplicateChannel {
                kind: ChannelKind::Action,
                name: action.name,
            });
        }
        let mut out = self.clone();
        out.actions.push(action);
        Ok(out)
    }

    /// Adds a communication medium grouping existing connections.
    ///
    /// Every reference must resolve against the connections of this
    /// intrasystem, including those of nested intrasystems.
    pub fn group_medium(&self, name: impl Into<String>, refs: Vec<ChannelRef>) -> Result<Intrasystem, ModelError> {
        let name = name.into();
        check_identifier(&name, "medium name")?;
        if self.mediums.iter().any(|m| m.name == name) {
            return Err(ModelError::DuplicateMedium(name));
        }
        if refs.is_empty() {
            return Err(ModelError::EmptyMedium { medium: name });
        }
        let known: BTreeSet<ChannelRef> = join_ports(self).into_iter().map(|j| j.reference()).collect();
        if let Some(missing) = refs.iter().find(|r| !known.contains(r)) {
            return Err(ModelError::DanglingMediumMember {
                medium: name,
                member: missing.clone(),
            });
        }
        let mut out = self.clone();
        out.mediums.push(CommMedium { name, members: refs });
        Ok(out)
    }

    /// Leaf components in depth-first, name-sorted order. Members of nested
    /// intrasystems are renamed `outer::inner`.
    pub fn flatten(&self) -> Vec<Component> {
        let mut out = Vec::new();
        flatten_into(self, None, &mut out);
        out
    }

    /// Number of components at every nesting level, containers included.
    pub fn component_count(&self) -> usize {
        self.components
            .iter()
            .map(|c| 1 + c.nested.as_ref().map_or(0, Intrasystem::component_count))
            .sum()
    }

    /// All intrasystems in this tree (self first) paired with their qualified prefix.
    pub(crate) fn scopes(&self) -> Vec<(String, &Intrasystem)> {
        let mut out = vec![(String::new(), self)];
        let mut i = 0;
        while i < out.len() {
            let (prefix, sys) = (out[i].0.clone(), out[i].1);
            let mut nested: Vec<&Component> = sys.components.iter().filter(|c| c.nested.is_some()).collect();
            nested.sort_by(|a, b| a.name.cmp(&b.name));
            for c in nested {
                let q = qualify(&prefix, &c.name);
                out.push((q, c.nested.as_ref().unwrap()));
            }
            i += 1;
        }
        out
    }

    fn canonicalize(&mut self) {
        for c in &mut self.components {
            c.ports.sort();
            if let Some(n) = c.nested.as_mut() {
                n.canonicalize();
            }
        }
        self.components.sort_by(|a, b| a.name.cmp(&b.name));
        for m in &mut self.mediums {
            m.members.sort();
        }
        self.mediums.sort_by(|a, b| a.name.cmp(&b.name));
        self.topics.sort();
        self.services.sort();
        self.actions.sort();
    }
}

fn flatten_into(sys: &Intrasystem, prefix: Option<&str>, out: &mut Vec<Component>) {
    let mut sorted: Vec<&Component> = sys.components.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    for c in sorted {
        let name = match prefix {
            Some(p) => qualify(p, &c.name),
            None => c.name.clone(),
        };
        match &c.nested {
            Some(nested) => flatten_into(nested, Some(&name), out),
            None if c.kind == ComponentKind::Intrasystem => {}
            None => {
                let mut leaf = c.clone();
                leaf.name = name;
                out.push(leaf);
            }
        }
    }
}

pub(crate) fn qualify(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}{QUALIFIER}{name}")
    }
}

/// The executed specialisation of an intrasystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunningSystem {
    pub system: Intrasystem,
    /// Master and rosout are elided from compact systems.
    pub compact: bool,
}

/// Creates a running system. Unless `compact`, the master and rosout nodes are inserted.
pub fn new_running_system(name: impl Into<String>, compact: bool) -> Result<RunningSystem, ModelError> {
    let mut system = Intrasystem::new(name)?;
    if !compact {
        system.components.push(Component::node(MASTER_NODE));
        system.components.push(Component::node(ROSOUT_NODE));
    }
    Ok(RunningSystem { system, compact })
}

impl RunningSystem {
    pub fn add_component(&self, component: Component) -> Result<RunningSystem, ModelError> {
        self.map(|s| s.add_component(component))
    }

    pub fn remove_component(&self, name: &str) -> Result<RunningSystem, ModelError> {
        self.map(|s| s.remove_component(name))
    }

    pub fn declare_topic(&self, topic: Topic) -> Result<RunningSystem, ModelError> {
        self.map(|s| s.declare_topic(topic))
    }

    pub fn declare_service(&self, service: Service) -> Result<RunningSystem, ModelError> {
        self.map(|s| s.declare_service(service))
    }

    pub fn declare_action(&self, action: Action) -> Result<RunningSystem, ModelError> {
        self.map(|s| s.declare_action(action))
    }

    pub fn group_medium(&self, name: impl Into<String>, refs: Vec<ChannelRef>) -> Result<RunningSystem, ModelError> {
        self.map(|s| s.group_medium(name, refs))
    }

    fn map(
        &self,
        f: impl FnOnce(&Intrasystem) -> Result<Intrasystem, ModelError>,
    ) -> Result<RunningSystem, ModelError> {
        Ok(RunningSystem {
            system: f(&self.system)?,
            compact: self.compact,
        })
    }
}

impl Deref for RunningSystem {
    type Target = Intrasystem;

    fn deref(&self) -> &Intrasystem {
        &self.system
    }
}

impl DerefMut for RunningSystem {
    fn deref_mut(&mut self) -> &mut Intrasystem {
        &mut self.system
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    Node,
    Nodelet,
    Plugin,
    Library,
    NonRos,
    Intrasystem,
}

impl ComponentKind {
    pub const ALL: [ComponentKind; 6] = [
        ComponentKind::Node,
        ComponentKind::Nodelet,
        ComponentKind::Plugin,
        ComponentKind::Library,
        ComponentKind::NonRos,
        ComponentKind::Intrasystem,
    ];

    /// Keyword used by the model language.
    pub fn keyword(self) -> &'static str {
        match self {
            ComponentKind::Node => "node",
            ComponentKind::Nodelet => "nodelet",
            ComponentKind::Plugin => "plugin",
            ComponentKind::Library => "library",
            ComponentKind::NonRos => "nonros",
            ComponentKind::Intrasystem => "intrasystem",
        }
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// The two infrastructure nodes a running system is built around.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfraRole {
    Master,
    Rosout,
}

/// A node, nodelet, plugin, library, non-ROS component or nested intrasystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    pub kind: ComponentKind,
    pub ports: Vec<Port>,
    /// Nodelet manager; nodelets only.
    pub manager: Option<String>,
    /// Hosting component; plugins only.
    pub host: Option<String>,
    /// Present iff `kind` is `Intrasystem`.
    pub nested: Option<Intrasystem>,
}

impl Component {
    fn leaf(name: impl Into<String>, kind: ComponentKind) -> Self {
        Component {
            name: name.into(),
            kind,
            ports: Vec::new(),
            manager: None,
            host: None,
            nested: None,
        }
    }

    pub fn node(name: impl Into<String>) -> Self {
        Self::leaf(name, ComponentKind::Node)
    }

    pub fn nodelet(name: impl Into<String>, manager: Option<String>) -> Self {
        Component {
            manager,
            ..Self::leaf(name, ComponentKind::Nodelet)
        }
    }

    pub fn plugin(name: impl Into<String>, host: Option<String>) -> Self {
        Component {
            host,
            ..Self::leaf(name, ComponentKind::Plugin)
        }
    }

    pub fn library(name: impl Into<String>) -> Self {
        Self::leaf(name, ComponentKind::Library)
    }

    pub fn non_ros(name: impl Into<String>) -> Self {
        Self::leaf(name, ComponentKind::NonRos)
    }

    /// Wraps an intrasystem as a component of an enclosing one.
    pub fn group(system: Intrasystem) -> Self {
        Component {
            nested: Some(system.clone()),
            ..Self::leaf(system.name, ComponentKind::Intrasystem)
        }
    }

    pub fn with_port(mut self, port: Port) -> Self {
        self.ports.push(port);
        self
    }

    pub fn publishes(self, channel: &str, payload: &str) -> Self {
        self.with_port(Port::new(Direction::Publish, channel, payload))
    }

    pub fn subscribes(self, channel: &str, payload: &str) -> Self {
        self.with_port(Port::new(Direction::Subscribe, channel, payload))
    }

    pub fn serves(self, channel: &str, payload: &str) -> Self {
        self.with_port(Port::new(Direction::Serve, channel, payload))
    }

    pub fn calls(self, channel: &str, payload: &str) -> Self {
        self.with_port(Port::new(Direction::Call, channel, payload))
    }

    pub fn provides_action(self, channel: &str, payload: &str) -> Self {
        self.with_port(Port::new(Direction::ActionServe, channel, payload))
    }

    pub fn uses_action(self, channel: &str, payload: &str) -> Self {
        self.with_port(Port::new(Direction::ActionCall, channel, payload))
    }

    pub fn nonros_link(self, label: &str, payload: &str) -> Self {
        self.with_port(Port::new(Direction::NonRos, label, payload))
    }

    /// Infrastructure role, judged by kind and name.
    pub fn role(&self) -> Option<InfraRole> {
        if self.kind != ComponentKind::Node {
            return None;
        }
        match self.name.as_str() {
            MASTER_NODE => Some(InfraRole::Master),
            ROSOUT_NODE => Some(InfraRole::Rosout),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Publish,
    Subscribe,
    Serve,
    Call,
    ActionServe,
    ActionCall,
    NonRos,
}

impl Direction {
    pub const ALL: [Direction; 7] = [
        Direction::Publish,
        Direction::Subscribe,
        Direction::Serve,
        Direction::Call,
        Direction::ActionServe,
        Direction::ActionCall,
        Direction::NonRos,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Direction::Publish => "publishes",
            Direction::Subscribe => "subscribes",
            Direction::Serve => "serves",
            Direction::Call => "calls",
            Direction::ActionServe => "provides_action",
            Direction::ActionCall => "uses_action",
            Direction::NonRos => "nonros_link",
        }
    }

    pub fn channel_kind(self) -> ChannelKind {
        match self {
            Direction::Publish | Direction::Subscribe => ChannelKind::Topic,
            Direction::Serve | Direction::Call => ChannelKind::Service,
            Direction::ActionServe | Direction::ActionCall => ChannelKind::Action,
            Direction::NonRos => ChannelKind::NonRos,
        }
    }

    /// Publishing, serving and non-ROS ends; the rest consume.
    pub fn is_provider(self) -> bool {
        matches!(
            self,
            Direction::Publish | Direction::Serve | Direction::ActionServe | Direction::NonRos
        )
    }
}

/// One communication end of a component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port {
    pub direction: Direction,
    /// Topic, service or action name; a free-form label for non-ROS links.
    pub channel: String,
    pub payload_type: String,
}

impl Port {
    pub fn new(direction: Direction, channel: impl Into<String>, payload_type: impl Into<String>) -> Self {
        Port {
            direction,
            channel: channel.into(),
            payload_type: payload_type.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Topic {
    pub name: String,
    pub message: String,
}

impl Topic {
    pub fn new(name: impl Into<String>, message: impl Into<String>) -> Self {
        Topic {
            name: name.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ServiceData {
    pub request: String,
    pub response: String,
}

impl ServiceData {
    /// Request/response names following the generated-type convention for a service type.
    pub fn for_type(service_type: &str) -> Self {
        ServiceData {
            request: format!("{service_type}Request"),
            response: format!("{service_type}Response"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Service {
    pub name: String,
    pub data: ServiceData,
}

impl Service {
    pub fn new(name: impl Into<String>, request: impl Into<String>, response: impl Into<String>) -> Self {
        Service {
            name: name.into(),
            data: ServiceData {
                request: request.into(),
                response: response.into(),
            },
        }
    }
}

/// Types carried by the goal, feedback and result topics of an action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionData {
    pub goal: String,
    pub feedback: String,
    pub result: String,
}

impl ActionData {
    pub fn new(goal: impl Into<String>, feedback: impl Into<String>, result: impl Into<String>) -> Self {
        ActionData {
            goal: goal.into(),
            feedback: feedback.into(),
            result: result.into(),
        }
    }

    /// Constituent names generated for an action definition called `base`.
    pub fn for_type(base: &str) -> Self {
        ActionData::new(
            format!("{base}Goal"),
            format!("{base}Feedback"),
            format!("{base}Result"),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub name: String,
    pub data: ActionData,
}

impl Action {
    pub fn new(name: impl Into<String>, data: ActionData) -> Self {
        Action {
            name: name.into(),
            data,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChannelKind {
    Topic,
    Service,
    Action,
    NonRos,
}

impl ChannelKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ChannelKind::Topic => "topic",
            ChannelKind::Service => "service",
            ChannelKind::Action => "action",
            ChannelKind::NonRos => "nonros",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "topic" => Ok(ChannelKind::Topic),
            "service" => Ok(ChannelKind::Service),
            "action" => Ok(ChannelKind::Action),
            "nonros" => Ok(ChannelKind::NonRos),
            other => Err(format!("unknown channel kind `{other}`")),
        }
    }
}

/// Reference to a connection by variant and channel name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelRef {
    pub kind: ChannelKind,
    pub name: String,
}

impl ChannelRef {
    pub fn new(kind: ChannelKind, name: impl Into<String>) -> Self {
        ChannelRef {
            kind,
            name: name.into(),
        }
    }

    pub fn topic(name: impl Into<String>) -> Self {
        Self::new(ChannelKind::Topic, name)
    }

    pub fn service(name: impl Into<String>) -> Self {
        Self::new(ChannelKind::Service, name)
    }

    pub fn action(name: impl Into<String>) -> Self {
        Self::new(ChannelKind::Action, name)
    }
}

impl fmt::Display for ChannelRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.name)
    }
}

/// Communication medium: a named group of related connections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommMedium {
    pub name: String,
    pub members: Vec<ChannelRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Workspace {
    pub name: String,
    pub packages: Vec<Package>,
    pub metapackages: Vec<Metapackage>,
}

impl Workspace {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        check_identifier(&name, "workspace name")?;
        Ok(Workspace {
            name,
            ..Default::default()
        })
    }

    pub fn package(&self, name: &str) -> Option<&Package> {
        self.packages.iter().find(|p| p.name == name)
    }

    pub fn metapackage(&self, name: &str) -> Option<&Metapackage> {
        self.metapackages.iter().find(|p| p.name == name)
    }

    pub(crate) fn canonicalize(&mut self) {
        for p in &mut self.packages {
            p.canonicalize();
        }
        self.packages.sort_by(|a, b| a.name.cmp(&b.name));
        for m in &mut self.metapackages {
            m.packages.sort();
            m.artifacts.sort();
        }
        self.metapackages.sort_by(|a, b| a.name.cmp(&b.name));
    }
}

/// Kinds of file artifact a package composes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArtifactKind {
    Node,
    Nodelet,
    Plugin,
    Library,
    Msg,
    Srv,
    ActionDef,
    Misc,
}

impl ArtifactKind {
    pub const ALL: [ArtifactKind; 8] = [
        ArtifactKind::Node,
        ArtifactKind::Nodelet,
        ArtifactKind::Plugin,
        ArtifactKind::Library,
        ArtifactKind::Msg,
        ArtifactKind::Srv,
        ArtifactKind::ActionDef,
        ArtifactKind::Misc,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ArtifactKind::Node => "node",
            ArtifactKind::Nodelet => "nodelet",
            ArtifactKind::Plugin => "plugin",
            ArtifactKind::Library => "library",
            ArtifactKind::Msg => "msg",
            ArtifactKind::Srv => "srv",
            ArtifactKind::ActionDef => "actiondef",
            ArtifactKind::Misc => "misc",
        }
    }

    pub fn from_keyword(s: &str) -> Option<ArtifactKind> {
        ArtifactKind::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Package {
    pub name: String,
    pub nodes: Vec<String>,
    pub nodelets: Vec<String>,
    pub plugins: Vec<String>,
    pub libraries: Vec<String>,
    pub msg_data: Vec<String>,
    pub srv_data: Vec<String>,
    /// Action data structure names; see [`ActionData::for_type`] for their constituents.
    pub action_data: Vec<String>,
    pub misc: Vec<String>,
}

impl Package {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        check_identifier(&name, "package name")?;
        Ok(Package {
            name,
            ..Default::default()
        })
    }

    pub fn list(&self, kind: ArtifactKind) -> &Vec<String> {
        match kind {
            ArtifactKind::Node => &self.nodes,
            ArtifactKind::Nodelet => &self.nodelets,
            ArtifactKind::Plugin => &self.plugins,
            ArtifactKind::Library => &self.libraries,
            ArtifactKind::Msg => &self.msg_data,
            ArtifactKind::Srv => &self.srv_data,
            ArtifactKind::ActionDef => &self.action_data,
            ArtifactKind::Misc => &self.misc,
        }
    }

    pub fn list_mut(&mut self, kind: ArtifactKind) -> &mut Vec<String> {
        match kind {
            ArtifactKind::Node => &mut self.nodes,
            ArtifactKind::Nodelet => &mut self.nodelets,
            ArtifactKind::Plugin => &mut self.plugins,
            ArtifactKind::Library => &mut self.libraries,
            ArtifactKind::Msg => &mut self.msg_data,
            ArtifactKind::Srv => &mut self.srv_data,
            ArtifactKind::ActionDef => &mut self.action_data,
            ArtifactKind::Misc => &mut self.misc,
        }
    }

    pub fn with(mut self, kind: ArtifactKind, name: impl Into<String>) -> Self {
        self.list_mut(kind).push(name.into());
        self
    }

    /// Every artifact as a (kind, name) pair, grouped by kind.
    pub fn artifacts(&self) -> impl Iterator<Item = (ArtifactKind, &str)> {
        ArtifactKind::ALL
            .into_iter()
            .flat_map(move |k| self.list(k).iter().map(move |n| (k, n.as_str())))
    }

    fn canonicalize(&mut self) {
        for k in ArtifactKind::ALL {
            self.list_mut(k).sort();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Metapackage {
    pub name: String,
    pub packages: Vec<String>,
    /// Files a metapackage should not own; kept so the violation can be reported.
    pub artifacts: Vec<(ArtifactKind, String)>,
}

impl Metapackage {
    pub fn new(name: impl Into<String>, packages: Vec<String>) -> Result<Self, ModelError> {
        let name = name.into();
        check_identifier(&name, "metapackage name")?;
        Ok(Metapackage {
            name,
            packages,
            artifacts: Vec::new(),
        })
    }
}

fn check_identifier(name: &str, what: &str) -> Result<(), ModelError> {
    if name.is_empty() {
        Err(ModelError::InvalidIdentifier(format!("{what} must not be empty")))
    } else {
        Ok(())
    }
}
