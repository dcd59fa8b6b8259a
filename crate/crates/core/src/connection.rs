//! Connection resolution: joining component ports by channel name.

use std::collections::BTreeMap;

use crate::error::ModelError;
use crate::model::{Action, ActionData, ChannelKind, ChannelRef, Intrasystem, Service, ServiceData, Topic};

/// Payload of the `/cancel` topic of every action.
pub const CANCEL_TYPE: &str = "actionlib_msgs/GoalID";
/// Payload of the `/status` topic of every action.
pub const STATUS_TYPE: &str = "actionlib_msgs/GoalStatusArray";

/// The five topics an action is realised over, in request-then-response order.
pub const ACTION_SUFFIXES: [&str; 5] = ["goal", "cancel", "status", "feedback", "result"];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TopicConnection {
    pub topic: Topic,
    pub publishers: Vec<String>,
    pub subscribers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ServiceConnection {
    pub service: Service,
    pub server: Option<String>,
    pub clients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ActionConnection {
    pub action: Action,
    pub server: Option<String>,
    pub clients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NonRosConnection {
    pub label: String,
    pub endpoints: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Connection {
    Topic(TopicConnection),
    Service(ServiceConnection),
    Action(ActionConnection),
    NonRos(NonRosConnection),
}

impl Connection {
    pub fn reference(&self) -> ChannelRef {
        match self {
            Connection::Topic(c) => ChannelRef::topic(&c.topic.name),
            Connection::Service(c) => ChannelRef::service(&c.service.name),
            Connection::Action(c) => ChannelRef::action(&c.action.name),
            Connection::NonRos(c) => ChannelRef::new(ChannelKind::NonRos, &c.label),
        }
    }

    /// All component names on either side.
    pub fn endpoints(&self) -> Vec<&str> {
        let mut out: Vec<&str> = match self {
            Connection::Topic(c) => c.publishers.iter().chain(&c.subscribers).map(String::as_str).collect(),
            Connection::Service(ServiceConnection { server, clients, .. })
            | Connection::Action(ActionConnection { server, clients, .. }) => {
                server.iter().chain(clients).map(String::as_str).collect()
            }
            Connection::NonRos(c) => c.endpoints.iter().map(String::as_str).collect(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// One end of a joined channel.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Endpoint {
    pub component: String,
    pub payload: String,
}

#[derive(Debug, Clone)]
pub(crate) enum Declared {
    Topic(Topic),
    Service(Service),
    Action(Action),
}

/// Raw per-channel join of ports, before the single-server check.
#[derive(Debug, Clone)]
pub(crate) struct PortJoin {
    pub kind: ChannelKind,
    pub name: String,
    /// Publishers, servers, or every end of a non-ROS link.
    pub providers: Vec<Endpoint>,
    /// Subscribers or clients.
    pub consumers: Vec<Endpoint>,
    pub declared: Option<Declared>,
}

impl PortJoin {
    pub fn reference(&self) -> ChannelRef {
        ChannelRef::new(self.kind, &self.name)
    }

    pub fn provider_names(&self) -> Vec<String> {
        names(&self.providers)
    }

    pub fn consumer_names(&self) -> Vec<String> {
        names(&self.consumers)
    }

    /// The payload type from the declaration, else from the first port.
    fn payload(&self) -> String {
        self.providers
            .first()
            .or(self.consumers.first())
            .map(|e| e.payload.clone())
            .unwrap_or_default()
    }
}

fn names(endpoints: &[Endpoint]) -> Vec<String> {
    let mut out: Vec<String> = endpoints.iter().map(|e| e.component.clone()).collect();
    out.dedup();
    out
}

/// Joins the ports of every leaf component (nested ones included) and every
/// declared channel, keyed by (kind, name) in sorted order.
pub(crate) fn join_ports(system: &Intrasystem) -> Vec<PortJoin> {
    let mut map: BTreeMap<(ChannelKind, String), PortJoin> = BTreeMap::new();
    fn entry<'m>(
        map: &'m mut BTreeMap<(ChannelKind, String), PortJoin>,
        kind: ChannelKind,
        name: &str,
    ) -> &'m mut PortJoin {
        map.entry((kind, name.to_string())).or_insert_with(|| PortJoin {
            kind,
            name: name.to_string(),
            providers: Vec::new(),
            consumers: Vec::new(),
            declared: None,
        })
    }
    for leaf in system.flatten() {
        for port in &leaf.ports {
            let e = entry(&mut map, port.direction.channel_kind(), &port.channel);
            let end = Endpoint {
                component: leaf.name.clone(),
                payload: port.payload_type.clone(),
            };
            if port.direction.is_provider() {
                e.providers.push(end);
            } else {
                e.consumers.push(end);
            }
        }
    }
    for (_, scope) in system.scopes() {
        for t in &scope.topics {
            let e = entry(&mut map, ChannelKind::Topic, &t.name);
            e.declared.get_or_insert_with(|| Declared::Topic(t.clone()));
        }
        for s in &scope.services {
            let e = entry(&mut map, ChannelKind::Service, &s.name);
            e.declared.get_or_insert_with(|| Declared::Service(s.clone()));
        }
        for a in &scope.actions {
            let e = entry(&mut map, ChannelKind::Action, &a.name);
            e.declared.get_or_insert_with(|| Declared::Action(a.clone()));
        }
    }
    map.into_values()
        .map(|mut j| {
            j.providers.sort();
            j.consumers.sort();
            j
        })
        .collect()
}

/// Resolves every channel of `system` into a connection.
///
/// Channels with only one side present still yield a connection; the missing
/// side is empty. A service or action with two serving components is an error.
pub fn resolve_connections(system: &Intrasystem) -> Result<Vec<Connection>, ModelError> {
    join_ports(system).into_iter().map(to_connection).collect()
}

fn single_server(join: &PortJoin) -> Result<Option<String>, ModelError> {
    let servers = join.provider_names();
    match servers.as_slice() {
        [] => Ok(None),
        [one] => Ok(Some(one.clone())),
        [first, second, ..] => Err(ModelError::MultipleServers {
            kind: join.kind,
            channel: join.name.clone(),
            first: first.clone(),
            second: second.clone(),
        }),
    }
}

fn to_connection(join: PortJoin) -> Result<Connection, ModelError> {
    Ok(match join.kind {
        ChannelKind::Topic => {
            let topic = match &join.declared {
                Some(Declared::Topic(t)) => t.clone(),
                _ => Topic::new(&join.name, join.payload()),
            };
            Connection::Topic(TopicConnection {
                topic,
                publishers: join.provider_names(),
                subscribers: join.consumer_names(),
            })
        }
        ChannelKind::Service => {
            let service = match &join.declared {
                Some(Declared::Service(s)) => s.clone(),
                _ => Service {
                    name: join.name.clone(),
                    data: ServiceData::for_type(&join.payload()),
                },
            };
            Connection::Service(ServiceConnection {
                service,
                server: single_server(&join)?,
                clients: join.consumer_names(),
            })
        }
        ChannelKind::Action => {
            let action = match &join.declared {
                Some(Declared::Action(a)) => a.clone(),
                _ => {
                    let payload = join.payload();
                    let base = payload.strip_suffix("Action").unwrap_or(&payload);
                    Action::new(&join.name, ActionData::for_type(base))
                }
            };
            Connection::Action(ActionConnection {
                action,
                server: single_server(&join)?,
                clients: join.consumer_names(),
            })
        }
        ChannelKind::NonRos => Connection::NonRos(NonRosConnection {
            label: join.name.clone(),
            endpoints: join.provider_names(),
        }),
    })
}

/// Name of one constituent topic of an action.
pub fn action_topic_name(action: &str, suffix: &str) -> String {
    format!("{}/{}", action.trim_end_matches('/'), suffix)
}

/// Expands an action into its five constituent topic connections.
///
/// Clients publish `/goal` and `/cancel` and the server subscribes to them;
/// the server publishes `/status`, `/feedback` and `/result` to the clients.
pub fn expand_action(action: &Action, server: Option<&str>, clients: &[String]) -> Vec<TopicConnection> {
    let server: Vec<String> = server.map(str::to_string).into_iter().collect();
    let mut clients = clients.to_vec();
    clients.sort();
    clients.dedup();
    ACTION_SUFFIXES
        .iter()
        .map(|&suffix| {
            let (message, request) = match suffix {
                "goal" => (action.data.goal.clone(), true),
                "cancel" => (CANCEL_TYPE.to_string(), true),
                "status" => (STATUS_TYPE.to_string(), false),
                "feedback" => (action.data.feedback.clone(), false),
                _ => (action.data.result.clone(), false),
            };
            let (publishers, subscribers) = if request {
                (clients.clone(), server.clone())
            } else {
                (server.clone(), clients.clone())
            };
            TopicConnection {
                topic: Topic::new(action_topic_name(&action.name, suffix), message),
                publishers,
                subscribers,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Component, Intrasystem};

    fn sys(components: Vec<Component>) -> Intrasystem {
        components
            .into_iter()
            .fold(Intrasystem::new("S").unwrap(), |s, c| s.add_component(c).unwrap())
    }

    #[test]
    fn topic_fan_out() {
        let s = sys(vec![
            Component::node("A").publishes("/t", "M"),
            Component::node("B").subscribes("/t", "M"),
            Component::node("C").subscribes("/t", "M"),
        ]);
        let conns = resolve_connections(&s).unwrap();
        assert_eq!(
            conns,
            vec![Connection::Topic(TopicConnection {
                topic: Topic::new("/t", "M"),
                publishers: vec!["A".into()],
                subscribers: vec!["B".into(), "C".into()],
            })]
        );
    }

    #[test]
    fn service_single_server_many_clients() {
        let s = sys(vec![
            Component::node("S").serves("/get_plan", "nav_msgs/GetPlan"),
            Component::node("C1").calls("/get_plan", "nav_msgs/GetPlan"),
            Component::node("C2").calls("/get_plan", "nav_msgs/GetPlan"),
        ]);
        let conns = resolve_connections(&s).unwrap();
        let Connection::Service(c) = &conns[0] else { panic!() };
        assert_eq!(c.server.as_deref(), Some("S"));
        assert_eq!(c.clients, vec!["C1", "C2"]);
        assert_eq!(c.service.data.request, "nav_msgs/GetPlanRequest");
    }

    #[test]
    fn two_servers_is_an_error() {
        let s = sys(vec![
            Component::node("S1").serves("/x", "T"),
            Component::node("S2").serves("/x", "T"),
        ]);
        assert_eq!(
            resolve_connections(&s),
            Err(ModelError::MultipleServers {
                kind: ChannelKind::Service,
                channel: "/x".into(),
                first: "S1".into(),
                second: "S2".into(),
            })
        );
    }

    #[test]
    fn orphan_yields_one_sided_connection() {
        let s = sys(vec![Component::node("B").subscribes("/late", "M")]);
        let conns = resolve_connections(&s).unwrap();
        let Connection::Topic(c) = &conns[0] else { panic!() };
        assert!(c.publishers.is_empty());
        assert_eq!(c.subscribers, vec!["B"]);
    }

    #[test]
    fn nested_ports_use_qualified_names() {
        let inner = sys(vec![Component::node("B").subscribes("/t", "M")]);
        let inner = Intrasystem {
            name: "G".into(),
            ..inner
        };
        let s = sys(vec![Component::node("A").publishes("/t", "M"), Component::group(inner)]);
        let conns = resolve_connections(&s).unwrap();
        let Connection::Topic(c) = &conns[0] else { panic!() };
        assert_eq!(c.subscribers, vec!["G::B"]);
    }

    #[test]
    fn expand_move_base() {
        let a = Action::new("/move_base", ActionData::for_type("move_base_msgs/MoveBase"));
        let topics = expand_action(&a, Some("nav"), &["task".to_string()]);
        assert_eq!(topics.len(), 5);
        let goal = &topics[0];
        assert_eq!(goal.topic.name, "/move_base/goal");
        assert_eq!(goal.publishers, vec!["task"]);
        assert_eq!(goal.subscribers, vec!["nav"]);
        assert_eq!(topics[1].topic.message, CANCEL_TYPE);
        assert_eq!(topics[2].topic.message, STATUS_TYPE);
        assert_eq!(topics[2].publishers, vec!["nav"]);
        assert_eq!(topics[4].topic.message, "move_base_msgs/MoveBaseResult");
    }

    #[test]
    fn expand_without_endpoints() {
        let a = Action::new("/a", ActionData::new("G", "F", "R"));
        let topics = expand_action(&a, None, &[]);
        assert_eq!(topics.len(), 5);
        assert!(topics
            .iter()
            .all(|t| t.publishers.is_empty() && t.subscribers.is_empty()));
    }
}
