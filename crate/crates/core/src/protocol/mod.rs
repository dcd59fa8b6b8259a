//! Executable goal state machines of the ROS 1 action protocol.
//!
//! Transitions come from a [`TransitionTable`]; the default table ships in
//! `data/actionlib.table` and can be replaced at run time.

mod sim;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use sim::{parse_trace, simulate, simulate_with, Step, TraceReport, Verdict};

/// Text of the built-in transition table.
pub const DEFAULT_TABLE: &str = include_str!("../../data/actionlib.table");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ServerState {
    Pending,
    Active,
    Recalling,
    Preempting,
    Rejected,
    Recalled,
    Preempted,
    Succeeded,
    Aborted,
}

impl ServerState {
    pub const ALL: [ServerState; 9] = [
        ServerState::Pending,
        ServerState::Active,
        ServerState::Recalling,
        ServerState::Preempting,
        ServerState::Rejected,
        ServerState::Recalled,
        ServerState::Preempted,
        ServerState::Succeeded,
        ServerState::Aborted,
    ];

    pub fn is_terminal(self) -> bool {
        matches!(
            self,
            ServerState::Rejected
                | ServerState::Recalled
                | ServerState::Preempted
                | ServerState::Succeeded
                | ServerState::Aborted
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ServerState::Pending => "Pending",
            ServerState::Active => "Active",
            ServerState::Recalling => "Recalling",
            ServerState::Preempting => "Preempting",
            ServerState::Rejected => "Rejected",
            ServerState::Recalled => "Recalled",
            ServerState::Preempted => "Preempted",
            ServerState::Succeeded => "Succeeded",
            ServerState::Aborted => "Aborted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClientState {
    WaitingForGoalAck,
    Pending,
    Active,
    WaitingForResult,
    WaitingForCancelAck,
    Recalling,
    Preempting,
    Done,
}

impl ClientState {
    pub const ALL: [ClientState; 8] = [
        ClientState::WaitingForGoalAck,
        ClientState::Pending,
        ClientState::Active,
        ClientState::WaitingForResult,
        ClientState::WaitingForCancelAck,
        ClientState::Recalling,
        ClientState::Preempting,
        ClientState::Done,
    ];

    pub fn is_terminal(self) -> bool {
        self == ClientState::Done
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClientState::WaitingForGoalAck => "WaitingForGoalAck",
            ClientState::Pending => "Pending",
            ClientState::Active => "Active",
            ClientState::WaitingForResult => "WaitingForResult",
            ClientState::WaitingForCancelAck => "WaitingForCancelAck",
            ClientState::Recalling => "Recalling",
            ClientState::Preempting => "Preempting",
            ClientState::Done => "Done",
        }
    }
}

macro_rules! text_enum {
    ($ty:ty, $what:literal) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = ProtocolError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                <$ty>::ALL
                    .into_iter()
                    .find(|v| v.as_str() == s)
                    .ok_or_else(|| ProtocolError::UnknownName {
                        what: $what,
                        name: s.to_string(),
                    })
            }
        }
    };
}

text_enum!(ServerState, "server state");
text_enum!(ClientState, "client state");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    SendGoal,
    SendCancel,
    SetAccepted,
    SetRejected,
    SetSucceeded,
    SetAborted,
    SetCancelled,
    StatusUpdate(ServerState),
    ReceiveResult,
}

impl Event {
    /// Every event, with one status update per server state.
    pub fn all() -> Vec<Event> {
        let mut out = vec![
            Event::SendGoal,
            Event::SendCancel,
            Event::SetAccepted,
            Event::SetRejected,
            Event::SetSucceeded,
            Event::SetAborted,
            Event::SetCancelled,
            Event::ReceiveResult,
        ];
        out.extend(ServerState::ALL.map(Event::StatusUpdate));
        out
    }

    pub fn is_client_originated(self) -> bool {
        matches!(self, Event::SendGoal | Event::SendCancel)
    }

    pub fn is_server_api(self) -> bool {
        matches!(
            self,
            Event::SetAccepted | Event::SetRejected | Event::SetSucceeded | Event::SetAborted | Event::SetCancelled
        )
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::SendGoal => f.write_str("SendGoal"),
            Event::SendCancel => f.write_str("SendCancel"),
            Event::SetAccepted => f.write_str("SetAccepted"),
            Event::SetRejected => f.write_str("SetRejected"),
            Event::SetSucceeded => f.write_str("SetSucceeded"),
            Event::SetAborted => f.write_str("SetAborted"),
            Event::SetCancelled => f.write_str("SetCancelled"),
            Event::StatusUpdate(s) => write!(f, "StatusUpdate:{s}"),
            Event::ReceiveResult => f.write_str("ReceiveResult"),
        }
    }
}

impl FromStr for Event {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(state) = s.strip_prefix("StatusUpdate:") {
            return state.parse().map(Event::StatusUpdate);
        }
        Event::all()
            .into_iter()
            .find(|e| !matches!(e, Event::StatusUpdate(_)) && e.to_string() == s)
            .ok_or_else(|| ProtocolError::UnknownName {
                what: "event",
                name: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Machine {
    Server,
    Client,
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Machine::Server => "server",
            Machine::Client => "client",
        })
    }
}

impl FromStr for Machine {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "server" => Ok(Machine::Server),
            "client" => Ok(Machine::Client),
            _ => Err(ProtocolError::UnknownName {
                what: "machine",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("{machine} has no transition for {state} + {event}")]
    Undefined {
        machine: Machine,
        state: String,
        event: Event,
    },
    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },
    #[error("line {line}: {message}")]
    Table { line: usize, message: String },
}

/// Both machines' transitions keyed by (state, event).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransitionTable {
    server: BTreeMap<(ServerState, Event), ServerState>,
    client: BTreeMap<(ClientState, Event), ClientState>,
}

impl TransitionTable {
    /// Parses rows of `<machine> <state> <event> <next-state>`. Blank lines
    /// and `#` comments are skipped; a repeated (state, event) key is an error.
    pub fn parse(text: &str) -> Result<TransitionTable, ProtocolError> {
        let mut table = TransitionTable::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let wrap = |e: ProtocolError| ProtocolError::Table {
                line,
                message: e.to_string(),
            };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [machine, state, event, next] = fields[..] else {
                return Err(ProtocolError::Table {
                    line,
                    message: format!("expected 4 fields, found {}", fields.len()),
                });
            };
            let event: Event = event.parse().map_err(wrap)?;
            let fresh = match machine.parse().map_err(wrap)? {
                Machine::Server => table
                    .server
                    .insert((state.parse().map_err(wrap)?, event), next.parse().map_err(wrap)?)
                    .is_none(),
                Machine::Client => table
                    .client
                    .insert((state.parse().map_err(wrap)?, event), next.parse().map_err(wrap)?)
                    .is_none(),
            };
            if !fresh {
                return Err(ProtocolError::Table {
                    line,
                    message: format!("duplicate row for {machine} {state} {event}"),
                });
            }
        }
        Ok(table)
    }

    /// The shipped actionlib table.
    pub fn actionlib() -> TransitionTable {
        TransitionTable::parse(DEFAULT_TABLE).expect("built-in table parses")
    }

    pub fn server_step(&self, state: ServerState, event: Event) -> Result<ServerState, ProtocolError> {
        self.server
            .get(&(state, event))
            .copied()
            .ok_or(ProtocolError::Undefined {
                machine: Machine::Server,
                state: state.to_string(),
                event,
            })
    }

    pub fn client_step(&self, state: ClientState, event: Event) -> Result<ClientState, ProtocolError> {
        self.client
            .get(&(state, event))
            .copied()
            .ok_or(ProtocolError::Undefined {
                machine: Machine::Client,
                state: state.to_string(),
                event,
            })
    }

    /// A copy of the table with every row triggered by `event` removed.
    pub fn without_event(&self, event: Event) -> TransitionTable {
        TransitionTable {
            server: self
                .server
                .iter()
                .filter(|((_, e), _)| *e != event)
                .map(|(k, v)| (*k, *v))
                .collect(),
            client: self
                .client
                .iter()
                .filter(|((_, e), _)| *e != event)
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    pub fn rows(&self) -> Vec<(Machine, String, Event, String)> {
        let server = self
            .server
            .iter()
            .map(|((s, e), n)| (Machine::Server, s.to_string(), *e, n.to_string()));
        let client = self
            .client
            .iter()
            .map(|((s, e), n)| (Machine::Client, s.to_string(), *e, n.to_string()));
        server.chain(client).collect()
    }

    /// State names reachable from the machine's initial state, sorted.
    pub fn enumerate_reachable(&self, machine: Machine) -> BTreeSet<String> {
        match machine {
            Machine::Server => bfs(ServerState::Pending, &self.server),
            Machine::Client => bfs(ClientState::WaitingForGoalAck, &self.client),
        }
        .into_iter()
        .collect()
    }

    /// Server states from which some event sequence reaches a terminal state.
    pub fn server_states_reaching_terminal(&self) -> BTreeSet<ServerState> {
        let mut live: BTreeSet<ServerState> = ServerState::ALL.into_iter().filter(|s| s.is_terminal()).collect();
        loop {
            let before = live.len();
            for ((from, _), to) in &self.server {
                if live.contains(to) {
                    live.insert(*from);
                }
            }
            if live.len() == before {
                return live;
            }
        }
    }
}

fn bfs<S>(start: S, edges: &BTreeMap<(S, Event), S>) -> Vec<String>
where
    S: Copy + Ord + fmt::Display,
{
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for ((from, _), to) in edges {
            if *from == s && seen.insert(*to) {
                queue.push_back(*to);
            }
        }
    }
    seen.into_iter().map(|s| s.to_string()).collect()
}

/// One server transition in the shipped table.
pub fn server_step(state: ServerState, event: Event) -> Result<ServerState, ProtocolError> {
    default_table().server_step(state, event)
}

/// One client transition in the shipped table.
pub fn client_step(state: ClientState, event: Event) -> Result<ClientState, ProtocolError> {
    default_table().client_step(state, event)
}

pub fn enumerate_reachable(machine: Machine) -> BTreeSet<String> {
    default_table().enumerate_reachable(machine)
}

fn default_table() -> &'static TransitionTable {
    static TABLE: std::sync::OnceLock<TransitionTable> = std::sync::OnceLock::new();
    TABLE.get_or_init(TransitionTable::actionlib)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClientState as C;
    use ServerState as S;

    #[test]
    fn server_rows() {
        assert_eq!(server_step(S::Pending, Event::SetAccepted), Ok(S::Active));
        let r = server_step(S::Pending, Event::SendCancel).unwrap();
        assert_eq!(server_step(r, Event::SetCancelled), Ok(S::Recalled));
        let err = server_step(S::Succeeded, Event::SendCancel).unwrap_err();
        assert_eq!(err.to_string(), "server has no transition for Succeeded + SendCancel");
    }

    #[test]
    fn client_rows() {
        assert_eq!(
            client_step(C::WaitingForGoalAck, Event::StatusUpdate(S::Pending)),
            Ok(C::Pending)
        );
        assert_eq!(client_step(C::WaitingForResult, Event::ReceiveResult), Ok(C::Done));
        assert!(client_step(C::Done, Event::SendCancel).is_err());
    }

    #[test]
    fn event_text_round_trips() {
        for e in Event::all() {
            assert_eq!(e.to_string().parse::<Event>(), Ok(e));
        }
        assert!("StatusUpdate:Nope".parse::<Event>().is_err());
        assert!("Nope".parse::<Event>().is_err());
    }

    #[test]
    fn reachability() {
        assert_eq!(enumerate_reachable(Machine::Server).len(), 9);
        assert_eq!(enumerate_reachable(Machine::Client).len(), 8);
        let cut = TransitionTable::actionlib().without_event(Event::SetAccepted);
        assert!(!cut.enumerate_reachable(Machine::Server).contains("Active"));
    }

    #[test]
    fn table_rows_survive_reparse() {
        let t = TransitionTable::actionlib();
        let text: String = t
            .rows()
            .iter()
            .map(|(m, s, e, n)| format!("{m} {s} {e} {n}\n"))
            .collect();
        assert_eq!(TransitionTable::parse(&text).unwrap(), t);
    }

    #[test]
    fn malformed_tables() {
        let e = TransitionTable::parse("server Pending SetAccepted\n").unwrap_err();
        assert_eq!(e.to_string(), "line 1: expected 4 fields, found 3");
        let dup = "server Pending SetAccepted Active\nserver Pending SetAccepted Rejected\n";
        assert!(matches!(
            TransitionTable::parse(dup),
            Err(ProtocolError::Table { line: 2, .. })
        ));
        assert!(TransitionTable::parse("robot Pending SetAccepted Active").is_err());
    }
}
