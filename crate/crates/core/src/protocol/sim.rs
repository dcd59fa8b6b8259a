//! Lockstep simulation of one goal travelling between client and server.

use std::fmt;

use super::{ClientState, Event, ProtocolError, ServerState, TransitionTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    /// 1-based index of the trace event that caused this step. Status and
    /// result deliveries share the index of the event that emitted them.
    pub index: usize,
    pub event: Event,
    pub server: (Option<ServerState>, Option<ServerState>),
    pub client: (Option<ClientState>, Option<ClientState>),
    /// Topic the event travels on, or `-` for server API calls.
    pub via: &'static str,
}

fn state<T: fmt::Display>(s: Option<T>) -> String {
    s.map_or_else(|| "-".to_string(), |s| s.to_string())
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "#{} {} server:{}->{} client:{}->{} via:{}",
            self.index,
            self.event,
            state(self.server.0),
            state(self.server.1),
            state(self.client.0),
            state(self.client.1),
            self.via
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected { index: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceReport {
    pub steps: Vec<Step>,
    pub verdict: Verdict,
    pub server: Option<ServerState>,
    pub client: Option<ClientState>,
    /// Every event had a defined transition; false when a step left the table.
    pub defined: bool,
}

impl TraceReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    /// One line per step followed by the verdict line.
    pub fn to_text(&self) -> String {
        let mut out: String = self.steps.iter().map(|s| format!("{s}\n")).collect();
        match &self.verdict {
            Verdict::Accepted => out.push_str("verdict: accepted\n"),
            Verdict::Rejected { index, reason } => out.push_str(&format!("verdict: rejected@{index} {reason}\n")),
        }
        out
    }
}

/// Runs a trace against the shipped table.
pub fn simulate(trace: &[Event]) -> TraceReport {
    simulate_with(super::default_table(), trace)
}

/// Runs a trace against `table`. The report is accepted iff every event is
/// defined for both machines and the client ends `Done`.
pub fn simulate_with(table: &TransitionTable, trace: &[Event]) -> TraceReport {
    let mut sim = Sim {
        table,
        server: None,
        client: None,
        steps: Vec::new(),
    };
    let mut verdict = Verdict::Accepted;
    for (i, &event) in trace.iter().enumerate() {
        if let Err(reason) = sim.feed(i + 1, event) {
            verdict = Verdict::Rejected { index: i + 1, reason };
            break;
        }
    }
    let defined = verdict == Verdict::Accepted;
    if defined && sim.client != Some(ClientState::Done) {
        verdict = Verdict::Rejected {
            index: trace.len(),
            reason: format!("client ended in {}, not Done", state(sim.client)),
        };
    }
    TraceReport {
        steps: sim.steps,
        verdict,
        server: sim.server,
        client: sim.client,
        defined,
    }
}

struct Sim<'t> {
    table: &'t TransitionTable,
    server: Option<ServerState>,
    client: Option<ClientState>,
    steps: Vec<Step>,
}

impl Sim<'_> {
    fn feed(&mut self, index: usize, event: Event) -> Result<(), String> {
        let (Some(server), Some(client)) = (self.server, self.client) else {
            if event != Event::SendGoal {
                return Err(format!("trace must begin with SendGoal, found {event}"));
            }
            self.server = Some(ServerState::Pending);
            self.client = Some(ClientState::WaitingForGoalAck);
            self.record(index, event, None, None, "/goal");
            return self.emit(index);
        };
        match event {
            Event::SendGoal => Err("only one goal may be in flight".to_string()),
            Event::SendCancel => {
                let c = self.table.client_step(client, event).map_err(reason)?;
                let s = self.table.server_step(server, event).map_err(reason)?;
                self.client = Some(c);
                self.server = Some(s);
                self.record(index, event, Some(server), Some(client), "/cancel");
                if s != server {
                    self.emit(index)?;
                }
                Ok(())
            }
            // explicit deliveries in a trace observe what was already auto-emitted
            Event::StatusUpdate(reported) => {
                if reported != server {
                    return Err(format!(
                        "status mismatch: server is {server}, status reports {reported}"
                    ));
                }
                self.record(index, event, Some(server), Some(client), "/status");
                Ok(())
            }
            Event::ReceiveResult => {
                if !server.is_terminal() {
                    return Err(format!("no result while server is {server}"));
                }
                self.record(index, event, Some(server), Some(client), "/result");
                Ok(())
            }
            _ => {
                let s = self.table.server_step(server, event).map_err(reason)?;
                self.server = Some(s);
                self.record(index, event, Some(server), Some(client), "-");
                self.emit(index)
            }
        }
    }

    /// Sends the current server state on `/status`, then the result on
    /// `/result` when that state is terminal.
    fn emit(&mut self, index: usize) -> Result<(), String> {
        let server = self.server.expect("goal in flight");
        self.deliver(index, Event::StatusUpdate(server), "/status")?;
        if server.is_terminal() {
            self.deliver(index, Event::ReceiveResult, "/result")?;
        }
        Ok(())
    }

    fn deliver(&mut self, index: usize, event: Event, via: &'static str) -> Result<(), String> {
        let client = self.client.expect("goal in flight");
        let next = self.table.client_step(client, event).map_err(reason)?;
        self.client = Some(next);
        self.record(index, event, self.server, Some(client), via);
        Ok(())
    }

    fn record(
        &mut self,
        index: usize,
        event: Event,
        server_before: Option<ServerState>,
        client_before: Option<ClientState>,
        via: &'static str,
    ) {
        self.steps.push(Step {
            index,
            event,
            server: (server_before, self.server),
            client: (client_before, self.client),
            via,
        });
    }
}

fn reason(e: ProtocolError) -> String {
    e.to_string()
}

/// Parses a trace file: one event per line, blank lines and `#` comments
/// ignored. Errors carry the 1-based line number.
pub fn parse_trace(text: &str) -> Result<Vec<Event>, ProtocolError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let event = line.parse().map_err(|e: ProtocolError| ProtocolError::Table {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(event);
    }
    Ok(out)
}
