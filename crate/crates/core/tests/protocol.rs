use std::fs;
use std::path::PathBuf;

use meros::protocol::{
    client_step, enumerate_reachable, parse_trace, server_step, simulate, ClientState, Event, Machine, ServerState,
    TransitionTable, Verdict,
};
use proptest::prelude::*;

fn trace(name: &str) -> Vec<Event> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/traces")
        .join(name);
    parse_trace(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn terminal_states_absorb_every_event() {
    for s in ServerState::ALL.into_iter().filter(|s| s.is_terminal()) {
        for e in Event::all() {
            assert!(server_step(s, e).is_err(), "{s} + {e}");
        }
    }
    for e in Event::all() {
        assert!(client_step(ClientState::Done, e).is_err(), "Done + {e}");
    }
}

/// Each pair is defined exactly when the table lists it, and then goes to the listed state.
#[test]
fn steps_follow_table_rows() {
    let rows = TransitionTable::actionlib().rows();
    let find = |m: Machine, s: String, e: Event| {
        rows.iter()
            .find(|r| r.0 == m && r.1 == s && r.2 == e)
            .map(|r| r.3.clone())
    };
    for e in Event::all() {
        for s in ServerState::ALL {
            assert_eq!(
                server_step(s, e).ok().map(|n| n.to_string()),
                find(Machine::Server, s.to_string(), e)
            );
        }
        for s in ClientState::ALL {
            assert_eq!(
                client_step(s, e).ok().map(|n| n.to_string()),
                find(Machine::Client, s.to_string(), e)
            );
        }
    }
}

#[test]
fn every_state_is_reachable() {
    let server = enumerate_reachable(Machine::Server);
    let client = enumerate_reachable(Machine::Client);
    assert_eq!(server, ServerState::ALL.iter().map(|s| s.to_string()).collect());
    assert_eq!(client, ClientState::ALL.iter().map(|s| s.to_string()).collect());
    assert_eq!((server.len(), client.len()), (9, 8));
}

#[test]
fn every_server_state_can_finish() {
    let live = TransitionTable::actionlib().server_states_reaching_terminal();
    assert_eq!(live.len(), ServerState::ALL.len());
}

#[test]
fn happy_path() {
    let r = simulate(&[Event::SendGoal, Event::SetAccepted, Event::SetSucceeded]);
    assert_eq!(r.verdict, Verdict::Accepted);
    assert_eq!(
        (r.server, r.client),
        (Some(ServerState::Succeeded), Some(ClientState::Done))
    );
    assert_eq!(simulate(&trace("happy.trace")), r);
}

#[test]
fn cancel_before_accept_is_recalled() {
    let r = simulate(&trace("cancel_before_accept.trace"));
    assert!(r.accepted(), "{}", r.to_text());
    assert_eq!(r.server, Some(ServerState::Recalled));
    assert_eq!(r.client, Some(ClientState::Done));
}

#[test]
fn preemption_with_observations() {
    let r = simulate(&trace("preempted.trace"));
    assert!(r.accepted(), "{}", r.to_text());
    assert_eq!(r.server, Some(ServerState::Preempted));
}

#[test]
fn succeeding_a_pending_goal_is_rejected() {
    let r = simulate(&trace("succeed_before_accept.trace"));
    assert!(
        matches!(r.verdict, Verdict::Rejected { index: 2, .. }),
        "{}",
        r.to_text()
    );
}

#[test]
fn wrong_observation_is_rejected() {
    let r = simulate(&[Event::SendGoal, Event::StatusUpdate(ServerState::Active)]);
    assert!(matches!(r.verdict, Verdict::Rejected { index: 2, .. }));
}

#[test]
fn unknown_trace_events_fail_to_parse() {
    assert!(parse_trace("SendGoal\nFly\n").is_err());
    assert!(parse_trace("# nothing\n\n").unwrap().is_empty());
}

fn any_event() -> impl Strategy<Value = Event> {
    prop::sample::select(Event::all())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Every status delivered on /status equals the server state after the
    /// emitting step. Once an event's deliveries are done the client's view
    /// matches the server. A rejected trace stops inside the trace.
    #[test]
    fn simulator_keeps_machines_in_lockstep(events in prop::collection::vec(any_event(), 0..12)) {
        let r = simulate(&events);
        for step in &r.steps {
            if let (Event::StatusUpdate(status), "/status") = (step.event, step.via) {
                prop_assert_eq!(Some(status), step.server.1);
            }
        }
        let last_index = r.steps.last().map_or(0, |s| s.index);
        for (i, step) in r.steps.iter().enumerate() {
            let settled = r.steps.get(i + 1).is_none_or(|next| next.index != step.index);
            if !settled || (!r.defined && step.index == last_index) {
                continue;
            }
            if let (Some(s), Some(c)) = (step.server.1, step.client.1) {
                match c {
                    ClientState::Active => prop_assert_eq!(s, ServerState::Active),
                    ClientState::Recalling => prop_assert_eq!(s, ServerState::Recalling),
                    ClientState::Preempting => prop_assert_eq!(s, ServerState::Preempting),
                    ClientState::Done => prop_assert!(s.is_terminal()),
                    _ => {}
                }
                if s.is_terminal() {
                    prop_assert_eq!(c, ClientState::Done);
                }
            }
        }
        prop_assert_eq!(r.defined, !matches!(&r.verdict, Verdict::Rejected { reason, .. } if !reason.starts_with("client ended")));
        if let Verdict::Rejected { index, .. } = r.verdict {
            prop_assert!(index <= events.len() && (index >= 1 || events.is_empty()));
        }
    }

    #[test]
    fn server_only_traces_reach_terminal_or_stop(events in prop::collection::vec(
        prop::sample::select(vec![Event::SetAccepted, Event::SetRejected, Event::SetSucceeded, Event::SetAborted, Event::SetCancelled, Event::SendCancel]),
        0..8,
    )) {
        let mut s = ServerState::Pending;
        for e in events {
            match server_step(s, e) {
                Ok(n) => { prop_assert!(!s.is_terminal()); s = n; }
                Err(_) => break,
            }
        }
        prop_assert!(TransitionTable::actionlib().server_states_reaching_terminal().contains(&s));
    }
}
