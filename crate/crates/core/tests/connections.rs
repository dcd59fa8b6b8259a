use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use meros::text::parse_model;
use meros::{expand_action, resolve_connections, ChannelKind, Component, Connection, RunningSystem};
use meros_testkit::{models, rng};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn rico() -> RunningSystem {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/rico.meros");
    let model = parse_model(&fs::read_to_string(path).unwrap()).unwrap();
    model.running_system("Rico").unwrap().clone()
}

#[test]
fn rico_medium_expands_to_fifteen_topics() {
    let rs = rico();
    let medium = rs.mediums.iter().find(|m| m.name == "Move To to Robot Core").unwrap();
    let actions: Vec<_> = medium
        .members
        .iter()
        .filter(|m| m.kind == ChannelKind::Action)
        .collect();
    assert_eq!(actions.len(), 3);

    let connections = resolve_connections(&rs).unwrap();
    let mut topics = Vec::new();
    for conn in &connections {
        if let Connection::Action(a) = conn {
            if medium.members.contains(&conn.reference()) {
                topics.extend(expand_action(&a.action, a.server.as_deref(), &a.clients));
            }
        }
    }

    // counting oracle: one topic per (action, suffix), split at the last slash
    let mut suffixes: BTreeMap<&str, usize> = BTreeMap::new();
    for t in &topics {
        let (prefix, suffix) = t.topic.name.rsplit_once('/').unwrap();
        assert!(actions.iter().any(|a| a.name == prefix), "{prefix}");
        *suffixes.entry(suffix).or_default() += 1;
        let (requests, responses) = if matches!(suffix, "goal" | "cancel") {
            (&t.publishers, &t.subscribers)
        } else {
            (&t.subscribers, &t.publishers)
        };
        assert_eq!(requests, &vec!["Move To::move_to".to_string()]);
        assert_eq!(responses.len(), 1);
        assert!(responses[0].starts_with("Robot Core::"));
    }
    assert_eq!(topics.len(), 15);
    let expected: BTreeMap<&str, usize> = ["goal", "cancel", "status", "feedback", "result"]
        .into_iter()
        .map(|s| (s, 3))
        .collect();
    assert_eq!(suffixes, expected);
}

#[test]
fn rico_counts() {
    let rs = rico();
    // two intrasystems holding 1 and 7 members, two top-level leaves, master and rosout
    assert_eq!(rs.component_count(), 14);
    assert_eq!(rs.flatten().len(), 12);
}

#[test]
fn add_then_remove_is_identity() {
    let rs = rico();
    let added = rs.add_component(Component::node("extra").publishes("/x", "T")).unwrap();
    assert_eq!(added.component_count(), rs.component_count() + 1);
    assert!(added.add_component(Component::node("extra")).is_err());
    assert_eq!(added.remove_component("extra").unwrap(), rs);
    assert!(rs.remove_component("extra").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resolution_ignores_component_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rs = models::valid_system(&mut r);
        let mut shuffled = rs.clone();
        shuffled.components.shuffle(&mut r);
        for c in &mut shuffled.components {
            c.ports.shuffle(&mut r);
        }
        prop_assert_eq!(resolve_connections(&rs).unwrap(), resolve_connections(&shuffled).unwrap());
    }

    #[test]
    fn every_port_lands_in_one_connection(seed in any::<u64>()) {
        let rs = models::valid_system(&mut rng(seed));
        let connections = resolve_connections(&rs).unwrap();
        for c in rs.flatten() {
            for p in &c.ports {
                let hits = connections
                    .iter()
                    .filter(|conn| {
                        let r = conn.reference();
                        r.kind == p.direction.channel_kind() && r.name == p.channel && conn.endpoints().contains(&c.name.as_str())
                    })
                    .count();
                prop_assert_eq!(hits, 1, "{} {:?}", c.name, p);
            }
        }
    }
}
