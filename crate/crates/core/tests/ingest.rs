use std::fs;
use std::path::PathBuf;

use meros::ingest::{detect_actions, lift, parse_snapshot, GraphSnapshot, LiftOptions};
use meros::validate::has_errors;
use meros::{validate, RosSystem, ValidateOptions};
use meros_testkit::rng;
use meros_testkit::snapshots::{oracle_detect, random_snapshot, OracleResult};
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/snapshots")
        .join(name);
    fs::read_to_string(path).unwrap()
}

fn detected(s: &GraphSnapshot) -> OracleResult {
    let d = detect_actions(s);
    OracleResult {
        actions: d
            .candidates
            .into_iter()
            .map(|c| (c.prefix, (c.server.unwrap(), c.clients)))
            .collect(),
        ambiguous: d.demoted.into_iter().collect(),
    }
}

#[test]
fn move_base_fixture() {
    let parsed = parse_snapshot(&fixture("move_base.json")).unwrap();
    assert!(parsed.warnings.is_empty());
    let lifted = lift(&parsed.snapshot, &LiftOptions::default()).unwrap();
    assert_eq!(lifted.system.actions.len(), 1);
    assert_eq!(lifted.system.actions[0].name, "/move_base");
    assert_eq!(detected(&parsed.snapshot), oracle_detect(&parsed.snapshot));
}

#[test]
fn ambiguous_fixture_is_demoted_with_warnings() {
    let parsed = parse_snapshot(&fixture("ambiguous.json")).unwrap();
    assert!(!parsed.warnings.is_empty(), "unknown field should warn");
    let lifted = lift(&parsed.snapshot, &LiftOptions::default()).unwrap();
    assert!(lifted.system.actions.is_empty());
    assert_eq!(lifted.detection.demoted.len(), 1);
    assert!(lifted.warnings()[0].message.contains("candidate servers"));
}

#[test]
fn empty_fixture() {
    let parsed = parse_snapshot(&fixture("empty.json")).unwrap();
    let lifted = lift(&parsed.snapshot, &LiftOptions::default()).unwrap();
    assert_eq!(lifted.system.flatten().len(), 2);
}

#[test]
fn malformed_snapshots_are_rejected() {
    for bad in [
        "{",
        r#"{"nodes": ["/a", "/a"], "topics": []}"#,
        r#"{"nodes": ["/a"], "topics": [{"name": "/t", "type": "T", "publishers": ["/ghost"], "subscribers": []}]}"#,
        r#"{"nodes": ["a"], "topics": []}"#,
    ] {
        assert!(parse_snapshot(bad).is_err(), "{bad}");
    }
}

#[test]
fn detection_can_be_disabled() {
    let parsed = parse_snapshot(&fixture("move_base.json")).unwrap();
    let options = LiftOptions {
        detect_actions: false,
        ..Default::default()
    };
    let lifted = lift(&parsed.snapshot, &options).unwrap();
    assert!(lifted.system.actions.is_empty());
    assert_eq!(lifted.system.topics.len(), parsed.snapshot.topics.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn detection_matches_brute_force(seed in any::<u64>()) {
        let s = random_snapshot(&mut rng(seed), 8, 12);
        prop_assert_eq!(detected(&s), oracle_detect(&s));
    }

    #[test]
    fn lift_conserves_topics(seed in any::<u64>()) {
        let s = random_snapshot(&mut rng(seed), 8, 12);
        let lifted = lift(&s, &LiftOptions::default()).unwrap();
        if lifted.detection.demoted.is_empty() {
            prop_assert_eq!(lifted.system.topics.len() + 5 * lifted.system.actions.len(), s.topics.len());
        }
        prop_assert_eq!(lifted.system.services.len(), s.services.len());
        let model = RosSystem { workspaces: vec![], running_systems: vec![lifted.system] };
        let diags = validate(&model, ValidateOptions::default());
        prop_assert!(!has_errors(&diags), "{:?}", diags);
    }

    #[test]
    fn snapshot_json_round_trips(seed in any::<u64>()) {
        let s = random_snapshot(&mut rng(seed), 8, 12);
        let parsed = parse_snapshot(&s.to_json()).unwrap();
        prop_assert!(parsed.warnings.is_empty());
        prop_assert_eq!(parsed.snapshot, s);
    }
}

#[test]
fn generator_reaches_every_outcome() {
    let (mut actions, mut ambiguous, mut nested) = (0, 0, 0);
    for seed in 0..1000 {
        let o = oracle_detect(&random_snapshot(&mut rng(seed), 8, 12));
        actions += o.actions.len();
        ambiguous += o.ambiguous.len();
        nested += o.actions.keys().filter(|p| p.ends_with("/goal")).count();
    }
    assert!(
        actions > 300 && ambiguous > 30 && nested > 5,
        "{actions} {ambiguous} {nested}"
    );
}
