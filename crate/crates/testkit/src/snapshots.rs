//! Random computation-graph snapshots and a brute-force action oracle.

use std::collections::{BTreeMap, BTreeSet};

use meros::ingest::{GraphSnapshot, ServiceRecord, TopicRecord};
use rand::seq::SliceRandom;
use rand::Rng;

const SUFFIXES: [&str; 5] = ["goal", "cancel", "status", "feedback", "result"];

/// Prefix candidates, including ones nested inside each other's topic names.
const PREFIX_POOL: &[&str] = &["/p", "/p/goal", "/move_base", "/arm/ctrl", "/q", "/r/s/t"];

fn subset(rng: &mut impl Rng, nodes: &[String], p: f64) -> Vec<String> {
    nodes.iter().filter(|_| rng.gen_bool(p)).cloned().collect()
}

/// A snapshot with at most `max_nodes` nodes and `max_topics` topics, mixing
/// complete and partial action quintuples, wrong directions, several
/// servers and plain topics.
pub fn random_snapshot(rng: &mut impl Rng, max_nodes: usize, max_topics: usize) -> GraphSnapshot {
    let n_nodes = rng.gen_range(1..=max_nodes);
    let nodes: Vec<String> = (0..n_nodes).map(|i| format!("/n{i}")).collect();
    let mut topics: Vec<TopicRecord> = Vec::new();
    let mut names = BTreeSet::new();

    let mut prefixes: Vec<&str> = PREFIX_POOL.to_vec();
    prefixes.shuffle(rng);
    for prefix in prefixes.into_iter().take(rng.gen_range(0..=3)) {
        let suffixes: Vec<&str> = if rng.gen_bool(0.6) {
            SUFFIXES.to_vec()
        } else {
            SUFFIXES.iter().copied().filter(|_| rng.gen_bool(0.7)).collect()
        };
        if topics.len() + suffixes.len() > max_topics {
            continue;
        }
        let n_servers = *[1, 1, 1, 2, 0].choose(rng).unwrap();
        let servers: Vec<String> = nodes.choose_multiple(rng, n_servers).cloned().collect();
        let clients = subset(rng, &nodes, 0.3);
        let scramble = rng.gen_bool(0.15);
        for s in suffixes {
            let name = format!("{prefix}/{s}");
            if !names.insert(name.clone()) {
                continue;
            }
            let (mut publishers, mut subscribers) = if matches!(s, "goal" | "cancel") {
                (clients.clone(), servers.clone())
            } else {
                (servers.clone(), clients.clone())
            };
            if scramble {
                publishers = subset(rng, &nodes, 0.5);
                subscribers = subset(rng, &nodes, 0.5);
            }
            publishers.sort();
            publishers.dedup();
            subscribers.sort();
            subscribers.dedup();
            topics.push(TopicRecord {
                name,
                payload_type: format!("pkg/Act{s}"),
                publishers,
                subscribers,
            });
        }
    }
    let plain = rng.gen_range(0..=max_topics - topics.len());
    for i in 0..plain {
        let name = match rng.gen_range(0..4) {
            0 => "/goal".to_string(),
            1 => format!("/x{i}/status"),
            _ => format!("/t{i}"),
        };
        if names.insert(name.clone()) {
            topics.push(TopicRecord {
                name,
                payload_type: "std_msgs/String".into(),
                publishers: subset(rng, &nodes, 0.4),
                subscribers: subset(rng, &nodes, 0.4),
            });
        }
    }
    topics.shuffle(rng);
    let services = (0..rng.gen_range(0..3))
        .map(|i| ServiceRecord {
            name: format!("/srv{i}"),
            payload_type: "std_srvs/Trigger".into(),
            server: rng.gen_bool(0.8).then(|| nodes.choose(rng).unwrap().clone()),
            clients: subset(rng, &nodes, 0.3),
        })
        .collect();
    GraphSnapshot {
        nodes,
        topics,
        services,
    }
}

/// Outcome of the brute-force search: accepted actions keyed by prefix with
/// (server, sorted clients), and prefixes rejected for having several servers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OracleResult {
    pub actions: BTreeMap<String, (String, Vec<String>)>,
    pub ambiguous: BTreeSet<String>,
}

/// Tries every non-empty string prefix of every topic name against the full
/// rule: all five `P/<suffix>` topics exist and exactly one node subscribes
/// to goal and cancel while publishing status, feedback and result.
pub fn oracle_detect(s: &GraphSnapshot) -> OracleResult {
    let by_name: BTreeMap<&str, &TopicRecord> = s.topics.iter().map(|t| (t.name.as_str(), t)).collect();
    let mut out = OracleResult::default();
    let mut tried = BTreeSet::new();
    for t in &s.topics {
        for (i, _) in t.name.char_indices().skip(1).chain([(t.name.len(), ' ')]) {
            let p = &t.name[..i];
            if !tried.insert(p.to_string()) {
                continue;
            }
            let five: Option<Vec<&TopicRecord>> = SUFFIXES
                .iter()
                .map(|suf| by_name.get(format!("{p}/{suf}").as_str()).copied())
                .collect();
            let Some(five) = five else { continue };
            let servers: Vec<&String> = s
                .nodes
                .iter()
                .filter(|n| {
                    five[0].subscribers.contains(n)
                        && five[1].subscribers.contains(n)
                        && five[2].publishers.contains(n)
                        && five[3].publishers.contains(n)
                        && five[4].publishers.contains(n)
                })
                .collect();
            match servers.len() {
                0 => {}
                1 => {
                    let mut clients = five[0].publishers.clone();
                    clients.sort();
                    out.actions.insert(p.to_string(), (servers[0].clone(), clients));
                }
                _ => {
                    out.ambiguous.insert(p.to_string());
                }
            }
        }
    }
    out
}
