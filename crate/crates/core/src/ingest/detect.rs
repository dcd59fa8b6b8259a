use std::collections::BTreeSet;

use super::snapshot::{GraphSnapshot, SnapshotDiagnostic, TopicRecord};
use crate::connection::{action_topic_name, ACTION_SUFFIXES};

/// Five topics that together carry one action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionCandidate {
    pub prefix: String,
    pub server: Option<String>,
    pub clients: Vec<String>,
    /// The matched topics in `goal, cancel, status, feedback, result` order.
    pub evidence: Vec<TopicRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Detection {
    /// Sorted by prefix.
    pub candidates: Vec<ActionCandidate>,
    /// Prefixes whose quintuple had more than one server pattern match.
    pub demoted: Vec<String>,
    pub warnings: Vec<SnapshotDiagnostic>,
}

/// Finds action quintuples by name and direction. A prefix `P` qualifies when
/// all of `P/goal`, `P/cancel`, `P/status`, `P/feedback` and `P/result` exist
/// and exactly one node subscribes to the first two and publishes the other
/// three. Clients are the publishers of `P/goal`.
pub fn detect_actions(snapshot: &GraphSnapshot) -> Detection {
    let mut out = Detection::default();
    let prefixes: BTreeSet<&str> = snapshot
        .topics
        .iter()
        .filter_map(|t| t.name.strip_suffix("/goal"))
        .filter(|p| !p.is_empty())
        .collect();
    for prefix in prefixes {
        let Some(evidence) = ACTION_SUFFIXES
            .iter()
            .map(|s| snapshot.topic(&action_topic_name(prefix, s)).cloned())
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let [goal, cancel, status, feedback, result] = &evidence[..] else {
            unreachable!("five suffixes")
        };
        let servers: BTreeSet<&String> = goal
            .subscribers
            .iter()
            .filter(|n| {
                cancel.subscribers.contains(n)
                    && status.publishers.contains(n)
                    && feedback.publishers.contains(n)
                    && result.publishers.contains(n)
            })
            .collect();
        match servers.len() {
            0 => {}
            1 => {
                let mut clients = goal.publishers.clone();
                clients.sort();
                out.candidates.push(ActionCandidate {
                    prefix: prefix.to_string(),
                    server: servers.first().map(|s| s.to_string()),
                    clients,
                    evidence,
                });
            }
            _ => {
                let names: Vec<&str> = servers.iter().map(|s| s.as_str()).collect();
                out.warnings.push(SnapshotDiagnostic::warning(format!(
                    "action `{prefix}` has {} candidate servers ({}); kept as plain topics",
                    names.len(),
                    names.join(", ")
                )));
                out.demoted.push(prefix.to_string());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topic(name: &str, pubs: &[&str], subs: &[&str]) -> TopicRecord {
        TopicRecord {
            name: name.into(),
            payload_type: "T".into(),
            publishers: pubs.iter().map(|s| s.to_string()).collect(),
            subscribers: subs.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn quintuple(prefix: &str, server: &str, client: &str) -> Vec<TopicRecord> {
        ACTION_SUFFIXES
            .iter()
            .map(|s| {
                let name = action_topic_name(prefix, s);
                if matches!(*s, "goal" | "cancel") {
                    topic(&name, &[client], &[server])
                } else {
                    topic(&name, &[server], &[client])
                }
            })
            .collect()
    }

    #[test]
    fn move_base_quintuple() {
        let s = GraphSnapshot {
            nodes: vec!["/nav".into(), "/task".into()],
            topics: quintuple("/move_base", "/nav", "/task"),
            services: vec![],
        };
        let d = detect_actions(&s);
        assert_eq!(d.candidates.len(), 1);
        assert_eq!(d.candidates[0].prefix, "/move_base");
        assert_eq!(d.candidates[0].server.as_deref(), Some("/nav"));
        assert_eq!(d.candidates[0].clients, vec!["/task"]);
    }

    #[test]
    fn four_of_five() {
        let mut topics = quintuple("/a", "/s", "/c");
        topics.remove(3);
        let s = GraphSnapshot {
            nodes: vec!["/s".into(), "/c".into()],
            topics,
            services: vec![],
        };
        assert!(detect_actions(&s).candidates.is_empty());
    }

    #[test]
    fn ambiguous_server_demotes() {
        let mut topics = quintuple("/a", "/s", "/c");
        for t in &mut topics {
            if t.name.ends_with("goal") || t.name.ends_with("cancel") {
                t.subscribers.push("/s2".into());
            } else {
                t.publishers.push("/s2".into());
            }
        }
        let s = GraphSnapshot {
            nodes: vec!["/s".into(), "/s2".into(), "/c".into()],
            topics,
            services: vec![],
        };
        let d = detect_actions(&s);
        assert!(d.candidates.is_empty());
        assert_eq!(d.demoted, vec!["/a"]);
        assert_eq!(d.warnings.len(), 1);
    }

    #[test]
    fn wrong_direction_is_not_an_action() {
        let mut topics = quintuple("/a", "/s", "/c");
        let status = &mut topics[2];
        std::mem::swap(&mut status.publishers, &mut status.subscribers);
        let s = GraphSnapshot {
            nodes: vec!["/s".into(), "/c".into()],
            topics,
            services: vec![],
        };
        let d = detect_actions(&s);
        assert!(d.candidates.is_empty() && d.warnings.is_empty());
    }
}
