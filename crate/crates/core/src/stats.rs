use std::collections::BTreeMap;

use crate::connection::join_ports;
use crate::model::{ChannelKind, ComponentKind, Intrasystem, RosSystem};

/// Element counts of a model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SystemStats {
    pub components_by_kind: BTreeMap<ComponentKind, usize>,
    pub topics: usize,
    pub services: usize,
    pub actions: usize,
    pub nonros_links: usize,
    pub mediums: usize,
    pub running_systems: usize,
    pub workspaces: usize,
    pub packages: usize,
    pub metapackages: usize,
}

impl SystemStats {
    pub fn components(&self) -> usize {
        self.components_by_kind.values().sum()
    }

    /// `(key, count)` pairs sorted by key; every key is present even when zero.
    pub fn entries(&self) -> Vec<(String, usize)> {
        let mut out = vec![
            ("actions".to_string(), self.actions),
            ("components".to_string(), self.components()),
            ("mediums".to_string(), self.mediums),
            ("metapackages".to_string(), self.metapackages),
            ("nonros_links".to_string(), self.nonros_links),
            ("packages".to_string(), self.packages),
            ("running_systems".to_string(), self.running_systems),
            ("services".to_string(), self.services),
            ("topics".to_string(), self.topics),
            ("workspaces".to_string(), self.workspaces),
        ];
        for kind in ComponentKind::ALL {
            let n = self.components_by_kind.get(&kind).copied().unwrap_or(0);
            out.push((format!("components.{}", kind.keyword()), n));
        }
        out.sort();
        out
    }

    /// One `key: count` line per entry.
    pub fn to_text(&self) -> String {
        self.entries().into_iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
    }
}

pub fn compute_stats(model: &RosSystem) -> SystemStats {
    let mut stats = SystemStats {
        running_systems: model.running_systems.len(),
        workspaces: model.workspaces.len(),
        ..Default::default()
    };
    for ws in &model.workspaces {
        stats.packages += ws.packages.len();
        stats.metapackages += ws.metapackages.len();
    }
    for rs in &model.running_systems {
        count_components(&rs.system, &mut stats.components_by_kind);
        for (_, scope) in rs.scopes() {
            stats.mediums += scope.mediums.len();
        }
        for join in join_ports(rs) {
            match join.kind {
                ChannelKind::Topic => stats.topics += 1,
                ChannelKind::Service => stats.services += 1,
                ChannelKind::Action => stats.actions += 1,
                ChannelKind::NonRos => stats.nonros_links += 1,
            }
        }
    }
    stats
}

fn count_components(sys: &Intrasystem, by_kind: &mut BTreeMap<ComponentKind, usize>) {
    for c in &sys.components {
        *by_kind.entry(c.kind).or_default() += 1;
        if let Some(n) = &c.nested {
            count_components(n, by_kind);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{new_running_system, Component};

    #[test]
    fn empty_model_is_all_zero() {
        let stats = compute_stats(&RosSystem::new());
        assert!(stats.entries().iter().all(|(_, v)| *v == 0));
        assert_eq!(stats.entries().len(), 16);
    }

    #[test]
    fn two_nodes_one_topic() {
        let rs = new_running_system("S", true)
            .unwrap()
            .add_component(Component::node("A").publishes("/t", "M"))
            .unwrap()
            .add_component(Component::node("B").subscribes("/t", "M"))
            .unwrap();
        let model = RosSystem {
            workspaces: vec![],
            running_systems: vec![rs],
        };
        let stats = compute_stats(&model);
        assert_eq!(stats.components(), 2);
        assert_eq!(stats.topics, 1);
        assert!(stats.to_text().contains("components.node: 2\n"));
    }
}
