//! Random models.
//!
//! [`arbitrary_model`] covers the whole language surface (awkward names,
//! nesting, every declaration kind) but need not validate. [`valid_system`]
//! always validates without errors and is meant for rendering.

use std::collections::BTreeSet;

use meros::{
    new_running_system, Action, ActionData, ArtifactKind, ChannelKind, ChannelRef, CommMedium, Component,
    ComponentKind, Direction, Intrasystem, Metapackage, Package, Port, RosSystem, RunningSystem, Service, Topic,
    Workspace,
};
use rand::seq::SliceRandom;
use rand::Rng;

const NAME_POOL: &[&str] = &[
    "planner",
    "Move To",
    "robot core",
    "q\"uote",
    "back\\slash",
    "ünïcødé",
    "tab\there",
    "line\nbreak",
    "x",
    "node",
    "#hash",
    "{brace}",
];

const CHANNEL_POOL: &[&str] = &["/t", "/a/b", "/move_base", "/x y", "/q\"", "rel", "/ü", "/c/d/e"];

const TYPE_POOL: &[&str] = &["std_msgs/String", "geometry_msgs/Twist", "T", "pkg/Ty\"pe", "a/b/c"];

/// Distinct names drawn from the pool, suffixed when the pool runs out.
fn names(rng: &mut impl Rng, n: usize) -> Vec<String> {
    let mut out = BTreeSet::new();
    while out.len() < n {
        let base = NAME_POOL.choose(rng).unwrap();
        let name = if rng.gen_bool(0.5) {
            base.to_string()
        } else {
            format!("{base}{}", rng.gen_range(0..100))
        };
        out.insert(name);
    }
    let mut v: Vec<String> = out.into_iter().collect();
    v.shuffle(rng);
    v
}

fn pick<'a>(rng: &mut impl Rng, pool: &[&'a str]) -> &'a str {
    pool.choose(rng).unwrap()
}

fn channel(rng: &mut impl Rng) -> String {
    let base = pick(rng, CHANNEL_POOL);
    if rng.gen_bool(0.3) {
        format!("{base}{}", rng.gen_range(0..5))
    } else {
        base.to_string()
    }
}

/// Any parseable model. Non-compact systems carry their master and rosout nodes.
pub fn arbitrary_model(rng: &mut impl Rng) -> RosSystem {
    let mut model = RosSystem::new();
    let n_sys = rng.gen_range(0..3);
    for name in names(rng, n_sys) {
        let compact = rng.gen_bool(0.5);
        let mut rs = new_running_system(name, compact).unwrap();
        fill_scope(rng, &mut rs.system, 0);
        model.running_systems.push(rs);
    }
    let n_ws = rng.gen_range(0..2);
    for name in names(rng, n_ws) {
        model.workspaces.push(workspace(rng, name));
    }
    model
}

fn fill_scope(rng: &mut impl Rng, sys: &mut Intrasystem, depth: usize) {
    let taken: BTreeSet<String> = sys.components.iter().map(|c| c.name.clone()).collect();
    let n = rng.gen_range(0..5);
    for name in names(rng, n).into_iter().filter(|n| !taken.contains(n)) {
        let kinds: &[ComponentKind] = if depth < 2 {
            &ComponentKind::ALL
        } else {
            &ComponentKind::ALL[..5]
        };
        let component = match kinds.choose(rng).unwrap() {
            ComponentKind::Intrasystem => {
                let mut nested = Intrasystem::new(name).unwrap();
                fill_scope(rng, &mut nested, depth + 1);
                Component::group(nested)
            }
            kind => {
                let mut c = match kind {
                    ComponentKind::Node => Component::node(name),
                    ComponentKind::Nodelet => {
                        Component::nodelet(name, rng.gen_bool(0.5).then(|| "manager".to_string()))
                    }
                    ComponentKind::Plugin => {
                        Component::plugin(name, rng.gen_bool(0.5).then(|| "host \"h\"".to_string()))
                    }
                    ComponentKind::Library => Component::library(name),
                    _ => Component::non_ros(name),
                };
                let mut seen = BTreeSet::new();
                for _ in 0..rng.gen_range(0..5) {
                    let dir = *[
                        Direction::Publish,
                        Direction::Subscribe,
                        Direction::Serve,
                        Direction::Call,
                        Direction::ActionServe,
                        Direction::ActionCall,
                        Direction::NonRos,
                    ]
                    .choose(rng)
                    .unwrap();
                    let ch = channel(rng);
                    if seen.insert((dir, ch.clone())) {
                        c.ports.push(Port::new(dir, ch, pick(rng, TYPE_POOL)));
                    }
                }
                c
            }
        };
        sys.components.push(component);
    }

    let mut declared = BTreeSet::new();
    for _ in 0..rng.gen_range(0..4) {
        let ch = channel(rng);
        match rng.gen_range(0..3) {
            0 if declared.insert((ChannelKind::Topic, ch.clone())) => {
                sys.topics.push(Topic::new(ch, pick(rng, TYPE_POOL)))
            }
            1 if declared.insert((ChannelKind::Service, ch.clone())) => {
                sys.services
                    .push(Service::new(ch, pick(rng, TYPE_POOL), pick(rng, TYPE_POOL)))
            }
            2 if declared.insert((ChannelKind::Action, ch.clone())) => sys.actions.push(Action::new(
                ch,
                ActionData::new(pick(rng, TYPE_POOL), pick(rng, TYPE_POOL), pick(rng, TYPE_POOL)),
            )),
            _ => {}
        }
    }

    let n = rng.gen_range(0..3);
    for name in names(rng, n) {
        let mut members = BTreeSet::new();
        for _ in 0..rng.gen_range(0..4) {
            let kind = *[
                ChannelKind::Topic,
                ChannelKind::Service,
                ChannelKind::Action,
                ChannelKind::NonRos,
            ]
            .choose(rng)
            .unwrap();
            members.insert(ChannelRef::new(kind, channel(rng)));
        }
        sys.mediums.push(CommMedium {
            name,
            members: members.into_iter().collect(),
        });
    }
}

fn workspace(rng: &mut impl Rng, name: String) -> Workspace {
    let mut ws = Workspace::new(name).unwrap();
    let n = rng.gen_range(0..5);
    let all = names(rng, n);
    let split = rng.gen_range(0..=all.len());
    for pname in &all[..split] {
        let mut p = Package::new(pname.clone()).unwrap();
        for kind in ArtifactKind::ALL {
            let n = rng.gen_range(0..3);
            for art in names(rng, n) {
                p.list_mut(kind).push(art);
            }
        }
        ws.packages.push(p);
    }
    for mname in &all[split..] {
        let n = rng.gen_range(0..4);
        let mut m = Metapackage::new(mname.clone(), names(rng, n)).unwrap();
        if rng.gen_bool(0.3) {
            m.artifacts
                .push((*ArtifactKind::ALL.choose(rng).unwrap(), "stray".to_string()));
        }
        ws.metapackages.push(m);
    }
    ws
}

/// A running system that validates without errors: one payload type per
/// topic, at most one server per service or action, unique names and
/// mediums over existing connections only.
pub fn valid_system(rng: &mut impl Rng) -> RunningSystem {
    let compact = rng.gen_bool(0.3);
    let mut rs = new_running_system("Random", compact).unwrap();
    let n_leaves = rng.gen_range(1..9);
    let leaf_names: Vec<String> = (0..n_leaves)
        .map(|i| {
            if rng.gen_bool(0.2) {
                format!("n \"{i}\"")
            } else {
                format!("n{i}")
            }
        })
        .collect();
    let mut leaves: Vec<Component> = leaf_names
        .iter()
        .map(|n| match rng.gen_range(0..5) {
            0 => Component::nodelet(n.clone(), Some("mgr".into())),
            1 => Component::plugin(n.clone(), None),
            2 => Component::non_ros(n.clone()),
            _ => Component::node(n.clone()),
        })
        .collect();

    let topics = rng.gen_range(0..6);
    for t in 0..topics {
        let name = format!("/t{t}");
        for c in leaves.iter_mut() {
            match rng.gen_range(0..4) {
                0 => c.ports.push(Port::new(Direction::Publish, &name, format!("T{t}"))),
                1 => c.ports.push(Port::new(Direction::Subscribe, &name, format!("T{t}"))),
                _ => {}
            }
        }
    }
    let mut used: Vec<ChannelRef> = (0..topics).map(|t| ChannelRef::topic(format!("/t{t}"))).collect();
    for (prefix, kind, serve, call) in [
        ("/s", ChannelKind::Service, Direction::Serve, Direction::Call),
        ("/a", ChannelKind::Action, Direction::ActionServe, Direction::ActionCall),
    ] {
        for k in 0..rng.gen_range(0..3) {
            let name = format!("{prefix}{k}");
            let server = rng.gen_range(0..=leaves.len());
            for (i, c) in leaves.iter_mut().enumerate() {
                if i == server {
                    c.ports.push(Port::new(serve, &name, format!("pkg/K{k}")));
                } else if rng.gen_bool(0.4) {
                    c.ports.push(Port::new(call, &name, format!("pkg/K{k}")));
                }
            }
            used.push(ChannelRef::new(kind, name));
        }
    }
    if rng.gen_bool(0.3) && leaves.len() >= 2 {
        for c in leaves.iter_mut().take(2) {
            c.ports.push(Port::new(Direction::NonRos, "wire", "bytes"));
        }
        used.push(ChannelRef::new(ChannelKind::NonRos, "wire"));
    }
    if rng.gen_bool(0.5) {
        rs.actions.push(Action::new("/a0", ActionData::for_type("pkg/K0")));
    }
    if rng.gen_bool(0.5) && topics > 0 {
        rs.topics.push(Topic::new("/t0", "T0"));
    }

    // nest a random share of the leaves, sometimes two levels deep
    let mut top = Vec::new();
    let mut group_a = Vec::new();
    let mut group_b = Vec::new();
    for c in leaves {
        match rng.gen_range(0..3) {
            0 => group_a.push(c),
            1 => group_b.push(c),
            _ => top.push(c),
        }
    }
    let mut inner = Intrasystem::new("Inner").unwrap();
    inner.components = group_b;
    let mut outer = Intrasystem::new("Group A").unwrap();
    outer.components = group_a;
    if !inner.components.is_empty() {
        outer.components.push(Component::group(inner));
    }
    if !outer.components.is_empty() {
        top.push(Component::group(outer));
    }
    rs.components.extend(top);

    let live: Vec<ChannelRef> = {
        let joined: BTreeSet<(ChannelKind, String)> = rs
            .flatten()
            .iter()
            .flat_map(|c| c.ports.iter().map(|p| (p.direction.channel_kind(), p.channel.clone())))
            .collect();
        used.into_iter()
            .filter(|r| joined.contains(&(r.kind, r.name.clone())))
            .collect()
    };
    if !live.is_empty() && rng.gen_bool(0.6) {
        let members: BTreeSet<ChannelRef> = (0..rng.gen_range(1..4))
            .map(|_| live.choose(rng).unwrap().clone())
            .collect();
        rs.mediums.push(CommMedium {
            name: "Medium".into(),
            members: members.into_iter().collect(),
        });
    }
    rs
}
