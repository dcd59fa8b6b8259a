use super::quote;
use crate::model::{ComponentKind, Intrasystem, Metapackage, Package, RosSystem, RunningSystem, Workspace};

const INDENT: &str = "  ";

/// Writes the canonical text of a model. Top-level blocks are separated by
/// one blank line; an empty model yields an empty string.
pub fn serialize_model(model: &RosSystem) -> String {
    let mut blocks: Vec<String> = model
        .running_systems
        .iter()
        .map(system_block)
        .chain(model.workspaces.iter().map(workspace_block))
        .collect();
    blocks.sort();
    blocks.join("\n")
}

/// Renders `header {` + sorted items + `}`, or `header {}` when empty.
fn block(depth: usize, header: &str, mut items: Vec<String>) -> String {
    let pad = INDENT.repeat(depth);
    if items.is_empty() {
        return format!("{pad}{header} {{}}\n");
    }
    items.sort();
    let mut out = format!("{pad}{header} {{\n");
    for item in items {
        out.push_str(&item);
    }
    out.push_str(&format!("{pad}}}\n"));
    out
}

fn line(depth: usize, text: String) -> String {
    format!("{}{text};\n", INDENT.repeat(depth))
}

fn system_block(rs: &RunningSystem) -> String {
    let header = if rs.compact {
        format!("system {} compact", quote(&rs.name))
    } else {
        format!("system {}", quote(&rs.name))
    };
    block(0, &header, items(&rs.system, 1))
}

fn items(sys: &Intrasystem, depth: usize) -> Vec<String> {
    let mut out = Vec::new();
    for c in &sys.components {
        if c.kind == ComponentKind::Intrasystem {
            let nested = c.nested.as_ref().map(|n| items(n, depth + 1)).unwrap_or_default();
            out.push(block(depth, &format!("intrasystem {}", quote(&c.name)), nested));
            continue;
        }
        let mut header = format!("{} {}", c.kind.keyword(), quote(&c.name));
        if let Some(m) = &c.manager {
            header.push_str(&format!(" manager {}", quote(m)));
        }
        if let Some(h) = &c.host {
            header.push_str(&format!(" host {}", quote(h)));
        }
        let ports = c
            .ports
            .iter()
            .map(|p| {
                line(
                    depth + 1,
                    format!(
                        "{} {} : {}",
                        p.direction.keyword(),
                        quote(&p.channel),
                        quote(&p.payload_type)
                    ),
                )
            })
            .collect();
        out.push(block(depth, &header, ports));
    }
    for t in &sys.topics {
        out.push(line(depth, format!("topic {} : {}", quote(&t.name), quote(&t.message))));
    }
    for s in &sys.services {
        out.push(line(
            depth,
            format!(
                "service {} : {} -> {}",
                quote(&s.name),
                quote(&s.data.request),
                quote(&s.data.response)
            ),
        ));
    }
    for a in &sys.actions {
        out.push(line(
            depth,
            format!(
                "action {} : {}/{}/{}",
                quote(&a.name),
                quote(&a.data.goal),
                quote(&a.data.feedback),
                quote(&a.data.result)
            ),
        ));
    }
    for m in &sys.mediums {
        let members = m
            .members
            .iter()
            .map(|r| line(depth + 1, format!("{} {}", r.kind.keyword(), quote(&r.name))))
            .collect();
        out.push(block(depth, &format!("medium {}", quote(&m.name)), members));
    }
    out
}

fn workspace_block(ws: &Workspace) -> String {
    let mut items: Vec<String> = ws.packages.iter().map(package_block).collect();
    items.extend(ws.metapackages.iter().map(metapackage_block));
    block(0, &format!("workspace {}", quote(&ws.name)), items)
}

fn package_block(p: &Package) -> String {
    let arts = p
        .artifacts()
        .map(|(k, n)| line(2, format!("{} {}", k.keyword(), quote(n))))
        .collect();
    block(1, &format!("package {}", quote(&p.name)), arts)
}

fn metapackage_block(m: &Metapackage) -> String {
    let mut lines: Vec<String> = m
        .packages
        .iter()
        .map(|p| line(2, format!("package {}", quote(p))))
        .collect();
    lines.extend(
        m.artifacts
            .iter()
            .map(|(k, n)| line(2, format!("{} {}", k.keyword(), quote(n)))),
    );
    block(1, &format!("metapackage {}", quote(&m.name)), lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{new_running_system, Component};
    use crate::text::parse_model;

    #[test]
    fn empty_model_serializes_to_nothing() {
        assert_eq!(serialize_model(&RosSystem::new()), "");
    }

    #[test]
    fn canonical_layout() {
        let rs = new_running_system("S", true)
            .unwrap()
            .add_component(Component::node("B").subscribes("/t", "M").publishes("/a", "M"))
            .unwrap()
            .add_component(Component::node("A"))
            .unwrap();
        let model = RosSystem {
            workspaces: vec![],
            running_systems: vec![rs],
        };
        let text = serialize_model(&model);
        assert_eq!(
            text,
            "system \"S\" compact {\n  node \"A\" {}\n  node \"B\" {\n    publishes \"/a\" : \"M\";\n    subscribes \"/t\" : \"M\";\n  }\n}\n"
        );
        let back = parse_model(&text).unwrap();
        assert!(back.structurally_eq(&model));
        assert_eq!(serialize_model(&back), text);
    }
}
