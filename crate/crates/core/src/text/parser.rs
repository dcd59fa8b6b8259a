use std::collections::BTreeSet;

use super::lexer::{tokenize, Tok, Token};
use super::{ParseDiagnostic, SourceSpan};
use crate::model::{
    Action, ActionData, ArtifactKind, ChannelKind, ChannelRef, CommMedium, Component, ComponentKind, Direction,
    Intrasystem, Metapackage, Package, Port, RosSystem, RunningSystem, Service, Topic, Workspace, MASTER_NODE,
    ROSOUT_NODE,
};

const MAX_NESTING: usize = 64;

type PResult<T> = Result<T, ParseDiagnostic>;

/// Parses model text. On failure at least one diagnostic is returned and no model.
pub fn parse_model(text: &str) -> Result<RosSystem, Vec<ParseDiagnostic>> {
    let tokens = tokenize(text).map_err(|d| vec![d])?;
    let mut p = Parser {
        tokens,
        pos: 0,
        depth: 0,
        diags: Vec::new(),
    };
    match p.model() {
        Ok(model) if p.diags.is_empty() => Ok(model),
        Ok(_) => Err(p.diags),
        Err(d) => {
            p.diags.push(d);
            Err(p.diags)
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    /// Non-fatal diagnostics (duplicates, misplaced attributes).
    diags: Vec<ParseDiagnostic>,
}

fn component_kind(word: &str) -> Option<ComponentKind> {
    match word {
        "node" => Some(ComponentKind::Node),
        "nodelet" => Some(ComponentKind::Nodelet),
        "plugin" => Some(ComponentKind::Plugin),
        "library" => Some(ComponentKind::Library),
        "nonros" => Some(ComponentKind::NonRos),
        _ => None,
    }
}

fn direction(word: &str) -> Option<Direction> {
    Direction::ALL.into_iter().find(|d| d.keyword() == word)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> ParseDiagnostic {
        let t = self.peek();
        ParseDiagnostic::error(t.span, format!("expected {expected}, found {}", t.tok.describe()))
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<SourceSpan> {
        if self.peek().tok == tok {
            Ok(self.next().span)
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn string(&mut self, expected: &str) -> PResult<(String, SourceSpan)> {
        match &self.peek().tok {
            Tok::Str(_) => {
                let t = self.next();
                let Tok::Str(s) = t.tok else { unreachable!() };
                Ok((s, t.span))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn name(&mut self, expected: &str) -> PResult<(String, SourceSpan)> {
        let (s, span) = self.string(expected)?;
        if s.is_empty() {
            self.diags
                .push(ParseDiagnostic::error(span, format!("{expected} must not be empty")));
        }
        Ok((s, span))
    }

    fn keyword_is(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(w) if w == word)
    }

    fn duplicate(&mut self, span: SourceSpan, what: &str, name: &str) {
        self.diags.push(ParseDiagnostic::error(
            span,
            format!("duplicate declaration of {what} {}", super::quote(name)),
        ));
    }

    fn model(&mut self) -> PResult<RosSystem> {
        let mut model = RosSystem::new();
        let mut systems = BTreeSet::new();
        let mut workspaces = BTreeSet::new();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(model),
                Tok::Ident(w) if w == "system" => {
                    self.next();
                    let (rs, span) = self.system()?;
                    if !systems.insert(rs.name.clone()) {
                        self.duplicate(span, "system", &rs.name);
                    }
                    model.running_systems.push(rs);
                }
                Tok::Ident(w) if w == "workspace" => {
                    self.next();
                    let (ws, span) = self.workspace()?;
                    if !workspaces.insert(ws.name.clone()) {
                        self.duplicate(span, "workspace", &ws.name);
                    }
                    model.workspaces.push(ws);
                }
                Tok::Ident(w) => return Err(ParseDiagnostic::error(t.span, format!("unknown keyword `{w}`"))),
                _ => return Err(self.unexpected("`system` or `workspace`")),
            }
        }
    }

    fn system(&mut self) -> PResult<(RunningSystem, SourceSpan)> {
        let (name, span) = self.name("system name")?;
        let compact = self.keyword_is("compact");
        if compact {
            self.next();
        }
        self.expect(Tok::LBrace, "`{`")?;
        let mut system = Intrasystem {
            name,
            ..Default::default()
        };
        self.items(&mut system)?;
        if !compact {
            for infra in [MASTER_NODE, ROSOUT_NODE] {
                if system.component(infra).is_none() {
                    system.components.push(Component::node(infra));
                }
            }
        }
        Ok((RunningSystem { system, compact }, span))
    }

    /// Items of a system or intrasystem block, through the closing brace.
    fn items(&mut self, sys: &mut Intrasystem) -> PResult<()> {
        let mut channels: BTreeSet<(ChannelKind, String)> = BTreeSet::new();
        loop {
            let t = self.peek().clone();
            let word = match &t.tok {
                Tok::RBrace => {
                    self.next();
                    return Ok(());
                }
                Tok::Ident(w) => w.clone(),
                _ => return Err(self.unexpected("declaration or `}`")),
            };
            self.next();
            if let Some(kind) = component_kind(&word) {
                let (c, span) = self.component(kind)?;
                self.push_component(sys, c, span);
                continue;
            }
            match word.as_str() {
                "intrasystem" => {
                    let (name, span) = self.name("intrasystem name")?;
                    let brace = self.expect(Tok::LBrace, "`{`")?;
                    if self.depth >= MAX_NESTING {
                        return Err(ParseDiagnostic::error(brace, "intrasystems nested too deeply"));
                    }
                    let mut nested = Intrasystem {
                        name,
                        ..Default::default()
                    };
                    self.depth += 1;
                    self.items(&mut nested)?;
                    self.depth -= 1;
                    self.push_component(sys, Component::group(nested), span);
                }
                "topic" => {
                    let (name, span) = self.string("topic name")?;
                    self.expect(Tok::Colon, "`:`")?;
                    let (message, _) = self.string("message type")?;
                    self.expect(Tok::Semi, "`;`")?;
                    if !channels.insert((ChannelKind::Topic, name.clone())) {
                        self.duplicate(span, "topic", &name);
                    }
                    sys.topics.push(Topic { name, message });
                }
                "service" => {
                    let (name, span) = self.string("service name")?;
                    self.expect(Tok::Colon, "`:`")?;
                    let (request, _) = self.string("request type")?;
                    self.expect(Tok::Arrow, "`->`")?;
                    let (response, _) = self.string("response type")?;
                    self.expect(Tok::Semi, "`;`")?;
                    if !channels.insert((ChannelKind::Service, name.clone())) {
                        self.duplicate(span, "service", &name);
                    }
                    sys.services.push(Service::new(name, request, response));
                }
                "action" => {
                    let (name, span) = self.string("action name")?;
                    self.expect(Tok::Colon, "`:`")?;
                    let (goal, _) = self.string("goal type")?;
                    self.expect(Tok::Slash, "`/`")?;
                    let (feedback, _) = self.string("feedback type")?;
                    self.expect(Tok::Slash, "`/`")?;
                    let (result, _) = self.string("result type")?;
                    self.expect(Tok::Semi, "`;`")?;
                    if !channels.insert((ChannelKind::Action, name.clone())) {
                        self.duplicate(span, "action", &name);
                    }
                    sys.actions
                        .push(Action::new(name, ActionData::new(goal, feedback, result)));
                }
                "medium" => {
                    let (name, span) = self.name("medium name")?;
                    let medium = self.medium(name)?;
                    if sys.mediums.iter().any(|m| m.name == medium.name) {
                        self.duplicate(span, "medium", &medium.name);
                    }
                    sys.mediums.push(medium);
                }
                other => return Err(ParseDiagnostic::error(t.span, format!("unknown keyword `{other}`"))),
            }
        }
    }

    fn push_component(&mut self, sys: &mut Intrasystem, c: Component, span: SourceSpan) {
        if sys.component(&c.name).is_some() {
            self.duplicate(span, "component", &c.name);
        }
        sys.components.push(c);
    }

    fn component(&mut self, kind: ComponentKind) -> PResult<(Component, SourceSpan)> {
        let (name, span) = self.name("component name")?;
        let mut c = match kind {
            ComponentKind::Node => Component::node(name),
            ComponentKind::Nodelet => Component::nodelet(name, None),
            ComponentKind::Plugin => Component::plugin(name, None),
            ComponentKind::Library => Component::library(name),
            _ => Component::non_ros(name),
        };
        if self.keyword_is("manager") {
            let kw = self.next().span;
            let (m, _) = self.string("manager name")?;
            if kind != ComponentKind::Nodelet {
                self.diags
                    .push(ParseDiagnostic::error(kw, "`manager` is only allowed on nodelets"));
            }
            c.manager = Some(m);
        }
        if self.keyword_is("host") {
            let kw = self.next().span;
            let (h, _) = self.string("host name")?;
            if kind != ComponentKind::Plugin {
                self.diags
                    .push(ParseDiagnostic::error(kw, "`host` is only allowed on plugins"));
            }
            c.host = Some(h);
        }
        self.expect(Tok::LBrace, "`{`")?;
        let mut seen: BTreeSet<(Direction, String)> = BTreeSet::new();
        loop {
            let t = self.peek().clone();
            let dir = match &t.tok {
                Tok::RBrace => {
                    self.next();
                    return Ok((c, span));
                }
                Tok::Ident(w) => {
                    direction(w).ok_or_else(|| ParseDiagnostic::error(t.span, format!("unknown keyword `{w}`")))?
                }
                _ => return Err(self.unexpected("port or `}`")),
            };
            self.next();
            let (channel, cspan) = self.string("channel name")?;
            self.expect(Tok::Colon, "`:`")?;
            let (payload, _) = self.string("payload type")?;
            self.expect(Tok::Semi, "`;`")?;
            if !seen.insert((dir, channel.clone())) {
                self.duplicate(cspan, &format!("{} port", dir.keyword()), &channel);
            }
            c.ports.push(Port::new(dir, channel, payload));
        }
    }

    fn medium(&mut self, name: String) -> PResult<CommMedium> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut members = Vec::new();
        loop {
            let t = self.peek().clone();
            let kind = match &t.tok {
                Tok::RBrace => {
                    self.next();
                    return Ok(CommMedium { name, members });
                }
                Tok::Ident(w) => w
                    .parse::<ChannelKind>()
                    .map_err(|_| ParseDiagnostic::error(t.span, format!("unknown keyword `{w}`")))?,
                _ => return Err(self.unexpected("medium member or `}`")),
            };
            self.next();
            let (channel, cspan) = self.string("channel name")?;
            self.expect(Tok::Semi, "`;`")?;
            let r = ChannelRef::new(kind, channel);
            if members.contains(&r) {
                self.duplicate(cspan, "medium member", &r.name);
            }
            members.push(r);
        }
    }

    fn workspace(&mut self) -> PResult<(Workspace, SourceSpan)> {
        let (name, span) = self.name("workspace name")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut ws = Workspace {
            name,
            ..Default::default()
        };
        let mut names = BTreeSet::new();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::RBrace => {
                    self.next();
                    return Ok((ws, span));
                }
                Tok::Ident(w) if w == "package" => {
                    self.next();
                    let (pname, pspan) = self.name("package name")?;
                    let mut pkg = Package {
                        name: pname,
                        ..Default::default()
                    };
                    self.expect(Tok::LBrace, "`{`")?;
                    for (kind, art, aspan) in self.artifacts(false)? {
                        if pkg.list(kind).contains(&art) {
                            self.duplicate(aspan, kind.keyword(), &art);
                        }
                        pkg.list_mut(kind).push(art);
                    }
                    if !names.insert(pkg.name.clone()) {
                        self.duplicate(pspan, "package", &pkg.name);
                    }
                    ws.packages.push(pkg);
                }
                Tok::Ident(w) if w == "metapackage" => {
                    self.next();
                    let (mname, mspan) = self.name("metapackage name")?;
                    let mut meta = Metapackage {
                        name: mname,
                        ..Default::default()
                    };
                    self.expect(Tok::LBrace, "`{`")?;
                    for (kind, art, aspan) in self.artifacts(true)? {
                        match kind {
                            None if meta.packages.contains(&art) => self.duplicate(aspan, "package", &art),
                            None => meta.packages.push(art),
                            Some(k) if meta.artifacts.contains(&(k, art.clone())) => {
                                self.duplicate(aspan, k.keyword(), &art)
                            }
                            Some(k) => meta.artifacts.push((k, art)),
                        }
                    }
                    if !names.insert(meta.name.clone()) {
                        self.duplicate(mspan, "metapackage", &meta.name);
                    }
                    ws.metapackages.push(meta);
                }
                Tok::Ident(w) => return Err(ParseDiagnostic::error(t.span, format!("unknown keyword `{w}`"))),
                _ => return Err(self.unexpected("`package`, `metapackage` or `}`")),
            }
        }
    }

    /// Artifact lines through the closing brace. In a metapackage, `package`
    /// lines are returned with no artifact kind.
    fn artifacts<K: ArtifactSlot>(&mut self, in_meta: bool) -> PResult<Vec<(K, String, SourceSpan)>> {
        let mut out = Vec::new();
        loop {
            let t = self.peek().clone();
            let slot = match &t.tok {
                Tok::RBrace => {
                    self.next();
                    return Ok(out);
                }
                Tok::Ident(w) if in_meta && w == "package" => K::package_ref(),
                Tok::Ident(w) => match ArtifactKind::from_keyword(w) {
                    Some(k) => K::artifact(k),
                    None => return Err(ParseDiagnostic::error(t.span, format!("unknown keyword `{w}`"))),
                },
                _ => return Err(self.unexpected("artifact or `}`")),
            };
            self.next();
            let (name, span) = self.string("file name")?;
            self.expect(Tok::Semi, "`;`")?;
            out.push((slot, name, span));
        }
    }
}

/// Lets package and metapackage bodies share one artifact loop.
trait ArtifactSlot: Sized {
    fn artifact(kind: ArtifactKind) -> Self;
    fn package_ref() -> Self;
}

impl ArtifactSlot for ArtifactKind {
    fn artifact(kind: ArtifactKind) -> Self {
        kind
    }

    fn package_ref() -> Self {
        unreachable!("package references only occur in metapackages")
    }
}

impl ArtifactSlot for Option<ArtifactKind> {
    fn artifact(kind: ArtifactKind) -> Self {
        Some(kind)
    }

    fn package_ref() -> Self {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_system_gets_infrastructure() {
        let m = parse_model("system \"S\" {}").unwrap();
        let rs = &m.running_systems[0];
        assert_eq!(rs.name, "S");
        assert!(!rs.compact);
        let names: Vec<_> = rs.components.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec![MASTER_NODE, ROSOUT_NODE]);
    }

    #[test]
    fn compact_system_stays_empty() {
        let m = parse_model("system \"S\" compact {}").unwrap();
        assert!(m.running_systems[0].compact);
        assert!(m.running_systems[0].components.is_empty());
    }

    #[test]
    fn missing_channel_name_points_at_brace() {
        let src = "system \"S\" { node \"A\" { publishes } }";
        let diags = parse_model(src).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert!(
            diags[0].message.starts_with("expected channel name"),
            "{}",
            diags[0].message
        );
        let col = src.find("} }").unwrap() + 1;
        assert_eq!(diags[0].span, SourceSpan::new(1, col, 1));
    }

    #[test]
    fn unknown_keyword() {
        let diags = parse_model("system \"S\" { gizmo \"x\" {} }").unwrap_err();
        assert_eq!(diags[0].message, "unknown keyword `gizmo`");
        assert_eq!(diags[0].span.column, 14);
    }

    #[test]
    fn duplicates_are_all_reported() {
        let src = "system \"S\" compact {\n  node \"A\" {}\n  node \"A\" {}\n  topic \"/t\" : \"M\";\n  topic \"/t\" : \"M\";\n}";
        let diags = parse_model(src).unwrap_err();
        assert_eq!(diags.len(), 2);
        assert_eq!(diags[0].span.line, 3);
        assert_eq!(diags[1].span.line, 5);
    }

    #[test]
    fn manager_on_node_rejected() {
        let diags = parse_model("system \"S\" { node \"A\" manager \"m\" {} }").unwrap_err();
        assert!(diags[0].message.contains("only allowed on nodelets"));
    }

    #[test]
    fn full_grammar() {
        let src = r#"
            # comment
            system "S" compact {
              nodelet "cam" manager "mgr" { publishes "/img" : "sensor_msgs/Image"; }
              plugin "p" host "cam" {}
              intrasystem "G" {
                node "B" { subscribes "/img" : "sensor_msgs/Image"; }
                topic "/img" : "sensor_msgs/Image";
              }
              service "/s" : "Req" -> "Resp";
              action "/a" : "G"/"F"/"R";
              medium "M" { topic "/img"; action "/a"; }
            }
            workspace "W" {
              package "p" { node "n"; actiondef "MoveTo"; misc "CMakeLists.txt"; }
              metapackage "m" { package "p"; }
            }
        "#;
        let m = parse_model(src).unwrap();
        let rs = &m.running_systems[0];
        assert_eq!(rs.components.len(), 3);
        assert_eq!(rs.components[0].manager.as_deref(), Some("mgr"));
        assert_eq!(rs.flatten().len(), 3);
        assert_eq!(rs.mediums[0].members.len(), 2);
        assert_eq!(rs.actions[0].data, ActionData::new("G", "F", "R"));
        let ws = &m.workspaces[0];
        assert_eq!(ws.packages[0].action_data, vec!["MoveTo"]);
        assert_eq!(ws.metapackages[0].packages, vec!["p"]);
    }
}
