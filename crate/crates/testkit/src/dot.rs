//! A standalone reader for the Graphviz DOT language.
//!
//! Accepts the full statement grammar (graphs, subgraphs, node, edge and
//! attribute statements, ports, quoted, numeric and HTML identifiers) and
//! rejects anything else, so a successful parse certifies syntactic validity.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotNode {
    pub id: String,
    pub attrs: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotEdge {
    pub tail: String,
    pub head: String,
    pub attrs: Vec<(String, String)>,
}

impl DotEdge {
    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DotGraph {
    pub directed: bool,
    pub name: Option<String>,
    /// Node statements in source order, including those inside subgraphs.
    pub nodes: Vec<DotNode>,
    pub edges: Vec<DotEdge>,
    /// Subgraph names in source order.
    pub subgraphs: Vec<String>,
}

impl DotGraph {
    pub fn node(&self, id: &str) -> Option<&DotNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn node_attr(&self, id: &str, key: &str) -> Option<&str> {
        self.node(id)?
            .attrs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Edge multiset keyed by (tail, head, label).
    pub fn edge_multiset(&self) -> BTreeMap<(String, String, String), usize> {
        let mut out = BTreeMap::new();
        for e in &self.edges {
            let key = (
                e.tail.clone(),
                e.head.clone(),
                e.attr("label").unwrap_or("").to_string(),
            );
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }
}

/// Rewrites a blocks-mode drawing into the edge multiset edges mode must
/// produce: every topic box `t:` with label L becomes one edge per
/// (publisher, subscriber) pair labeled L, other edges are kept.
pub fn expand_blocks(g: &DotGraph) -> BTreeMap<(String, String, String), usize> {
    let is_topic = |id: &str| id.starts_with("t:");
    let mut out = BTreeMap::new();
    for e in g.edges.iter().filter(|e| !is_topic(&e.tail) && !is_topic(&e.head)) {
        let key = (
            e.tail.clone(),
            e.head.clone(),
            e.attr("label").unwrap_or("").to_string(),
        );
        *out.entry(key).or_insert(0) += 1;
    }
    for box_node in g.nodes.iter().filter(|n| is_topic(&n.id)) {
        let label = g.node_attr(&box_node.id, "label").unwrap_or("").to_string();
        let pubs: Vec<&str> = g
            .edges
            .iter()
            .filter(|e| e.head == box_node.id)
            .map(|e| e.tail.as_str())
            .collect();
        let subs: Vec<&str> = g
            .edges
            .iter()
            .filter(|e| e.tail == box_node.id)
            .map(|e| e.head.as_str())
            .collect();
        for p in &pubs {
            for s in &subs {
                *out.entry((p.to_string(), s.to_string(), label.clone())).or_insert(0) += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id { text: String, quoted: bool },
    Punct(&'static str),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let mut line_start = true;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line_start = true;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if line_start && c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        line_start = false;
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            while i + 1 < chars.len() && !(chars[i] == '*' && chars[i + 1] == '/') {
                i += 1;
            }
            if i + 1 >= chars.len() {
                return Err("unterminated comment".into());
            }
            i += 2;
            continue;
        }
        match c {
            '{' | '}' | '[' | ']' | ';' | ',' | '=' | ':' => {
                out.push(Tok::Punct(match c {
                    '{' => "{",
                    '}' => "}",
                    '[' => "[",
                    ']' => "]",
                    ';' => ";",
                    ',' => ",",
                    '=' => "=",
                    _ => ":",
                }));
                i += 1;
            }
            '-' if matches!(chars.get(i + 1), Some('>') | Some('-')) => {
                out.push(Tok::Punct(if chars[i + 1] == '>' { "->" } else { "--" }));
                i += 2;
            }
            '"' => {
                let mut text = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => break,
                        Some('\\') if chars.get(i + 1) == Some(&'"') => {
                            text.push('"');
                            i += 2;
                        }
                        Some('\\') if chars.get(i + 1) == Some(&'\\') => {
                            text.push('\\');
                            i += 2;
                        }
                        Some('\\') if chars.get(i + 1) == Some(&'\n') => i += 2,
                        Some(&ch) => {
                            text.push(ch);
                            i += 1;
                        }
                    }
                }
                i += 1;
                out.push(Tok::Id { text, quoted: true });
            }
            '<' => {
                let mut depth = 0;
                let start = i;
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated HTML string".into()),
                        Some('<') => depth += 1,
                        Some('>') => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    i += 1;
                }
                i += 1;
                out.push(Tok::Id {
                    text: chars[start..i].iter().collect(),
                    quoted: true,
                });
            }
            c if c.is_ascii_digit() || c == '.' || c == '-' => {
                let start = i;
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let body = text.trim_start_matches('-');
                if body.is_empty() || body == "." || body.matches('.').count() > 1 {
                    return Err(format!("malformed numeral `{text}`"));
                }
                out.push(Tok::Id { text, quoted: false });
            }
            c if c.is_alphabetic() || c == '_' || !c.is_ascii() => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || !chars[i].is_ascii()) {
                    i += 1;
                }
                out.push(Tok::Id {
                    text: chars[start..i].iter().collect(),
                    quoted: false,
                });
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    graph: DotGraph,
    anon: usize,
    last_was_node_id: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Id { text, quoted: false }) if text.eq_ignore_ascii_case(kw))
    }

    fn expect(&mut self, p: &str) -> Result<(), String> {
        if self.is_punct(p) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected `{p}`, found {:?}", self.peek()))
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.peek() {
            Some(Tok::Id { text, quoted }) => {
                if !quoted
                    && ["node", "edge", "graph", "digraph", "subgraph", "strict"]
                        .iter()
                        .any(|k| text.eq_ignore_ascii_case(k))
                {
                    return Err(format!("keyword `{text}` used as identifier"));
                }
                let t = text.clone();
                self.pos += 1;
                Ok(t)
            }
            other => Err(format!("expected identifier, found {other:?}")),
        }
    }

    fn graph(&mut self) -> Result<(), String> {
        if self.is_keyword("strict") {
            self.pos += 1;
        }
        if self.is_keyword("digraph") {
            self.graph.directed = true;
        } else if !self.is_keyword("graph") {
            return Err("expected `graph` or `digraph`".into());
        }
        self.pos += 1;
        if !self.is_punct("{") {
            self.graph.name = Some(self.id()?);
        }
        self.expect("{")?;
        self.stmt_list()?;
        self.expect("}")?;
        if self.pos != self.toks.len() {
            return Err("trailing tokens after graph".into());
        }
        Ok(())
    }

    fn stmt_list(&mut self) -> Result<(), String> {
        while !self.is_punct("}") {
            if self.peek().is_none() {
                return Err("unexpected end of input".into());
            }
            self.stmt()?;
            if self.is_punct(";") {
                self.pos += 1;
            }
        }
        Ok(())
    }

    fn stmt(&mut self) -> Result<(), String> {
        if self.is_keyword("graph") || self.is_keyword("node") || self.is_keyword("edge") {
            self.pos += 1;
            self.attr_list(true)?;
            return Ok(());
        }
        let first = self.endpoint()?;
        if self.is_punct("=") {
            if first.len() != 1 {
                return Err("subgraph on the left of `=`".into());
            }
            self.pos += 1;
            self.id()?;
            return Ok(());
        }
        if self.is_punct("->") || self.is_punct("--") {
            let mut chain = vec![first];
            while self.is_punct("->") || self.is_punct("--") {
                let op = if self.is_punct("->") { "->" } else { "--" };
                if (op == "->") != self.graph.directed {
                    return Err(format!("edge operator `{op}` does not match graph kind"));
                }
                self.pos += 1;
                chain.push(self.endpoint()?);
            }
            let attrs = self.attr_list(false)?;
            for pair in chain.windows(2) {
                for t in &pair[0] {
                    for h in &pair[1] {
                        self.graph.edges.push(DotEdge {
                            tail: t.clone(),
                            head: h.clone(),
                            attrs: attrs.clone(),
                        });
                    }
                }
            }
            return Ok(());
        }
        if first.len() == 1 && self.last_was_node_id {
            let attrs = self.attr_list(false)?;
            self.graph.nodes.push(DotNode {
                id: first[0].clone(),
                attrs,
            });
        }
        Ok(())
    }

    fn endpoint(&mut self) -> Result<Vec<String>, String> {
        if self.is_keyword("subgraph") || self.is_punct("{") {
            let members = self.subgraph()?;
            self.last_was_node_id = false;
            return Ok(members);
        }
        let id = self.id()?;
        if self.is_punct(":") {
            self.pos += 1;
            self.id()?;
            if self.is_punct(":") {
                self.pos += 1;
                self.id()?;
            }
        }
        self.last_was_node_id = true;
        Ok(vec![id])
    }

    fn subgraph(&mut self) -> Result<Vec<String>, String> {
        let name = if self.is_keyword("subgraph") {
            self.pos += 1;
            if self.is_punct("{") {
                None
            } else {
                Some(self.id()?)
            }
        } else {
            None
        };
        let name = name.unwrap_or_else(|| {
            self.anon += 1;
            format!("_anonymous_{}", self.anon)
        });
        self.graph.subgraphs.push(name);
        let before_nodes = self.graph.nodes.len();
        let before_edges = self.graph.edges.len();
        self.expect("{")?;
        self.stmt_list()?;
        self.expect("}")?;
        let mut members: Vec<String> = self.graph.nodes[before_nodes..].iter().map(|n| n.id.clone()).collect();
        for e in &self.graph.edges[before_edges..] {
            members.push(e.tail.clone());
            members.push(e.head.clone());
        }
        members.dedup();
        Ok(members)
    }

    fn attr_list(&mut self, required: bool) -> Result<Vec<(String, String)>, String> {
        let mut out = Vec::new();
        if required && !self.is_punct("[") {
            return Err("expected attribute list".into());
        }
        while self.is_punct("[") {
            self.pos += 1;
            while !self.is_punct("]") {
                let k = self.id()?;
                self.expect("=")?;
                let v = self.id()?;
                out.push((k, v));
                if self.is_punct(",") || self.is_punct(";") {
                    self.pos += 1;
                }
            }
            self.pos += 1;
        }
        Ok(out)
    }
}

/// Parses a complete DOT document.
pub fn parse_dot(src: &str) -> Result<DotGraph, String> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        graph: DotGraph::default(),
        anon: 0,
        last_was_node_id: false,
    };
    p.graph()?;
    Ok(p.graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_common_forms() {
        let g = parse_dot(
            "strict digraph \"G\" {\n  compound=true; node [shape=box]\n  a -> b -> c [label=\"x \\\"y\\\"\"];\n  \
             subgraph cluster_1 { label=\"C\"; d:port:n }\n  e [width=1.5, height=-.5]\n  // comment\n}\n",
        )
        .unwrap();
        assert!(g.directed);
        assert_eq!(g.edges.len(), 2);
        assert_eq!(g.edges[0].attr("label"), Some("x \"y\""));
        assert_eq!(g.subgraphs, vec!["cluster_1"]);
        assert!(g.node("d").is_some() && g.node("e").is_some());
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "digraph { a -- b }",
            "graph { a -> b }",
            "digraph { a -> }",
            "digraph { \"a }",
            "digraph { a [label=] }",
            "digraph { a } b",
            "digraph { node -> b }",
            "digraph a b { }",
        ] {
            assert!(parse_dot(bad).is_err(), "{bad}");
        }
    }
}
