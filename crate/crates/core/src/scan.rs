//! Workspace models from ROS package trees.
//!
//! Every directory holding a `package.xml` is a package. Files belong to the
//! nearest enclosing package and are sorted into msg, srv, action or misc by
//! location and extension. Node, library and plugin names come only from an
//! optional `meros.map` file in the package root.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use walkdir::WalkDir;

use crate::model::{ArtifactKind, Metapackage, Package, Workspace};

pub const MANIFEST: &str = "package.xml";
pub const SIDECAR: &str = "meros.map";

/// Files a metapackage may carry without owning artifacts.
const METAPACKAGE_FILES: &[&str] = &[MANIFEST, "CMakeLists.txt", "CHANGELOG.rst", "README.md", "README.rst"];

const DEPENDENCY_TAGS: &[&str] = &["depend", "build_depend", "run_depend", "exec_depend"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestSummary {
    pub name: String,
    pub is_metapackage: bool,
    /// Build and run dependencies, sorted and deduplicated.
    pub dependencies: Vec<String>,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: malformed manifest: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("{path}: manifest has no <name> element")]
    MissingName { path: PathBuf },
    #[error("package `{name}` is declared in both {first} and {second}")]
    DuplicatePackage {
        name: String,
        first: PathBuf,
        second: PathBuf,
    },
    #[error("{path}: expected 3 sections separated by `---`, found {sections}")]
    ActionFormat { path: PathBuf, sections: usize },
    #[error("{path}:{line}: {message}")]
    Sidecar {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

/// Reads the package name, dependencies and metapackage flag from a
/// `package.xml`. A package is a metapackage iff its `export` block holds an
/// empty `metapackage` element.
pub fn classify_manifest(text: &str) -> Result<ManifestSummary, ScanError> {
    let doc = roxmltree::Document::parse(text).map_err(|e| ScanError::Manifest {
        path: PathBuf::new(),
        message: e.to_string(),
    })?;
    let root = doc.root_element();
    let children = || root.children().filter(|n| n.is_element());
    let name = children()
        .find(|n| n.has_tag_name("name"))
        .and_then(|n| n.text())
        .map(str::trim)
        .filter(|n| !n.is_empty())
        .ok_or(ScanError::MissingName { path: PathBuf::new() })?
        .to_string();
    let is_metapackage = children()
        .filter(|n| n.has_tag_name("export"))
        .flat_map(|e| e.children())
        .any(|n| n.has_tag_name("metapackage") && !n.has_children());
    let dependencies: BTreeSet<String> = children()
        .filter(|n| DEPENDENCY_TAGS.contains(&n.tag_name().name()))
        .filter_map(|n| n.text())
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect();
    Ok(ManifestSummary {
        name,
        is_metapackage,
        dependencies: dependencies.into_iter().collect(),
        path: PathBuf::new(),
    })
}

/// Builds a workspace named after `root` from every package below it.
/// Traversal is path-sorted, so identical trees give identical workspaces.
pub fn scan(root: &Path) -> Result<Workspace, Vec<ScanError>> {
    let io = |path: &Path, e: &dyn std::fmt::Display| ScanError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    if !root.is_dir() {
        return Err(vec![io(root, &"not a readable directory")]);
    }
    let mut errors = Vec::new();
    let mut files = Vec::new();
    let walker = WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.'));
    for entry in walker {
        match entry {
            Ok(e) if e.file_type().is_file() => files.push(e.into_path()),
            Ok(_) => {}
            Err(e) => errors.push(io(e.path().unwrap_or(root), &e)),
        }
    }

    let mut manifests: BTreeMap<PathBuf, ManifestSummary> = BTreeMap::new();
    for path in files.iter().filter(|p| p.file_name().is_some_and(|n| n == MANIFEST)) {
        let dir = path.parent().unwrap_or(root).to_path_buf();
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                errors.push(io(path, &e));
                continue;
            }
        };
        match classify_manifest(&text) {
            Ok(mut m) => {
                m.path = dir.clone();
                manifests.insert(dir, m);
            }
            Err(ScanError::Manifest { message, .. }) => errors.push(ScanError::Manifest {
                path: path.clone(),
                message,
            }),
            Err(_) => errors.push(ScanError::MissingName { path: path.clone() }),
        }
    }

    let mut by_name: BTreeMap<&str, &Path> = BTreeMap::new();
    for m in manifests.values() {
        if let Some(first) = by_name.insert(&m.name, &m.path) {
            errors.push(ScanError::DuplicatePackage {
                name: m.name.clone(),
                first: first.to_path_buf(),
                second: m.path.clone(),
            });
        }
    }

    let mut contents: BTreeMap<&Path, Vec<(ArtifactKind, String)>> =
        manifests.keys().map(|d| (d.as_path(), Vec::new())).collect();
    for path in &files {
        let Some(dir) = path.ancestors().skip(1).find(|a| manifests.contains_key(*a)) else {
            continue;
        };
        let rel = path.strip_prefix(dir).unwrap_or(path);
        match classify_file(path, rel) {
            Ok(items) => contents.get_mut(dir).expect("package dir").extend(items),
            Err(e) => errors.push(e),
        }
    }

    let name = root
        .canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "workspace".to_string());
    let mut ws = Workspace {
        name,
        ..Default::default()
    };
    for (dir, items) in contents {
        let m = &manifests[dir];
        if m.is_metapackage {
            ws.metapackages.push(Metapackage {
                name: m.name.clone(),
                packages: m.dependencies.clone(),
                artifacts: items
                    .into_iter()
                    .filter(|(_, f)| !METAPACKAGE_FILES.contains(&f.as_str()))
                    .collect(),
            });
        } else {
            let mut p = Package {
                name: m.name.clone(),
                ..Default::default()
            };
            for (kind, item) in items {
                p.list_mut(kind).push(item);
            }
            ws.packages.push(p);
        }
    }
    ws.canonicalize();
    if errors.is_empty() {
        Ok(ws)
    } else {
        Err(errors)
    }
}

/// Maps one file of a package to its artifact. The manifest itself is not an
/// artifact; the sidecar expands into named nodes, libraries and plugins.
fn classify_file(path: &Path, rel: &Path) -> Result<Vec<(ArtifactKind, String)>, ScanError> {
    let read = || {
        fs::read_to_string(path).map_err(|e| ScanError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    };
    let rel_text = rel
        .components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/");
    if rel_text == MANIFEST {
        return Ok(Vec::new());
    }
    if rel_text == SIDECAR {
        return parse_sidecar(path, &read()?);
    }
    let parent = rel.parent().and_then(Path::to_str).unwrap_or("");
    let ext = rel.extension().and_then(|e| e.to_str()).unwrap_or("");
    let stem = rel
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let kind = match (parent, ext) {
        ("msg", "msg") => ArtifactKind::Msg,
        ("srv", "srv") => ArtifactKind::Srv,
        ("action", "action") => {
            let sections = action_sections(&read()?);
            if sections != 3 {
                return Err(ScanError::ActionFormat {
                    path: path.to_path_buf(),
                    sections,
                });
            }
            ArtifactKind::ActionDef
        }
        _ => return Ok(vec![(ArtifactKind::Misc, rel_text)]),
    };
    Ok(vec![(kind, stem)])
}

/// Number of `---`-separated sections in an action definition.
pub fn action_sections(text: &str) -> usize {
    1 + text.lines().filter(|l| l.trim_end_matches('\r') == "---").count()
}

/// Reads `meros.map`: one `node`, `library` or `plugin` declaration per line.
pub fn parse_sidecar(path: &Path, text: &str) -> Result<Vec<(ArtifactKind, String)>, ScanError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| ScanError::Sidecar {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let (keyword, name) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(format!("expected `<kind> <name>`, found `{line}`")))?;
        let kind = match keyword {
            "node" => ArtifactKind::Node,
            "library" => ArtifactKind::Library,
            "plugin" => ArtifactKind::Plugin,
            other => return Err(err(format!("unknown kind `{other}`"))),
        };
        out.push((kind, name.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metapackage_manifest() {
        let m = classify_manifest(
            "<package format=\"2\"><name>robot</name><buildtool_depend>catkin</buildtool_depend>\
             <exec_depend>nav</exec_depend><exec_depend>arm</exec_depend><export><metapackage/></export></package>",
        )
        .unwrap();
        assert!(m.is_metapackage);
        assert_eq!(m.dependencies, vec!["arm", "nav"]);
    }

    #[test]
    fn minimal_manifest() {
        let m = classify_manifest("<package><name>p</name></package>").unwrap();
        assert_eq!(m.name, "p");
        assert!(!m.is_metapackage);
    }

    #[test]
    fn manifest_errors() {
        assert!(matches!(
            classify_manifest("<package/>"),
            Err(ScanError::MissingName { .. })
        ));
        assert!(matches!(
            classify_manifest("<package>"),
            Err(ScanError::Manifest { .. })
        ));
    }

    #[test]
    fn action_section_count() {
        assert_eq!(action_sections("int32 a\n---\nint32 b\n---\nfloat32 c\n"), 3);
        assert_eq!(action_sections("a\r\n---\r\nb\r\n---\r\n"), 3);
        assert_eq!(action_sections("a\n--- \nb\n"), 1);
    }

    #[test]
    fn sidecar_lines() {
        let items = parse_sidecar(Path::new("m"), "# kinds\nnode move_base\nlibrary costmap\n").unwrap();
        assert_eq!(
            items,
            vec![
                (ArtifactKind::Node, "move_base".into()),
                (ArtifactKind::Library, "costmap".into())
            ]
        );
        let e = parse_sidecar(Path::new("m"), "service x\n").unwrap_err();
        assert_eq!(e.to_string(), "m:1: unknown kind `service`");
    }
}
