use std::fs;
use std::path::{Path, PathBuf};

use meros::scan::{classify_manifest, scan, ScanError};
use meros::validate::has_errors;
use meros::{validate, RosSystem, ValidateOptions};

fn fixture_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/workspace")
}

fn manifest(name: &str, meta: bool, deps: &[&str]) -> String {
    let deps: String = deps
        .iter()
        .map(|d| format!("  <exec_depend>{d}</exec_depend>\n"))
        .collect();
    let export = if meta {
        "  <export><metapackage/></export>\n"
    } else {
        ""
    };
    format!("<?xml version=\"1.0\"?>\n<package format=\"2\">\n  <name>{name}</name>\n{deps}{export}</package>\n")
}

fn write(path: &Path, text: &str) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

#[test]
fn fixture_workspace() {
    let ws = scan(&fixture_root()).unwrap();
    assert_eq!(ws.name, "workspace");
    assert_eq!(ws.packages.len(), 2);
    assert_eq!(ws.metapackages.len(), 1);
    let nav = ws.package("nav_pkg").unwrap();
    assert_eq!(nav.action_data, vec!["MoveTo"]);
    assert_eq!(nav.msg_data, vec!["Pose2"]);
    assert_eq!(nav.nodes, vec!["navigator"]);
    assert_eq!(ws.package("arm_pkg").unwrap().srv_data, vec!["Grip"]);
    let robot = ws.metapackage("robot").unwrap();
    assert_eq!(robot.packages, vec!["arm_pkg", "nav_pkg"]);
    assert!(robot.artifacts.is_empty());

    let model = RosSystem {
        workspaces: vec![ws],
        running_systems: vec![],
    };
    let diags = validate(&model, ValidateOptions::default());
    assert!(
        diags.iter().all(|d| d.rule != "MR-006" && d.rule != "MR-007"),
        "{diags:?}"
    );
    assert!(!has_errors(&diags));
}

#[test]
fn scanned_workspace_round_trips() {
    let model = RosSystem {
        workspaces: vec![scan(&fixture_root()).unwrap()],
        running_systems: vec![],
    };
    let text = meros::text::serialize_model(&model);
    assert!(meros::text::parse_model(&text).unwrap().structurally_eq(&model));
}

#[test]
fn duplicate_packages_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("a/package.xml"), &manifest("same", false, &[]));
    write(&dir.path().join("b/package.xml"), &manifest("same", false, &[]));
    let errs = scan(dir.path()).unwrap_err();
    assert!(matches!(errs[0], ScanError::DuplicatePackage { .. }), "{errs:?}");
}

#[test]
fn malformed_action_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("p/package.xml"), &manifest("p", false, &[]));
    write(
        &dir.path().join("p/action/Bad.action"),
        "int32 goal\n---\nint32 result\n",
    );
    let errs = scan(dir.path()).unwrap_err();
    assert!(
        matches!(errs[0], ScanError::ActionFormat { sections: 2, .. }),
        "{errs:?}"
    );
}

#[test]
fn metapackage_with_artifacts_violates_mr006() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("p/package.xml"), &manifest("p", false, &[]));
    write(&dir.path().join("m/package.xml"), &manifest("m", true, &["p"]));
    write(&dir.path().join("m/msg/Stray.msg"), "int32 x\n");
    let ws = scan(dir.path()).unwrap();
    let model = RosSystem {
        workspaces: vec![ws],
        running_systems: vec![],
    };
    let diags = validate(&model, ValidateOptions::default());
    assert!(diags.iter().any(|d| d.rule == "MR-006"), "{diags:?}");
}

#[test]
fn nested_files_belong_to_nearest_package() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("outer/package.xml"), &manifest("outer", false, &[]));
    write(
        &dir.path().join("outer/inner/package.xml"),
        &manifest("inner", false, &[]),
    );
    write(&dir.path().join("outer/inner/msg/M.msg"), "int32 x\n");
    write(&dir.path().join("outer/msg/N.msg"), "int32 y\n");
    write(&dir.path().join(".hidden/package.xml"), &manifest("hidden", false, &[]));
    let ws = scan(dir.path()).unwrap();
    assert_eq!(ws.package("inner").unwrap().msg_data, vec!["M"]);
    assert_eq!(ws.package("outer").unwrap().msg_data, vec!["N"]);
    assert!(ws.package("hidden").is_none());
}

#[test]
fn manifest_classification() {
    let m = classify_manifest(&manifest("m", true, &["b", "a", "a"])).unwrap();
    assert!(m.is_metapackage);
    assert_eq!(m.dependencies, vec!["a", "b"]);
    assert!(classify_manifest("<package><version>1</version></package>").is_err());
    assert!(classify_manifest("<package").is_err());
}
