//! End-to-end tests of the `burl` binary: subcommand contracts, exit codes,
//! error wording, and output determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn work_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("burl-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("temp dir is writable");
    dir
}

fn burl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burl"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn the_base_scene_has_one_shape_and_one_prob() {
    let dir = work_dir("base");
    let out = burl(
        &["generate", "--shape", "frame", "--k", "1", "--out", "k1.json"],
        &dir,
    );
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("k1.json")).expect("file written"))
            .expect("valid JSON");
    assert_eq!(doc["shapes"].as_array().expect("shapes array").len(), 1);
    assert_eq!(doc["probs"].as_array().expect("probs array").len(), 1);
    assert_eq!(doc["level"], 1);
}

#[test]
fn the_full_pipeline_runs_clean() {
    let dir = work_dir("pipeline");
    let gen = burl(
        &["generate", "--shape", "frame", "--k", "3", "--out", "scene.json"],
        &dir,
    );
    assert_eq!(exit_code(&gen), 0, "stderr: {}", stderr(&gen));

    let check = burl(&["check", "scene.json"], &dir);
    assert_eq!(exit_code(&check), 0, "check report: {}", stdout(&check));

    let graph = burl(
        &["graph", "scene.json", "--out", "graph.json", "--dot", "graph.dot"],
        &dir,
    );
    assert_eq!(exit_code(&graph), 0, "stderr: {}", stderr(&graph));
    let dot = fs::read_to_string(dir.join("graph.dot")).expect("dot written");
    assert!(dot.starts_with("digraph {"), "graph output is oriented");
    assert!(
        dot.contains("triangle-free: true"),
        "the DOT label must carry the triangle verdict"
    );

    let rec = burl(&["recognize", "graph.json", "--oriented"], &dir);
    assert_eq!(exit_code(&rec), 0, "cert: {}", stdout(&rec));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&rec)).expect("cert is JSON");
    assert_eq!(cert["verdict"], "accepted");

    let analyze = burl(&["analyze", "graph.json", "--chi", "--triangle-free"], &dir);
    assert_eq!(exit_code(&analyze), 0);
    let report: serde_json::Value =
        serde_json::from_str(&stdout(&analyze)).expect("analysis is JSON");
    assert_eq!(report["vertices"], 13);
    assert_eq!(report["triangle_free"], true);
    assert_eq!(report["clique_number"], 2);
    assert_eq!(report["chromatic"]["outcome"]["chi"], 3);

    let render = burl(
        &["render", "scene.json", "--svg", "scene.svg", "--territories"],
        &dir,
    );
    assert_eq!(exit_code(&render), 0, "stderr: {}", stderr(&render));
    let svg = fs::read_to_string(dir.join("scene.svg")).expect("svg written");
    assert!(svg.starts_with("<svg "));
    assert!(svg.contains("url(#hatch)"), "territories must be hatched");
}

#[test]
fn generate_and_render_are_deterministic() {
    let dir = work_dir("determinism");
    for name in ["a", "b"] {
        let out = burl(
            &[
                "generate", "--shape", "gamma", "--k", "2",
                "--out", &format!("{name}.json"),
            ],
            &dir,
        );
        assert_eq!(exit_code(&out), 0);
        let render = burl(
            &[
                "render", &format!("{name}.json"),
                "--svg", &format!("{name}.svg"),
            ],
            &dir,
        );
        assert_eq!(exit_code(&render), 0);
    }
    assert_eq!(
        fs::read(dir.join("a.json")).expect("first scene"),
        fs::read(dir.join("b.json")).expect("second scene"),
        "scene bytes must not vary between runs"
    );
    assert_eq!(
        fs::read(dir.join("a.svg")).expect("first svg"),
        fs::read(dir.join("b.svg")).expect("second svg"),
        "svg bytes must not vary between runs"
    );
}

#[test]
fn shapes_can_come_from_a_rect_list_file() {
    let dir = work_dir("file-shape");
    fs::write(
        dir.join("shape.json"),
        r#"[["0","0","0","3"],["3","3","0","3"],["0","3","0","0"],["0","3","3","3"]]"#,
    )
    .expect("fixture written");
    let out = burl(
        &["generate", "--shape", "file:shape.json", "--k", "2", "--out", "s.json"],
        &dir,
    );
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("level 2, 3 shapes, 2 probs"));
}

#[test]
fn an_unknown_shape_name_is_refused() {
    let dir = work_dir("bad-shape");
    let out = burl(
        &["generate", "--shape", "pentagon", "--k", "1", "--out", "x.json"],
        &dir,
    );
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("unknown shape"), "got: {}", stderr(&out));
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = work_dir("malformed");
    fs::write(dir.join("broken.json"), "{ not json").expect("fixture written");
    let out = burl(&["check", "broken.json"], &dir);
    assert_eq!(exit_code(&out), 1);
    let err = stderr(&out);
    assert!(
        err.contains("line") && err.contains("column"),
        "parse errors must carry a position, got: {err}"
    );
}

#[test]
fn version_mismatches_say_bad_version() {
    let dir = work_dir("version");
    let gen = burl(
        &["generate", "--shape", "frame", "--k", "1", "--out", "scene.json"],
        &dir,
    );
    assert_eq!(exit_code(&gen), 0);
    let mut doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("scene.json")).expect("scene"))
            .expect("valid JSON");
    doc["version"] = serde_json::json!(12);
    fs::write(dir.join("scene.json"), doc.to_string()).expect("rewrite");
    let out = burl(&["check", "scene.json"], &dir);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("bad-version"), "got: {}", stderr(&out));
}

#[test]
fn recognize_exit_codes_separate_the_three_verdicts() {
    let dir = work_dir("verdicts");
    fs::write(
        dir.join("c6.json"),
        serde_json::json!({
            "version": 1,
            "vertices": ["v0", "v1", "v2", "v3", "v4", "v5"],
            "edges": [
                ["v0", "v1"], ["v1", "v2"], ["v2", "v3"],
                ["v3", "v4"], ["v4", "v5"], ["v5", "v0"]
            ],
        })
        .to_string(),
    )
    .expect("fixture written");
    fs::write(
        dir.join("k3.json"),
        serde_json::json!({
            "version": 1,
            "vertices": ["a", "b", "c"],
            "edges": [["a", "b"], ["b", "c"], ["a", "c"]],
        })
        .to_string(),
    )
    .expect("fixture written");

    assert_eq!(exit_code(&burl(&["recognize", "c6.json"], &dir)), 0);
    assert_eq!(exit_code(&burl(&["recognize", "k3.json"], &dir)), 1);
    let exhausted = burl(&["recognize", "c6.json", "--budget", "1"], &dir);
    assert_eq!(exit_code(&exhausted), 2);
    let cert: serde_json::Value = serde_json::from_str(&stdout(&exhausted)).expect("cert JSON");
    assert_eq!(cert["verdict"], "budget_exceeded");
}

#[test]
fn a_two_cycle_is_rejected_when_oriented() {
    let dir = work_dir("two-cycle");
    fs::write(
        dir.join("cycle.json"),
        serde_json::json!({
            "version": 1,
            "vertices": ["a", "b"],
            "arcs": [["a", "b"], ["b", "a"]],
        })
        .to_string(),
    )
    .expect("fixture written");
    let out = burl(&["recognize", "cycle.json", "--oriented"], &dir);
    assert_eq!(exit_code(&out), 1);
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("cert JSON");
    assert_eq!(cert["verdict"], "rejected");
    assert!(
        cert["violated"].to_string().contains("cycle"),
        "the cert must name the cycle, got: {}",
        cert["violated"]
    );
}

#[test]
fn an_unstable_scene_fails_check_with_a_json_report() {
    let dir = work_dir("unstable");
    let gen = burl(
        &["generate", "--shape", "frame", "--k", "1", "--out", "scene.json"],
        &dir,
    );
    assert_eq!(exit_code(&gen), 0);
    let mut doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("scene.json")).expect("scene"))
            .expect("valid JSON");
    // Stretch the prob to the box's left edge: frame material now sits on
    // the prob's left edge, so no root can exist.
    doc["probs"][0]["rect"] = serde_json::json!(["0", "3", "1/2", "5/2"]);
    fs::write(dir.join("scene.json"), doc.to_string()).expect("rewrite");

    let out = burl(&["check", "scene.json", "--stability"], &dir);
    assert_eq!(exit_code(&out), 1, "an unstable prob must fail the check");
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("report is JSON");
    assert_eq!(report["ok"], false);
    let kinds: Vec<&str> = report["stability"][0]["issues"]
        .as_array()
        .expect("issue list")
        .iter()
        .filter_map(|i| i["kind"].as_str())
        .collect();
    assert!(kinds.contains(&"no-root"), "expected a no-root issue, got {kinds:?}");
}

#[test]
fn check_reports_misplaced_probs_as_a_document_failure() {
    let dir = work_dir("misplaced");
    let gen = burl(
        &["generate", "--shape", "frame", "--k", "2", "--out", "scene.json"],
        &dir,
    );
    assert_eq!(exit_code(&gen), 0);
    let mut doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("scene.json")).expect("scene"))
            .expect("valid JSON");
    // Make the two probs overlap: placement, not stability, must reject it.
    doc["probs"][1]["rect"] = doc["probs"][0]["rect"].clone();
    fs::write(dir.join("scene.json"), doc.to_string()).expect("rewrite");

    let out = burl(&["check", "scene.json"], &dir);
    assert_eq!(exit_code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("report is JSON");
    assert_eq!(report["ok"], false);
    assert!(
        report["document"].to_string().contains("intersect"),
        "got: {report}"
    );
}
