//! End-to-end runs of the `tgx` binary. JSON reports are compared against
//! files in `tests/golden`; set `TGX_BLESS=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tgx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgx")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn export(dir: &Path) {
    let o = tgx(&["corpus", "export", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success());
}

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("TGX_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

fn golden_run(name: &str, args: &[&str]) {
    let o = tgx(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    serde_json::from_str::<serde_json::Value>(&out).expect("valid JSON");
    golden(name, &out);
    // A second run must produce the same bytes.
    assert_eq!(stdout(&tgx(args)), out);
}

#[test]
fn json_reports_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let f = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let (a, b, s3) = (f("fig4_0.events"), f("fig4_1.events"), f("figS3_left_0.events"));
    golden_run("wl_fig4.json", &["wl", "--a", &a, "--b", &b, "--time", "10", "--json"]);
    golden_run("props_fig4.json", &["props", "--graph", &a, "--json"]);
    golden_run("posfeat_figS3_left.json", &["posfeat", "--graph", &s3, "--dim", "3", "--json"]);
    golden_run(
        "posfeat_figS3_left_l1.json",
        &["posfeat", "--graph", &s3, "--dim", "3", "--normalize", "l1", "--json"],
    );
    golden_run("tct_fig4.json", &["tct", "--graph", &a, "--node", "0", "--depth", "2", "--json"]);
    golden_run("caw_figS3_left.json", &["caw", "--graph", &s3, "--event", "0,1,4", "--len", "3", "--json"]);
    golden_run("injectivity.json", &["injectivity-check", "--json"]);
    golden_run("corpus_fig4.json", &["corpus", "verify", "--case", "fig4", "--json"]);
    golden_run(
        "distinguish_figS3_left.json",
        &["distinguish", "--graph", &s3, "--model", "caw", "--a", "0,1,4", "--b", "3,1,4", "--json"],
    );
}

#[test]
fn wl_text_output_names_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let a = dir.path().join("fig4_0.events");
    let b = dir.path().join("fig4_1.events");
    let o = tgx(&["wl", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap(), "--time", "10"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("Inconclusive"));
}

#[test]
fn snapshot_conversion_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let snap = dir.path().join("s.snap");
    let text = "# tgx-snapshots v1\n\nS,1\nN,0,1\nN,1,\nN,2,2;3\n0,1,\n1,2,5\n\nS,2\n\nS,3\nN,4,\nN,7,1\n4,7,\n";
    std::fs::write(&snap, text).unwrap();
    let ev = dir.path().join("s.events");
    let back = dir.path().join("back.snap");
    for delta in ["1", "4"] {
        let o = tgx(&["convert", "--dtdg", snap.to_str().unwrap(), "--delta", delta, "--out", ev.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let o = tgx(&["convert", "--ctdg", ev.to_str().unwrap(), "--delta", delta, "--out", back.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(std::fs::read_to_string(&back).unwrap(), text);
    }
}

#[test]
fn corpus_verify_passes_with_exit_zero() {
    let o = tgx(&["corpus", "verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("9 cases, 0 failed\n"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["wl", "--a", "x"],
        vec!["corpus", "verify", "--case", "no_such_case"],
        vec!["props", "--graph", "/definitely/missing.events"],
        vec!["caw", "--graph", "/definitely/missing.events", "--event", "0,1"],
        vec!["injectivity-check", "--n", "0"],
    ] {
        assert_eq!(tgx(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unknown_node_and_bad_queries_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    export(dir.path());
    let g = dir.path().join("fig4_0.events");
    let g = g.to_str().unwrap();
    for args in [
        vec!["tct", "--graph", g, "--node", "99"],
        vec!["embed", "--graph", g, "--edge", "0,1"],
        vec!["distinguish", "--graph", g, "--model", "caw", "--nodes", "0,1"],
        vec!["distinguish", "--graph", g, "--model", "pint", "--a", "0,1,3", "--b", "0,1,4"],
    ] {
        assert_eq!(tgx(&args).status.code(), Some(2), "{args:?}");
    }
}
