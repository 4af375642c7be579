use std::path::PathBuf;
use std::process::{Command, Output};

fn gogtwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gogtwist")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn temp_file(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("gogtwist-test-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn reduce_free_word() {
    let o = gogtwist(&["reduce", "--basis", "a,b", "--word", "a a^-1 b"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "b\n");
}

#[test]
fn reduce_rejects_unknown_generator() {
    let o = gogtwist(&["reduce", "--basis", "a,b", "--word", "a c"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("c"), "{}", stderr(&o));
}

#[test]
fn growth_of_stable_letter() {
    let o = gogtwist(&["growth", "--aut", &fixture("loop.json"), "--word", "t", "--max-k", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(str::to_string).collect();
    let expected: Vec<String> = (0..=10).map(|k| format!("{k},{}", k + 1)).collect();
    assert_eq!(rows, expected);
}

#[test]
fn growth_estimate_line() {
    let o = gogtwist(&["growth", "--aut", &fixture("loop.json"), "--word", "t", "--max-k", "40", "--iterated", "--estimate"]);
    let last = stdout(&o).lines().last().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&last).unwrap();
    assert_eq!(v["degree"], 2);
    assert_eq!(v["ok"], true);
}

#[test]
fn classify_exit_codes() {
    let o = gogtwist(&["classify", "--spec", &fixture("case2.json")]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "at-least-quadratic");
    assert_eq!(v["offending_edges"], serde_json::json!(["f"]));
    assert_eq!(v["witnesses"][0]["degree"], 2);
    let o = gogtwist(&["classify", "--spec", &fixture("case1.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("linear-dehn-twist"));
}

#[test]
fn efficiency_exit_codes() {
    assert_eq!(gogtwist(&["check-efficient", "--aut", &fixture("loop.json")]).status.code(), Some(0));
    let o = gogtwist(&["check-efficient", "--aut", &fixture("loop_zero.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"unused_edges\":[\"e\"]"));
}

#[test]
fn h_zero_exit_codes() {
    let o = gogtwist(&["is-h-zero", "--aut", &fixture("loop.json"), "--path", "@e a^5 @ebar b"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result_length"], 0);
    assert_eq!(gogtwist(&["is-h-zero", "--aut", &fixture("loop.json"), "--word", "t"]).status.code(), Some(1));
}

#[test]
fn bundled_corpus_passes() {
    let o = gogtwist(&["fixtures"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn malformed_json_points_at_field() {
    let bad = r#"{"gog":{"vertices":[{"id":"v","basis":["a","b"]}],"edges":[{"id":"e","bar":"ebar","to":"v","group":"Z","image":"a"},{"id":"ebar","bar":"e","to":"v","group":"Z","image":"b"}],"orientation":["e"]},"twist":{"twistors":{"e":"one"}}}"#;
    let o = gogtwist(&["check-efficient", "--aut", &temp_file("type.json", bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("twist.twistors.e"), "{}", stderr(&o));

    let bad = bad.replace(r#"{"e":"one"}"#, r#"{"q":1}"#);
    let o = gogtwist(&["check-efficient", "--aut", &temp_file("edge.json", &bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/twist/twistors/q: unknown edge"), "{}", stderr(&o));

    let spec = std::fs::read_to_string(fixture("case2.json")).unwrap().replace("\"t a^-1\"", "\"t a^-2\"");
    let o = gogtwist(&["classify", "--spec", &temp_file("spec.json", &spec)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/aut: vertex map at v is not inverted"), "{}", stderr(&o));
}

#[test]
fn emitted_documents_round_trip() {
    let first = stdout(&gogtwist(&["show", "--aut", &fixture("loop.json")]));
    let again = stdout(&gogtwist(&["show", "--aut", &temp_file("show.json", &first)]));
    assert_eq!(first, again);
    for args in [
        vec!["classify", "--spec", &fixture("case2.json")[..], "--verify", "40"],
        vec!["check-efficient", "--aut", &fixture("loop.json")[..]],
        vec!["h-reduce", "--aut", &fixture("loop.json")[..], "--path", "@e a @ebar b"],
    ] {
        let text = stdout(&gogtwist(&args));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let back: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, back, "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["classify", "--spec", &fixture("case2.json")[..]],
        vec!["laws", "--aut", &fixture("loop.json")[..], "--seed", "11", "--samples", "200"],
        vec!["growth", "--aut", &fixture("loop.json")[..], "--word", "t b", "--max-k", "20", "--estimate"],
    ] {
        let a = gogtwist(&args);
        let b = gogtwist(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn laws_hold_on_bundled_graphs() {
    for (file, seed) in [("loop.json", "1"), ("loop.json", "2")] {
        let o = gogtwist(&["laws", "--aut", &fixture(file), "--seed", seed, "--samples", "500"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}
