use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pbwsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbwsplit"))
        .args(args)
        .env_remove("PBWSPLIT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn roots_g2_in_fixed_order() {
    let out = pbwsplit(&["roots", "--type", "G2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let roots: Vec<&str> = v["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["root"].as_str().unwrap())
        .collect();
    assert_eq!(roots, ["3,2", "3,1", "2,1", "1,1", "0,1", "1,0"]);
    let heights: Vec<i64> = v["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["height"].as_i64().unwrap())
        .collect();
    assert_eq!(heights, [5, 4, 3, 2, 1, 1]);
    assert_eq!(v["jacobi"], true);
}

#[test]
fn roots_a1_single_row() {
    let out = pbwsplit(&["roots", "--type", "A1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "index,root,height,pairings\n1,1,1,2\n"
    );
}

#[test]
fn invalid_inputs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "[[2,-1],[-2,2],[0]]").unwrap();
    assert_eq!(
        code(&pbwsplit(&["roots", "--cartan", bad.to_str().unwrap()])),
        2
    );
    assert_eq!(code(&pbwsplit(&["roots", "--type", "Q7"])), 2);
    assert_eq!(
        code(&pbwsplit(&[
            "essential",
            "--type",
            "A2",
            "--weight",
            "1,-1"
        ])),
        2
    );
    assert_eq!(
        code(&pbwsplit(&[
            "verify",
            "--condition2",
            "--type",
            "A1",
            "--p",
            "4"
        ])),
        2
    );
    assert_eq!(code(&pbwsplit(&["verify", "--type", "A1", "--p", "2"])), 2);
    assert_eq!(code(&pbwsplit(&["frobnicate"])), 2);
}

#[test]
fn cartan_file_accepts_both_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let bare = dir.path().join("g2.json");
    std::fs::write(&bare, "[[2,-3],[-1,2]]").unwrap();
    let full = dir.path().join("g2full.json");
    std::fs::write(&full, r#"{"matrix":[[2,-3],[-1,2]],"label":"G2"}"#).unwrap();
    let a = json(&pbwsplit(&["roots", "--cartan", bare.to_str().unwrap()]));
    let b = json(&pbwsplit(&["roots", "--cartan", full.to_str().unwrap()]));
    assert_eq!(a["roots"], b["roots"]);
    assert_eq!(a["type_label"], "custom");
    assert_eq!(b["type_label"], "G2");
}

#[test]
fn essential_g2_omega1_with_oracle() {
    let out = pbwsplit(&["essential", "--type", "G2", "--weight", "1,0", "--oracle"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["count"], 7);
    assert_eq!(v["entries"].as_array().unwrap().len(), 7);
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn oracle_needs_g2() {
    assert_eq!(
        code(&pbwsplit(&[
            "essential",
            "--type",
            "A2",
            "--weight",
            "1,0",
            "--oracle"
        ])),
        2
    );
}

#[test]
fn essential_a1_is_a_chain() {
    let v = json(&pbwsplit(&["essential", "--type", "A1", "--weight", "4"]));
    let s: Vec<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["s"].as_str().unwrap())
        .collect();
    assert_eq!(s, ["0", "1", "2", "3", "4"]);
}

#[test]
fn resource_cap_has_its_own_exit_code() {
    let out = pbwsplit(&[
        "essential",
        "--type",
        "G2",
        "--weight",
        "3,3",
        "--cap",
        "10",
    ]);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());
}

#[test]
fn filtration_a1_mod_3() {
    let v = json(&pbwsplit(&[
        "filtration",
        "--type",
        "A1",
        "--weight",
        "2",
        "--p",
        "3",
    ]));
    assert_eq!(v["graded"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["levels"][2]["dim"], 3);
}

/// `V(1) (x) V(1)` over F_2 with basis `v, Fv` in each factor, written out by
/// hand: `VV_0` is spanned by `v⊗v`, `Fv⊗v + v⊗Fv`, `Fv⊗Fv`; applying `F⊗1`
/// to `v⊗v` adds `Fv⊗v`.
#[test]
fn induced_filtration_a1_mod_2() {
    let v = json(&pbwsplit(&[
        "filtration",
        "--type",
        "A1",
        "--weight",
        "1",
        "--tensor",
        "1",
        "--p",
        "2",
    ]));
    assert_eq!(
        v["levels"],
        serde_json::json!([{"n": 0, "dim": 3}, {"n": 1, "dim": 4}])
    );
    assert_eq!(v["full_dim"], 4);
    assert!(v.get("note").is_none());
}

#[test]
fn mu_zero_is_noted() {
    let v = json(&pbwsplit(&[
        "filtration",
        "--type",
        "A1",
        "--weight",
        "2",
        "--tensor",
        "0",
        "--p",
        "3",
    ]));
    assert_eq!(v["graded"], serde_json::json!([3, 0, 0]));
    assert!(v["note"]
        .as_str()
        .unwrap()
        .contains("concentrated in degree 0"));
}

#[test]
fn condition2_a1() {
    let out = pbwsplit(&["verify", "--condition2", "--type", "A1", "--p", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], true);
}

#[test]
fn g2_below_eleven_is_exploration() {
    let out = pbwsplit(&["verify", "--g2", "--p", "7"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["exploration"], true);
    assert_eq!(v["status"], "exploration only");
    assert_eq!(v["certified"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("EXPLORATION ONLY"));
}

#[test]
fn g2_report_is_deterministic_and_exit_matches_verdict() {
    let a = pbwsplit(&["verify", "--g2", "--p", "11"]);
    let b = pbwsplit(&["verify", "--g2", "--p", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["exploration"], false);
    let overall = v["overall"].as_bool().unwrap();
    assert_eq!(code(&a), if overall { 0 } else { 1 });
    assert_eq!(v["status"], if overall { "certified" } else { "failed" });
    assert!(v.get("stats").is_none());
}

#[test]
fn stats_only_on_request() {
    let v = json(&pbwsplit(&["roots", "--type", "A2", "--stats"]));
    assert!(v["stats"]["wall_ms"].is_u64());
}

#[test]
fn verify_rejects_csv() {
    assert_eq!(
        code(&pbwsplit(&[
            "verify", "--v0", "--type", "A1", "--p", "2", "--format", "csv"
        ])),
        2
    );
}

#[test]
fn text_output_is_labelled_lossy() {
    let out = pbwsplit(&["roots", "--type", "B2", "--format", "text"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("# text summary (lossy"));
}

#[test]
fn schema_prints_json() {
    let out = pbwsplit(&["--schema"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["schema_version"], 1);
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_is_validated_and_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "u.json", r#"{"type":"A1","colour":"red"}"#);
    assert_eq!(code(&pbwsplit(&["roots", "--config", &unknown])), 2);
    let zero = write(dir.path(), "z.json", r#"{"cap":0}"#);
    assert_eq!(
        code(&pbwsplit(&["roots", "--type", "A1", "--config", &zero])),
        2
    );

    let good = write(
        dir.path(),
        "g.json",
        r#"{"type":"A1","weights":[[3]],"format":"csv"}"#,
    );
    let out = pbwsplit(&["essential", "--config", &good]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout.clone())
        .unwrap()
        .starts_with("type,lambda,p,s,degree\n"));
    let over = pbwsplit(&[
        "essential",
        "--config",
        &good,
        "--weight",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(json(&over)["count"], 2);
}

#[test]
fn cache_round_trip_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = [
        "essential",
        "--type",
        "G2",
        "--weight",
        "0,1",
        "--p",
        "5",
        "--cache-dir",
        cache.to_str().unwrap(),
    ];
    let first = pbwsplit(&args);
    assert_eq!(code(&first), 0);
    let files: Vec<_> = std::fs::read_dir(&cache)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(files.len(), 1);
    let stored = std::fs::read(&files[0]).unwrap();
    let second = pbwsplit(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read(&files[0]).unwrap(), stored);

    std::fs::write(&files[0], b"not json").unwrap();
    let third = pbwsplit(&args);
    assert_eq!(first.stdout, third.stdout);
    assert_eq!(std::fs::read(&files[0]).unwrap(), stored);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_pbwsplit"))
        .args(["filtration", "--type", "A2", "--weight", "1,1", "--p", "3"])
        .env("PBWSPLIT_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("roots.json");
    let out = pbwsplit(&["roots", "--type", "A2", "--out", target.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&target).unwrap()).unwrap();
    assert_eq!(v["roots"].as_array().unwrap().len(), 3);
}
