use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jitower_core::io::{read_tower, GroupFile, TowerFile};
use jitower_core::towers::{verify, Criteria, VerifyOptions};
use jitower_core::{corpus, Caps};
use serde_json::Value;
use tempfile::TempDir;

fn jitower(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jitower"))
        .args(args)
        .env_remove("JITOWER_FORMAT")
        .env_remove("JITOWER_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build(dir: &TempDir, preset: &str, name: &str) -> PathBuf {
    let out = path(dir, name);
    let o = jitower(&["build", preset, "-o", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn orders(p: &Path) -> Vec<u128> {
    let t = read_tower(&std::fs::read_to_string(p).unwrap(), Caps::default()).unwrap();
    t.levels().iter().map(|g| g.order()).collect()
}

/// `C2 <- C2^2 <- C2^3` with every level designated.
fn projection_tower(dir: &TempDir) -> PathBuf {
    let json = r#"{"levels":[
        {"degree":2,"generators":[[1,0]],"A":[[1,0]]},
        {"degree":4,"generators":[[1,0,2,3],[0,1,3,2]],"A":[[1,0,2,3],[0,1,3,2]]},
        {"degree":6,"generators":[[1,0,2,3,4,5],[0,1,3,2,4,5],[0,1,2,3,5,4]],
         "A":[[1,0,2,3,4,5],[0,1,3,2,4,5],[0,1,2,3,5,4]]}],
      "maps":[{"images":[[1,0],[0,1]]},{"images":[[1,0,2,3],[0,1,3,2],[0,1,2,3]]}]}"#;
    let p = path(dir, "projection.json");
    std::fs::write(&p, json).unwrap();
    p
}

fn write_group(dir: &TempDir, name: &str, g: &jitower_core::FiniteGroup) -> PathBuf {
    let p = path(dir, name);
    std::fs::write(&p, serde_json::to_string(&GroupFile::of(g)).unwrap()).unwrap();
    p
}

#[test]
fn build_presets() {
    let dir = TempDir::new().unwrap();
    assert_eq!(orders(&build(&dir, "cyclic:p=2,levels=3", "c.json")), vec![4, 8, 16]);
    assert_eq!(orders(&build(&dir, "wreath:bottom=C2,levels=3", "w.json")), vec![2, 8, 128]);
    let e = build(&dir, "example64", "e.json");
    assert_eq!(orders(&e), vec![7200]);
    let file: TowerFile = serde_json::from_str(&std::fs::read_to_string(&e).unwrap()).unwrap();
    let recipe = &file.symbolic.unwrap()["recipe"];
    assert_eq!(recipe[1]["order"], "60^7200 * 7200");
    assert_eq!(recipe[1]["materialized"], false);
}

#[test]
fn bad_parameters_exit_two() {
    assert_eq!(code(&jitower(&["build", "cyclic:p=4,levels=3"])), 2);
    assert_eq!(code(&jitower(&["build", "cyclic:p=2"])), 2);
    assert_eq!(code(&jitower(&["build", "cyclic:p=2,levels=3,colour=red"])), 2);
    assert_eq!(code(&jitower(&["build", "tetrahedron"])), 2);
    assert_eq!(code(&jitower(&["build", "example64:strategy=sideways"])), 2);
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, "{\"degree\": 3").unwrap();
    assert_eq!(code(&jitower(&["analyze", s(&bad)])), 2);
    let c = build(&dir, "cyclic:p=2,levels=3", "c.json");
    assert_eq!(code(&jitower(&["verify", s(&c), "--criteria", "thm9"])), 2);
    assert_eq!(code(&jitower(&["verify", s(&c), "--criteria", "pro-p:6"])), 2);
    assert_eq!(code(&jitower(&["verify", s(&bad), "--criteria", "hji"])), 2);
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let c = build(&dir, "cyclic:p=2,levels=3", "c.json");
    assert_eq!(code(&jitower(&["verify", s(&c), "--criteria", "introthm"])), 0);
    let p = projection_tower(&dir);
    let out = path(&dir, "report.json");
    let o = jitower(&["verify", s(&p), "--criteria", "wilson", "--format", "json", "--report", s(&out)]);
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let failing: Vec<&Value> = report["levels"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|l| l["conditions"].as_array().unwrap())
        .filter(|c| c["verdict"] == "fail")
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|c| c["witness"]["explanation"].is_string()));
    // the top level needs a lattice of order 16, above this cap
    let o = jitower(&["--max-order", "8", "verify", s(&c), "--criteria", "hji"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn exit_codes_match_the_library_for_every_verifier() {
    let dir = TempDir::new().unwrap();
    let towers = [build(&dir, "cyclic:p=2,levels=3", "c.json"), projection_tower(&dir)];
    let criteria = ["introthm", "mainjithm", "hji", "wilson", "pro-p:2", "primhji"];
    for t in &towers {
        let tower = read_tower(&std::fs::read_to_string(t).unwrap(), Caps::default()).unwrap();
        for c in criteria {
            let expected = verify(&tower, c.parse::<Criteria>().unwrap(), &VerifyOptions::default()).exit_code();
            assert_eq!(code(&jitower(&["verify", s(t), "--criteria", c])), expected, "{c}");
        }
    }
}

#[test]
fn analyze_reports() {
    let dir = TempDir::new().unwrap();
    let g = write_group(&dir, "d8.json", &corpus::c2_wr_c2());
    let o = jitower(&["analyze", s(&g), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["normal_subgroup_orders"]["computed"].as_array().unwrap().len(), 6);
    assert_eq!(r["chief_series"]["computed"].as_array().unwrap().len(), 3);
    let a5 = write_group(&dir, "a5.json", &corpus::alternating(5));
    let o = jitower(&["analyze", s(&a5), "--format", "json"]);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["normal_subgroup_orders"]["computed"], serde_json::json!([1, 60]));
    // caps turn sections into skips rather than errors
    let o = jitower(&["--max-order", "10", "analyze", s(&a5), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r["normal_subgroup_orders"]["skipped"].is_string());
}

#[test]
fn analyze_obliquity_of_a_subgroup() {
    let dir = TempDir::new().unwrap();
    let g = write_group(&dir, "d8.json", &corpus::c2_wr_c2());
    let h = path(&dir, "h.json");
    std::fs::write(&h, "[[1,0,2,3]]").unwrap();
    let o = jitower(&["analyze", s(&g), "--subgroup", s(&h), "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["obliquity"][0]["order"], 2);
    assert!(r["obliquity"][0]["ob_order"]["computed"].is_number());
}

#[test]
fn oracle_agrees_on_corpus_groups() {
    let dir = TempDir::new().unwrap();
    for (name, g) in [("d8", corpus::c2_wr_c2()), ("s4", corpus::symmetric(4)), ("q8", corpus::quaternion())] {
        let p = write_group(&dir, &format!("{name}.json"), &g);
        let o = jitower(&["oracle", s(&p), "--format", "json"]);
        assert_eq!(code(&o), 0, "{name}");
        let r: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(r["checks"].as_array().unwrap().iter().all(|c| c["status"] == "agree"), "{name}: {r}");
    }
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let c = build(&dir, "wreath:bottom=C2,levels=3", "w.json");
    let c2 = build(&dir, "wreath:bottom=C2,levels=3", "w2.json");
    assert_eq!(std::fs::read(&c).unwrap(), std::fs::read(&c2).unwrap());
    let a = jitower(&["verify", s(&c), "--criteria", "wilson", "--format", "json"]);
    let b = jitower(&["verify", s(&c), "--criteria", "wilson", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = jitower(&["verify", s(&c), "--criteria", "wilson"]);
    let b = jitower(&["verify", s(&c), "--criteria", "wilson"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn environment_overrides_flags() {
    let dir = TempDir::new().unwrap();
    let c = build(&dir, "cyclic:p=2,levels=3", "c.json");
    let o = Command::new(env!("CARGO_BIN_EXE_jitower"))
        .args(["verify", s(&c)])
        .env("JITOWER_CRITERIA", "introthm")
        .env("JITOWER_FORMAT", "json")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["summary"]["status"], "pass");
}
