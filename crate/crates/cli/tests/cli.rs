use std::path::{Path, PathBuf};
use std::process::Command;

use qhsd_cli::{parse_manifold, run, Outcome};
use qhsd_core::catalog::{catalog_ids, parse_presentation, presentation_to_string};
use qhsd_core::subcrit::AffineChartModelJson;
use serde_json::{json, Value};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).display().to_string()
}

fn qhsd(args: &[&str]) -> Outcome {
    run(std::iter::once("qhsd").chain(args.iter().copied()))
}

fn qhsd_json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let out = qhsd(&a);
    let v: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", out.stdout));
    (out.exit_code, v)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a str {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["status"]
        .as_str()
        .unwrap()
}

fn manifold_fixtures() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(root().join("fixtures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn fixtures_are_canonical_and_round_trip() {
    let files = manifold_fixtures();
    assert!(files.len() >= 6);
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let m = parse_manifold(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let canon = m.file.to_canonical_string();
        assert_eq!(canon, text, "{} is not in canonical form", path.display());
        let again = parse_manifold(&canon).unwrap();
        assert_eq!(again.file, m.file);
        assert_eq!(again.file.to_canonical_string(), canon);
    }
}

#[test]
fn chart_models_round_trip() {
    for entry in std::fs::read_dir(root().join("fixtures/models")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let json: AffineChartModelJson = serde_json::from_str(&text).unwrap();
        let model = json.to_model().unwrap();
        model.validate(16, 0).unwrap();
        let back = serde_json::to_string_pretty(&model.to_json()).unwrap() + "\n";
        assert_eq!(back, text, "{}", path.display());
    }
}

#[test]
fn catalog_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for id in catalog_ids() {
        let out = dir.path().join(format!("{id}.json"));
        let o = qhsd(&["catalog", "export", &id, "--out", out.to_str().unwrap()]);
        assert_eq!(o.exit_code, 0, "{}", o.stderr);
        let text = std::fs::read_to_string(&out).unwrap();
        let ring = parse_presentation(&text).unwrap();
        assert_eq!(presentation_to_string(&ring), text, "{id}");
        // without --out the text goes to stdout unchanged
        assert_eq!(qhsd(&["catalog", "export", &id]).stdout, text);
    }
}

#[test]
fn verify_bundled_fixtures() {
    let (code, r) = qhsd_json(&["verify", "--file", &fixture("gr_2_5.json")]);
    assert_eq!(code, 0);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["status"] != "fail"));
    for name in ["ring.axioms", "ring.q_degree", "ring.graded_ranks", "x.cyclic_periodicity", "sigma.cyclic_periodicity"] {
        assert_eq!(check(&r, name), "pass", "{name}");
    }

    let (code, r) = qhsd_json(&["verify", "--file", &fixture("p1xp1_paper.json")]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "ring.omega_invertible"), "pass");
    assert_eq!(check(&r, "ring.inverse[0].expected"), "pass");
    assert_eq!(check(&r, "ring.inverse[0].residual"), "pass");

    let (code, r) = qhsd_json(&["verify", "--file", &fixture("p1xp1_veronese.json")]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "ring.omega_invertible"), "pass");
    let details = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "ring.omega_invertible").unwrap()["details"].clone();
    assert!(details.as_str().unwrap().contains("NOT invertible"));
}

#[test]
fn verify_reports_a_wrong_expectation_as_failure() {
    let text = std::fs::read_to_string(fixture("p1xp1_veronese.json")).unwrap();
    let broken = text.replace("\"expect_omega_invertible\": false", "\"expect_omega_invertible\": true");
    assert_ne!(broken, text);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, broken).unwrap();
    let (code, r) = qhsd_json(&["verify", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "fail");
    assert_eq!(check(&r, "ring.omega_invertible"), "fail");
}

#[test]
fn schema_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"name\": \"x\",\n  \"n\": 3,\n  \"k\": 1,\n  \"b2_is_1\": true,\n  \"colour\": 4\n}\n").unwrap();
    let o = qhsd(&["verify", "--file", path.to_str().unwrap()]);
    assert_eq!(o.exit_code, 2);
    assert!(o.stderr.contains("line 6"), "{}", o.stderr);
    assert!(o.stderr.contains("colour"), "{}", o.stderr);

    std::fs::write(&path, r#"{"name": "x", "n": 3, "k": 1, "b2_is_1": true, "betti": [1, 0, 1]}"#).unwrap();
    let o = qhsd(&["verify", "--file", path.to_str().unwrap()]);
    assert_eq!(o.exit_code, 2);
    assert!(o.stderr.contains("betti"), "{}", o.stderr);
}

#[test]
fn invert_examples() {
    let (code, r) = qhsd_json(&["invert", "--catalog", "cp3", "--class", "h"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["inverse"], json!([["h^3", [[-1, 1]]]]));

    let (code, r) = qhsd_json(&["invert", "--catalog", "p1xp1_paper", "--class", "seidel", "--cap", "16"]);
    assert_eq!(code, 0);
    let inv = r["data"]["inverse"].as_array().unwrap();
    let alpha: Vec<Value> = (0..=18).map(|j| json!([-1, j - 2, 1, -2 * (j + 1)])).collect();
    let beta: Vec<Value> = (0..=18).map(|j| json!([-1, j - 2, 1, 2 * j + 1])).collect();
    assert_eq!(inv[0], json!(["alpha", alpha]));
    assert_eq!(inv[1], json!(["beta", beta]));

    let by_expr = qhsd_json(&["invert", "--file", &fixture("p1xp1_paper.json"), "--element", "2*alpha*T + beta*T + beta*T^2", "--cap", "16"]).1;
    assert_eq!(by_expr["data"]["inverse"], r["data"]["inverse"]);

    let (code, r) = qhsd_json(&["invert", "--file", &fixture("p1xp1_veronese.json"), "--class", "omega"]);
    assert_eq!(code, 1);
    assert_eq!(check(&r, "invertible"), "fail");
    assert!(r["data"]["inverse"].is_null());

    let o = qhsd(&["invert", "--catalog", "cp3", "--class", "nope"]);
    assert_eq!(o.exit_code, 2);
    assert!(o.stderr.contains("unknown class"));
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qhsd"))
}

#[test]
fn truncation_cap_comes_from_the_environment() {
    let terms = |out: std::process::Output| -> usize {
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v["data"]["inverse"][0][1].as_array().unwrap().len()
    };
    let args = ["invert", "--catalog", "p1xp1_paper", "--class", "seidel", "--json"];
    let default = binary().args(args).env_remove("QHSD_TRUNCATION_CAP").output().unwrap();
    let short = binary().args(args).env("QHSD_TRUNCATION_CAP", "4").output().unwrap();
    let mut with_flag = args.to_vec();
    with_flag.extend(["--cap", "6"]);
    let flag = binary().args(&with_flag).env("QHSD_TRUNCATION_CAP", "4").output().unwrap();
    // alpha terms T^-2 .. T^cap
    assert_eq!(terms(default), 19);
    assert_eq!(terms(short), 7);
    assert_eq!(terms(flag), 9);

    let bad = binary().args(args).env("QHSD_TRUNCATION_CAP", "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn binary_exit_codes_follow_the_report() {
    let ok = binary().args(["defect", "--n", "6", "--k", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let fail = binary().args(["defect", "--n", "5", "--k", "2"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let usage = binary().args(["defect", "--n", "5"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let help = binary().arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("verify"));
}

#[test]
fn module_examples() {
    let (code, r) = qhsd_json(&["defect", "--n", "6", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!((r["data"]["c_x"].as_i64(), r["data"]["c_sigma"].as_i64()), (Some(5), Some(4)));

    let (code, r) = qhsd_json(&["betti", "periodicity", "--file", &fixture("gr_2_5.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["cyclic"]["values"], json!([2, 0, 2, 0, 2, 0, 2, 0, 2, 0]));

    let o = qhsd(&["seidel", "--file", &fixture("segre_m2_r1.json")]);
    assert_eq!(o.exit_code, 0);
    assert!(o.stdout.contains("F term only; S = [ω]T"), "{}", o.stdout);

    let (_, r) = qhsd_json(&["betti", "gysin", "--ranks", "1,0,1"]);
    assert_eq!(r["data"]["bundle"], json!([1, 0, 0, 1]));

    let (code, r) = qhsd_json(&["betti", "transfer", "--ranks", "1,0,1,0,2,0,2,0,2,0,1,0,1", "--n", "6", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["data"]["section"], json!([1, 0, 1, 0, 2, 0, 2, 0, 1, 0, 1]));

    let (code, _) = qhsd_json(&["betti", "window", "--file", &fixture("gr_2_5.json")]);
    assert_eq!(code, 0);
    let (code, _) = qhsd_json(&["betti", "periodicity", "--ranks", "1,0,1,0,1", "--c", "1"]);
    assert_eq!(code, 0);
    let (code, r) = qhsd_json(&["betti", "periodicity", "--ranks", "1,0,2,0,1", "--c", "3"]);
    assert_eq!(code, 1);
    assert_eq!(check(&r, "cyclic_periodicity"), "fail");
}

#[test]
fn subcrit_requires_a_seed_and_is_reproducible() {
    let o = qhsd(&["subcrit", "run", "--builtin", "segre", "--starts", "5"]);
    assert_eq!(o.exit_code, 2);
    assert!(o.stderr.contains("--seed"));

    let args = ["subcrit", "run", "--model", &fixture("models/segre_p1xp2.json"), "--starts", "8", "--seed", "3", "--seeds", "2"];
    let (code, a) = qhsd_json(&args);
    assert_eq!(code, 0, "{a}");
    assert_eq!(a["seed"], 3);
    assert_eq!(a["data"]["runs"].as_array().unwrap().len(), 2);
    assert_eq!(qhsd_json(&args).1, a);
    let from_file = qhsd_json(&["subcrit", "run", "--file", &fixture("segre_p1xp2.json"), "--starts", "8", "--seed", "3", "--seeds", "2"]).1;
    assert_eq!(from_file["data"]["runs"], a["data"]["runs"]);
}

fn statuses_in_text(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| {
            let rest = l.strip_prefix('[')?;
            let (status, rest) = rest.split_once("] ")?;
            let name = rest.split(':').next()?;
            Some((status.trim().to_string(), name.to_string()))
        })
        .collect()
}

fn sample_invocations() -> Vec<Vec<String>> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        s(&["verify", "--file", &fixture("gr_2_5.json")]),
        s(&["verify", "--file", &fixture("p1xp1_paper.json")]),
        s(&["verify", "--file", &fixture("segre_p1xp2.json")]),
        s(&["invert", "--catalog", "p1xp1_monotone", "--class", "omega"]),
        s(&["invert", "--catalog", "gr2_5", "--element", "s[1]"]),
        s(&["catalog", "list"]),
        s(&["catalog", "show", "Gr(5,2)"]),
        s(&["betti", "cyclic", "--file", &fixture("cpn_3.json")]),
        s(&["betti", "oh", "--ranks", "1,1,0,0,0,0,0,1,1", "--n", "6", "--k", "2"]),
        s(&["betti", "periodicity", "--ranks", "1,0,2,0,1", "--c", "3"]),
        s(&["defect", "--n", "5", "--k", "2"]),
        s(&["seidel", "--file", &fixture("p1xp1_paper.json"), "--d-min", "0"]),
        s(&["subcrit", "run", "--builtin", "parabola", "--starts", "10", "--seed", "1"]),
        s(&["verify", "--file", "/does/not/exist.json"]),
    ]
}

#[test]
fn json_output_validates_against_the_published_schema() {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(root().join("schema/verification-report.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let mut statuses = std::collections::BTreeSet::new();
    for args in sample_invocations() {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, v) = qhsd_json(&refs);
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
        let status = v["status"].as_str().unwrap().to_string();
        assert_eq!(code, match status.as_str() { "pass" => 0, "fail" => 1, _ => 2 }, "{args:?}");
        statuses.insert(status);
    }
    assert_eq!(statuses.len(), 3, "samples should cover pass, fail and error");

    let bogus = json!({ "command": "verify", "status": "pass", "checks": [{ "name": "x", "status": "fail", "details": "" }], "data": {} });
    assert!(!validator.is_valid(&bogus));
}

#[test]
fn text_and_json_renderings_agree() {
    for args in sample_invocations() {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let text = qhsd(&refs);
        let (code, v) = qhsd_json(&refs);
        assert_eq!(text.exit_code, code, "{args:?}");
        let from_json: Vec<(String, String)> = v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["status"].as_str().unwrap().to_string(), c["name"].as_str().unwrap().to_string()))
            .collect();
        let shown = if code == 2 { &text.stderr } else { &text.stdout };
        assert_eq!(statuses_in_text(shown), from_json, "{args:?}");
        let header = shown.lines().next().unwrap();
        assert!(header.ends_with(&v["status"].as_str().unwrap().to_uppercase()) || header.contains(" (seed "), "{header}");
    }
}
