use std::process::{Command, Output};

use heatlie::derivations::{DerivationTable, FirstOrderForm};
use heatlie::psi::PsiPoly;
use heatlie::{build_q, GenusContext, JsonForm, SchrodingerOperator};
use serde_json::Value;

fn heatlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatlie")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).expect("one JSON document per line")).collect()
}

#[test]
fn gen_genus_one_text() {
    let o = heatlie(&["gen", "--genus", "1", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("H_0 = z1 d1 - 1"), "{out}");
    assert!(out.contains("H_2 = 1/2 d1^2 - 1/6 l4 z1^2"), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(heatlie(&["gen", "--genus", "0"]).status.code(), Some(2));
    assert_eq!(heatlie(&["gen", "--genus", "x"]).status.code(), Some(2));
    assert_eq!(heatlie(&["gen", "--genus", "2", "--only", "4"]).status.code(), Some(2));
    assert_eq!(heatlie(&["bracket", "--genus", "2", "0", "7"]).status.code(), Some(2));
    assert_eq!(heatlie(&["fixtures", "--genus", "5"]).status.code(), Some(2));
    assert_eq!(heatlie(&["verify", "--genus", "2", "--only", "1"]).status.code(), Some(2));
    assert_eq!(heatlie(&["gen", "--genus", "2", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn verify_genus_two_passes() {
    let o = heatlie(&["verify", "--genus", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for suite in ["lemma33: pass", "q-structure: pass", "golden: pass"] {
        assert!(out.contains(suite), "missing `{suite}` in\n{out}");
    }
}

#[test]
fn verify_json_lines() {
    let o = heatlie(&["verify", "--genus", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    let summaries: Vec<&Value> = lines.iter().filter(|v| v["type"] == "summary").collect();
    assert!(summaries.iter().all(|v| v["status"] == "pass" && v["failed"] == 0));
    assert!(summaries.iter().any(|v| v["suite"] == "golden"));
    let findings: Vec<&Value> = lines.iter().filter(|v| v["type"] == "finding").collect();
    assert!(findings.iter().any(|v| v["kind"] == "sign-question"));
    let typos = findings.iter().filter(|v| v["kind"] == "paper-typo-candidate").count();
    assert_eq!(typos, 4);
    assert!(lines.iter().filter(|v| v["type"] == "check").all(|v| v["passed"] == true));
}

#[test]
fn gen_json_round_trips() {
    let o = heatlie(&["gen", "--genus", "3", "--format", "json", "--only", "0,2,5"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 3);
    let ctx = GenusContext::new(3).unwrap();
    for (v, k) in lines.iter().zip([0, 2, 5]) {
        assert_eq!(v["k"], k);
        let q = SchrodingerOperator::from_json(&v["operator"]).unwrap();
        assert_eq!(q, build_q(&ctx, k).unwrap());
    }
}

#[test]
fn derive_json_round_trips() {
    let o = heatlie(&["derive", "--genus", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let table = DerivationTable::compute(&GenusContext::new(2).unwrap()).unwrap();
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 4 + 8);
    for v in &lines {
        let k = v["k"].as_u64().unwrap() as usize;
        match v["type"].as_str().unwrap() {
            "derivation" => assert_eq!(FirstOrderForm::from_json(&v["operator"]).unwrap(), table.operators[k].form()),
            "w" => {
                let j = v["j"].as_u64().unwrap() as u32;
                assert_eq!(PsiPoly::from_json(&v["value"]).unwrap(), table.w[&(2 * k as u32, j)]);
            }
            t => panic!("unexpected line type {t}"),
        }
    }
}

#[test]
fn bracket_expansion() {
    let o = heatlie(&["bracket", "--genus", "2", "1", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("[Q_2, Q_4] = 8/5 l6 Q_0 - 8/5 l4 Q_2 + 2 Q_6"), "{out}");
    assert!(out.contains("identity: pass"));
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = std::env::temp_dir().join(format!("heatlie-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("derive.txt");
    let o = heatlie(&["derive", "--genus", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let first = std::fs::read(&path).unwrap();
    let again = heatlie(&["derive", "--genus", "3"]);
    assert_eq!(first, again.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fixtures_from_directory() {
    let dir = std::env::temp_dir().join(format!("heatlie-fixtures-test-{}", std::process::id()));
    let g1 = dir.join("g1");
    std::fs::create_dir_all(&g1).unwrap();
    std::fs::write(g1.join("H.txt"), "genus 1, H_0\nz1 d1 - 1\n").unwrap();
    let o = heatlie(&["fixtures", "--genus", "1", "--fixtures-dir", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // a wrong table fails with exit status 1
    std::fs::write(g1.join("H.txt"), "genus 1, H_0\nz1 d1 + 1\n").unwrap();
    let o = heatlie(&["fixtures", "--genus", "1", "--fixtures-dir", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("golden: fail"));
    std::fs::remove_dir_all(&dir).unwrap();
}
