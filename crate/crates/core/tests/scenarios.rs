use std::path::PathBuf;
use std::process::Command;

use gcsurgery::group::{Budgets, GroupTag};
use gcsurgery::scenario::{emit_report, execute_scenario, json_value, parse_scenario, print_scenario, Format, Verdict};

fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "gcs"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

fn scenario(name: &str) -> String {
    corpus().into_iter().find(|(n, _)| n == name).unwrap().1
}

#[test]
fn print_then_parse_is_a_fixed_point_on_the_corpus() {
    for (name, text) in corpus() {
        let first = parse_scenario(&name, &text).unwrap();
        let printed = print_scenario(&first);
        let second = parse_scenario(&name, &printed).unwrap_or_else(|e| panic!("{name}: {e}\n{printed}"));
        assert_eq!(first.directives_only(), second.directives_only(), "{name}");
        assert_eq!(print_scenario(&second), printed, "{name}");
    }
}

#[test]
fn every_corpus_expectation_passes() {
    for (name, text) in corpus() {
        let run = execute_scenario(&parse_scenario(&name, &text).unwrap(), Budgets::default()).unwrap();
        for e in run.expectations() {
            assert_eq!(e.verdict, Verdict::Pass, "{name}: {} expected {} got {}", e.key, e.expected, e.actual);
        }
    }
}

#[test]
fn json_is_byte_identical_across_runs() {
    for name in ["x4", "assembly_g2_r3_k2", "infinite_cyclic_g3"] {
        let script = parse_scenario(name, &scenario(name)).unwrap();
        let a = emit_report(&[execute_scenario(&script, Budgets::default()).unwrap()], Format::Json);
        let b = emit_report(&[execute_scenario(&script, Budgets::default()).unwrap()], Format::Json);
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn json_key_order_and_values_for_x4() {
    let script = parse_scenario("x4", &scenario("x4")).unwrap();
    let text = emit_report(&[execute_scenario(&script, Budgets::default()).unwrap()], Format::Json);
    // Top-level keys sit at four spaces of indentation in the pretty output.
    let top: Vec<&str> = text
        .lines()
        .filter_map(|l| l.strip_prefix("    \"").filter(|_| !l.starts_with("     ")))
        .map(|l| &l[..l.find('"').unwrap()])
        .collect();
    assert_eq!(
        &top[..15],
        [
            "name", "pi1", "e", "sigma", "b1", "b2", "b2plus", "b2minus", "spin", "structure", "loci", "twist",
            "label", "annotations", "expectations"
        ]
    );
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["loci"], 4);
    assert_eq!(v[0]["twist"], "untwisted");
    assert_eq!(v[0]["homeo"], "1(S2xS2)");
}

#[test]
fn unidentified_state_has_explicit_null_homeo() {
    let script = parse_scenario("assembly_g1_r1_k0", &scenario("assembly_g1_r1_k0")).unwrap();
    let v = json_value(&[execute_scenario(&script, Budgets::default()).unwrap()]);
    let z = &v[0];
    assert_eq!(z["pi1"]["tag"], "unknown");
    assert_eq!(z["label"], "unclassified");
    assert!(z.as_object().unwrap().contains_key("homeo"));
    assert!(z["homeo"].is_null());
}

#[test]
fn tiny_coset_budget_is_inconclusive_not_fail() {
    let script = parse_scenario("x4", &scenario("x4")).unwrap();
    let budgets = Budgets {
        max_cosets: 2,
        ..Budgets::default()
    };
    let run = execute_scenario(&script, budgets).unwrap();
    let pi1 = run.expectations().find(|e| e.key == "pi1").unwrap();
    assert_eq!(pi1.verdict, Verdict::Inconclusive);
    assert!(!run.has_failure());
    assert_eq!(run.states[0].report.identification.tag, GroupTag::Unknown);
}

#[test]
fn lens_space_product_pi1_is_identified() {
    let script = parse_scenario("xp5_1", &scenario("xp5_1")).unwrap();
    let run = execute_scenario(&script, Budgets::default()).unwrap();
    let pi1 = run.expectations().find(|e| e.key == "pi1").unwrap();
    assert_eq!((pi1.actual.as_str(), pi1.verdict), ("Z/5 + Z", Verdict::Pass));
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gcsurgery")).args(args).output().unwrap()
}

#[test]
fn cli_exit_status_reflects_failures_and_errors() {
    let dir = std::env::temp_dir().join(format!("gcsurgery-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.gcs");
    let bad = dir.join("bad.gcs");
    let broken = dir.join("broken.gcs");
    std::fs::write(&good, scenario("s3xs1")).unwrap();
    std::fs::write(&bad, "block X = t2_x_s2\nexpect X e 5\n").unwrap();
    std::fs::write(&broken, "block X = t2_x_s2\nsurgery X T (1,0)\n").unwrap();

    let ok = cli(&["run", good.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("PASS"));

    let failing = cli(&["run", "--json", good.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(failing.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&failing.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);

    let err = cli(&["run", broken.to_str().unwrap()]);
    assert_eq!(err.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&err.stderr).contains("line 2"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cli_budget_flags_are_recorded() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/x4.gcs");
    let out = cli(&["run", "--json", "--max-cosets", "2", "--tietze-budget", "7", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["budgets"]["max_cosets"], 2);
    assert_eq!(v[0]["budgets"]["tietze_budget"], 7);
    assert_eq!(v[0]["budgets"]["relator_cap"], 64);
}
