//! Frozen reports. Regenerate a file with the command in its table entry
//! only after checking the change by hand.

use std::path::Path;
use std::process::Command;

use n3l::claims::{reverify, run_claim, ClaimReport};
use n3l::rational::int;

const CASES: &[(&str, &[&str])] = &[
    ("decider_k4_d2.json", &["claims", "--claim", "decider", "--max-coord", "4", "--d", "2"]),
    ("ballnest_k8_d2.json", &["claims", "--claim", "ballnest", "--max-coord", "8", "--d", "2"]),
    ("admissible_k5_d2.json", &["claims", "--claim", "admissible", "--max-coord", "5", "--d", "2"]),
    ("involution_k8_d3.json", &["claims", "--claim", "involution", "--max-coord", "8", "--d", "3"]),
    ("cornerstone_k4_d2.json", &["claims", "--claim", "cornerstone", "--max-coord", "4", "--d", "2"]),
    ("gapshell_n5_d2.json", &["claims", "--claim", "gapshell", "--n", "5", "--d", "2"]),
    ("sphere_n10_d3.json", &["construct", "--method", "sphere", "--n", "10", "--d", "3"]),
    ("greedy_n3_d2_s0.json", &["construct", "--method", "greedy", "--n", "3", "--d", "2", "--seed", "0"]),
    ("greedy_n10_d2_s1.json", &["construct", "--method", "greedy", "--n", "10", "--d", "2", "--seed", "1"]),
    ("erdos_n10.json", &["construct", "--method", "erdos", "--n", "10", "--d", "2"]),
    ("solve_n5_d2.json", &["solve", "--n", "5", "--d", "2"]),
    ("table_d2.csv", &["table", "--n-from", "2", "--n-to", "8", "--d", "2", "--sources", "exact,sphere,erdos,greedy"]),
];

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn cli_output_matches_frozen_files() {
    for (name, args) in CASES {
        let out = Command::new(env!("CARGO_BIN_EXE_n3l")).args(*args).env("N3L_THREADS", "2").output().unwrap();
        assert!(out.status.success(), "{args:?}");
        assert_eq!(String::from_utf8(out.stdout).unwrap(), golden(name), "{name}");
    }
}

#[test]
fn frozen_claim_reports_reverify() {
    for (name, args) in CASES.iter().filter(|(_, a)| a[0] == "claims" && a[2] != "gapshell") {
        let report: ClaimReport = serde_json::from_str(&golden(name)).unwrap();
        let fresh = run_claim(report.claim, report.domain.dim, report.domain.max_coord, report.domain.scale.value().clone(), None, None).unwrap();
        assert_eq!(fresh, report, "{args:?}");
        for cx in &report.counterexamples {
            assert!(reverify(report.claim, &report.domain, cx).unwrap(), "{name}: {cx:?}");
        }
    }
}

#[test]
fn frozen_values() {
    let sphere: serde_json::Value = serde_json::from_str(&golden("sphere_n10_d3.json")).unwrap();
    assert_eq!(sphere["count"], 72);
    assert_eq!(sphere["params"]["center"], "11/2,11/2,11/2");
    assert_eq!(sphere["params"]["r2"], "59/4");
    let greedy: serde_json::Value = serde_json::from_str(&golden("greedy_n3_d2_s0.json")).unwrap();
    assert_eq!(greedy["points"], serde_json::json!([[1, 1], [1, 2], [2, 1], [2, 2]]));
    let shell: ClaimReport = serde_json::from_str(&golden("gapshell_n5_d2.json")).unwrap();
    let section = shell.gap_shell.unwrap();
    assert!(section.members.is_empty());
    assert_eq!(section.target, int(625));
    let ballnest: ClaimReport = serde_json::from_str(&golden("ballnest_k8_d2.json")).unwrap();
    assert_eq!((ballnest.total_counterexamples, ballnest.counterexamples.len(), ballnest.truncated), (175, 100, true));
}
