use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use scsp_core::json::{parse_problem, value_to_json};
use scsp_core::{Problem, Value};
use serde_json::Value as Json;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn scsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scsp"))
        .args(args)
        .env_remove("SCSP_BUDGET")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Json {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn solve_json(path: &Path, jobs: &str) -> Output {
    scsp(&["solve", "--problem", path.to_str().unwrap(), "--format", "json", "--jobs", jobs])
}

/// Sums the product of all constraints over every full assignment,
/// bucketed by its con-tuple. Repeated contributions are harmless since the
/// sum is idempotent.
fn fold_solution(p: &Problem) -> Vec<Value> {
    let s = p.semiring();
    let (nv, nd) = (p.system().variables().len(), p.system().domain().len());
    let nc = p.con().len();
    let mut out = vec![s.zero().clone(); nd.pow(nc as u32)];
    for code in 0..nd.pow(nv as u32) {
        let eta: Vec<usize> = (0..nv).map(|v| code / nd.pow((nv - 1 - v) as u32) % nd).collect();
        let mut val = s.one().clone();
        for c in p.constraints() {
            let t: Vec<usize> = c.scope().iter().map(|&v| eta[v]).collect();
            val = s.mul(&val, c.value(p.system(), &t));
        }
        let bucket = p.con().iter().fold(0, |acc, &v| acc * nd + eta[v]);
        out[bucket] = s.add(&out[bucket], &val);
    }
    out
}

const PROBLEMS: [&str; 7] = [
    "quasi.json",
    "fuzzy.json",
    "witness-sum-p.json",
    "witness-sum-q.json",
    "witness-prod-p.json",
    "witness-prod-q.json",
    "witness-sum-product.json",
];

#[test]
fn every_data_problem_matches_the_fold() {
    for name in PROBLEMS {
        let path = data(name);
        let p = parse_problem(&path).unwrap();
        let expected = fold_solution(&p);
        let out = solve_json(&path, "1");
        assert_eq!(out.status.code(), Some(0), "{name}");
        let j = json_of(&out);
        let table = j["solution"]["table"].as_array().unwrap();
        assert_eq!(table.len(), expected.len(), "{name}");
        let s = p.semiring();
        for (row, v) in table.iter().zip(&expected) {
            assert_eq!(row[1], value_to_json(s, v), "{name} at {}", row[0]);
        }
        // optimal rows are exactly the undominated values
        let optimal: Vec<&Json> = table
            .iter()
            .zip(&expected)
            .filter(|(_, v)| expected.iter().all(|w| w == *v || !s.le(v, w)))
            .map(|(row, _)| &row[0])
            .collect();
        let reported: Vec<&Json> = j["solution"]["optimal"].as_array().unwrap().iter().collect();
        assert_eq!(reported, optimal, "{name}");
    }
}

#[test]
fn fuzzy_example_optimum() {
    let out = solve_json(&data("fuzzy.json"), "1");
    let j = json_of(&out);
    assert_eq!(j["solution"]["optimal"], serde_json::json!([["hi", "mid"]]));
}

#[test]
fn json_output_is_identical_across_runs_and_jobs() {
    for name in PROBLEMS {
        let a = solve_json(&data(name), "1");
        let b = solve_json(&data(name), "1");
        let c = solve_json(&data(name), "8");
        assert_eq!(a.stdout, b.stdout, "{name}");
        assert_eq!(a.stdout, c.stdout, "{name}");
    }
}

#[test]
fn translate_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.json");
    let (p, alpha) = (data("quasi.json"), data("quasi-alpha.json"));
    let out = scsp(&[
        "translate",
        "--problem",
        p.to_str().unwrap(),
        "--mapping",
        alpha.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    std::fs::write(&once, serde_json::to_string(&j["problem"]).unwrap()).unwrap();
    // the translated problem parses back and solves to the abstract solution
    let solved = json_of(&solve_json(&once, "1"));
    let table = &solved["solution"]["table"];
    assert_eq!(table[0][1], serde_json::json!(["p"]));
    assert_eq!(table[3][1], serde_json::json!(["q"]));
    assert_eq!(solved["solution"]["optimal"].as_array().unwrap().len(), 2);

    // identity translation changes nothing
    let id = data("identity.json");
    let out = scsp(&["translate", "--problem", p.to_str().unwrap(), "--mapping", id.to_str().unwrap(), "--format", "json"]);
    let again = json_of(&out)["problem"].clone();
    let original: Json = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(again, original);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sol.json");
    let p = data("quasi.json");
    let out = scsp(&[
        "solve",
        "--problem",
        p.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read(&file).unwrap(), out.stdout);
}

#[test]
fn duplicate_scope_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut j: Json = serde_json::from_str(&std::fs::read_to_string(data("quasi.json")).unwrap()).unwrap();
    let first = j["constraints"][0].clone();
    j["constraints"].as_array_mut().unwrap().push(first);
    let path = dir.path().join("dup.json");
    std::fs::write(&path, j.to_string()).unwrap();
    let out = solve_json(&path, "1");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("/constraints/2/scope"), "{err}");
}

#[test]
fn missing_file_and_bad_arguments_exit_two() {
    assert_eq!(solve_json(Path::new("no-such-file.json"), "1").status.code(), Some(2));
    assert_eq!(scsp(&["check", "--semiring", "no-such-semiring"]).status.code(), Some(2));
    assert_eq!(scsp(&["verify", "--theorem", "no-such-theorem"]).status.code(), Some(2));
    // clap usage errors also exit 2
    assert_eq!(scsp(&["solve"]).status.code(), Some(2));
}

#[test]
fn budget_guards_enumeration() {
    let p = data("fuzzy.json");
    let out = scsp(&["solve", "--problem", p.to_str().unwrap(), "--budget", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn recover_reports_quasi_only_for_the_collapsing_map() {
    let (p, alpha) = (data("quasi.json"), data("quasi-alpha.json"));
    let out = scsp(&["recover", "--problem", p.to_str().unwrap(), "--mapping", alpha.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["guarantee"], "quasi-only");
    assert_eq!(j["selected"], serde_json::json!([["d1", "d1"]]));
    assert_eq!(j["abstract_optimal"].as_array().unwrap().len(), 2);
}

#[test]
fn identity_is_a_homomorphism_and_quasi_alpha_is_not() {
    let id = data("identity.json");
    let out = scsp(&["check", "--mapping", id.to_str().unwrap(), "--property", "homomorphism"]);
    assert_eq!(out.status.code(), Some(0));

    let alpha = data("quasi-alpha.json");
    let out = scsp(&["check", "--mapping", alpha.to_str().unwrap(), "--property", "homomorphism", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["verdict"], "fail");
    let out = scsp(&["check", "--mapping", alpha.to_str().unwrap(), "--property", "quasi_homomorphism"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn semiring_axioms_pass_for_builtins() {
    for name in ["boolean", "fuzzy", "probabilistic", "weighted"] {
        let out = scsp(&["check", "--semiring", name, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_ne!(json_of(&out)["verdict"], "fail");
    }
    let table = data("catalog-1.json");
    assert_eq!(scsp(&["check", "--semiring", table.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn endpoint_breaking_mapping_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let mut j: Json = serde_json::from_str(&std::fs::read_to_string(data("quasi-alpha.json")).unwrap()).unwrap();
    // send the empty set to {p}
    j["pairs"][0][1] = serde_json::json!(["p"]);
    let path = dir.path().join("bad-alpha.json");
    std::fs::write(&path, j.to_string()).unwrap();
    let (m, p) = (path.to_str().unwrap(), data("quasi.json"));

    let out = scsp(&["check", "--mapping", m, "--property", "endpoints"]);
    assert_eq!(out.status.code(), Some(1));
    let out = scsp(&["translate", "--problem", p.to_str().unwrap(), "--mapping", m]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("warning:"));
    let out = scsp(&["check", "--mapping", m, "--property", "quasi-bound", "--problem", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn quasi_bounds_through_the_cli() {
    let (alpha, p) = (data("quasi-alpha.json"), data("quasi.json"));
    let run = |prop: &str| {
        scsp(&["check", "--mapping", alpha.to_str().unwrap(), "--property", prop, "--problem", p.to_str().unwrap()])
            .status
            .code()
    };
    assert_eq!(run("quasi-bound"), Some(0));
    assert_eq!(run("strengthened-bound"), Some(1));
}

#[test]
fn verify_is_independent_of_jobs() {
    let args = |jobs: &'static str| {
        ["verify", "--theorem", "recovery", "--trials", "40", "--format", "json", "--jobs", jobs]
    };
    let a = scsp(&args("1"));
    let b = scsp(&args("8"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["reports"][0]["verdict"], "pass");
}

#[test]
fn bench_json_lists_every_instance() {
    let out = scsp(&["bench", "--vars", "5", "--domain", "3", "--instances", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["runs"].as_array().unwrap().len(), 2);
    assert_eq!(j["runs"][0]["assignments"], 243);
}
