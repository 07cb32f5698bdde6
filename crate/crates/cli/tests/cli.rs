use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadowlab"))
        .args(args)
        .env("SHADOWLAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let path = dir.path().join(name);
    let path_str = path.to_str().unwrap().to_string();
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--output", &path_str]);
    let o = run(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path_str
}

#[test]
fn analyze_planar_circle_reports_two_paths() {
    let dir = TempDir::new().unwrap();
    let c = generate(&dir, "circle.json", &["--kind", "planar-circle", "--resolution", "6"]);
    let o = run(&["analyze", "--input", &c]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("SimplePath: 2"), "{text}");
    assert_eq!(text.lines().filter(|l| l.contains("SimplePath ") && l.contains("a = ")).count(), 2);
    assert!(text.lines().any(|l| l.starts_with('3') && l.contains("SimpleClosedCurve")));
}

#[test]
fn analyze_tree_fixture() {
    let dir = TempDir::new().unwrap();
    let c = generate(&dir, "tree.json", &["--kind", "tree-shadow"]);
    let text = stdout(&run(&["analyze", "--input", &c]));
    assert!(text.contains("Tree: 3, SimplePath: 0"), "{text}");
}

#[test]
fn analyze_json_output() {
    let dir = TempDir::new().unwrap();
    let c = generate(&dir, "circle.json", &["--kind", "planar-circle", "--dimension", "4", "--resolution", "8"]);
    let o = run(&["analyze", "--input", &c, "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["simple_paths"], 2);
    assert_eq!(v["counts"]["SimpleClosedCurve"], 2);
    assert_eq!(v["shadows"][0]["class"]["tag"], "SimplePath");
    assert!(v["shadows"][0]["split"]["a"].is_string());
}

#[test]
fn bad_inputs_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"dimension\": 3, \"vertices\": [").unwrap();
    let o = run(&["analyze", "--input", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid JSON"));

    let float = dir.path().join("float.json");
    std::fs::write(&float, r#"{"dimension":2,"vertices":[["0","0"],["0.5","0"],["0","1"]]}"#).unwrap();
    assert_eq!(run(&["analyze", "--input", float.to_str().unwrap()]).status.code(), Some(1));

    let bowtie = dir.path().join("bowtie.json");
    std::fs::write(&bowtie, r#"{"dimension":2,"vertices":[["0","0"],["1","1"],["1","0"],["0","1"]]}"#).unwrap();
    let o = run(&["analyze", "--input", bowtie.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not simple"));

    assert_eq!(run(&["analyze", "--input", "/nonexistent/curve.json"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["verify-theorem", "--trials", "0"]).status.code(), Some(1));
    assert_eq!(run(&["fixedpoint-demo", "--epsilon", "-1/2"]).status.code(), Some(1));
    assert_eq!(run(&["fixedpoint-demo", "--epsilon", "0.001"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_theorem_is_deterministic() {
    let args = ["verify-theorem", "--trials", "3", "--seed", "11", "--resolution", "8"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&run(&args)));
    let text = stdout(&a);
    assert!(text.starts_with("trials: 3, dimension: 3, vertices: 8, seed: 11\n"));
    assert!(text.contains("(at most 2)"));
    let o = run(&["verify-theorem", "--trials", "3", "--seed", "11", "--resolution", "8", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let total: u64 = v["histogram"].as_object().unwrap().values().map(|n| n.as_u64().unwrap()).sum();
    assert_eq!(total + v["failed"].as_array().unwrap().len() as u64, 3);
}

#[test]
fn verify_theorem_at_dimension_five() {
    let o = run(&["verify-theorem", "--trials", "4", "--dimension", "5", "--resolution", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dimension: 5"));
}

#[test]
fn compose_demo_matches_the_degree_formula() {
    let text = stdout(&run(&["compose-demo"]));
    assert!(text.contains("direct: inputs (1,3) and (5,2), k = 15, output degree (5, 6)"), "{text}");
    assert!(text.contains("swapped: inputs (2,5) and (3,1), k = 15, output degree (6, 5)"), "{text}");
    let o = run(&["compose-demo", "--seed", "9", "--resolution", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for r in v["runs"].as_array().unwrap() {
        assert_eq!(r["degree"], r["formula"]);
        assert_eq!(r["k"].as_i64().unwrap() % 2, 1);
    }
}

#[test]
fn fixedpoint_demo_prints_a_certificate() {
    let o = run(&["fixedpoint-demo", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cert = &v["certificate"];
    let deg = cert["chain"]["degree"].as_array().unwrap();
    assert_eq!(deg[0].as_i64().unwrap(), -deg[1].as_i64().unwrap());
    assert_eq!(deg[0].as_i64().unwrap().rem_euclid(2), 1);
    assert_eq!(cert["chain"]["link_gaps"][0], "0");
    assert_eq!(v["relations"].as_array().unwrap().len(), 3);
    assert_eq!(stdout(&run(&["fixedpoint-demo", "--seed", "5"])), stdout(&run(&["fixedpoint-demo", "--seed", "5"])));
}

#[test]
fn fixedpoint_demo_on_real_curves() {
    let dir = TempDir::new().unwrap();
    let circle = generate(&dir, "circle.json", &["--kind", "planar-circle"]);
    let o = run(&["fixedpoint-demo", "--input", &circle]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a simple path"));

    // A flat triangle: every shadow is a segment, so the pipeline runs to the end.
    let flat = dir.path().join("flat.json");
    std::fs::write(&flat, r#"{"dimension":3,"vertices":[["0","0","0"],["1","1","1"],["2","2","2"]]}"#).unwrap();
    let o = run(&["fixedpoint-demo", "--input", flat.to_str().unwrap(), "--epsilon", "1/100", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["epsilon"], "1/100");
    assert_eq!(v["residual_sum"], serde_json::json!(["0", "0", "0"]));
}

#[test]
fn gen_is_reproducible_and_round_trips() {
    let a = stdout(&run(&["gen", "--seed", "3"]));
    assert_eq!(a, stdout(&run(&["gen", "--seed", "3"])));
    assert_ne!(a, stdout(&run(&["gen", "--seed", "4"])));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 12);
    assert_eq!(run(&["gen", "--kind", "planar-circle", "--resolution", "2"]).status.code(), Some(1));
}

fn plot(curve: &str, axis: &str, out: &Path) -> Output {
    run(&["plot", "--input", curve, "--axis", axis, "--output", out.to_str().unwrap()])
}

#[test]
fn plot_marks_endpoints_and_branches() {
    let dir = TempDir::new().unwrap();
    let circle = generate(&dir, "circle.json", &["--kind", "planar-circle"]);
    let svg_path = dir.path().join("x1.svg");
    assert_eq!(plot(&circle, "1", &svg_path).status.code(), Some(0));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert_eq!(svg.matches(r#"class="endpoint""#).count(), 2);

    let tree = generate(&dir, "tree.json", &["--kind", "tree-shadow"]);
    for axis in ["1", "2", "3"] {
        let p = dir.path().join(format!("t{axis}.svg"));
        assert_eq!(plot(&tree, axis, &p).status.code(), Some(0));
        assert!(std::fs::read_to_string(&p).unwrap().contains(r#"class="branch""#));
    }
    assert_eq!(plot(&circle, "5", &dir.path().join("bad.svg")).status.code(), Some(1));
    assert_eq!(plot(&circle, "1", Path::new("/nonexistent/dir/out.svg")).status.code(), Some(1));
    let flat = generate(&dir, "flat.json", &["--kind", "planar-circle", "--dimension", "4"]);
    assert_eq!(plot(&flat, "1", &dir.path().join("d4.svg")).status.code(), Some(1));
}
