use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn cplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cplab")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn validate_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = cplab(&["validate", p(&corpus("genus2_midpoint.json")), "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    let v = json(&out);
    assert_eq!(v["validation"]["passes"], true);
    assert_eq!(v["tool"], "cplab");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    let o = cplab(&["check", p(&corpus("genus2_midpoint.json")), p(&corpus("theta_pi_over_2.json"))]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["admissible"], true);

    let out = dir.path().join("c.json");
    let o = cplab(&["check", p(&corpus("genus2_midpoint.json")), p(&corpus("theta_face_violation.json")), "--out", p(&out)]);
    assert_eq!(code(&o), 1);
    let v = json(&out);
    assert!(!v["verdict"]["face_violations"].as_array().unwrap().is_empty());
}

#[test]
fn input_errors_exit_two() {
    let theta = corpus("theta_pi_over_2.json");
    assert_eq!(code(&cplab(&["check", p(&corpus("malformed.json")), p(&theta)])), 2);
    assert_eq!(code(&cplab(&["check", "/nonexistent.json", p(&theta)])), 2);
    assert_eq!(code(&cplab(&["frobnicate"])), 2);
    // angles for a different complex
    assert_eq!(code(&cplab(&["check", p(&corpus("cube.json")), p(&theta)])), 2);
    assert_eq!(code(&cplab(&["hull", p(&corpus("concyclic_points.json"))])), 2);
    assert_eq!(code(&cplab(&["hull", p(&corpus("octahedron_points.json")), "--center", "nope"])), 2);
    assert_eq!(code(&cplab(&["--help"])), 0);
}

#[test]
fn solve_warm_start_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let c = corpus("genus2_midpoint.json");
    let t = corpus("theta_pi_over_2.json");
    let s = dir.path().join("s.json");
    assert_eq!(code(&cplab(&["solve", p(&c), p(&t), "--out", p(&s)])), 0);
    let v = json(&s);
    assert!(v["residual_norm"].as_f64().unwrap() < 1e-10);
    assert!(v["tangent_dimension"].is_u64());
    assert_eq!(v["tolerances"]["tol"], 1e-10);

    let s2 = dir.path().join("s2.json");
    assert_eq!(code(&cplab(&["solve", p(&c), p(&t), "--warm-start", p(&s), "--out", p(&s2)])), 0);
    assert_eq!(json(&s2)["iterations"], 0);

    assert_eq!(code(&cplab(&["solve", p(&c), p(&corpus("theta_face_violation.json"))])), 1);
    assert_eq!(code(&cplab(&["solve", p(&c), p(&t), "--max-iter", "1", "--restarts", "0"])), 3);
}

#[test]
fn develop_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let c = corpus("genus2_midpoint.json");
    let t = corpus("theta_pi_over_2.json");
    let s = dir.path().join("s.json");
    assert_eq!(code(&cplab(&["solve", p(&c), p(&t), "--out", p(&s)])), 0);

    let d = dir.path().join("d.json");
    let svg = dir.path().join("d.svg");
    let o = cplab(&["develop", p(&c), p(&t), p(&s), "--svg", p(&svg), "--out", p(&d)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&d);
    assert_eq!(v["delaunay"]["passes"], true);
    assert!(v["max_angle_error"].as_f64().unwrap() < 1e-8);

    // render of the report matches the figure written by develop
    let r = dir.path().join("r.svg");
    assert_eq!(code(&cplab(&["render", p(&d), "--out", p(&r)])), 0);
    assert_eq!(std::fs::read(&r).unwrap(), std::fs::read(&svg).unwrap());

    let base = std::fs::read_to_string(&r).unwrap();
    let n_circles = v["pattern"]["circles"].as_array().unwrap().len();
    let drawn = base.matches("<circle ").count() + base.matches("<line ").count();
    let dots = v["pattern"]["vertices"].as_array().unwrap().iter().filter(|x| x.is_array()).count();
    assert_eq!(drawn, n_circles + dots);
    let o = cplab(&["render", p(&d), "--copies", "1"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.len() > base.len());

    assert_eq!(code(&cplab(&["develop", p(&c), p(&t), p(&corpus("genus2_unbalanced_shears.json"))])), 4);
}

#[test]
fn octahedron_hull_figure() {
    let o = cplab(&["hull", p(&corpus("octahedron_points.json"))]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pattern"]["circles"].as_array().unwrap().len(), 8);
    for e in v["edges"].as_array().unwrap() {
        assert!((e["angle"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o.svg");
    assert_eq!(code(&cplab(&["hull", p(&corpus("octahedron_points.json")), "--svg", p(&path)])), 0);
    let svg = std::fs::read_to_string(&path).unwrap();
    let shapes = svg.matches("<circle ").count() + svg.matches("<line ").count();
    // eight circles (four through infinity) and five finite vertex dots
    assert_eq!(shapes, 13);
}

#[test]
fn hull_output_feeds_check() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    assert_eq!(code(&cplab(&["hull", p(&corpus("scattered_points.json")), "--out", p(&h)])), 0);
    let v = json(&h);
    let c = dir.path().join("c.json");
    let t = dir.path().join("t.json");
    std::fs::write(&c, v["complex"].to_string()).unwrap();
    std::fs::write(&t, serde_json::json!({"theta": v["theta"]["theta"]}).to_string()).unwrap();
    assert_eq!(code(&cplab(&["check", p(&c), p(&t)])), 0);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let c = corpus("genus2_midpoint.json");
    let t = corpus("theta_pi_over_2.json");
    let run = |k: usize| {
        let s = dir.path().join(format!("s{k}.json"));
        let d = dir.path().join(format!("d{k}.json"));
        let svg = dir.path().join(format!("d{k}.svg"));
        assert_eq!(code(&cplab(&["solve", p(&c), p(&t), "--seed", "7", "--out", p(&s)])), 0);
        assert_eq!(code(&cplab(&["develop", p(&c), p(&t), p(&s), "--svg", p(&svg), "--copies", "2", "--out", p(&d)])), 0);
        let h = cplab(&["hull", p(&corpus("scattered_points.json"))]).stdout;
        (std::fs::read(&s).unwrap(), std::fs::read(&svg).unwrap(), h)
    };
    let (s0, svg0, h0) = run(0);
    let (s1, svg1, h1) = run(1);
    assert_eq!(s0, s1);
    assert_eq!(svg0, svg1);
    assert_eq!(h0, h1);
}
