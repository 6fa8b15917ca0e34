use std::fs;
use std::process::{Command, Output};

const SPHERE: &str = r#"{"space":"i3","surface":{"kind":"builtin","name":"parabolic_sphere","params":{"p":-2}},"domain":[-1,1,-1,1]}"#;
const CYLINDER: &str = r#"{"space":"i3","surface":{"kind":"builtin","name":"cylindrical_sphere","params":{"r":1}}}"#;
const HELICOID: &str = r#"{"space":"ip3","surface":{"kind":"builtin","name":"helicoid","params":{"c":1}},"domain":[2,3,-1,1]}"#;
const PLANE: &str = r#"{"space":"i3","surface":{"kind":"graph","f":"0.5*u - v"},"domain":[-2,2,-2,2]}"#;

fn isogeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isogeo"))
        .args(args)
        .env_remove("ISOGEO_FD_STEP")
        .output()
        .expect("run isogeo")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn curvature_on_sphere_is_umbilic() {
    let o = isogeo(&["curvature", SPHERE, "--grid", "3x3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("u,v,x,y,z,K,H,disc,class,xi1,xi2,xi3\n"));
    let rows = rows(&o);
    assert_eq!(rows.len(), 9);
    for r in rows {
        assert!((f(&r[5]) - 0.25).abs() <= 1e-12);
        assert!((f(&r[6]) + 0.5).abs() <= 1e-12);
        assert_eq!(r[8], "umbilic");
    }
}

#[test]
fn cylinder_rows_are_inadmissible() {
    let o = isogeo(&["curvature", CYLINDER, "--grid", "4x3"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = rows(&o);
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r[8] == "inadmissible" && r[5].is_empty()));
}

#[test]
fn helicoid_row_at_u_2() {
    let o = isogeo(&["curvature", HELICOID, "--grid", "2x3"]);
    let first: Vec<_> = rows(&o).into_iter().filter(|r| f(&r[0]) == 2.0).collect();
    assert_eq!(first.len(), 3);
    for r in first {
        assert!((f(&r[5]) - 0.0625).abs() <= 1e-12);
        assert!(f(&r[6]).abs() <= 1e-12);
        assert_eq!(r[8], "complex");
    }
}

#[test]
fn geodesic_on_plane_is_a_straight_line() {
    for kind in ["r", "lc"] {
        let o = isogeo(&["geodesic", PLANE, "--type", kind, "--start", "-1,0.5", "--velocity", "0.4,-0.3", "--t-end", "2", "--step", "0.01"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let rows = rows(&o);
        assert_eq!(rows.len(), 201);
        for r in &rows {
            let t = f(&r[0]);
            assert!((f(&r[1]) - (-1.0 + 0.4 * t)).abs() <= 1e-12);
            assert!((f(&r[2]) - (0.5 - 0.3 * t)).abs() <= 1e-12);
        }
        assert_eq!(f(&rows.last().unwrap()[0]), 2.0);
    }
}

#[test]
fn sphere_equator_geodesic_stays_parallel() {
    let o = isogeo(&["geodesic", SPHERE, "--start", "-0.5,0", "--velocity", "1,0", "--t-end", "1", "--step", "0.001"]);
    assert_eq!(o.status.code(), Some(0));
    for r in rows(&o) {
        assert!(f(&r[8]) <= 1e-6);
        assert!(f(&r[2]).abs() <= 1e-12);
    }
}

#[test]
fn geodesic_from_lightlike_point_exits_4() {
    let spec = r#"{"space":"ip3","surface":{"kind":"builtin","name":"helicoid","params":{"c":1}},"domain":[0.5,3,-1,1]}"#;
    let o = isogeo(&["geodesic", spec, "--start", "1,0", "--velocity", "0,1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn sample_obj_and_csv() {
    let o = isogeo(&["sample", SPHERE, "--grid", "10x10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let verts: Vec<[f64; 3]> = text
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| {
            let c: Vec<f64> = l.split(' ').map(f).collect();
            [c[0], c[1], c[2]]
        })
        .collect();
    assert_eq!(verts.len(), 100);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 2 * 81);
    // p = -2: z = 1 - (x^2 + y^2) / 4
    for [x, y, z] in verts {
        assert!((z - (1.0 - (x * x + y * y) / 4.0)).abs() <= 1e-12);
    }

    let c = isogeo(&["sample", SPHERE, "--grid", "3x4", "--format", "csv"]);
    let text = stdout(&c);
    assert_eq!(text.lines().next(), Some("u,v,x,y,z"));
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn verify_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let args = ["verify", "--all-catalog", "--suite", "egregium", "--samples", "30", "--seed", "5"];
    let o = isogeo(&[&args[..], &["-o", out.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let again = isogeo(&args);
    assert_eq!(fs::read(&out).unwrap(), again.stdout);

    let report: serde_json::Value = serde_json::from_slice(&again.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["seed"], 5);
    assert!(report["checks"].as_array().unwrap().len() >= 10);
}

#[test]
fn verify_failure_exits_5() {
    let o = isogeo(&["verify", "--all-catalog", "--suite", "flatness", "--samples", "5", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(5));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn spec_from_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.json");
    fs::write(&path, SPHERE).unwrap();
    let from_file = isogeo(&["curvature", path.to_str().unwrap(), "--grid", "2x2"]);
    let inline = isogeo(&["curvature", SPHERE, "--grid", "2x2"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, inline.stdout);

    let mut child = Command::new(env!("CARGO_BIN_EXE_isogeo"))
        .args(["curvature", "-", "--grid", "2x2"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(SPHERE.as_bytes()).unwrap();
    let piped = child.wait_with_output().unwrap();
    assert_eq!(piped.stdout, inline.stdout);
}

#[test]
fn bad_input_exit_codes() {
    let bad_spec = r#"{"space":"i3","surface":{"kind":"graph","f":"u +"},"domain":[0,1,0,1]}"#;
    assert_eq!(isogeo(&["curvature", bad_spec]).status.code(), Some(2));
    assert_eq!(isogeo(&["sample", SPHERE, "--format", "ply"]).status.code(), Some(2));
    assert_eq!(isogeo(&["verify", "--all-catalog", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(isogeo(&["geodesic", PLANE, "--start", "0,0", "--velocity", "1,0", "--step", "0"]).status.code(), Some(2));
    assert_eq!(isogeo(&["curvature", "/nonexistent/spec.json"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("out.csv");
    assert_eq!(isogeo(&["curvature", SPHERE, "-o", out.to_str().unwrap()]).status.code(), Some(3));
}
