use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_alexandrov");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).args(args).current_dir(dir).env("ALEXANDROV_THREADS", "2").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn cube_gauss_bonnet() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["surface", "gauss-bonnet", "--preset", "cube"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("total curvature: 12.5663706"), "{text}");
    assert!(text.contains("euler characteristic: 2"), "{text}");
}

#[test]
fn lantern_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["lab", "lantern", "--r", "1", "--h", "1", "--ladder", "n=8..32", "--out", "lantern.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("lantern.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,area,target,error");
    assert_eq!(lines.len(), 4);
    let areas: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(areas.windows(2).all(|w| w[1] < w[0]));
    assert!(areas.iter().all(|&a| a > 2.0 * std::f64::consts::PI));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("lantern.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["verb"], "lab lantern");
    assert_eq!(manifest["options"]["rows"], "equal");
}

#[test]
fn cusp_atom_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let tau = 2.0 * std::f64::consts::PI;
    let json = format!(
        r#"{{"background":"torus","atoms":[{{"point":[0.5,0.5,0],"mass":{tau}}},{{"point":[0.1,0.1,0],"mass":{}}}]}}"#,
        -tau
    );
    fs::write(dir.path().join("cusp.json"), json).unwrap();
    let o = run(dir.path(), &["prescribe", "build", "--in", "cusp.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("CuspAtom"), "{}", stderr(&o));
}

#[test]
fn gauss_bonnet_violation_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), r#"{"background":"sphere","atoms":[{"point":[0,0,1],"mass":1.0}]}"#)
        .unwrap();
    let o = run(dir.path(), &["prescribe", "build", "--in", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("GaussBonnetViolation"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["surface", "frobnicate"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["prescribe", "build"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["lab", "lantern", "--r", "abc"]).status.code(), Some(2));
    let o = run(dir.path(), &["lab", "lantern", "--r", "1", "--h", "1", "--ladder", "m=oops"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["prescribe", "build", "--in", "absent.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("absent.json"));
}

#[test]
fn football_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let pi = std::f64::consts::PI;
    let json = format!(
        r#"{{"background":"sphere","atoms":[{{"point":[0,0,1],"mass":{pi}}},{{"point":[0,0,-1],"mass":{pi}}}],
            "smooth":{{"kind":"uniform","data":{}}}}}"#,
        2.0 * pi
    );
    fs::write(dir.path().join("football.json"), json).unwrap();
    let o = run(dir.path(), &["prescribe", "verify", "--in", "football.json", "--level", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let o = run(
        dir.path(),
        &["prescribe", "distance", "--in", "football.json", "--from", "0,0,1", "--to", "0,0,-1", "--level", "4"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let d: f64 = stdout(&o).trim().strip_prefix("distance: ").unwrap().parse().unwrap();
    assert!((d - 4.4982125).abs() < 0.01, "{d}");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args: [&[&str]; 3] = [
        &["gallery", "curvature-grid", "--example", "cone:pi", "--grid", "17", "--out", "k.csv"],
        &[
            "lab",
            "reshetnyak",
            "--ladder",
            "eps=1/4..1/8",
            "--grid",
            "24",
            "--samples",
            "4",
            "--seed",
            "11",
            "--out",
            "r.csv",
        ],
        &["surface", "curvature", "--preset", "cube", "--out", "c.json"],
    ];
    for a in args {
        let out = a[a.len() - 1];
        let manifest = format!("{out}.manifest.json");
        let mut first = None;
        for _ in 0..2 {
            let o = run(dir.path(), a);
            assert_eq!(o.status.code(), Some(0), "{a:?}: {}", stderr(&o));
            let bytes = (fs::read(dir.path().join(out)).unwrap(), fs::read(dir.path().join(&manifest)).unwrap());
            match &first {
                None => first = Some(bytes),
                Some(f) => assert_eq!(f, &bytes, "{a:?}"),
            }
        }
    }
}
