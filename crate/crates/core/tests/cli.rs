use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn helicat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helicat")).args(args).output().expect("helicat runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn obj_vertices(path: &Path) -> Vec<[f64; 3]> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| l.starts_with("v "))
        .map(|l| {
            let v: Vec<f64> = l[2..].split(' ').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect()
}

/// Data rows of a profile CSV as (s, rho, a, theta, H_s).
fn profile_rows(path: &Path) -> Vec<[f64; 5]> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.split("\r\n").filter(|l| !l.is_empty() && !l.starts_with('#'));
    assert_eq!(lines.next(), Some("s,rho,a,theta,H_s"));
    lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2], v[3], v[4]]
        })
        .collect()
}

fn report_check(path: &Path, name: &str) -> (f64, bool) {
    let r: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let c = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap();
    (c["max_residual"].as_f64().unwrap(), c["pass"].as_bool().unwrap())
}

#[test]
fn list_catalog() {
    let o = helicat(&["list", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["helicoids"].as_array().unwrap().len() >= 12);
    assert_eq!(v["catenoids"].as_array().unwrap().len(), 5);

    let o = helicat(&["list", "--kind", "catenoid"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for k in ["spheres_euclidean", "spheres_hyperbolic", "spheres_spherical", "horospheres_hyperbolic", "equidistants_hyperbolic"] {
        assert!(text.contains(k), "{k} missing");
    }
    assert!(!text.contains("r3_helicoid"));
    assert_eq!(code(&helicat(&["list", "--kind", "cylinders"])), 2);
}

#[test]
fn build_twisted_plane_grid_arithmetic() {
    let d = tmp();
    let out = d.path().join("tp.obj");
    let o = helicat(&["build", "twisted_plane", "--params", "a=1,k=2", "--grid", "64x64x32", "--out", arg(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(obj_vertices(&out).len(), 64 * 64 * 32);
    let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
    assert_eq!(csv.split("\r\n").filter(|l| !l.is_empty()).count(), 64 * 64 * 32 + 1);
    // R^3 x R has four coordinates: projected with a warning
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    // no temporary files left next to the outputs
    assert_eq!(std::fs::read_dir(d.path()).unwrap().count(), 2);
}

#[test]
fn build_hyperbolic_catenoid_is_reflection_symmetric() {
    let d = tmp();
    let out = d.path().join("cat.obj");
    let o = helicat(&["build", "spheres_hyperbolic", "--params", "n=2,r=1,mode=reflect", "--grid", "16x12", "--out", arg(&out)]);
    assert_eq!(code(&o), 0);
    let v = obj_vertices(&out);
    let half = v.len() / 2;
    assert_eq!(half, 16 * 12);
    let mut worst = 0.0f64;
    for i in 0..half {
        let (p, q) = (v[i], v[i + half]);
        worst = worst.max((p[0] - q[0]).abs()).max((p[1] - q[1]).abs()).max((p[2] + q[2]).abs());
    }
    assert!(worst <= 1e-10, "{worst}");
    // Poincare disc coordinates stay inside the unit disc
    assert!(v.iter().all(|p| p[0] * p[0] + p[1] * p[1] < 1.0));
}

#[test]
fn build_berger_writes_mesh_and_scalars() {
    let d = tmp();
    let out = d.path().join("b.obj");
    let o = helicat(&["build", "berger_helicoid", "--params", "alpha=1,a=1,delta=0.8", "--grid", "8", "--out", arg(&out)]);
    assert_eq!(code(&o), 0);
    let obj = std::fs::read_to_string(&out).unwrap();
    let faces = obj.lines().filter(|l| l.starts_with("f ")).count();
    assert_eq!(faces, 2 * 7 * 7 * 8);
    let n = obj_vertices(&out).len();
    for l in obj.lines().filter(|l| l.starts_with("f ")) {
        assert!(l[2..].split(' ').all(|i| (1..=n).contains(&i.parse::<usize>().unwrap())));
    }
    let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
    assert!(csv.starts_with("vertex,theta,h_residual,causal\r\n"));
}

#[test]
fn build_rejects_bad_specs() {
    let d = tmp();
    let out = d.path().join("x.obj");
    assert_eq!(code(&helicat(&["build", "nope", "--out", arg(&out)])), 2);
    assert_eq!(code(&helicat(&["build", "r3_helicoid", "--grid", "1x4", "--out", arg(&out)])), 2);
    assert_eq!(code(&helicat(&["build", "r3_helicoid", "--grid", "4x4x4", "--out", arg(&out)])), 2);
    assert_eq!(code(&helicat(&["build", "r3_helicoid", "--params", "a=-1", "--out", arg(&out)])), 2);
    assert!(!out.exists());
}

#[test]
fn verify_helicoid_passes() {
    let d = tmp();
    let out = d.path().join("r.json");
    let o = helicat(&["verify", "r3_helicoid", "--params", "a=1", "--out", arg(&out)]);
    assert_eq!(code(&o), 0);
    let (h, pass) = report_check(&out, "minimal");
    assert!(pass && h <= 1e-8);
}

#[test]
fn verify_lorentz_identity_suite() {
    let d = tmp();
    let out = d.path().join("l.json");
    let o = helicat(&["verify", "lorentz-identity", "--samples", "200", "--seed", "42", "--out", arg(&out)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let (r, pass) = report_check(&out, "lorentz_identity");
    assert!(pass && r <= 1e-6);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["environment"]["seed"], "42");
}

#[test]
fn negative_controls_exit_nonzero() {
    assert_eq!(code(&helicat(&["verify", "parabola_graph", "--grid", "6"])), 1);
    assert_eq!(code(&helicat(&["verify", "spheres_euclidean", "--params", "perturb=0.05", "--grid", "6"])), 1);
}

#[test]
fn exit_status_contract() {
    assert_eq!(code(&helicat(&["verify", "r3_helicoid", "--tol", "bogus=1"])), 2);
    assert_eq!(code(&helicat(&["verify", "r3_helicoid", "--jet", "spline"])), 2);
    assert_eq!(code(&helicat(&["frobnicate"])), 2);
    // no minimal branch with this mean curvature: numerical failure
    assert_eq!(code(&helicat(&["profile", "spheres_hyperbolic", "--params", "h=5"])), 3);
    assert_eq!(code(&helicat(&["--help"])), 0);
}

#[test]
fn profile_hyperbolic_height_below_slab() {
    let d = tmp();
    let out = d.path().join("p.csv");
    let o = helicat(&["profile", "spheres_hyperbolic", "--params", "n=3,r=1", "--out", arg(&out)]);
    assert_eq!(code(&o), 0);
    let rows = profile_rows(&out);
    let last = rows.last().unwrap();
    assert!(last[2] > 0.0 && last[2] < std::f64::consts::FRAC_PI_4);
}

#[test]
fn profile_horosphere_matches_arcsin() {
    let d = tmp();
    let out = d.path().join("h.csv");
    assert_eq!(code(&helicat(&["profile", "horospheres_hyperbolic", "--params", "n=2", "--out", arg(&out)])), 0);
    let rows = profile_rows(&out);
    assert_eq!(rows.len(), 4097);
    let worst = rows
        .iter()
        .map(|r| (r[2] - (r[0].exp().asin() - std::f64::consts::FRAC_PI_2)).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst}");
    assert!(rows.iter().all(|r| (r[4] - 1.0).abs() == 0.0));
}

#[test]
fn profile_spherical_prints_t2() {
    let d = tmp();
    let out = d.path().join("s.csv");
    assert_eq!(code(&helicat(&["profile", "spheres_spherical", "--params", "n=3", "--out", arg(&out)])), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let t2: f64 = text
        .split("\r\n")
        .find_map(|l| l.strip_prefix("# t2 = "))
        .expect("t2 line")
        .parse()
        .unwrap();
    let rows = profile_rows(&out);
    assert!(t2.is_finite() && t2 > 0.0);
    assert_eq!(t2, rows.last().unwrap()[2]);
    assert!((rows.last().unwrap()[0] - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-15);
}

fn write_report(d: &Path, name: &str, args: &[&str]) -> PathBuf {
    let out = d.join(name);
    let mut a = args.to_vec();
    a.extend(["--out", arg(&out)]);
    helicat(&a);
    out
}

#[test]
fn report_aggregates() {
    let d = tmp();
    let a = write_report(d.path(), "a.json", &["verify", "r3_helicoid", "--grid", "6"]);
    let b = write_report(d.path(), "b.json", &["verify", "s2xr", "--grid", "6"]);
    let c = write_report(d.path(), "c.json", &["verify", "parabola_graph", "--grid", "6"]);
    assert_eq!(code(&helicat(&["report", arg(&a), arg(&b)])), 0);
    let o = helicat(&["report", arg(&a), arg(&c), "--json"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], false);
    let failing = v["reports"][1]["failing"].as_array().unwrap();
    assert!(failing.iter().any(|f| f == "graph_minimal"));
    assert_eq!(code(&helicat(&["report"])), 2);
    assert_eq!(code(&helicat(&["report", arg(&d.path().join("missing.json"))])), 2);
}

#[test]
fn config_file_and_flag_override() {
    let d = tmp();
    let cfg = d.path().join("c.toml");
    std::fs::write(&cfg, "kind = \"r3_helicoid\"\ngrid = \"5x5\"\n[params]\na = 2\n[tol]\nminimal = 1e-9\n").unwrap();
    let out = d.path().join("r.json");
    let o = helicat(&["verify", "--config", arg(&cfg), "--grid", "7", "--out", arg(&out)]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["params"], "a=2");
    assert_eq!(v["environment"]["grid"], "[7, 7]");
    let minimal = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "minimal").unwrap();
    assert_eq!(minimal["tolerance"], 1e-9);
    std::fs::write(&cfg, "kind = \"r3_helicoid\"\nbogus = 1\n").unwrap();
    assert_eq!(code(&helicat(&["verify", "--config", arg(&cfg)])), 2);
}

#[test]
fn outputs_are_deterministic() {
    let d = tmp();
    let run = |name: &str| {
        let out = d.path().join(name);
        helicat(&["verify", "spheres_spherical", "--grid", "4x4x6", "--out", arg(&out)]);
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
    let mesh = |name: &str| {
        let out = d.path().join(name);
        helicat(&["build", "h2xr", "--grid", "9", "--out", arg(&out)]);
        (std::fs::read(&out).unwrap(), std::fs::read(out.with_extension("csv")).unwrap())
    };
    assert_eq!(mesh("m1.obj"), mesh("m2.obj"));
}
