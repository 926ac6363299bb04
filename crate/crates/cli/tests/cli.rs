use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nonabcoh::betti::{surface_group, Representation};
use nonabcoh::cech::CoverNerve;
use nonabcoh::complexes;
use nonabcoh::io;
use nonabcoh::lattice::{connection_with_holonomies, TriangulatedSurface};
use nonabcoh::localsys::GCocycle;
use nonabcoh::numkit::{gq, GaussianRational, Matrix, C64};
use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nonabcoh"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, io::to_pretty(v)).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn torus_nerve() -> CoverNerve {
    CoverNerve::from_triangulation(&complexes::torus())
}

#[test]
fn zero_system_has_identity_monodromy() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "sys.json", &json!({"rank": 2, "A0": [[0, 0], [0, 0]], "A1": [[0, 0], [0, 0]]}));
    let out = run(&["fuchsian", "monodromy", s(&sys)], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let m = &r["result"]["monodromy"];
    for key in ["C0", "C1", "Cinf"] {
        let c = io::matrix_from_json::<C64>(&m[key], "").unwrap();
        assert!(c.is_identity(0.0), "{key}");
    }
    assert_eq!(m["residualIdentityError"].as_f64(), Some(0.0));
    assert_eq!(r["tolerance"].as_f64(), Some(1e-9));
    assert_eq!(r["inputs"][s(&sys)].as_str().unwrap().len(), 64);
}

#[test]
fn torus_cohomology_over_c() {
    let dir = TempDir::new().unwrap();
    let nerve = write(&dir, "torus.json", &io::nerve_to_json(&torus_nerve()));
    let out = run(&["cech", "cohomology", s(&nerve), "--coefficients", "C"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let ranks: Vec<u64> = report(&out)["result"]["degrees"].as_array().unwrap().iter().map(|d| d["freeRank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [1, 2, 1]);
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"n\": 3,\n  \"maximalSimplices\": [[0,1,2]\n}").unwrap();
    let out = run(&["cech", "cohomology", s(&p)], &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3, column 1"), "{err}");
}

#[test]
fn unknown_field_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "sys.json", &json!({"rank": 1, "A0": [[0]], "A1": [[0]], "A2": [[0]]}));
    let out = run(&["fuchsian", "monodromy", s(&p)], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown field \"A2\""));
    let missing = run(&["fuchsian", "monodromy", s(&dir.path().join("absent.json"))], &[]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "sys.json", &json!({"rank": 2, "A0": [["1/3", "1/7"], [0, "-1/4"]], "A1": [["1/5", 0], ["2/9", "1/6"]]}));
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(run(&["fuchsian", "monodromy", s(&sys), "--output", s(&a)], &[]).status.code(), Some(0));
    assert_eq!(run(&["fuchsian", "monodromy", s(&sys), "--output", s(&b)], &[("NONABCOH_THREADS", "1")]).status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn broken_cocycle_fails_validation() {
    let dir = TempDir::new().unwrap();
    let n = torus_nerve();
    let nerve = write(&dir, "nerve.json", &io::nerve_to_json(&n));
    let good = GCocycle::<GaussianRational>::identity(&n, 1);
    let ok = write(&dir, "ok.json", &io::gcocycle_to_json(&good));
    assert_eq!(run(&["localsys", "validate", s(&nerve), s(&ok)], &[]).status.code(), Some(0));
    let mut bad = io::gcocycle_to_json(&good);
    bad["transitions"]["0,1"] = json!([["2"]]);
    let bad = write(&dir, "bad.json", &bad);
    let out = run(&["localsys", "validate", s(&nerve), s(&bad)], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["result"]["valid"], json!(false));
}

#[test]
fn betti_cech_round_trip_is_exact() {
    let dir = TempDir::new().unwrap();
    let nerve = write(&dir, "nerve.json", &io::nerve_to_json(&torus_nerve()));
    let a = Matrix::from_rows(vec![vec![gq(2, 1), gq(1, 1)], vec![gq(1, 1), gq(1, 1)]]).unwrap();
    let rep = Representation::new(surface_group(1).unwrap(), vec![a.clone(), a.pow(3).unwrap()]).unwrap();
    let rep = write(&dir, "rep.json", &io::representation_to_json(&rep));
    let out = run(&["equiv", "betti-cech", s(&nerve), s(&rep)], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["exactEqual"], json!(true));
    assert_eq!(r["mode"], json!("exact"));
}

#[test]
fn lattice_moduli_and_three_way_agreement() {
    let dir = TempDir::new().unwrap();
    let surface = TriangulatedSurface::from_triangulation(&complexes::torus()).unwrap();
    let targets = [C64::from_polar(1.5, 0.3), C64::from_polar(0.8, -2.0)];
    let conn = connection_with_holonomies(&surface, &targets).unwrap();
    let sp = write(&dir, "surface.json", &io::surface_to_json(&surface));
    let cp = write(&dir, "conn.json", &io::connection_to_json(&conn));
    let out = run(&["lattice", "moduli", s(&sp), s(&cp), "--mode", "float"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let coords: Vec<C64> = report(&out)["result"]["coordinates"].as_array().unwrap().iter().map(|v| io::JsonScalar::from_json(v, "").unwrap()).collect();
    for (c, t) in coords.iter().zip(&targets) {
        assert!((c - t).norm() < 1e-10);
    }

    let n = surface.nerve();
    let u = nonabcoh::equivalences::cocycle_with_moduli(&n, &targets).unwrap();
    let up = write(&dir, "u.json", &io::multiplicative_cochain_to_json(&n, &u));
    let out = run(&["equiv", "cech-lattice", s(&sp), s(&up)], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(report(&out)["result"]["maxDiscrepancy"].as_f64().unwrap() < 1e-10);
}

#[test]
fn zero_lambda_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "sys.json", &json!({"rank": 1, "A0": [["1/3"]], "A1": [[0]]}));
    let out = run(&["fuchsian", "lambda", s(&sys), "--lambda", "0"], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda = 0"));
    let out = run(&["fuchsian", "lambda", s(&sys), "--lambda", "2", "--lambda", r#"{"re": 0, "im": 1}"#], &[]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn hypergeometric_report_passes() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.json", &json!({"a": 0.3, "b": 0.45, "c": 0.7}));
    let out = run(&["fuchsian", "hypergeometric", s(&p)], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn unipotent_rep_is_flagged_with_verified_witness() {
    let dir = TempDir::new().unwrap();
    let rep = write(&dir, "rep.json", &json!({"rank": 2, "images": [[[1, 1], [0, 1]], [[1, 0], [0, 1]]]}));
    let out = run(&["betti", "reductivity", s(&rep)], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["status"], json!("nonReductive"));
    assert_eq!(r["result"]["witnessVerified"], json!(true));
    let check = run(&["betti", "check", s(&rep)], &[]);
    assert_eq!(check.status.code(), Some(0));
}
