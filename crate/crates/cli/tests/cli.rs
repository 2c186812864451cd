use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sonc_core::rat;
use sonc_core::{support_partition, Exponent, SparsePoly};
use tempfile::TempDir;

fn sonc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sonc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path_str(&out)]);
    let o = sonc(&all);
    assert!(o.status.success(), "gen {args:?}: {}", String::from_utf8_lossy(&o.stderr));
    out
}

fn write_poly(dir: &Path, name: &str, f: &SparsePoly) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, f.to_json_string()).unwrap();
    p
}

fn motzkin() -> SparsePoly {
    SparsePoly::from_ints(2, &[(&[4, 2], 1), (&[2, 4], 1), (&[2, 2], -3), (&[0, 0], 1)]).unwrap()
}

fn read(p: &Path) -> SparsePoly {
    SparsePoly::from_json_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn gen_small_standard_contains_scaled_simplex() {
    let dir = TempDir::new().unwrap();
    let p = gen(dir.path(), "g.json", &["--n", "2", "--d", "6", "--t", "5", "--class", "standard-simplex", "--seed", "1"]);
    let f = read(&p);
    let lambda = support_partition(&f).lambda_set();
    for e in [[0, 0], [6, 0], [0, 6]] {
        assert!(lambda.contains(&Exponent::new(e.to_vec())), "missing {e:?} in Λ");
    }
    assert!(!support_partition(&f).gamma_set().is_empty());
}

#[test]
fn gen_rejects_too_few_terms() {
    let o = sonc(&["gen", "--n", "3", "--d", "6", "--t", "4"]);
    assert!(!o.status.success());
    assert_ne!(o.status.code(), Some(64));
}

#[test]
fn gen_arbitrary_polytope_meets_inner_count() {
    let dir = TempDir::new().unwrap();
    let p = gen(
        dir.path(),
        "a.json",
        &["--n", "10", "--d", "20", "--t", "30", "--class", "arbitrary-polytope", "--l", "15", "--seed", "7"],
    );
    assert!(support_partition(&read(&p)).gamma.len() >= 15);
}

#[test]
fn gen_is_deterministic_on_stdout() {
    let args = ["gen", "--n", "3", "--d", "8", "--t", "9", "--seed", "42"];
    assert_eq!(stdout(&sonc(&args)), stdout(&sonc(&args)));
}

#[test]
fn bound_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = gen(dir.path(), "b.json", &["--n", "3", "--d", "8", "--t", "10", "--seed", "5", "--interior"]);
    let a = stdout(&sonc(&["bound", path_str(&p)]));
    let b = stdout(&sonc(&["bound", path_str(&p)]));
    assert_eq!(field(&a, "bound"), field(&b, "bound"));
    assert!(field(&a, "bound").is_some(), "{a}");
}

#[test]
fn certify_verify_roundtrip() {
    let dir = TempDir::new().unwrap();
    let specs: &[&[&str]] = &[
        &["--n", "2", "--d", "6", "--t", "6", "--seed", "3"],
        &["--n", "3", "--d", "10", "--t", "12", "--class", "general-simplex", "--seed", "11"],
        &["--n", "4", "--d", "10", "--t", "20", "--seed", "1000"],
        &["--n", "5", "--d", "12", "--t", "20", "--class", "arbitrary-polytope", "--l", "4", "--seed", "9"],
    ];
    for (i, spec) in specs.iter().enumerate() {
        let mut args = spec.to_vec();
        args.push("--interior");
        let p = gen(dir.path(), &format!("r{i}.json"), &args);
        let o = sonc(&["certify", path_str(&p), "--auto-margin"]);
        assert!(o.status.success(), "certify {spec:?}: {}", String::from_utf8_lossy(&o.stderr));
        let cert = field(&stdout(&o), "certificate").unwrap().to_string();
        let v = sonc(&["verify", path_str(&p), &cert]);
        assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
        assert_eq!(field(&stdout(&v), "status"), Some("accepted"));
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let p = gen(dir.path(), "t.json", &["--n", "2", "--d", "6", "--t", "6", "--seed", "3", "--interior"]);
    let cert = dir.path().join("t.cert.json");
    assert!(sonc(&["certify", path_str(&p), "--auto-margin"]).status.success());

    let mut json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let slot = &mut json["circuits"][0]["triples"][0]["a"];
    let a = rat::parse_rational(slot.as_str().unwrap()).unwrap();
    *slot = serde_json::Value::String(rat::to_pq(&(&a + &a)));
    let bad = dir.path().join("bad.cert.json");
    std::fs::write(&bad, serde_json::to_string(&json).unwrap()).unwrap();

    let v = sonc(&["verify", path_str(&p), path_str(&bad)]);
    assert_eq!(v.status.code(), Some(1));
    assert_eq!(field(&stdout(&v), "reason"), Some("reconstruction mismatch"));
}

#[test]
fn certificate_for_other_polynomial_is_rejected() {
    let dir = TempDir::new().unwrap();
    let p = gen(dir.path(), "h.json", &["--n", "2", "--d", "6", "--t", "6", "--seed", "3", "--interior"]);
    let q = gen(dir.path(), "k.json", &["--n", "2", "--d", "6", "--t", "6", "--seed", "4", "--interior"]);
    assert!(sonc(&["certify", path_str(&p), "--auto-margin"]).status.success());
    let cert = dir.path().join("h.cert.json");
    let v = sonc(&["verify", path_str(&q), path_str(&cert)]);
    assert_eq!(v.status.code(), Some(1));
    assert_eq!(field(&stdout(&v), "reason"), Some("hash mismatch"));
}

#[test]
fn constant_polynomial_bounds_to_itself() {
    let dir = TempDir::new().unwrap();
    let p = write_poly(dir.path(), "c.json", &SparsePoly::from_ints(2, &[(&[0, 0], 5)]).unwrap());
    let o = sonc(&["bound", path_str(&p)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bound: f64 = field(&stdout(&o), "bound").unwrap().parse().unwrap();
    assert!((bound - 5.0).abs() < 1e-9);
    assert_eq!(field(&stdout(&o), "triples"), Some("0"));

    let o = sonc(&["certify", path_str(&p), "--xi", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = sonc(&["verify", path_str(&p), path_str(&dir.path().join("c.cert.json"))]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn motzkin_at_zero_is_boundary() {
    let dir = TempDir::new().unwrap();
    let p = write_poly(dir.path(), "m.json", &motzkin());
    let o = sonc(&["certify", path_str(&p), "--xi", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("m.cert.json").exists());
}

#[test]
fn motzkin_odd_mode_certifies_below_zero() {
    let dir = TempDir::new().unwrap();
    let p = write_poly(dir.path(), "m.json", &motzkin());
    let o = sonc(&["certify", path_str(&p), "--xi", "-1/1000", "--odd-mode"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = sonc(&["verify", path_str(&p), path_str(&dir.path().join("m.cert.json"))]);
    assert_eq!(field(&stdout(&v), "mode"), Some("direct"));
}

#[test]
fn json_output_parses() {
    let dir = TempDir::new().unwrap();
    let p = write_poly(dir.path(), "m.json", &motzkin());
    let o = sonc(&["bound", path_str(&p), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "ok");
    assert!(v["bound"].as_f64().unwrap().abs() < 1e-4);
}

#[test]
fn batch_reports_every_input() {
    let dir = TempDir::new().unwrap();
    for s in 0..3 {
        gen(dir.path(), &format!("p{s}.json"), &["--n", "2", "--d", "6", "--t", "6", "--seed", &s.to_string(), "--interior"]);
    }
    let o = sonc(&["certify", "--batch", path_str(dir.path()), "--jobs", "2", "--auto-margin"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4, "{text}");
    assert!(text.lines().skip(1).all(|l| l.contains(",ok,")), "{text}");
    // certificates written by the first run are not picked up as inputs
    let o = sonc(&["bound", "--batch", path_str(dir.path())]);
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn usage_and_io_errors() {
    assert_eq!(sonc(&["bound"]).status.code(), Some(64));
    assert_eq!(sonc(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(sonc(&["bound", "/nonexistent/poly.json"]).status.code(), Some(74));
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("junk.json");
    std::fs::write(&p, "{ not json").unwrap();
    assert_eq!(sonc(&["bound", path_str(&p)]).status.code(), Some(65));
}
