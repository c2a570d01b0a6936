use std::path::Path;
use std::process::{Command, Output};

fn ovp(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ovp"))
        .args(args)
        .env("OVP_CACHE_DIR", cache)
        .output()
        .expect("ovp runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn compute_pbar_first_terms() {
    let dir = tempfile::tempdir().unwrap();
    let o = ovp(dir.path(), &["compute", "pbar", "--order", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1,2,4,8,14,24");

    let o = ovp(dir.path(), &["compute", "pbar", "-T", "4"]);
    assert!(stdout(&o).trim().ends_with(",8"));
}

#[test]
fn every_method_agrees_on_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let outputs: Vec<String> = ["theta-inversion", "euler-product", "enumeration", "two-adic"]
        .iter()
        .map(|m| stdout(&ovp(dir.path(), &["compute", "pbar", "-T", "40", "--method", m])))
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn compute_psi_support() {
    let dir = tempfile::tempdir().unwrap();
    let o = ovp(dir.path(), &["compute", "theta", "--kind", "psi", "--order", "7"]);
    let support: Vec<usize> = stdout(&o)
        .trim()
        .split(',')
        .enumerate()
        .filter(|(_, v)| *v != "0")
        .map(|(n, _)| n)
        .collect();
    assert_eq!(support, [0, 1, 3, 6]);
}

#[test]
fn residues_with_mod() {
    let dir = tempfile::tempdir().unwrap();
    let o = ovp(dir.path(), &["compute", "pbar", "-T", "6", "--mod", "5"]);
    assert_eq!(stdout(&o).trim(), "1,2,4,3,4,4");
}

#[test]
fn export_writes_lf_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sq.csv");
    let o = ovp(
        dir.path(),
        &["export", "squares", "-T", "6", "-k", "2", "--out", path.to_str().unwrap()],
    );
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "n,c1,c2\n0,0,0\n1,1,0\n2,0,1\n3,0,0\n4,1,0\n5,0,2\n");
}

#[test]
fn cache_round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");
    for (ring, ext) in [(None, "exact"), (Some("120"), "mod")] {
        let mut args = vec!["compute", "pbar", "-T", "3000", "--format", "csv"];
        if let Some(m) = ring {
            args.extend(["--mod", m]);
        }
        let a = ovp(&cache, &[&args[..], &["--out", first.to_str().unwrap()]].concat());
        assert!(a.status.success(), "{ext}: {}", stderr(&a));
        assert!(!stderr(&a).contains("cache hit"));
        let b = ovp(&cache, &[&args[..], &["--out", second.to_str().unwrap()]].concat());
        assert!(stderr(&b).contains("cache hit"), "{ext}: {}", stderr(&b));
        assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    }
}

#[test]
fn corrupted_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let clean = stdout(&ovp(dir.path(), &["compute", "pbar", "-T", "200", "--mod", "8"]));
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "qs") {
            let mut bytes = std::fs::read(&p).unwrap();
            let last = bytes.len() - 1;
            bytes[last] ^= 1;
            std::fs::write(&p, bytes).unwrap();
        }
    }
    let o = ovp(dir.path(), &["compute", "pbar", "-T", "200", "--mod", "8"]);
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    assert_eq!(stdout(&o), clean);
}

#[test]
fn unwritable_cache_falls_back_to_compute() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, b"not a directory").unwrap();
    let o = ovp(&blocker.join("cache"), &["compute", "pbar", "-T", "5"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning"));
    assert_eq!(stdout(&o).trim(), "1,2,4,8,14");
}

#[test]
fn verify_all_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let o = ovp(
        dir.path(),
        &["verify", "--all", "--budget", "1000000", "--chain-order", "500", "--out", report.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    let families = v["families"].as_array().unwrap();
    assert_eq!(families.len(), 17);
    for f in families {
        for key in ["family", "anchor", "range", "cases", "pass", "counterexamples"] {
            assert!(f.get(key).is_some(), "missing {key}");
        }
        assert_eq!(f["range"]["budget"], 1_000_000);
    }
    assert_eq!(v["dissection_chain"]["pass"], true);
}

#[test]
fn verify_single_prime() {
    let dir = tempfile::tempdir().unwrap();
    let o = ovp(dir.path(), &["verify", "--family", "i", "--ell", "13", "--budget", "1000000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["families"][0]["cases"].as_u64().unwrap() > 0);
}

#[test]
fn planted_false_family_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = ovp(dir.path(), &["verify", "--family", "planted-false", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let first = &v["families"][0]["counterexamples"][0];
    assert_eq!(first["n"], 1);
    assert_eq!(first["arg"], 5);
    assert_eq!(first["lhs"], 4);
}

#[test]
fn unknown_family_lists_ids() {
    let dir = tempfile::tempdir().unwrap();
    let o = ovp(dir.path(), &["verify", "--family", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("valid ids: a, b"));
}

#[test]
fn hecke_eigen_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = ovp(dir.path(), &["hecke", "--f", "phi3", "--ell", "3", "--order", "10000", "--check-eigen"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["lambda"], 4);
    assert_eq!(v["pass"], true);

    let o = ovp(dir.path(), &["hecke", "--f", "phi3", "--ell", "5", "--check-eigen"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["lambda"].as_i64(), v["pass"].as_bool()), (Some(6), Some(true)));

    let o = ovp(dir.path(), &["hecke", "--f", "phi3-minus", "--ell", "7", "--check-eigen", "--lambda", "7"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn hecke_image_is_a_multiple() {
    let dir = tempfile::tempdir().unwrap();
    let f = stdout(&ovp(dir.path(), &["compute", "theta", "-T", "12"]));
    assert!(f.starts_with("1,2,0,0,2"));
    let o = ovp(dir.path(), &["hecke", "--f", "phi3", "--ell", "3", "-T", "100"]);
    // φ(q)³ = 1 + 6q + 12q² + 8q³ + ...; the image is 4 times that
    assert!(stdout(&o).starts_with("4,24,48,32,"), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["hecke", "--f", "phi3", "--ell", "9"][..],
        &["hecke", "--f", "phi3", "--ell", "3", "-T", "5"],
        &["compute", "pbar", "--order", "0"],
        &["compute", "pbar", "--mod", "1"],
        &["compute", "pbar", "-T", "100", "--method", "enumeration"],
        &["compute", "bogus"],
        &["verify"],
    ] {
        let o = ovp(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = ovp(dir.path(), &["hecke", "--f", "phi3", "--ell", "9"]);
    assert!(stderr(&o).contains("not an odd prime"));
}

#[test]
fn dissect_reports_every_identity() {
    let dir = tempfile::tempdir().unwrap();
    let o = ovp(dir.path(), &["dissect", "-T", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 14);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}
