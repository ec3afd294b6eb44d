use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fdlab(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fdlab"));
    cmd.args(args).env_remove("FDLAB_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const T1: &str = "[map]\ncatalog = T1\n[simulation]\nzeta = zeta6\n[analysis]\ntheorem = thm1\nx0 = 0\n";

#[test]
fn t1_consistent_exit_zero_with_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "t1.cfg", T1);
    let rep = dir.path().join("out/report.json");
    let csv = dir.path().join("csv");
    let out = fdlab(
        &[
            "--config",
            &cfg,
            "--report",
            rep.to_str().unwrap(),
            "--csv-dir",
            csv.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = report(&rep);
    assert_eq!(doc["verdict"], "consistent");
    assert!((doc["numbers"]["rho"]["value"].as_f64().unwrap() - 1.0).abs() <= 1e-3);
    for k in ["theorem", "hypotheses", "conclusion", "numbers", "samples", "verdict"] {
        assert!(doc.get(k).is_some(), "missing {k}");
    }
    let fixed = fs::read_to_string(csv.join("fixed_set.csv")).unwrap();
    assert!(fixed.starts_with("x,Tx,\"d(x,Tx)\"\n"));
    let disc = fs::read_to_string(csv.join("disc.csv")).unwrap();
    assert!(disc.starts_with("x,in_disc,fixed\n"));
    assert!(disc.lines().any(|l| l == "0,true,true"));
    assert!(disc.lines().any(|l| l == "5,false,false"));
}

#[test]
fn t2_hypothesis_failed_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "t2.cfg",
        "[map]\ncatalog = T2\nx0 = 1\nmu = 2\n[simulation]\nzeta = zeta6\n[analysis]\ntheorem = thm1\nx0 = 1\nreport = r.json\n",
    );
    let out = fdlab(&["--config", &cfg], &[]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&dir.path().join("r.json"));
    assert_eq!(doc["verdict"], "hypothesis_failed");
    assert_eq!(doc["conclusion"]["status"], "pass");
}

#[test]
fn refutation_candidate_exits_two() {
    // Not a simulation function, so the theorem does not apply.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad_zeta.cfg",
        "[space]\nkind = finite\nrow = 0, 1, 1\nrow = 1, 0, 1\nrow = 1, 1, 0\n[map]\ntable = 1, 2, 1\n\
         [simulation]\nzeta = custom\nexpr = s - t + 1\n[analysis]\ntheorem = thm1\nx0 = 0\n",
    );
    let out = fdlab(&["--config", &cfg], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("REFUTATION_CANDIDATE"));
}

#[test]
fn errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "thm4.cfg", &T1.replace("thm1", "thm4"));
    let out = fdlab(&["--config", &cfg], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[map2]"));

    let out = fdlab(&["--config", dir.path().join("missing.cfg").to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));

    let cfg = write(dir.path(), "syntax.cfg", "[map]\ncatalog T1\n");
    let out = fdlab(&["--config", &cfg], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn seed_samples_and_tolerance_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "t1.cfg", T1);
    let rep = dir.path().join("r.json");
    let r = rep.to_str().unwrap();
    fdlab(&["--config", &cfg, "--report", r], &[("FDLAB_SEED", "77")]);
    assert_eq!(report(&rep)["samples"]["seed"], 77);
    fdlab(
        &["--config", &cfg, "--report", r, "--seed", "0x10"],
        &[("FDLAB_SEED", "77")],
    );
    assert_eq!(report(&rep)["samples"]["seed"], 16);
    fdlab(
        &[
            "--config",
            &cfg,
            "--report",
            r,
            "--samples",
            "1001",
            "--tolerance-fix",
            "1e-7",
        ],
        &[],
    );
    let doc = report(&rep);
    assert!(doc["samples"]["count"].as_u64().unwrap() < 1100);
    assert_eq!(doc["samples"]["tolerances"]["eps_fix"], 1e-7);
    assert_eq!(doc["verdict"], "consistent");
}

#[test]
fn axioms_negative_control() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "ax.cfg",
        "[simulation]\nzeta = custom\nexpr = s - t\n[analysis]\ntheorem = axioms\nreport = ax.json\n",
    );
    assert_eq!(fdlab(&["--config", &cfg], &[]).status.code(), Some(0));
    let doc = report(&dir.path().join("ax.json"));
    let a2 = doc["hypotheses"]
        .as_array()
        .unwrap()
        .iter()
        .find(|h| h["name"] == "axiom_2")
        .unwrap();
    assert_eq!(a2["status"], "fail");
}

#[test]
fn catalog_listing_and_regression() {
    let out = fdlab(&["--list-catalog"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["T1", "T2", "T3", "T4", "intro_quadratic", "intro_S", "ELU", "SReLU"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
    let out = fdlab(&["--regression"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "t1.cfg", T1);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    fdlab(&["--config", &cfg, "--report", a.to_str().unwrap(), "--seed", "5"], &[]);
    fdlab(&["--config", &cfg, "--report", b.to_str().unwrap(), "--seed", "5"], &[]);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn shipped_configs_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            seen += 1;
            let out = fdlab(&["--config", path.to_str().unwrap()], &[]);
            assert_eq!(
                out.status.code(),
                Some(0),
                "{}: {}",
                path.display(),
                String::from_utf8_lossy(&out.stderr)
            );
        }
    }
    assert!(seen >= 5);
}
