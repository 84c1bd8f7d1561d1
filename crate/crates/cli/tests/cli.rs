use std::fs;
use std::path::Path;
use std::process::Command;

use tempfile::tempdir;

fn shadowfid(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_shadowfid"))
        .args(args)
        .env("SHADOWFID_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const ESTIMATE: &str = r#"{
  "version": 1,
  "experiment": "estimate",
  "n": 5,
  "k": 2,
  "rounds": 3000,
  "seed": 4,
  "lab": {"state": {"family": "w"}, "noise": {"model": "white", "strength": 0.2}},
  "targets": [
    {"state": {"family": "w"}, "label": "w"},
    {"state": {"family": "dicke", "k_exc": 2}, "label": "dicke2"}
  ]
}"#;

#[test]
fn bench_csv_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bench.json",
        r#"{"version": 1, "experiment": "benchmark-noise", "n": 4, "k": 2, "rounds": 500,
            "states": [{"family": "phase"}, {"family": "iqp"}],
            "noise": [{"model": "white", "strengths": [0.0, 0.3]}, {"model": "dephasing", "strengths": [0.5]}],
            "xeb_samples": 100}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (out, threads) in [(&a, "1"), (&b, "3")] {
        let o = shadowfid(&[
            "bench-noise", "--config", &cfg, "--seed", "7", "--threads", threads, "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("state,noise,strength,true_f,shadow_f,stderr,xeb\n"));
}

#[test]
fn unknown_fields_and_versions_are_rejected() {
    let dir = tempdir().unwrap();
    let extra = write(dir.path(), "extra.json", &ESTIMATE.replace("\"seed\": 4,", "\"seed\": 4, \"shots\": 9,"));
    let o = shadowfid(&["estimate", "--config", &extra]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("shots"));
    let v2 = write(dir.path(), "v2.json", &ESTIMATE.replace("\"version\": 1", "\"version\": 2"));
    assert!(!shadowfid(&["estimate", "--config", &v2]).status.success());
    let wrong = write(dir.path(), "wrong.json", ESTIMATE);
    let o = shadowfid(&["ham-phase", "--config", &wrong]);
    assert!(!o.status.success());
}

#[test]
fn sample_then_reuse_matches_estimate() {
    let dir = tempdir().unwrap();
    let cfg = write(dir.path(), "est.json", ESTIMATE);
    let data = dir.path().join("data.ndjson");
    let o = shadowfid(&["sample", "--config", &cfg, "--out", data.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&data).unwrap().lines().count(), 3000);

    let reuse = shadowfid(&["reuse", "--config", &cfg, "--data", data.to_str().unwrap()]);
    assert!(reuse.status.success(), "{}", String::from_utf8_lossy(&reuse.stderr));
    let direct = shadowfid(&["estimate", "--config", &cfg, "--threshold", "0.5"]);
    assert!(direct.status.success());
    let r: serde_json::Value = serde_json::from_slice(&reuse.stdout).unwrap();
    let d: serde_json::Value = serde_json::from_slice(&direct.stdout).unwrap();
    for i in 0..2 {
        assert_eq!(r["targets"][i]["estimate"]["f_hat"], d["targets"][i]["estimate"]["f_hat"]);
    }
    assert_eq!(d["targets"][0]["certified"], serde_json::Value::Bool(true));
    assert!(d["targets"][0]["true_f"].as_f64().unwrap() > 0.79);
}

#[test]
fn scaling_and_mixed_cert_emit_reports() {
    let dir = tempdir().unwrap();
    let sc = write(
        dir.path(),
        "sc.json",
        r#"{"version": 1, "experiment": "scaling", "family": {"family": "haar"}, "ns": [4, 5], "k": 2, "seeds": 2, "with_congestion": true}"#,
    );
    let o = shadowfid(&["scaling", "--config", &sc]);
    assert!(o.status.success());
    let csv = String::from_utf8(o.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("n,seed,tau,rho_gamma,gap"));
    assert_eq!(csv.lines().count(), 5);

    let mc = write(
        dir.path(),
        "mc.json",
        r#"{"version": 1, "experiment": "mixed-cert", "n": 4, "k": 2, "rounds": 4000, "threshold": 0.2,
            "lab": {"state": {"family": "w"}},
            "components": [{"p": 0.5, "state": {"family": "w"}}, {"p": 0.5, "state": {"family": "dicke", "k_exc": 2}}]}"#,
    );
    let out = dir.path().join("mc.json.out.json");
    let o = shadowfid(&["mixed-cert", "--config", &mc, "--out", out.to_str().unwrap(), "--threads", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    let exact = v["exact"].as_f64().unwrap();
    assert!((exact - 0.5).abs() < 1e-9);
    assert!(v["certificate"]["lower"].as_f64().unwrap() <= exact + 0.05);
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "json") {
            shadowfid::bench::parse_config(&fs::read_to_string(&p).unwrap())
                .unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            seen += 1;
        }
    }
    assert!(seen >= 5);
}
