use std::path::Path;
use std::process::Command;

fn xorgame() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_xorgame"));
    cmd.env_remove("XORGAME_OUT_DIR");
    cmd
}

fn read_dir(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn subcommands_are_deterministic_across_workers() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("small.toml");
    std::fs::write(&cfg, "instances_per_setting = 10\nsweep_points = 3\nrepetitions = 5\nconfidence_events = 100\n").unwrap();
    for sub in ["analytic", "run", "purity-sweep", "confidence", "calibrate"] {
        let a = tmp.path().join(format!("{sub}-a"));
        let b = tmp.path().join(format!("{sub}-b"));
        for (dir, workers) in [(&a, "1"), (&b, "3")] {
            let status = xorgame()
                .args(["--config", cfg.to_str().unwrap(), "--seed", "11", "--workers", workers, "--out"])
                .arg(dir)
                .arg(sub)
                .output()
                .unwrap();
            assert!(status.status.success(), "{sub}: {}", String::from_utf8_lossy(&status.stderr));
        }
        let files = read_dir(&a);
        assert!(!files.is_empty());
        assert_eq!(files, read_dir(&b), "{sub}");
    }
}

#[test]
fn env_var_sets_output_directory_and_flag_wins() {
    let tmp = tempfile::tempdir().unwrap();
    let env_dir = tmp.path().join("from-env");
    let flag_dir = tmp.path().join("from-flag");
    assert!(xorgame().env("XORGAME_OUT_DIR", &env_dir).arg("analytic").status().unwrap().success());
    assert!(env_dir.join("analytic.csv").exists());
    assert!(xorgame()
        .env("XORGAME_OUT_DIR", &env_dir)
        .arg("--out")
        .arg(&flag_dir)
        .arg("analytic")
        .status()
        .unwrap()
        .success());
    assert!(flag_dir.join("analytic_headline.csv").exists());
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "visibility = 3.0\n").unwrap();
    let code = |cmd: &mut Command| cmd.status().unwrap().code();
    assert_eq!(code(xorgame().arg("--config").arg(&bad).arg("analytic")), Some(2));
    std::fs::write(&bad, "sigma = 0.1\npurity = 0.9\n").unwrap();
    assert_eq!(code(xorgame().arg("--config").arg(&bad).arg("run")), Some(2));
    assert_eq!(code(xorgame().arg("--config").arg(tmp.path().join("missing.toml")).arg("run")), Some(4));
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    assert_eq!(code(xorgame().arg("--out").arg(blocker.join("sub")).arg("analytic")), Some(4));
    // A piezo sweep shorter than one fringe cannot yield setpoints.
    std::fs::write(&bad, "pzt_fringes = 0.4\n").unwrap();
    assert_eq!(code(xorgame().arg("--config").arg(&bad).arg("--out").arg(tmp.path()).arg("calibrate")), Some(3));
}

#[test]
fn outputs_embed_version_and_config() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(xorgame().arg("--out").arg(tmp.path()).args(["--seed", "5", "run"]).status().unwrap().success());
    let text = std::fs::read_to_string(tmp.path().join("run_summary.csv")).unwrap();
    let parsed = superposition_xor::harness::ParsedTable::parse(&text).unwrap();
    assert_eq!(parsed.config.unwrap().seed, 5);
    assert!(text.starts_with(&format!("# superposition-xor {}", superposition_xor::VERSION)));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(tmp.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["seed"], 5);
    assert_eq!(json["result"]["instances"].as_array().unwrap().len(), 240);
}
