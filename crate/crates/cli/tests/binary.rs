use std::process::Command;

#[test]
fn binaries_run_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let out = Command::new(env!("CARGO_BIN_EXE_osmvc-blobs"))
        .args(["--samples", "60", "--seed", "2", "--out"])
        .arg(&data)
        .output()
        .unwrap();
    assert!(out.status.success());
    let manifest = data.join("manifest.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), manifest.display().to_string());

    // a capped run that cannot converge still exits 0
    let status = Command::new(env!("CARGO_BIN_EXE_osmvc"))
        .arg("--data")
        .arg(&manifest)
        .args(["--max-iter", "3", "--seed", "2", "--out"])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(report["converged"], false);
    assert_eq!(report["iterations"], 3);
    for f in ["labels.csv", "anchors_labels.csv", "metrics.json", "trace.csv"] {
        assert!(dir.path().join("out").join(f).exists());
    }

    let bad = Command::new(env!("CARGO_BIN_EXE_osmvc"))
        .args(["--data", "/nonexistent/manifest.json", "--out"])
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("manifest.json"));
}
