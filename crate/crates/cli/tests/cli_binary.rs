use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_singular-plap"))
}

#[test]
fn classify_prints_case() {
    let out = bin()
        .args([
            "classify", "--N", "3", "--p", "2", "--alpha", "3", "--m", "inf",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("case T4_3_not_W1p"), "{text}");
}

#[test]
fn bound_prints_moser_table() {
    let out = bin()
        .args([
            "bound",
            "--N",
            "3",
            "--p",
            "2",
            "--m",
            "2",
            "--norm-f-m",
            "1",
            "--norm-f-1",
            "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("quantity,k,value") && text.contains("beta,2,12"),
        "{text}"
    );
}

#[test]
fn run_writes_reports_and_exit_code_tracks_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let base = "kind = existence\nN = 3\np = 2\nalpha = 1\nsource = constant\nsource_param = 1\n\
                cells = 64\nschedule = 1, 2, 4\n";
    std::fs::write(&cfg, base).unwrap();
    let out_dir = dir.path().join("out");
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let summary = std::fs::read_to_string(out_dir.join("summary.txt")).unwrap();
    assert!(summary.contains("energy_bound_n4 measured="));

    // a negative slack makes the energy bound unattainable
    std::fs::write(&cfg, format!("{base}slack = -0.9\n")).unwrap();
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(1));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "kind = classify\nwidth = 3\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("line 2: unknown key `width`"));
}
