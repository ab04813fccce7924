use std::io::Write;

use singular_plap::config::{Domain, Kind, SourceKind};
use singular_plap::{parse_config, parse_config_str, CliError};

fn file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn minimal_classify_file_is_valid() {
    let f = file("kind = classify\nN = 3\np = 2\nalpha = 1\nm = 2\n");
    let c = parse_config(f.path()).unwrap();
    assert_eq!(c.kind, Kind::Classify);
    assert_eq!(c.m, Some(2.0));
}

#[test]
fn nonexistence_without_alpha_is_missing_field() {
    let f = file("kind = nonexistence\nN = 3\np = 2\nsource = eigenfunction_power\n");
    match parse_config(f.path()) {
        Err(CliError::MissingField(k)) => assert_eq!(k, "alpha"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn nonexistence_requires_eigenfunction_source() {
    let err = parse_config_str("kind = nonexistence\nN = 3\np = 2\nalpha = 3\nsource = constant\n")
        .unwrap_err();
    assert!(matches!(err, CliError::InvalidConfig(_)), "{err}");
}

#[test]
fn duplicate_key_reports_both_lines() {
    let err = parse_config_str("kind = classify\nN = 3\n# note\nN = 4\n").unwrap_err();
    match err {
        CliError::DuplicateKey { line, key, first } => {
            assert_eq!((line, key.as_str(), first), (4, "N", 2))
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn missing_file_is_io_error() {
    let err = parse_config(std::path::Path::new("/nonexistent/run.cfg")).unwrap_err();
    assert!(matches!(err, CliError::Io { .. }));
}

#[test]
fn defaults_are_filled() {
    let c = parse_config_str(
        "kind = existence\nN = 3\np = 2\nalpha = 0.5\nsource = constant\nsource_param = 1\n",
    )
    .unwrap();
    assert_eq!(c.domain, Domain::Ball);
    assert_eq!(c.source, Some(SourceKind::Constant));
    assert_eq!(c.cells, [512]);
    assert_eq!(c.margin, 0.1);
    assert_eq!(
        (c.slack, c.divergence_threshold, c.envelope_growth),
        (0.02, 0.01, 0.05)
    );
    assert!(c.schedule.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn invalid_values_are_rejected() {
    for text in [
        "kind = classify\nN = 3\np = 1\nalpha = 1\nm = 2\n",
        "kind = existence\nN = 3\np = 2\nalpha = 0.5\nsource = constant\nsource_param = 1\nschedule = 4, 2\n",
        "kind = manufactured\ndomain = ball\nN = 3\np = 2\ncells = 8, 16\n",
        "kind = manufactured\ndomain = interval\np = 1.5\ncells = 8, 16\n",
    ] {
        assert!(matches!(parse_config_str(text), Err(CliError::InvalidConfig(_))), "{text}");
    }
    let err = parse_config_str("kind = sweep\n").unwrap_err();
    assert!(matches!(err, CliError::TypeError { line: 1, .. }), "{err}");
}

#[test]
fn shipped_configs_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            parse_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert_eq!(seen, 7);
}
