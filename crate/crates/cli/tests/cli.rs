use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use valued_ifs::{Verdict, VerificationReport};
use valued_ifs_cli::replay::replay;
use valued_ifs_cli::{LoadedConfig, Settings};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_valued-ifs"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn verify_to(config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "verify".to_string(),
        "--config".into(),
        config.display().to_string(),
        "--out".into(),
        out.display().to_string(),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    bin().args(&args).output().expect("binary runs")
}

fn read_report(path: &Path) -> VerificationReport {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn valid_ball_covering_exits_zero_with_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = verify_to(&configs().join("digit-prepend.json"), &out, &["--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_report(&out);
    assert_eq!(report.verdict, Verdict::Holds);
    assert_eq!(report.k, Some(3));
    assert_eq!(report.certificate.len(), 8);
    let text = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert_eq!(text, String::from_utf8(o.stdout).unwrap());
}

#[test]
fn baire_exits_one_with_ten_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("baire.json");
    let o = verify_to(&configs().join("baire.json"), &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    let report = read_report(&out);
    assert_eq!(report.verdict, Verdict::Fails);
    assert_eq!(report.witness.len(), 10);
    for (i, w) in report.witness.iter().enumerate() {
        assert_eq!(w.len(), i + 1);
        assert_eq!(w[0], i as i64 + 1);
        assert!(w[1..].iter().all(|&l| l == 0));
    }
}

#[test]
fn max_k_flag_overrides_baire_depth() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("baire.json");
    let o = verify_to(&configs().join("baire.json"), &out, &["--max-k", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(read_report(&out).witness.len(), 4);
}

#[test]
fn malformed_configs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("not-json.json", "{ context"),
        ("missing.json", r#"{"context": {"p": 2}}"#),
        ("unknown-key.json", r#"{"model": "baire", "maxK": 3, "depth": 2}"#),
        ("not-prime.json", r#"{"context": {"p": 4, "mode": "equal-char", "precision": 3}, "system": {"kind": "digit-prepend"}, "covering": {"uniform": 1}}"#),
        ("two-coverings.json", r#"{"context": {"p": 2, "mode": "equal-char", "precision": 3}, "system": {"kind": "digit-prepend"}, "covering": {"uniform": 1, "sets": []}}"#),
        ("not-covering.json", r#"{"context": {"p": 2, "mode": "equal-char", "precision": 3}, "system": {"kind": "digit-prepend"}, "covering": {"sets": [["B(1)@offset=0; digits=0"]]}}"#),
        ("line-not-open.json", r#"{"model": "line", "U": [["-inf", "inf"]], "basics": [["1", "1"]]}"#),
        ("cofinite-meets.json", r#"{"model": "cofinite", "complements": [["1/3"], ["1/3", "1/2"]]}"#),
    ];
    for (name, text) in cases {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let o = run(&["verify", "--config", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "), "{name}");
    }
    let o = run(&["verify", "--config", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["demo", "7"]).status.code(), Some(2));
}

#[test]
fn every_shipped_config_replays() {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let out = dir.path().join("r.json");
        let o = verify_to(&path, &out, &["--oracle"]);
        assert!(matches!(o.status.code(), Some(0 | 1)), "{}", path.display());
        let report = read_report(&out);
        let loaded = LoadedConfig::load(&path).unwrap();
        replay(&loaded, &report, Settings::default())
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn replay_rejects_a_tampered_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = configs().join("kappa-omega.json");
    let out = dir.path().join("r.json");
    verify_to(&path, &out, &[]);
    let mut report = read_report(&out);
    let last = report.certificate.last_mut().unwrap();
    last.1 = (last.1 + 1) % 3;
    let loaded = LoadedConfig::load(&path).unwrap();
    assert!(replay(&loaded, &report, Settings::default()).is_err());
}

#[test]
fn verify_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["window.json", "line.json", "cofinite.json"] {
        let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
        let oa = verify_to(&configs().join(name), &a, &["--oracle"]);
        let ob = verify_to(&configs().join(name), &b, &["--oracle"]);
        assert_eq!(oa.stdout, ob.stdout, "{name}");
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{name}");
    }
}

#[test]
fn demo_writes_json_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("demo4.json");
    let o = run(&["demo", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("depth-1 images are the balls B(2)"));
    assert!(stdout.contains("depth-4 images are the balls B(8)"));
    let report = read_report(&out);
    valued_ifs_cli::demo::replay_demo(4, &report).unwrap();
}

/// Rows of `(x, width)` keyed by the bar's y coordinate.
fn bars(svg: &str) -> BTreeMap<i64, Vec<(f64, f64)>> {
    let attr = |line: &str, key: &str| -> String {
        let start = line.find(&format!(" {key}=\"")).unwrap() + key.len() + 3;
        line[start..].split('"').next().unwrap().to_string()
    };
    let mut rows: BTreeMap<i64, Vec<(f64, f64)>> = BTreeMap::new();
    for line in svg.lines().filter(|l| l.starts_with("<rect x=") && l.contains("height=\"20.0\"")) {
        let x: f64 = attr(line, "x").parse().unwrap();
        let w: f64 = attr(line, "width").parse().unwrap();
        let y: f64 = attr(line, "y").parse().unwrap();
        rows.entry((y * 10.0).round() as i64).or_default().push((x, w));
    }
    rows
}

/// Bars at `left + plot * j / n` of width `plot / n` for every `j < n`.
fn assert_even_row(row: &[(f64, f64)], n: usize) {
    let (left, plot) = (90.0, 800.0);
    assert_eq!(row.len(), n);
    let mut xs: Vec<f64> = row.iter().map(|b| b.0).collect();
    xs.sort_by(f64::total_cmp);
    for (j, x) in xs.iter().enumerate() {
        assert!((x - (left + plot * j as f64 / n as f64)).abs() < 1e-3);
    }
    for (_, w) in row {
        assert!((w - plot / n as f64).abs() < 1e-3);
    }
}

fn render(config: &str, depth: usize) -> String {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.svg");
    let o = run(&[
        "render",
        "--config",
        golden().join(config).to_str().unwrap(),
        "--depth",
        &depth.to_string(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(out).unwrap()
}

#[test]
fn render_matches_golden_files() {
    for (config, depth, golden_svg) in [
        ("p2.json", 2, "p2-depth2.svg"),
        ("p3.json", 1, "p3-depth1.svg"),
        ("window.json", 1, "window-depth1.svg"),
    ] {
        let svg = render(config, depth);
        assert_eq!(svg, render(config, depth), "{config}");
        assert_eq!(svg, std::fs::read_to_string(golden().join(golden_svg)).unwrap(), "{config}");
    }
}

#[test]
fn render_rows_have_the_coset_structure() {
    let rows: Vec<_> = bars(&render("p2.json", 2)).into_values().collect();
    assert_eq!(rows.len(), 3);
    for (d, row) in rows.iter().enumerate() {
        assert_even_row(row, 1 << d);
    }
    let rows: Vec<_> = bars(&render("p3.json", 1)).into_values().collect();
    assert_even_row(&rows[1], 3);
    let rows: Vec<_> = bars(&render("window.json", 1)).into_values().collect();
    assert_even_row(&rows[1], 4);
}

#[test]
fn render_rejects_symbolic_models() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.svg");
    let o = run(&[
        "render",
        "--config",
        configs().join("baire.json").to_str().unwrap(),
        "--depth",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}
