use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn casimir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with(|c: char| c.is_ascii_alphabetic()))
        .map(|l| l.split(',').map(|f| f.trim().parse().unwrap()).collect())
        .collect()
}

fn value(path: &Path, key: &str) -> f64 {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .find_map(|l| {
            l.strip_prefix(&format!("{key}="))
                .map(|v| v.parse().unwrap())
        })
        .unwrap_or_else(|| panic!("{key} missing"))
}

#[test]
fn bad_config_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = out.to_str().unwrap();
    for args in [
        vec!["sweep", "--out", o, "--tol-inner", "0.5"],
        vec!["sweep", "--out", o, "--gap", "-1um"],
        vec!["sweep", "--out", o, "--tcount", "0"],
        vec!["sweep", "--out", o, "--model", "copper"],
        vec!["sweep", "--out", o, "--config", "/nonexistent/file"],
    ] {
        let r = casimir(&args);
        assert_eq!(r.status.code(), Some(2), "{args:?}");
    }
    assert!(!out.exists());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(
        &conf,
        "# gold at half a micron\ngap = 500nm\npreset = gold-1  # 9.0 / 35\n",
    )
    .unwrap();
    let out = dir.path().join("o");
    let r = casimir(&[
        "asymptote",
        "--config",
        conf.to_str().unwrap(),
        "--gap",
        "2um",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0));
    let text = fs::read_to_string(out.join("asymptote.txt")).unwrap();
    assert!(text.contains("# gap_m=2e-6"));
    assert!(text.contains("# preset=gold-1"));
    assert!(text.contains("# omega_p_ev=9\n"));
}

#[test]
fn asymptote_constants() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec!["asymptote", "--out", out.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert_eq!(casimir(&args).status.code(), Some(0));
        out.join("asymptote.txt")
    };
    let base = run("a", &["--gap", "1000nm"]);
    let doubled = run("b", &["--gap", "2um"]);
    let alt = run("c", &["--preset", "gold-1"]);
    let c1 = value(&base, "C1_J_m2_K2");
    let c2 = value(&base, "C2_rounded-0.204_K-1/2");
    assert!((c1 / 5.81e-13 - 1.0).abs() < 0.01);
    assert!((c2 / 3.03 - 1.0).abs() < 0.02);
    assert_eq!(value(&doubled, "C1_J_m2_K2"), c1);
    assert!((value(&doubled, "C2_rounded-0.204_K-1/2") / c2 - 2.0).abs() < 1e-12);
    let shift = value(&alt, "C1_J_m2_K2") / c1 - 1.0;
    assert!(
        shift.abs() > 1e-3 && shift.abs() < 0.05,
        "gold-1 shift {shift}"
    );
}

#[test]
fn sweep_vacuum_and_plasma() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = |name: &str, model: &str, grid: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec!["sweep", "--model", model, "--out", out.to_str().unwrap()];
        args.extend_from_slice(grid);
        assert_eq!(casimir(&args).status.code(), Some(0));
        data_rows(&out.join("sweep.csv"))
    };
    let vac = sweep("v", "vacuum", &["--tcount", "4"]);
    assert_eq!(vac.len(), 4);
    assert!(vac.iter().all(|r| r[1..4].iter().all(|&x| x == 0.0)));

    let grid = ["--tmin", "2", "--tmax", "10", "--tcount", "3"];
    let drude = sweep("d", "drude", &grid);
    let plasma = sweep("p", "plasma", &grid);
    assert_eq!(drude.len(), 4);
    assert_eq!(drude[0][0], 0.0);
    for (d, p) in drude.iter().zip(&plasma).skip(1) {
        assert!(
            p[3] < d[3],
            "T = {}: plasma {} vs drude {}",
            d[0],
            p[3],
            d[3]
        );
    }
}

#[test]
fn reflection_surfaces() {
    let dir = tempfile::tempdir().unwrap();
    let surface = |name: &str, args: &[&str]| {
        let out = dir.path().join(name);
        let mut a = vec!["reflection", "--out", out.to_str().unwrap()];
        a.extend_from_slice(args);
        assert_eq!(casimir(&a).status.code(), Some(0));
        data_rows(&out.join("reflection.csv"))
    };
    let single = surface(
        "s",
        &[
            "--zeta-count",
            "1",
            "--kperp-count",
            "1",
            "--kperp-min",
            "1e6",
        ],
    );
    assert_eq!(single.len(), 1);

    let ideal = surface(
        "i",
        &[
            "--model",
            "ideal",
            "--zeta-count",
            "5",
            "--kperp-count",
            "4",
        ],
    );
    assert_eq!(ideal.len(), 20);
    assert!(ideal.iter().all(|r| r[2] == 1.0 && r[3] == 1.0));

    let gold = surface(
        "g",
        &[
            "--zeta-min",
            "1",
            "--zeta-count",
            "17",
            "--kperp-min",
            "1e5",
            "--kperp-count",
            "5",
        ],
    );
    for row in gold.iter().filter(|r| r[0] == 1.0) {
        assert!(row[2] > 1.0 - 1e-9, "A = {}", row[2]);
        assert!(row[3] < 1e-15, "B = {}", row[3]);
    }
}

#[test]
fn table_model_reads_file() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("eps.txt");
    let mut text = String::from("# zeta eps\n");
    for i in 0..=40 {
        let z = 10f64.powf(10.0 + 0.2 * i as f64);
        text.push_str(&format!("{z:e} {}\n", 1.0 + 1e30 / (z * z)));
    }
    fs::write(&table, text).unwrap();
    let out = dir.path().join("o");
    let model = format!("table:{}", table.display());
    let r = casimir(&[
        "reflection",
        "--model",
        &model,
        "--zeta-min",
        "1e11",
        "--zeta-max",
        "1e17",
        "--zeta-count",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    assert_eq!(data_rows(&out.join("reflection.csv")).len(), 4 * 21);
}

#[test]
fn numerical_failure_exits_3_with_marker() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("eps.txt");
    fs::write(&table, "1e12 5\n1e13 3\n1e14 2\n").unwrap();
    let out = dir.path().join("o");
    let model = format!("table:{}", table.display());
    let r = casimir(&[
        "reflection",
        "--model",
        &model,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(3));
    let text = fs::read_to_string(out.join("reflection.csv")).unwrap();
    assert!(text.lines().last().unwrap().starts_with("# FAILED:"));
}

#[test]
fn ratio_for_plasma_reports_zero_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let r = casimir(&["ratio", "--model", "plasma", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let verdict = fs::read_to_string(out.join("verdict.txt")).unwrap();
    assert!(verdict.contains("verdict=FAIL"));
    assert!(verdict.contains("zero_mode_satisfied=false"));
    assert!(out.join("ratio.csv").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (i, workers) in ["1", "3"].iter().enumerate() {
        let out = dir.path().join(format!("r{i}"));
        let r = casimir(&[
            "sweep",
            "--tcount",
            "5",
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(r.status.code(), Some(0));
        files.push(fs::read(out.join("sweep.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}
