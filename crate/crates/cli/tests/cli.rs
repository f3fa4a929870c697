use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qgrating::formats::read_spectrum;

fn qgrating(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgrating"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run qgrating")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn csv_rewrites_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let o = qgrating(
        dir.path(),
        &["spectrum", "--preset", "fig3b", "-o", "s.csv"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("s_sf.csv")).unwrap();
    let parsed = read_spectrum(&text).unwrap();
    assert_eq!(parsed.get("geometry"), Some("two-max"));
    assert_eq!(parsed.get("kappa"), Some("1"));
    let mut rewritten: String = text.lines().take(2).map(|l| format!("{l}\n")).collect();
    for (x, y) in parsed.detunings.iter().zip(&parsed.values) {
        rewritten.push_str(&format!("{x:.14e},{y:.14e}\n"));
    }
    assert_eq!(rewritten, text);
}

#[test]
fn presets_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = qgrating(
            d.path(),
            &["spectrum", "--preset", "fig2c", "--plot", "fig2c.svg"],
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for name in [
        "fig2c_k10.csv",
        "fig2c_k35.csv",
        "fig2c_k68.csv",
        "fig2c.svg",
    ] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name} differs between runs");
    }
    let svg = fs::read_to_string(a.path().join("fig2c.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("Δp / δ₀") && svg.contains("k68"));
}

#[test]
fn single_curve_goes_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let o = qgrating(
        dir.path(),
        &[
            "spectrum", "--state", "mi", "-N", "12", "-M", "6", "-K", "3",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("# state=mi geometry=single kappa=0.1 delta0=1 delta1=1 eta0=0.1"));
    let s = read_spectrum(&text).unwrap();
    let (i, peak) =
        s.values.iter().enumerate().fold(
            (0, 0.0),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    assert!((s.detunings[i] - 6.0).abs() < 1e-9);
    assert!((peak - 1.0).abs() < 1e-9);
}

#[test]
fn malformed_csv_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("bad.csv"),
        "# state=sf geometry=single kappa=0.1\ndelta_p,photon_number\n0.0,1.0\n0.1,2.0\n0.2;3.0\n",
    )
    .unwrap();
    let o = qgrating(dir.path(), &["infer", "bad.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 5"), "{}", stderr(&o));
}

#[test]
fn config_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.cfg"),
        "state = sf\n# comment\nkappa = -0.5x\n",
    )
    .unwrap();
    let o = qgrating(dir.path(), &["spectrum", "--config", "run.cfg"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3: kappa"), "{}", stderr(&o));
    let o = qgrating(dir.path(), &["spectrum", "--kappa", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = qgrating(dir.path(), &["spectrum", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.cfg"),
        "state = mi\nN = 8\nM = 4\nK = 2\nkappa = 0.5\ngrid = 0,8,81\nrefine = false\n",
    )
    .unwrap();
    let o = qgrating(
        dir.path(),
        &["spectrum", "--config", "run.cfg", "--kappa", "0.25"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let s = read_spectrum(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(s.get("kappa"), Some("0.25"));
    assert_eq!(s.detunings.len(), 81);
}

#[test]
fn inference_round_trip_and_phase() {
    let dir = tempfile::tempdir().unwrap();
    let o = qgrating(dir.path(), &["spectrum", "--preset", "fig2a"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = qgrating(dir.path(), &["infer", "fig2a_sf.csv", "-o", "p.csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = String::from_utf8(o.stdout).unwrap();
    assert!(report.contains("method: linear"));
    assert!(report.contains("mean: 15.0000000000"));
    assert!(report.contains("variance: 7.5000000000"));
    assert!(report.contains("phase: SF-like"));
    let dist = fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert!(dist.lines().any(|l| l.starts_with("15,")));
    let o = qgrating(dir.path(), &["infer", "fig2a_mi.csv"]);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("phase: MI-like"));
    assert!(dir.path().join("fig2a_mi_distribution.csv").exists());
}

#[test]
fn zero_spectrum_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("zero.csv"),
        "# state=sf geometry=single kappa=0.1 delta0=1 eta0=0.1\n0,0\n1,0\n2,0\n",
    )
    .unwrap();
    let o = qgrating(dir.path(), &["infer", "zero.csv"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn custom_distribution_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("ok.txt"),
        "q,p\n4,0.25\n5,0.5\n6,0.2500004\n",
    )
    .unwrap();
    fs::write(dir.path().join("off.txt"), "4,0.25\n5,0.5\n6,0.2\n").unwrap();
    let o = qgrating(
        dir.path(),
        &["spectrum", "--state", "custom(ok.txt)", "-o", "c.csv"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = qgrating(dir.path(), &["spectrum", "--state", "custom(off.txt)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("off.txt: line 3"), "{}", stderr(&o));
}

#[test]
fn oracle_check_passes_small_lattices() {
    let dir = tempfile::tempdir().unwrap();
    let o = qgrating(
        dir.path(),
        &["oracle-check", "--max-atoms", "6", "--max-sites", "6"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("all passed"));
    assert!(!out.contains("FAIL"));
    let o = qgrating(
        dir.path(),
        &["oracle-check", "--max-atoms", "0", "--max-sites", "4"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn oracle_exit_codes_distinguish_cap_from_failure() {
    let dir = tempfile::tempdir().unwrap();
    let capped = qgrating(
        dir.path(),
        &[
            "oracle-check",
            "--max-atoms",
            "6",
            "--max-sites",
            "6",
            "--cap",
            "10",
        ],
    );
    assert_eq!(capped.status.code(), Some(1));
    assert!(stderr(&capped).contains("cap"));
    let strict = qgrating(
        dir.path(),
        &[
            "oracle-check",
            "--max-atoms",
            "4",
            "--max-sites",
            "4",
            "--tolerance",
            "0",
        ],
    );
    assert_eq!(strict.status.code(), Some(3), "{}", stderr(&strict));
}

#[test]
fn rb87_preset_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let o = qgrating(dir.path(), &["presets", "rb87"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let kappa: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("kappa = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((kappa - 0.3883).abs() < 1e-4, "{kappa}");
    assert!((10.4f64 * 10.4 / 30.0 - 3.6053).abs() < 1e-4);
}

#[test]
fn measurement_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| {
        let o = qgrating(
            dir.path(),
            &[
                "spectrum",
                "--measure",
                "--seed",
                seed,
                "--grid",
                "0,30,301",
            ],
        );
        assert!(o.status.success(), "{}", stderr(&o));
        String::from_utf8(o.stdout).unwrap()
    };
    assert_eq!(run("11"), run("11"));
    let header = run("11").lines().next().unwrap().to_string();
    assert!(header.contains("seed=11") && header.contains("measured="));
}
