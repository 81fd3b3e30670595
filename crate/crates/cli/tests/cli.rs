use std::path::Path;
use std::process::{Command, Output};

fn wgdisp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgdisp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn modes_table() {
    let o = wgdisp(&["modes", "--a", "1", "--b", "1", "--max-cutoff", "4.5"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(names, ["TE01", "TE10", "TM11", "TE11"]);

    let o = wgdisp(&["modes", "--a", "1", "--b", "2", "--max-cutoff", "1.6"]);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let k: f64 = rows[0].split(',').nth(4).unwrap().parse().unwrap();
    assert!(rows[0].starts_with("TE01,") && (k - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn argument_errors_exit_2() {
    let o = wgdisp(&["modes", "--a", "0", "--max-cutoff", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("a must be > 0"));
    assert_eq!(code(&wgdisp(&["reproduce", "fig9"])), 2);
    assert_eq!(
        code(&wgdisp(&["sweep", "--z-min", "1", "--z-max", "2", "--points", "1"])),
        2
    );
    assert_eq!(code(&wgdisp(&["energy", "--z", "1", "--x1", "3"])), 2);
    assert_eq!(code(&wgdisp(&["energy", "--z", "1", "--lambda-over-a", "1"])), 2);
    assert_eq!(code(&wgdisp(&["frobnicate"])), 2);
    assert_eq!(code(&wgdisp(&["--help"])), 0);
}

#[test]
fn input_file_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "# species\nE=0.06 d=(0,0,1)\nE=abc d=(0,0,1)\n");
    let o = wgdisp(&["energy", "--z", "1", "--species1", &bad]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let missing = dir.path().join("none.txt");
    assert_eq!(
        code(&wgdisp(&[
            "energy",
            "--z",
            "1",
            "--species1",
            missing.to_str().unwrap()
        ])),
        3
    );
    let cfg = write(dir.path(), "c.cfg", "unknown-key = 1\n");
    assert_eq!(code(&wgdisp(&["modes", "--config", &cfg])), 3);
    assert_eq!(
        code(&wgdisp(&[
            "modes",
            "--config",
            missing.to_str().unwrap(),
            "--max-cutoff",
            "4"
        ])),
        3
    );
}

#[test]
fn mode_cap_exits_4() {
    let o = wgdisp(&["energy", "--z", "0.001"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
    assert_eq!(code(&wgdisp(&["modes", "--max-cutoff", "1e5", "--mode-cap", "100"])), 4);
}

#[test]
fn config_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.cfg",
        "# shared settings\nmax_cutoff = 4.5\nformat = json\nz-min = 3\n",
    );
    let from_file = wgdisp(&["modes", "--config", &cfg]);
    assert_eq!(code(&from_file), 0);
    assert!(stdout(&from_file).starts_with('{'));
    let overridden = wgdisp(&["--format", "csv", "modes", "--config", &cfg, "--max-cutoff", "3.2"]);
    assert_eq!(stdout(&overridden).lines().count(), 3);
}

#[test]
fn species_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let sp = write(dir.path(), "sp.txt", "E=0.0628 d=(0,0,1)\nE=0.0314 d=(0.5,0,0)\n");
    let out = dir.path().join("u.json");
    let o = wgdisp(&["energy", "--z", "2", "--species1", &sp, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["per_level_pair"].as_array().unwrap().len(), 4);
    assert!(doc["total"].as_f64().unwrap() < 0.0);
    assert!(doc["tensors"][0]["top_modes"].as_array().unwrap().len() <= 10);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &[
            "energy",
            "--z",
            "0.5",
            "--orientation",
            "fixed",
            "--dipole",
            "0.3,-0.2,1",
        ][..],
        &[
            "sweep",
            "--z-min",
            "0.5",
            "--z-max",
            "2",
            "--points",
            "4",
            "--spacing",
            "log",
        ],
        &[
            "coupling",
            "--mode",
            "TE10,TM11",
            "--z",
            "0.4",
            "--x1",
            "0.3",
            "--y2",
            "0.7",
        ],
    ] {
        let a = wgdisp(args);
        let b = wgdisp(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn sweep_recovers_free_space_at_small_separation() {
    let o = wgdisp(&["sweep", "--z-min", "0.01", "--z-max", "0.02", "--points", "2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "z_over_a,U,U_freespace_vdw,U_freespace_cp,ratio,tail_estimate"
    );
    for l in lines {
        let ratio: f64 = l.split(',').nth(4).unwrap().parse().unwrap();
        assert!((ratio - 1.0).abs() < 0.02, "{l}");
    }
}
