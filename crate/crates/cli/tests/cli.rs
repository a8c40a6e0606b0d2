use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohesion-lab"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn spectra_of_a_clique() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(
        &["spectra", "clique:24", "--kind", "rownorm", "--out", "s"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("lambda2 (rownorm) = 1.0435"),
        "{}",
        stdout(&o)
    );
    for f in ["laplacian.csv", "spectrum.csv", "bounds.json"] {
        assert!(dir.path().join("s").join(f).exists(), "{f}");
    }
}

#[test]
fn disconnected_file_refuses_bounds() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), "0 1\n1 2\n0 2\n3 4\n").unwrap();
    let o = lab(&["spectra", "g.txt"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("= 0.0000"), "{}", stdout(&o));
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["spectra", "nope.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_figure_is_a_precondition_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lab(&["figures", "fig9"], dir.path()).status.code(), Some(3));
    assert_eq!(
        lab(&["figures", "table1"], dir.path()).status.code(),
        Some(3)
    );
}

#[test]
fn mismatched_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"experiment": "fig5"}"#).unwrap();
    let o = lab(&["figures", "fig1", "--config", "c.json"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn runs_are_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = |threads: &'static str| {
        [
            "figures",
            "fig1",
            "--reps",
            "4",
            "--seed",
            "7",
            "--out",
            "o",
            "--threads",
            threads,
        ]
    };
    let ra = lab(&args("1"), a.path());
    let rb = lab(&args("3"), b.path());
    assert!(
        ra.status.success() && rb.status.success(),
        "{}",
        stdout(&ra)
    );
    let read = |d: &Path, f: &str| std::fs::read_to_string(d.join("o").join(f)).unwrap();
    for f in ["report.json", "fig1_pairs.csv", "fig1_spread.svg"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f}");
    }
    let report: serde_json::Value = serde_json::from_str(&read(a.path(), "report.json")).unwrap();
    assert_eq!(report["reps"], 4);
    assert_eq!(report["config"]["seed"], 7);
}

#[test]
fn target_miss_exits_one() {
    // the square-lattice hyperbola fit stays below its registered R²
    let dir = tempfile::tempdir().unwrap();
    let o = lab(&["figures", "fig4b", "--out", "o"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL fig4b.r2"), "{}", stdout(&o));
    assert!(dir.path().join("o/report.json").exists());
}

#[test]
fn generate_round_trips_through_spectra() {
    let dir = tempfile::tempdir().unwrap();
    let o = lab(
        &["generate", "ring_lattice:24,4", "--out", "ring.txt"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let o = lab(&["spectra", "ring.txt", "--kind", "rownorm"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("lambda2 (rownorm) = 0.0840"),
        "{}",
        stdout(&o)
    );
}
