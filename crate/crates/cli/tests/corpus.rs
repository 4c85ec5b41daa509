use std::path::PathBuf;
use std::process::Command;

fn corpus() -> Vec<PathBuf> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "scn"))
        .collect();
    files.sort();
    files
}

fn dchoice(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dchoice")).args(args).output().unwrap()
}

#[test]
fn every_corpus_scenario_exits_zero() {
    let out = tempfile::tempdir().unwrap();
    for f in corpus() {
        let o = dchoice(&["run", f.to_str().unwrap(), "--out", out.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", f.display(), String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8(o.stdout).unwrap().contains("\nstatus=pass\n"));
    }
}

#[test]
fn unmarked_screen_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let f = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/eraser_unmarked.scn");
    let o = dchoice(&["run", f, "--out", dir.path().to_str().unwrap()]);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.lines().any(|l| l == "visibility=1.000000"), "{stdout}");
    let csv = std::fs::read_to_string(dir.path().join("eraser_unmarked_screen.csv")).unwrap();
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,intensity"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (x, v) = l.split_once(',').unwrap();
            (x.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows[0].0, -10.0);
    // x = -10 is three envelope widths beyond the lower slit.
    let peak = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    assert!(rows[0].1 < 0.01 * peak);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let bad = write("bad.scn", "experiment = double_slit_eraser\nmarker = banana\n");
    let o = dchoice(&["run", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    // Parses, but t lies outside the cat's domain.
    let late = write("late.scn", "experiment = temporal\nscenario = cat\nt0 = 0.1\nt = 3.0\n");
    assert_eq!(dchoice(&["run", &late]).status.code(), Some(2));
    assert_eq!(dchoice(&["run", "/nonexistent/x.scn"]).status.code(), Some(2));
    let good = write("good.scn", "experiment = tradeoff\n");
    let file_as_dir = write("blocker", "");
    let o = dchoice(&["run", &good, "--out", &format!("{file_as_dir}/sub")]);
    // tradeoff has no patterns, so nothing needs the directory.
    assert_eq!(o.status.code(), Some(0));
    let screen = write("screen.scn", "experiment = wheeler\n");
    let o = dchoice(&["run", &screen, "--out", &format!("{file_as_dir}/sub")]);
    assert_eq!(o.status.code(), Some(2));
    let o = dchoice(&["--list"]);
    assert_eq!(o.status.code(), Some(0));
    let listing = String::from_utf8(o.stdout).unwrap();
    for name in ["wheeler", "double_slit_eraser", "herzog", "nocomm", "histories", "[screen]"] {
        assert!(listing.contains(name));
    }
}

#[test]
fn seed_flag_overrides_file() {
    let f = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/swapping_bell.scn");
    let a = dchoice(&["run", f, "--seed", "1"]).stdout;
    let b = dchoice(&["run", f, "--seed", "1"]).stdout;
    let c = dchoice(&["run", f, "--seed", "2"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(String::from_utf8(a).unwrap().contains("setting.seed=1\n"));
}

#[test]
fn ascii_plot_behind_flag() {
    let f = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/eraser_unmarked.scn");
    let plain = String::from_utf8(dchoice(&["run", f]).stdout).unwrap();
    let plotted = String::from_utf8(dchoice(&["run", f, "--ascii"]).stdout).unwrap();
    assert!(!plain.contains('#'));
    assert!(plotted.starts_with(&plain));
    assert!(plotted.lines().filter(|l| l.starts_with('|')).all(|l| l.len() <= 61));
}
