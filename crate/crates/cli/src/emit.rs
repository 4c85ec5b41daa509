//! Report output: CSV per pattern, a flat `key=value` summary, and an
//! optional ASCII fringe plot.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use dchoice_core::experiments::ExperimentReport;
use dchoice_core::optics::ScreenPattern;
use thiserror::Error;

pub const PLOT_COLUMNS: usize = 60;
pub const PLOT_ROWS: usize = 12;

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Default)]
pub struct Targets {
    /// Directory for CSV files; none means no files are written.
    pub csv_dir: Option<PathBuf>,
    /// File-name prefix, normally the scenario file stem.
    pub prefix: String,
    pub ascii: bool,
}

/// `x,intensity` with LF endings. Rust's `Display` for f64 is the shortest
/// decimal that parses back to the same bits.
pub fn csv(pattern: &ScreenPattern) -> String {
    let mut out = String::from("x,intensity\n");
    for (x, v) in pattern.xs.iter().zip(&pattern.intensity) {
        let _ = writeln!(out, "{x},{v}");
    }
    out
}

fn fixed(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

pub fn summary(report: &ExperimentReport, exit_code: i32) -> String {
    let mut out = format!("experiment={}\n", report.experiment);
    for (k, v) in &report.settings {
        let _ = writeln!(out, "setting.{k}={v}");
    }
    for (k, v) in &report.scalars {
        let _ = writeln!(out, "{k}={}", fixed(*v));
    }
    for (name, p) in &report.patterns {
        let _ = writeln!(out, "pattern.{name}.visibility={}", fixed(p.visibility));
    }
    for v in &report.verdicts {
        let _ = writeln!(out, "verdict.{}={}", v.name, if v.passed { "pass" } else { "fail" });
    }
    let _ = writeln!(out, "status={}", if exit_code == 0 { "pass" } else { "fail" });
    out
}

/// Column maxima of the pattern over 60 equal bins, scaled to the tallest.
pub fn ascii_plot(name: &str, pattern: &ScreenPattern) -> String {
    let n = pattern.intensity.len();
    let mut cols = [0.0f64; PLOT_COLUMNS];
    for (k, &v) in pattern.intensity.iter().enumerate() {
        let c = (k * PLOT_COLUMNS / n.max(1)).min(PLOT_COLUMNS - 1);
        cols[c] = cols[c].max(v);
    }
    let peak = cols.iter().cloned().fold(0.0, f64::max);
    let heights: Vec<usize> = cols
        .iter()
        .map(|&v| if peak > 0.0 { (v / peak * PLOT_ROWS as f64).round() as usize } else { 0 })
        .collect();
    let mut out = format!("{name} (peak {})\n", fixed(peak));
    for row in (1..=PLOT_ROWS).rev() {
        let line: String = heights.iter().map(|&h| if h >= row { '#' } else { ' ' }).collect();
        let _ = writeln!(out, "|{}", line.trim_end());
    }
    let _ = writeln!(out, "+{}", "-".repeat(PLOT_COLUMNS));
    let (a, b) = (pattern.xs.first().copied().unwrap_or(0.0), pattern.xs.last().copied().unwrap_or(0.0));
    let _ = writeln!(out, " {:<30}{:>30}", fixed(a), fixed(b));
    out
}

fn file_name(prefix: &str, pattern: &str) -> String {
    let clean = |s: &str| -> String {
        s.chars().map(|c| if c.is_ascii_alphanumeric() || "_-.".contains(c) { c } else { '_' }).collect()
    };
    if prefix.is_empty() {
        format!("{}.csv", clean(pattern))
    } else {
        format!("{}_{}.csv", clean(prefix), clean(pattern))
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), EmitError> {
    std::fs::write(path, text).map_err(|source| EmitError::Io { path: path.to_path_buf(), source })
}

/// Write CSVs (if requested), then the summary and any plots to `out`.
/// Returns the files written.
pub fn emit(
    report: &ExperimentReport,
    exit_code: i32,
    targets: &Targets,
    out: &mut dyn Write,
) -> Result<Vec<PathBuf>, EmitError> {
    let mut written = Vec::new();
    if let Some(dir) = targets.csv_dir.as_ref().filter(|_| !report.patterns.is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| EmitError::Io { path: dir.clone(), source })?;
        for (name, p) in &report.patterns {
            let path = dir.join(file_name(&targets.prefix, name));
            write_file(&path, &csv(p))?;
            written.push(path);
        }
    }
    let stdout = PathBuf::from("<stdout>");
    let io = |source| EmitError::Io { path: stdout.clone(), source };
    out.write_all(summary(report, exit_code).as_bytes()).map_err(io)?;
    if targets.ascii {
        for (name, p) in &report.patterns {
            out.write_all(b"\n").map_err(io)?;
            out.write_all(ascii_plot(name, p).as_bytes()).map_err(io)?;
        }
    }
    Ok(written)
}
