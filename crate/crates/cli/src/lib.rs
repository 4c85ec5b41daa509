//! Scenario files in, reports out. `dchoice run file.scn` parses a scenario,
//! runs the experiment it names and prints a `key=value` summary.

pub mod emit;
pub mod runner;
pub mod scenario;
pub mod schema;

use std::io::Write;
use std::path::{Path, PathBuf};

pub use emit::{emit, EmitError, Targets};
pub use runner::{run, RunError, EXIT_INVALID, EXIT_INVARIANT, EXIT_OK};
pub use scenario::{parse_scenario, serialize, ErrorKind, Scenario, ScenarioError, Value};

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub out: Option<PathBuf>,
    pub ascii: bool,
    pub seed: Option<u64>,
}

/// Full `run` command: parse, execute, emit. Diagnostics go to `err`; the
/// return value is the process exit code.
pub fn execute_file(path: &Path, opts: &Options, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return EXIT_INVALID;
        }
    };
    let prefix = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    execute(&text, &prefix, opts, out, err)
}

pub fn execute(text: &str, prefix: &str, opts: &Options, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut scenario = match parse_scenario(text) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INVALID;
        }
    };
    if let Some(seed) = opts.seed {
        scenario.seed = seed;
    }
    let report = match run(&scenario) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let code = runner::exit_code(&report);
    let targets = Targets {
        csv_dir: opts.out.clone().filter(|_| scenario.csv),
        prefix: prefix.to_string(),
        ascii: opts.ascii || scenario.ascii,
    };
    if let Err(e) = emit(&report, code, &targets, out) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INVALID;
    }
    if code != EXIT_OK {
        for v in report.verdicts.iter().filter(|v| !v.passed) {
            let _ = writeln!(err, "invariant violated: {}", v.name);
        }
    }
    code
}
