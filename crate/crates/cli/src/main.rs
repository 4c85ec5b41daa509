use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dchoice::{execute_file, schema, Options};

#[derive(Parser)]
#[command(name = "dchoice", version, about = "Run quantum eraser and delayed-choice scenarios")]
struct Cli {
    /// Print every experiment's settings with defaults and exit.
    #[arg(long)]
    list: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        file: PathBuf,
        /// Directory for per-pattern CSV files.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append a 60-column text plot of each pattern.
        #[arg(long)]
        ascii: bool,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        print!("{}", schema::listing());
        return ExitCode::SUCCESS;
    }
    let Some(Command::Run { file, out, ascii, seed }) = cli.command else {
        eprintln!("nothing to do; try `dchoice run <file>` or `dchoice --list`");
        return ExitCode::from(2);
    };
    let opts = Options { out, ascii, seed };
    let code = execute_file(&file, &opts, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    ExitCode::from(code as u8)
}
