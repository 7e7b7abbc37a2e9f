use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gcsurgery::group::Budgets;
use gcsurgery::scenario::{emit_report, execute_scenario, parse_scenario, Format, ScenarioRun};

#[derive(Parser)]
#[command(name = "gcsurgery", version, about = "Run torus-surgery scenario scripts and report invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute scenario files and check their expectations.
    Run {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Emit JSON instead of the human-readable table.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = Budgets::default().max_cosets)]
        max_cosets: usize,
        #[arg(long, default_value_t = Budgets::default().tietze_budget)]
        tietze_budget: usize,
        #[arg(long, default_value_t = Budgets::default().relator_cap)]
        relator_cap: usize,
    },
}

fn run_file(path: &PathBuf, budgets: Budgets) -> Result<ScenarioRun, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    let script = parse_scenario(&name, &text).map_err(|e| format!("{}: {e}", path.display()))?;
    execute_scenario(&script, budgets).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let Command::Run {
        files,
        json,
        max_cosets,
        tietze_budget,
        relator_cap,
    } = Cli::parse().command;
    let budgets = Budgets {
        max_cosets: max_cosets.max(1),
        tietze_budget: tietze_budget.max(1),
        relator_cap,
    };
    // Scenarios are independent, so run them side by side.
    let results: Vec<Result<ScenarioRun, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = files.iter().map(|f| scope.spawn(move || run_file(f, budgets))).collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    });
    let mut runs = Vec::new();
    let mut errored = false;
    for r in results {
        match r {
            Ok(run) => runs.push(run),
            Err(e) => {
                eprintln!("error: {e}");
                errored = true;
            }
        }
    }
    print!("{}", emit_report(&runs, if json { Format::Json } else { Format::Human }));
    if errored {
        ExitCode::from(2)
    } else if runs.iter().any(ScenarioRun::has_failure) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
