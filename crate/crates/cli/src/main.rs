use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use ptwist_cli::report::Verdict;
use ptwist_cli::scenario::{materialize, parse_scenario, ScenarioError};
use ptwist_cli::{explain, runner, suite};
use ptwist_core::field::FieldSpec;

/// Exact-arithmetic workbench for spherical twists and P-twists on semifree
/// differential-graded modules.
#[derive(Parser)]
#[command(name = "ptwist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and emit its JSON report.
    Run {
        file: PathBuf,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the scenario field: `q` or `fp:PRIME`.
        #[arg(long)]
        field: Option<String>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include per-task wall-clock times (breaks byte-for-byte report
        /// reproducibility).
        #[arg(long)]
        timings: bool,
    },
    /// Run every built-in scenario; exit 0 only if all tasks pass.
    Suite {
        /// Seed applied to every scenario (default 0).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the combined report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include per-task wall-clock times.
        #[arg(long)]
        timings: bool,
        /// List the built-in scenario names and exit.
        #[arg(long)]
        list: bool,
    },
    /// Print the math-to-code dictionary entry for a task name.
    Explain { task: String },
}

const EXIT_TASK_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

fn scenario_error(e: &ScenarioError) -> ExitCode {
    eprintln!("{e}");
    ExitCode::from(e.exit_code())
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict_lines(report: &ptwist_cli::report::Report) {
    for t in &report.tasks {
        let v = match t.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "inconclusive",
        };
        eprintln!("{:12} {} ({})", v, t.task, report.scenario);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            file,
            seed,
            field,
            out,
            timings,
        } => {
            let field = match field.as_deref().map(FieldSpec::from_str).transpose() {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("invalid --field: {e}");
                    return ExitCode::from(EXIT_VALIDATION);
                }
            };
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", file.display());
                    return ExitCode::from(EXIT_PARSE);
                }
            };
            let doc = match parse_scenario(&text) {
                Ok(d) => d,
                Err(e) => return scenario_error(&e),
            };
            let scenario = match materialize(doc, field, seed) {
                Ok(s) => s,
                Err(e) => return scenario_error(&e),
            };
            for w in &scenario.warnings {
                eprintln!("warning: {w}");
            }
            let report = runner::run(scenario, timings);
            verdict_lines(&report);
            if emit(&report.to_json_string(), out.as_ref()).is_err() {
                eprintln!("cannot write report");
                return ExitCode::from(EXIT_TASK_FAILURE);
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_TASK_FAILURE)
            }
        }
        Command::Suite {
            seed,
            out,
            timings,
            list,
        } => {
            if list {
                for (name, _) in suite::BUILTIN {
                    println!("{name}");
                }
                return ExitCode::SUCCESS;
            }
            let report = match suite::run_suite(Some(seed), timings) {
                Ok(r) => r,
                Err(e) => return scenario_error(&e),
            };
            for r in &report.scenarios {
                verdict_lines(r);
            }
            if emit(&report.to_json_string(), out.as_ref()).is_err() {
                eprintln!("cannot write report");
                return ExitCode::from(EXIT_TASK_FAILURE);
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_TASK_FAILURE)
            }
        }
        Command::Explain { task } => match explain::lookup(&task) {
            Some(entry) => {
                print!("{}", explain::render(entry));
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("unknown task `{task}`; known tasks:");
                for e in explain::ENTRIES {
                    eprintln!("  {}", e.task);
                }
                ExitCode::from(EXIT_PARSE)
            }
        },
    }
}
