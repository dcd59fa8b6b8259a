//! `meros` command-line tool.
//!
//! Exit codes: 0 success, 1 validation errors or rejected trace, 2 usage
//! error, 3 input I/O or parse failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use meros::ingest::{lift, parse_snapshot, LiftOptions};
use meros::protocol::{parse_trace, simulate_with, TransitionTable};
use meros::render::{render, Level, Mode, RenderError, RenderOptions};
use meros::text::{parse_model_bytes, serialize_model};
use meros::validate::{has_errors, validate, Diagnostic, ValidateOptions};
use meros::{compute_stats, RosSystem};

#[derive(Parser)]
#[command(name = "meros", version, about = "Model, check and draw ROS 1 systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model against the rule registry.
    Validate {
        model: PathBuf,
        /// Treat every running system as compact (missing master/rosout is a warning).
        #[arg(long)]
        compact: bool,
        /// Fail on warnings too.
        #[arg(long)]
        warnings_as_errors: bool,
    },
    /// Lift a computation-graph snapshot (JSON) into a model.
    Ingest {
        snapshot: PathBuf,
        /// Keep action topic quintuples as plain topics.
        #[arg(long)]
        no_actions: bool,
        /// Elide the ROS master and rosout nodes.
        #[arg(long)]
        compact: bool,
        /// Running system name; defaults to the snapshot file stem.
        #[arg(long)]
        name: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a running system as Graphviz DOT.
    Render {
        model: PathBuf,
        #[arg(long, default_value = "blocks")]
        mode: Mode,
        #[arg(long, default_value = "connection")]
        level: Level,
        /// Draw each action as its five topics.
        #[arg(long)]
        expand_actions: bool,
        /// Include the ROS master and rosout nodes.
        #[arg(long)]
        infra: bool,
        /// Running system to draw when the model holds several.
        #[arg(long)]
        system: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a workspace model from a directory of ROS packages.
    Scan {
        dir: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Step the action client and server through a trace of events.
    Simulate {
        trace: PathBuf,
        /// Transition table replacing the built-in one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Count model elements.
    Stats { model: PathBuf },
}

/// Why a command stopped early.
enum Failure {
    Rejected,
    Usage(String),
    Input(Vec<String>),
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure::Input(vec![message.into()])
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate {
            model,
            compact,
            warnings_as_errors,
        } => cmd_validate(&model, compact, warnings_as_errors),
        Command::Ingest {
            snapshot,
            no_actions,
            compact,
            name,
            output,
        } => cmd_ingest(&snapshot, !no_actions, compact, name, output.as_deref()),
        Command::Render {
            model,
            mode,
            level,
            expand_actions,
            infra,
            system,
            output,
        } => {
            let options = RenderOptions {
                mode,
                level,
                show_infrastructure: infra,
                expand_actions,
            };
            cmd_render(&model, &options, system.as_deref(), output.as_deref())
        }
        Command::Scan { dir, output } => cmd_scan(&dir, output.as_deref()),
        Command::Simulate { trace, table } => cmd_simulate(&trace, table.as_deref()),
        Command::Stats { model } => cmd_stats(&model),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Input(lines)) => {
            for l in lines {
                eprintln!("{l}");
            }
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read(path)?).map_err(|_| Failure::input(format!("{}: input is not valid UTF-8", path.display())))
}

fn load_model(path: &Path) -> Result<RosSystem, Failure> {
    parse_model_bytes(&read(path)?)
        .map_err(|diags| Failure::Input(diags.iter().map(|d| format!("{}:{d}", path.display())).collect()))
}

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::input(format!("stdout: {e}")))
        }
    }
}

fn print_diagnostics(diags: &[Diagnostic], to_stderr: bool) {
    for d in diags {
        if to_stderr {
            eprintln!("{d}");
        } else {
            println!("{d}");
        }
    }
}

fn cmd_validate(path: &Path, compact: bool, warnings_as_errors: bool) -> Outcome {
    let model = load_model(path)?;
    let options = ValidateOptions {
        treat_warnings_as_errors: warnings_as_errors,
        assume_compact: compact,
    };
    let diags = validate(&model, options);
    print_diagnostics(&diags, false);
    if has_errors(&diags) {
        Err(Failure::Rejected)
    } else {
        Ok(())
    }
}

fn cmd_ingest(path: &Path, detect: bool, compact: bool, name: Option<String>, output: Option<&Path>) -> Outcome {
    let text = read_text(path)?;
    let parsed = parse_snapshot(&text)
        .map_err(|diags| Failure::Input(diags.iter().map(|d| format!("{}: {d}", path.display())).collect()))?;
    let name = name.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .filter(|s| !s.is_empty())
            .unwrap_or_else(|| "snapshot".to_string())
    });
    let options = LiftOptions {
        name,
        compact,
        detect_actions: detect,
    };
    let lifted = lift(&parsed.snapshot, &options).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    for w in parsed.warnings.iter().chain(lifted.warnings()) {
        eprintln!("{}: {w}", path.display());
    }
    let model = RosSystem {
        workspaces: vec![],
        running_systems: vec![lifted.system],
    };
    emit(output, &serialize_model(&model))
}

fn cmd_render(path: &Path, options: &RenderOptions, system: Option<&str>, output: Option<&Path>) -> Outcome {
    let model = load_model(path)?;
    let rs = match (system, &model.running_systems[..]) {
        (Some(name), _) => model
            .running_system(name)
            .ok_or_else(|| Failure::Usage(format!("no running system named `{name}`")))?,
        (None, [only]) => only,
        (None, []) => {
            return Err(Failure::input(format!(
                "{}: model has no running system",
                path.display()
            )))
        }
        (None, _) => {
            let mut names: Vec<&str> = model.running_systems.iter().map(|r| r.name.as_str()).collect();
            names.sort();
            return Err(Failure::Usage(format!(
                "model holds several running systems; choose one with --system ({})",
                names.join(", ")
            )));
        }
    };
    match render(rs, options) {
        Ok(dot) => emit(output, &dot),
        Err(RenderError::Invalid(diags)) => {
            print_diagnostics(&diags, true);
            Err(Failure::Rejected)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(Failure::Rejected)
        }
    }
}

fn cmd_scan(dir: &Path, output: Option<&Path>) -> Outcome {
    let ws = meros::scan::scan(dir).map_err(|errs| Failure::Input(errs.iter().map(ToString::to_string).collect()))?;
    let model = RosSystem {
        workspaces: vec![ws],
        running_systems: vec![],
    };
    emit(output, &serialize_model(&model))?;
    let diags = validate(&model, ValidateOptions::default());
    print_diagnostics(&diags, true);
    if has_errors(&diags) {
        Err(Failure::Rejected)
    } else {
        Ok(())
    }
}

fn cmd_simulate(path: &Path, table: Option<&Path>) -> Outcome {
    let table = match table {
        Some(p) => {
            TransitionTable::parse(&read_text(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?
        }
        None => TransitionTable::actionlib(),
    };
    let trace = parse_trace(&read_text(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let report = simulate_with(&table, &trace);
    emit(None, &report.to_text())?;
    if report.accepted() {
        Ok(())
    } else {
        Err(Failure::Rejected)
    }
}

fn cmd_stats(path: &Path) -> Outcome {
    let model = load_model(path)?;
    emit(None, &compute_stats(&model).to_text())
}
