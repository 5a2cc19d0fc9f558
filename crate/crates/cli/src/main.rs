mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, ArgMatches, Args, Command, CommandFactory, FromArgMatches, Parser, Subcommand};

/// Socially-aware learning dynamics in repeated matrix games.
///
/// Games are named `pd`, `cg`, `mixonly`, `pgg:N,r,c`, or given as a path to
/// a TOML game file. Learners are written like `sapga(w0=0.85,api=0.001)`.
#[derive(Parser, Debug)]
#[command(name = "saiga", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for every random draw.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available parallelism). Does not change results.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Flat TOML file of flag values; command-line flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Run one repeated game and write the per-step CSV and a summary JSON.
    Simulate(commands::SimulateArgs),
    /// Integrate the attitude-augmented gradient dynamics of a 2x2 game.
    Dynamics(commands::DynamicsArgs),
    /// Equilibria of the dynamics with their stability, as JSON.
    Equilibria(commands::EquilibriaArgs),
    /// Self-play welfare benchmark over random ordinal games.
    Bench(commands::BenchArgs),
    /// Run one of the canned experiments.
    Experiment(commands::ExperimentArgs),
    /// Describe a game: payoffs, equilibria, category, reduced coefficients.
    GameInfo(commands::GameInfoArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<saiga::Error> for CliError {
    fn from(e: saiga::Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn command() -> Command {
    let mut cmd = Cli::command();
    let names: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    for name in names {
        cmd = cmd.mut_subcommand(name, |s| s.args_override_self(true));
    }
    cmd
}

/// Splices the config file's flags right after the subcommand name.
fn with_config(cmd: &Command, raw: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(pos) = raw
        .iter()
        .skip(1)
        .position(|a| cmd.find_subcommand(a.to_string_lossy().as_ref()).is_some())
        .map(|p| p + 1)
    else {
        return Ok(raw);
    };
    let mut path = None;
    let mut it = raw[pos + 1..].iter();
    while let Some(a) = it.next() {
        let a = a.to_string_lossy();
        if a == "--" {
            break;
        } else if a == "--config" {
            path = it.next().map(PathBuf::from);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else { return Ok(raw) };
    let sub = cmd.find_subcommand(raw[pos].to_string_lossy().as_ref()).expect("found above");
    let flags = config::overlay_flags(sub, &path).map_err(|e| CliError::Usage(e.0))?;
    let mut out = raw[..=pos].to_vec();
    out.extend(flags);
    out.extend_from_slice(&raw[pos + 1..]);
    Ok(out)
}

/// Flags that reproduce this invocation, defaults included.
pub fn replay(sub: &Command, m: &ArgMatches) -> Vec<String> {
    let mut out = vec![sub.get_name().to_string()];
    for arg in sub.get_arguments() {
        let id = arg.get_id().as_str();
        if matches!(id, "config" | "jobs") {
            continue;
        }
        let long = arg.get_long().unwrap_or(id);
        match arg.get_action() {
            ArgAction::SetTrue => {
                if m.get_flag(id) {
                    out.push(format!("--{long}"));
                }
            }
            ArgAction::Set | ArgAction::Append => {
                for v in m.get_raw(id).into_iter().flatten() {
                    if !arg.is_positional() {
                        out.push(format!("--{long}"));
                    }
                    out.push(v.to_string_lossy().into_owned());
                }
            }
            _ => {}
        }
    }
    out
}

fn real_main() -> Result<(), CliError> {
    let cmd = command();
    let argv = with_config(&cmd, std::env::args_os().collect())?;
    let matches = match cmd.clone().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { Err(CliError::Usage(String::new())) } else { Ok(()) };
        }
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Usage(e.to_string()))?;
    let (name, sub_m) = matches.subcommand().expect("subcommand is required");
    let replay = replay(cmd.find_subcommand(name).expect("parsed"), sub_m);
    commands::dispatch(cli.command, replay)
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
