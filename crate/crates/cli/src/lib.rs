//! Command-line front end for the squeezed heat engine: steady states and
//! trajectories, figure data, EMP tables and one-parameter sweeps, all as CSV.

pub mod commands;
pub mod config;
pub mod csvout;
mod error;
pub mod figures;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};

pub use config::ScenarioConfig;
pub use csvout::{Cell, Table};
pub use error::CliError;

fn key_args() -> Vec<Arg> {
    config::KEYS
        .iter()
        .map(|k| {
            Arg::new(k.name)
                .long(k.name)
                .value_name("VALUE")
                .help(k.help)
                .global(true)
                .help_heading("Scenario keys")
        })
        .collect()
}

pub fn command() -> Command {
    Command::new("sqengine")
        .version(csvout::VERSION)
        .about("Four-level heat engine with squeezed reservoirs and cavity: CSV data generator")
        .after_help(
            "Configuration precedence: --config file, then --set assignments in order, then --<key> flags.\n\
             Cavity squeezing x = 10 is used as the stand-in for infinite squeezing.\n\
             Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.",
        )
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(Arg::new("config").long("config").value_name("PATH").value_parser(value_parser!(PathBuf)).global(true).help("flat key = value configuration file"))
        .arg(Arg::new("out").long("out").value_name("PATH").value_parser(value_parser!(PathBuf)).global(true).help("write CSV here instead of stdout"))
        .arg(Arg::new("jobs").long("jobs").value_name("N").value_parser(value_parser!(usize)).global(true).help("worker threads for sweeps (default: all cores)"))
        .arg(Arg::new("set").long("set").value_name("KEY=VALUE").action(ArgAction::Append).global(true).help("override one configuration key (repeatable)"))
        .args(key_args())
        .subcommand(Command::new("steady").about("trajectory from the ground state plus the linear-solve steady state"))
        .subcommand(
            Command::new("figure")
                .about("data behind one figure panel")
                .arg(Arg::new("id").required(true).help(format!("one of: {}", figures::ids().join(", ")))),
        )
        .subcommand(Command::new("emp").about("efficiency at maximum power over a Carnot-efficiency grid"))
        .subcommand(Command::new("sweep").about("steady-state observables along one parameter"))
}

/// Assignments in precedence order: file, `--set`, per-key flags.
fn overrides(m: &ArgMatches) -> Result<Vec<(String, String)>, CliError> {
    let mut out = match m.get_one::<PathBuf>("config") {
        Some(path) => config::read_config_file(path)?,
        None => vec![],
    };
    for s in m.get_many::<String>("set").into_iter().flatten() {
        out.push(config::parse_assignment(s)?);
    }
    for k in config::KEYS {
        if let Some(v) = m.get_one::<String>(k.name) {
            out.push((k.name.to_string(), v.clone()));
        }
    }
    Ok(out)
}

fn emit(table: &Table, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            table.write_to(BufWriter::new(file))
        }
        None => table.write_to(io::stdout().lock()),
    }
}

/// Runs the already parsed command line.
pub fn execute(m: &ArgMatches) -> Result<(), CliError> {
    let (name, sub) = m
        .subcommand()
        .ok_or_else(|| CliError::Usage("missing subcommand".into()))?;
    let assignments = overrides(sub)?;
    let jobs = sub.get_one::<usize>("jobs").copied();
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let table = pool.install(|| match name {
        "figure" => {
            let id = sub.get_one::<String>("id").expect("required by clap");
            let fig = figures::lookup(id).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown figure `{id}` (expected one of {})",
                    figures::ids().join(", ")
                ))
            })?;
            fig.run(&assignments)
        }
        _ => {
            let mut cfg = ScenarioConfig::default();
            cfg.apply(&assignments)?;
            match name {
                "steady" => commands::steady(&cfg),
                "emp" => commands::emp(&cfg),
                "sweep" => commands::sweep(&cfg),
                other => Err(CliError::Usage(format!("unknown subcommand `{other}`"))),
            }
        }
    })?;
    emit(&table, sub.get_one::<PathBuf>("out"))
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&matches) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("sqengine: {e}");
            e.exit_code()
        }
    }
}
