//! Command-line front end of the kicked-top library. Every command writes
//! CSV (or JSON) files with a header row and round-trip float formatting;
//! reruns with the same options produce identical bytes.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use serde::de::DeserializeOwned;
use serde::Serialize;

use config::{resolve, Cli, Command, GlobalArgs};
pub use error::{CliError, CliResult};

fn execute<T>(global: &GlobalArgs, args: &T, command: fn(&GlobalArgs, &T) -> CliResult<()>) -> CliResult<()>
where
    T: Serialize + DeserializeOwned + Default + Sync,
{
    let (global, args) = resolve(global, args)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = global.threads {
        if threads == 0 {
            return Err(CliError::invalid("--threads must be at least 1"));
        }
        builder = builder.num_threads(threads);
    }
    let pool = builder.build().map_err(|e| CliError::invalid(format!("thread pool: {e}")))?;
    pool.install(|| command(&global, &args))
}

/// Runs one parsed invocation.
pub fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Evolve(args) => execute(g, args, commands::evolve::run),
        Command::Sweep(args) => execute(g, args, commands::sweep::run),
        Command::Tunnel(args) => execute(g, args, commands::tunnel::run),
        Command::Husimi(args) => execute(g, args, commands::husimi::run),
        Command::Classical(args) => execute(g, args, commands::classical::run),
        Command::Tomo(args) => execute(g, args, commands::tomo::run),
    }
}
