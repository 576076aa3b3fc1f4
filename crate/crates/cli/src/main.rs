mod args;
mod commands;
mod error;
mod manifest;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use cpns_core::Execution;

use args::{Cli, Command};
use error::{CliError, Result};
use manifest::RunManifest;

fn execution(workers: Option<usize>) -> Result<Execution> {
    match workers {
        Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(k) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global()
                .map_err(|e| CliError::Usage(format!("cannot start {k} workers: {e}")))?;
            Ok(Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => {
            log::warn!("built without the parallel feature, running sequentially");
            Ok(Execution::Sequential)
        }
        None if cfg!(feature = "parallel") => Ok(Execution::Parallel),
        None => Ok(Execution::Sequential),
    }
}

fn run(cli: Cli) -> Result<()> {
    let exec = execution(cli.workers)?;
    let seed = cli.seed;
    let invocation = match cli.command {
        Command::Generate(a) => commands::resolve_generate(a, seed)?,
        Command::Resist(a) => commands::resolve_resist(a, seed)?,
        Command::Sparsify(a) => commands::resolve_sparsify(a, seed)?,
        Command::Compare(a) => commands::resolve_compare(a, seed)?,
        Command::Importance(a) => commands::resolve_importance(a, seed)?,
        Command::Replay(a) => {
            let m = RunManifest::load(&a.manifest)?;
            if m.version != env!("CARGO_PKG_VERSION") {
                log::warn!(
                    "manifest written by version {}, replaying with {}",
                    m.version,
                    env!("CARGO_PKG_VERSION")
                );
            }
            m.invocation
        }
    };
    finish(invocation, &cli.out_dir, exec)
}

fn finish(invocation: manifest::Invocation, dir: &Path, exec: Execution) -> Result<()> {
    let outputs = commands::execute(&invocation, dir, exec)?;
    let manifest = RunManifest::new(invocation, outputs);
    let path = manifest.save(dir)?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
