//! `arboreal`: reproducible runs of the tree-group, counting and prime
//! statistics computations. Every report carries a header with the tool
//! version, the resolved flags, the seed, the worker count and the run time.

mod commands;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use arboreal_core::experiments::{default_workers, with_workers, RunHeader, SCHEMA_VERSION};
use clap::{ArgMatches, CommandFactory, FromArgMatches, Parser};

use commands::Command;
use output::Format;

#[derive(Parser, Debug)]
#[command(name = "arboreal", version, about = "Automorphisms of the ternary tree attached to f(z) = -2z^3 + 3z^2")]
#[command(propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every random choice (Monte-Carlo sampling, test points)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for prime scans and sampling [default: available parallelism]
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Output shape
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn raw_flags(m: &ArgMatches) -> BTreeMap<String, String> {
    let mut flags = BTreeMap::new();
    let mut cur = Some(m);
    while let Some(m) = cur {
        for id in m.ids() {
            if let Ok(Some(vals)) = m.try_get_raw(id.as_str()) {
                let v: Vec<String> = vals.map(|s| s.to_string_lossy().into_owned()).collect();
                flags.insert(id.to_string(), v.join(","));
            }
        }
        cur = m.subcommand().map(|(_, s)| s);
    }
    flags
}

fn main() -> ExitCode {
    let matches = match Cli::command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let flags = raw_flags(&matches);
    let workers = cli.workers.unwrap_or_else(default_workers);
    let started = Instant::now();
    let result = with_workers(workers, || commands::run(&cli.command, cli.seed)).and_then(|r| r);
    let rendered = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("arboreal: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let header = RunHeader {
        tool: "arboreal".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema_version: SCHEMA_VERSION,
        command: cli.command.name().into(),
        flags,
        seed: cli.command.uses_seed().then_some(cli.seed),
        workers,
        elapsed_seconds: started.elapsed().as_secs_f64(),
        paper_anchor: rendered.anchor.into(),
    };
    if let Err(e) = output::emit(&rendered, &header, cli.format, cli.out.as_deref()) {
        eprintln!("arboreal: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
