//! `dfk`: validate, convert, enumerate and verify finite structures.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "dfk",
    version,
    about = "Information frames, domains and CF-approximation spaces"
)]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Leave out the timestamp and timing lines.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate every structure in a file and report its properties.
    Check { file: PathBuf },
    /// List the states of a frame and the covering pairs of their order.
    States {
        file: PathBuf,
        /// Frame to use; defaults to the first frame in the file.
        #[arg(long)]
        name: Option<String>,
    },
    /// Apply a functor to every structure in a file.
    Apply {
        functor: Functor,
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check that a structure survives the trip through another category.
    Roundtrip {
        file: PathBuf,
        #[arg(long)]
        via: Via,
    },
    /// Enumerate structures within bounds, optionally sampling a few.
    Generate {
        #[arg(long)]
        kind: Kind,
        /// Comma-separated `key=value` list: tokens, con, elements, family.
        #[arg(long, default_value = "")]
        bounds: String,
        /// Sample `--count` structures with this seed instead of emitting all.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        /// Output file; the document goes to standard output otherwise.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        /// Comma-separated `key=value` list: tokens, con, elements, family,
        /// posets, tau, rough, random.
        #[arg(long, default_value = "")]
        bounds: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functor {
    #[value(name = "D")]
    D,
    #[value(name = "F")]
    F,
    #[value(name = "C")]
    C,
    #[value(name = "E")]
    E,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Via {
    Frames,
    Domains,
    Cfspaces,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Frame,
    Poset,
    Cfspace,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check { file } => commands::check(&file),
        Command::States { file, name } => commands::states(&file, name.as_deref()),
        Command::Apply {
            functor,
            file,
            output,
        } => commands::apply(functor, &file, &output),
        Command::Roundtrip { file, via } => commands::roundtrip(&file, via),
        Command::Generate {
            kind,
            bounds,
            seed,
            count,
            output,
        } => commands::generate(kind, &bounds, seed, count, output.as_deref()),
        Command::Verify {
            suite,
            bounds,
            seed,
        } => commands::verify(&suite, &bounds, seed),
    };
    match outcome {
        Ok((report, ok)) => {
            if let Some(r) = report {
                print!("{}", r.render(cli.json, !cli.no_timestamp));
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
