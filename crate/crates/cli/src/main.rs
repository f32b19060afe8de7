use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use motbiv_cli::commands::{self, CheckCommand, CheckOptions, ClassName, Outcome, UsageError};

/// Exact characteristic classes, genera and bivariant identity checks.
#[derive(Parser)]
#[command(name = "motbiv", version)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// A characteristic class of the tangent bundle.
    Class {
        variety: String,
        #[arg(value_parser = ClassName::NAMES)]
        class: String,
        /// Substitute a rational value for y.
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
    },
    /// The χ_y genus.
    Genus { variety: String },
    /// Run a check suite.
    Check {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Ambient dimension of the blow-up P(m) ⊂ P(n).
        #[arg(long)]
        n: Option<usize>,
        /// Center dimension of the blow-up P(m) ⊂ P(n).
        #[arg(long)]
        m: Option<usize>,
    },
    /// Run the checks described by a scenario file.
    Scenario { path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Axioms,
    Blowup,
    Rr,
    All,
}

fn run(cli: &Cli) -> Result<Outcome, UsageError> {
    match &cli.command {
        Command::Class { variety, class, y } => commands::cmd_class(variety, class, y.as_deref()),
        Command::Genus { variety } => commands::cmd_genus(variety),
        Command::Check {
            kind,
            seed,
            cases,
            n,
            m,
        } => {
            let kind = match kind {
                Kind::Axioms => CheckCommand::Axioms,
                Kind::Blowup => CheckCommand::Blowup,
                Kind::Rr => CheckCommand::Rr,
                Kind::All => CheckCommand::All,
            };
            commands::cmd_check(
                kind,
                &CheckOptions {
                    seed: *seed,
                    cases: *cases,
                    n: *n,
                    m: *m,
                },
            )
        }
        Command::Scenario { path } => commands::cmd_scenario(path),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("json values serialize")
                );
            } else {
                println!("{}", out.text);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
