//! `filesem`: evaluate discourse boxes, enumerate readings, run scenario
//! corpora, and cross-check the engine against its oracles.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use filesem_cli::cmd::{
    cmd_eval, cmd_oracle, cmd_readings, cmd_scenarios, EvalArgs, OracleArgs, ReadingsArgs,
    ScenariosArgs,
};
use filesem_cli::{CmdOutput, EXIT_INVALID};

#[derive(Parser)]
#[command(name = "filesem", version, about = "File-based update semantics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a discourse box or a bare formula against a model.
    Eval {
        /// Model description file.
        #[arg(long)]
        model: PathBuf,
        /// Discourse box file to run.
        #[arg(long)]
        discourse: Option<PathBuf>,
        /// Formula file to test instead of a discourse box.
        #[arg(long)]
        formula: Option<PathBuf>,
        /// Evaluate the formula against this source's content.
        #[arg(long)]
        against: Option<String>,
        /// Also print the resulting file tables.
        #[arg(long)]
        trace: bool,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Enumerate and filter the readings of a sentence skeleton.
    Readings {
        #[arg(long)]
        model: PathBuf,
        /// Skeleton description file.
        #[arg(long)]
        skeleton: PathBuf,
        /// Lexicon file; defaults to the shipped lexicon.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run every scenario fixture in a corpus directory.
    Scenarios {
        /// Directory containing `*.scenario` files.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Cross-check the engine against the independent oracles.
    Oracle {
        /// Seed for the generated corpora.
        #[arg(long, default_value_t = 17)]
        seed: u64,
        /// Number of identification-formula instances.
        #[arg(long, default_value_t = 500)]
        cases: usize,
        /// Number of generated reading scenarios.
        #[arg(long, default_value_t = 20)]
        skeletons: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, json) = match cli.command {
        Command::Eval {
            model,
            discourse,
            formula,
            against,
            trace,
            json,
        } => (
            cmd_eval(&EvalArgs {
                model,
                discourse,
                formula,
                against,
                trace,
            }),
            json,
        ),
        Command::Readings {
            model,
            skeleton,
            lexicon,
            json,
        } => (
            cmd_readings(&ReadingsArgs {
                model,
                skeleton,
                lexicon,
            }),
            json,
        ),
        Command::Scenarios { corpus, json } => (cmd_scenarios(&ScenariosArgs { corpus }), json),
        Command::Oracle {
            seed,
            cases,
            skeletons,
            json,
        } => (
            cmd_oracle(&OracleArgs {
                seed,
                cases,
                skeletons,
            }),
            json,
        ),
    };
    emit(&out, json);
    ExitCode::from(out.exit_code as u8)
}

fn emit(out: &CmdOutput, json: bool) {
    let rendered = if json {
        out.json.to_string()
    } else {
        out.text.clone()
    };
    if out.exit_code == EXIT_INVALID {
        eprintln!("{rendered}");
    } else {
        println!("{rendered}");
    }
}
