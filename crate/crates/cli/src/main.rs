//! `backtrans`: train, build, decode and evaluate the katakana
//! back-transliteration cascade.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use config::PipelineConfig;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, configuration, or arguments.
    #[error("{0}")]
    Usage(String),
    /// A resource or input could not be read or parsed.
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Resource(_) => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "backtrans", version, about = "Back-transliterate katakana into English")]
struct Cli {
    /// TOML pipeline configuration; bundled resources are used for
    /// anything it leaves out.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn the sound-mapping table from the glossary with EM.
    Train {
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build all models and write them to a directory.
    Build {
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode katakana phrases, one per line.
    Decode {
        #[command(flatten)]
        decode: DecodeArgs,
        /// Read phrases from this file instead of standard input.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Score the decoder against a `katakana<TAB>english` test set.
    Eval {
        #[command(flatten)]
        decode: DecodeArgs,
        /// Test set; defaults to the configured or bundled desk set.
        #[arg(long)]
        testset: Option<PathBuf>,
        /// Also evaluate with every dot separator removed.
        #[arg(long)]
        strip_separators: bool,
        /// Also evaluate with glyphs misread at this rate.
        #[arg(long)]
        noise_rate: Option<f64>,
        /// Seed for the misreadings.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct DecodeArgs {
    /// Model directory written by `build`; otherwise models are built from
    /// the configured resources.
    #[arg(long)]
    models: Option<PathBuf>,
    /// Candidates per phrase.
    #[arg(long)]
    k: Option<usize>,
    /// Rescore with the personal-name model.
    #[arg(long)]
    names: bool,
    /// Treat input as OCR output.
    #[arg(long)]
    ocr: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = PipelineConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Train { out } => commands::train(&config, out.as_deref()),
        Command::Build { out } => commands::build(&config, &out),
        Command::Decode { decode, input } => commands::decode(&config, &decode.into(), input.as_deref()),
        Command::Eval {
            decode,
            testset,
            strip_separators,
            noise_rate,
            seed,
        } => commands::eval(
            &config,
            &decode.into(),
            &commands::EvalArgs {
                testset,
                strip_separators,
                noise_rate,
                seed,
            },
        ),
    }
}

impl From<DecodeArgs> for commands::DecodeFlags {
    fn from(a: DecodeArgs) -> Self {
        commands::DecodeFlags {
            models: a.models,
            k: a.k,
            names: a.names,
            ocr: a.ocr,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
