use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode as ProcessExit;

use clap::{Args, Parser, Subcommand};
use namegraft::config::{Config, Mode};
use namegraft::{parse_record, run_batch_files, ExitCode, Pipeline};
use namegraft_core::{AlignmentResult, NpChunk, TaggedToken};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "namegraft", version, about = "Replace person noun phrases in image captions with recognized names")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a JSONL file of records.
    Run {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        opts: PipelineOpts,
    },
    /// Print tokens, tags and chunks of a sentence as JSON.
    Chunk { sentence: String },
    /// Print the alignment for a single JSON record.
    Align {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        opts: PipelineOpts,
    },
    /// Check a JSONL file and report invalid records.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct PipelineOpts {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Include chunk-by-face attention scores in the output.
    #[arg(long)]
    emit_scores: bool,
}

impl PipelineOpts {
    fn pipeline(&self) -> Result<Pipeline, String> {
        let mut config = match &self.config {
            Some(path) => Config::load(path).map_err(|e| e.to_string())?,
            None => Config::default(),
        };
        config.apply_env();
        if let Some(mode) = self.mode {
            config.mode = mode;
        }
        config.emit_scores |= self.emit_scores;
        Pipeline::new(config).map_err(|e| e.to_string())
    }
}

fn startup_error(msg: impl std::fmt::Display) -> ProcessExit {
    eprintln!("namegraft: {msg}");
    ProcessExit::from(ExitCode::Startup as u8)
}

fn print_json(value: &impl Serialize) {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

#[derive(Serialize)]
struct ChunkView<'a> {
    tokens: &'a [TaggedToken],
    chunks: &'a [NpChunk],
}

#[derive(Serialize)]
struct AlignView<'a> {
    alignment: &'a AlignmentResult,
    fallback: Option<&'a str>,
}

fn run(input: PathBuf, output: PathBuf, opts: PipelineOpts) -> ProcessExit {
    let pipeline = match opts.pipeline() {
        Ok(p) => p,
        Err(e) => return startup_error(e),
    };
    match run_batch_files(&pipeline, &input, &output) {
        Ok(summary) => {
            eprintln!("{}", serde_json::to_string(&summary).expect("serializable"));
            ProcessExit::from(summary.exit_code())
        }
        Err(e) => startup_error(e),
    }
}

fn chunk(sentence: &str) -> ProcessExit {
    let analysis = namegraft_core::Lexicons::builtin().analyze(sentence);
    print_json(&ChunkView { tokens: &analysis.tagged, chunks: &analysis.chunks });
    ProcessExit::SUCCESS
}

fn align(input: PathBuf, opts: PipelineOpts) -> ProcessExit {
    let pipeline = match opts.pipeline() {
        Ok(p) => p,
        Err(e) => return startup_error(e),
    };
    let text = match std::fs::read_to_string(&input) {
        Ok(t) => t,
        Err(e) => return startup_error(format!("cannot read {}: {e}", input.display())),
    };
    let record = match parse_record(&text, 1) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ProcessExit::from(ExitCode::SomeFailed as u8);
        }
    };
    match pipeline.align(&record) {
        Ok(aligned) => {
            print_json(&AlignView { alignment: &aligned.alignment, fallback: aligned.fallback.as_deref() });
            ProcessExit::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ProcessExit::from(ExitCode::SomeFailed as u8)
        }
    }
}

fn validate(input: PathBuf) -> ProcessExit {
    let file = match File::open(&input) {
        Ok(f) => f,
        Err(e) => return startup_error(format!("cannot open input {}: {e}", input.display())),
    };
    let mut bad = 0usize;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let result = match line {
            Ok(text) => parse_record(&text, line_no).map(drop).map_err(|e| e.to_string()),
            Err(e) => Err(format!("parse error at line {line_no}: {e}")),
        };
        if let Err(msg) = result {
            bad += 1;
            println!("line {line_no}: {msg}");
        }
    }
    ProcessExit::from(if bad == 0 { ExitCode::Ok } else { ExitCode::SomeFailed } as u8)
}

fn main() -> ProcessExit {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    match Cli::parse().command {
        Command::Run { input, output, opts } => run(input, output, opts),
        Command::Chunk { sentence } => chunk(&sentence),
        Command::Align { input, opts } => align(input, opts),
        Command::Validate { input } => validate(input),
    }
}
