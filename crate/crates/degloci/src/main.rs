use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use degloci::{render_json, render_text, run_source, selftest};

#[derive(Parser)]
#[command(name = "degloci", version, about = "Exact Chern-class computations for degeneracy loci")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario script.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        output: Format,
    },
    /// Re-run the fixture corpus and compare against the stored outputs.
    Selftest {
        /// Only fixtures whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Fixture directory (default: the bundled corpus or DEGLOCI_FIXTURES).
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { file, output } => {
            let src = match std::fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("cannot read {}: {}", file.display(), e);
                    return ExitCode::from(2);
                }
            };
            match run_source(&src) {
                Ok(report) => {
                    match output {
                        Format::Json => print!("{}", render_json(&report)),
                        Format::Text => print!("{}", render_text(&report)),
                    }
                    if report.all_ok() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("{}: {}", file.display(), e);
                    ExitCode::from(2)
                }
            }
        }
        Command::Selftest { filter, dir } => {
            let dir = dir.unwrap_or_else(selftest::default_dir);
            match selftest::run_corpus(&dir, filter.as_deref()) {
                Ok(corpus) => {
                    println!("{}", serde_json::to_string_pretty(&corpus.to_json()).expect("serializable"));
                    if corpus.all_pass() {
                        ExitCode::SUCCESS
                    } else {
                        if corpus.fixtures.is_empty() {
                            eprintln!("no fixtures matched");
                        }
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("cannot read fixture directory {}: {}", dir.display(), e);
                    ExitCode::from(1)
                }
            }
        }
    }
}
