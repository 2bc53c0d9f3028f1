use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use valued_ifs::VerificationReport;
use valued_ifs_cli::{
    demo, exit_code, render, report_json, report_text, verify, CliError, LoadedConfig, Settings,
    INVALID_INPUT,
};

/// Exact shrinking-condition checks for iterated function systems on
/// valued rings and related models.
#[derive(Parser)]
#[command(name = "valued-ifs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce a worked construction (3, 4, 5 or 18) at p = 2, N = 8.
    Demo {
        example: u32,
        /// Write the JSON report here and the text report beside it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Verify a config; exit 0 if it holds, 1 if it fails, 2 on bad input.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Also run the brute-force cross-checks.
        #[arg(long)]
        oracle: bool,
        /// Write the JSON report here and the text report beside it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "max-k")]
        max_k: Option<usize>,
        /// Cap on exhaustive evaluations.
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Draw the composition images of a ball-model system as SVG.
    Render {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        budget: Option<u128>,
    },
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// The JSON report goes to `out`, the text report next to it with a `txt` extension.
fn write_reports(out: &Path, report: &VerificationReport) -> Result<(), CliError> {
    let mut text_path = out.with_extension("txt");
    if text_path == out {
        text_path = PathBuf::from(format!("{}.txt", out.display()));
    }
    write(out, &report_json(report))?;
    write(&text_path, &report_text(report))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Demo { example, out, budget } => {
            let settings = Settings { budget, ..Settings::default() };
            let report = demo::demo(example, settings.budget())?;
            print!("{}", report_text(&report));
            if let Some(out) = out {
                write_reports(&out, &report)?;
            }
            Ok(exit_code(&report))
        }
        Command::Verify { config, oracle, out, max_k, budget } => {
            let loaded = LoadedConfig::load(&config)?;
            let report = verify::verify(&loaded, Settings { oracle, max_k, budget })?;
            print!("{}", report_text(&report));
            if let Some(out) = out {
                write_reports(&out, &report)?;
            }
            Ok(exit_code(&report))
        }
        Command::Render { config, depth, out, budget } => {
            let loaded = LoadedConfig::load(&config)?;
            let settings = Settings { budget, ..Settings::default() };
            let svg = render::render(&loaded, depth, settings.budget())?;
            write(&out, &svg)?;
            println!("wrote {}", out.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INVALID_INPUT)
        }
    }
}
