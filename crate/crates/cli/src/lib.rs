//! Command-line front end for `valued_ifs`: config ingestion, the worked
//! demos, report emission and SVG rendering.

use std::path::PathBuf;

use valued_ifs::{Budget, Verdict, VerificationReport};

pub mod config;
pub mod demo;
pub mod render;
pub mod replay;
pub mod verify;

pub use config::{LoadedConfig, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] valued_ifs::Error),
}

/// Exit code for a verification outcome: 0 holds, 1 fails. Invalid input
/// exits with 2.
pub fn exit_code(report: &VerificationReport) -> u8 {
    if report.verdict.is_success() {
        0
    } else {
        1
    }
}

pub const INVALID_INPUT: u8 = 2;

/// Command-line overrides for the `options` section.
#[derive(Debug, Clone, Copy, Default)]
pub struct Settings {
    pub oracle: bool,
    pub max_k: Option<usize>,
    pub budget: Option<u128>,
}

impl Settings {
    pub fn budget(&self) -> Budget {
        self.budget.map_or(Budget::DEFAULT, Budget)
    }

    /// Flags win over the config file.
    pub fn merged(self, options: &config::Options) -> Settings {
        Settings {
            oracle: self.oracle || options.oracle.unwrap_or(false),
            max_k: self.max_k.or(options.max_k),
            budget: self.budget.or(options.budget.map(u128::from)),
        }
    }
}

/// A report holds only if every recorded check passed.
pub(crate) fn settle(mut report: VerificationReport) -> VerificationReport {
    if report.verdict.is_success() && report.checks.iter().any(|c| !c.passed) {
        report.verdict = Verdict::Fails;
    }
    report
}

/// Pretty JSON with a trailing newline.
pub fn report_json(report: &VerificationReport) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("reports serialize");
    out.push('\n');
    out
}

pub fn report_text(report: &VerificationReport) -> String {
    report.to_text(16)
}
