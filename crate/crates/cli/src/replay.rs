//! Re-verifies an emitted report against its config without trusting it.

use valued_ifs::discrete::{
    classify_against_u, replay_cofinite, replay_cylinders, replay_omega_discrete, UClass,
};
use valued_ifs::line::replay_line;
use valued_ifs::sc::replay_certificate;
use valued_ifs::{Covering, Verdict, VerificationReport};

use crate::config::{
    cofinite_covering, line_covering, rest_set, LoadedConfig, ModelConfig, RunConfig,
};
use crate::{CliError, Settings};

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Library(valued_ifs::Error::InvalidInput(msg.into()))
}

pub fn replay(loaded: &LoadedConfig, report: &VerificationReport, settings: Settings) -> Result<(), CliError> {
    match &loaded.config {
        RunConfig::Ball(c) => {
            let setup = c.setup()?;
            let covering = match c.covering(&setup, &loaded.base_dir)? {
                Some(cov) => cov,
                // a local-fractality report certifies the finest uniform covering
                None => {
                    let k = report.k.ok_or_else(|| invalid("report has no depth"))?;
                    Covering::uniform(&setup.universe, k as i32)?
                }
            };
            if report.verdict == Verdict::Fails {
                for w in &report.witness {
                    let word: Vec<usize> = w.iter().map(|&l| l as usize).collect();
                    let image = setup.ifs.compose_ball(&word, &setup.universe)?;
                    if covering.first_containing(&image).is_some() {
                        return Err(invalid(format!("witness {w:?} fits a covering set")));
                    }
                }
                return Ok(());
            }
            Ok(replay_certificate(&setup.ifs, &covering, report)?)
        }
        RunConfig::Model(m) => replay_model(m, report, settings),
    }
}

fn replay_model(m: &ModelConfig, report: &VerificationReport, settings: Settings) -> Result<(), CliError> {
    match m {
        ModelConfig::Baire { .. } => {
            if report.verdict != Verdict::Fails {
                return Err(invalid("the Baire model never holds"));
            }
            for (i, w) in report.witness.iter().enumerate() {
                let expected: Vec<i64> = (0..=i).map(|j| if j == 0 { i as i64 + 1 } else { 0 }).collect();
                let letters: Vec<u64> = w.iter().map(|&l| l as u64).collect();
                if *w != expected || classify_against_u(&letters) != UClass::Split {
                    return Err(invalid(format!("witness {w:?} does not split U")));
                }
            }
            Ok(())
        }
        ModelConfig::KappaOmega { kappa, basics, u } => {
            Ok(replay_cylinders(*kappa, basics, &rest_set(u)?, report, settings.budget())?)
        }
        ModelConfig::OmegaDiscrete { singletons } => Ok(replay_omega_discrete(singletons, report)?),
        ModelConfig::Cofinite { complements, .. } => {
            Ok(replay_cofinite(&cofinite_covering(complements)?, report)?)
        }
        ModelConfig::Line { u, basics, .. } => Ok(replay_line(&line_covering(u, basics)?, report)?),
    }
}
