use valued_ifs::discrete::{
    baire_report, classify_by_extensions, cofinite_holds_at, cofinite_sc, minimal_k_cylinders,
    minimal_k_omega_discrete, sc_star_cylinders, sc_star_omega_discrete, UClass,
};
use valued_ifs::line::{attractor_closure_check, audit_words, line_report, sc_star_line};
use valued_ifs::sc::{minimal_k, verify_local_fractality, verify_sc, verify_tail_preservation};
use valued_ifs::{Rational, SystemKind, VerificationReport};

use crate::config::{
    cofinite_covering, line_covering, rest_set, BallConfig, LoadedConfig, ModelConfig, RunConfig,
};
use crate::{settle, CliError, Settings};

pub const DEFAULT_BAIRE_DEPTH: usize = 10;
pub const DEFAULT_COFINITE_SEARCH: usize = 20;
pub const DEFAULT_LOCAL_DEPTH: usize = 3;

pub fn verify(loaded: &LoadedConfig, settings: Settings) -> Result<VerificationReport, CliError> {
    let report = match &loaded.config {
        RunConfig::Ball(c) => verify_ball(c, loaded, settings.merged(&c.options))?,
        RunConfig::Model(m) => verify_model(m, settings)?,
    };
    Ok(settle(report))
}

fn verify_ball(c: &BallConfig, loaded: &LoadedConfig, settings: Settings) -> Result<VerificationReport, CliError> {
    let setup = c.setup()?;
    let budget = settings.budget();
    match c.covering(&setup, &loaded.base_dir)? {
        Some(covering) => {
            let mut report = verify_sc(&setup.ifs, &covering, budget)?;
            if settings.oracle {
                let least = minimal_k(&setup.ifs, &covering, budget)?;
                report.oracle_minimal = Some(report.k == Some(least as u64));
                report = report.detail("oracle-minimal-k", least);
            }
            Ok(report)
        }
        None if setup.ifs.kind() == SystemKind::TailFixing => {
            let depth = settings.max_k.unwrap_or(DEFAULT_LOCAL_DEPTH);
            let mut report = verify_local_fractality(&setup.anchor, depth, budget)?;
            if settings.oracle {
                let ell = setup.anchor.offset().min(-1);
                let audit = verify_tail_preservation(setup.ctx, ell, budget)?;
                report.check(format!("tail preservation on B({ell})@0"), audit.passed());
            }
            Ok(report)
        }
        None => Err(CliError::Config(
            "a covering is required unless the system is tail-fixing".into(),
        )),
    }
}

fn verify_model(m: &ModelConfig, settings: Settings) -> Result<VerificationReport, CliError> {
    let budget = settings.budget();
    match m {
        ModelConfig::Baire { max_k } => {
            let depth = settings.max_k.or(*max_k).unwrap_or(DEFAULT_BAIRE_DEPTH);
            let mut report = baire_report(depth as u64)?;
            if settings.oracle {
                // extension enumeration doubles per level
                let agree = report
                    .witness
                    .iter()
                    .filter(|w| w.len() <= 16)
                    .all(|w| {
                        let w: Vec<u64> = w.iter().map(|&l| l as u64).collect();
                        classify_by_extensions(&w) == UClass::Split
                    });
                report.check("extension enumeration confirms each split (k <= 16)", agree);
            }
            Ok(report)
        }
        ModelConfig::KappaOmega { kappa, basics, u } => {
            let rest = rest_set(u)?;
            let mut report = sc_star_cylinders(*kappa, basics, &rest, budget)?;
            if settings.oracle {
                let least = minimal_k_cylinders(*kappa, basics, &rest, budget)?;
                report.oracle_minimal = Some(report.k == Some(least as u64));
                report = report.detail("oracle-minimal-k", least);
            }
            Ok(report)
        }
        ModelConfig::OmegaDiscrete { singletons } => {
            let mut report = sc_star_omega_discrete(singletons, budget)?;
            if settings.oracle {
                let least = minimal_k_omega_discrete(singletons, budget)?;
                report.oracle_minimal = Some(report.k == Some(least as u64));
                report = report.detail("oracle-minimal-k", least);
            }
            Ok(report)
        }
        ModelConfig::Cofinite { complements, max_k } => {
            let c = cofinite_covering(complements)?;
            let search = settings.max_k.or(*max_k).unwrap_or(DEFAULT_COFINITE_SEARCH);
            let mut report = cofinite_sc(&c, search, budget)?;
            if settings.oracle {
                let gap = c.gap_bound() as usize;
                report.check("gap bound holds by brute force", cofinite_holds_at(&c, gap, budget)?);
                if let Some(k) = report.k {
                    let below = (0..k as usize)
                        .map(|j| cofinite_holds_at(&c, j, budget))
                        .collect::<valued_ifs::Result<Vec<_>>>()?;
                    report.oracle_minimal = Some(below.iter().all(|h| !h));
                }
            }
            Ok(report)
        }
        ModelConfig::Line { u, basics, bound, max_den, shifts } => {
            let cov = line_covering(u, basics)?;
            let shifts = shifts.unwrap_or(1);
            let mut report = line_report(&cov, shifts, budget)?;
            let (bound, max_den) = (bound.unwrap_or(5), max_den.unwrap_or(50));
            let closure = attractor_closure_check(bound, max_den, Rational::new(1, 1_000_000));
            report.check(
                format!("closure of the images contains every num/den with den <= {max_den}, |q| <= {bound}"),
                closure.passed(),
            );
            if settings.oracle {
                let k = sc_star_line(&cov).k;
                let audit = audit_words(&cov, k, k.max(1) as usize, shifts, budget)?;
                report.check(
                    format!("all {} words up to length {} audited exactly", audit.words, k.max(1)),
                    audit.passed(),
                );
            }
            Ok(report)
        }
    }
}
