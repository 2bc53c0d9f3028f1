//! The worked constructions at `p = 2`, `N = 8`.

use valued_ifs::ifs::IdentityCheck;
use valued_ifs::sc::{
    replay_certificate, verify_exact_contraction, verify_local_fractality, verify_sc,
    verify_tail_preservation, verify_weak_contraction,
};
use valued_ifs::{Ball, Budget, ClopenSet, Covering, DvrContext, Ifs, Verdict, VerificationReport};

use crate::{settle, CliError};

pub const EXAMPLES: [u32; 4] = [3, 4, 5, 18];
const P: u32 = 2;
const N: u32 = 8;

pub fn demo(example: u32, budget: Budget) -> Result<VerificationReport, CliError> {
    let report = match example {
        3 => ring_demo(Ifs::digit_prepend(DvrContext::equal_char(P, N)?), 6, budget)?
            .detail("construction", "f_i(a) = i + t a on F_2[[t]] / t^8"),
        4 => ring_demo(Ifs::window(DvrContext::equal_char(P, N)?, 1)?, 4, budget)?
            .detail("construction", "f_w(a) = w + t^2 a, w of degree < 2, on F_2[[t]] / t^8"),
        5 => {
            let ifs = Ifs::digit_prepend(DvrContext::mixed_char(P, N)?);
            let zero = ifs.context().zero();
            let mut report = ring_demo(ifs.clone(), 6, budget)?;
            let weak = verify_weak_contraction(&ifs, &zero, budget)?;
            report.check(format!("weak contraction on all {} pairs", weak.checked), weak.passed());
            let exact = verify_exact_contraction(&ifs, &zero, budget)?;
            report.check("v(f a - f b) = v(a - b) + 1", exact.passed());
            report.detail("construction", "f_i(a) = i + 2 a on Z_2 / 2^8")
        }
        18 => {
            let ctx = DvrContext::equal_char(P, N)?;
            let anchor = ctx.element(-1, &[1])?;
            let mut report = verify_local_fractality(&anchor, 4, budget)?;
            let tails = verify_tail_preservation(ctx, -2, budget)?;
            report.check("(f(a) - f(b))^- = (a - b)^- on B(-2)@0", tails.passed());
            report.detail("construction", "f_i(a) = a^- + i + t (a - a^-) on F_2((t)) / t^8")
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown demo {other}; choose one of {EXAMPLES:?}"
            )))
        }
    };
    Ok(settle(report.detail("demo", example)))
}

/// Re-checks the certificate of an emitted demo report from scratch.
pub fn replay_demo(example: u32, report: &VerificationReport) -> Result<(), CliError> {
    let (ifs, universe, radius) = match example {
        3 | 4 | 5 => {
            let ctx = if example == 5 {
                DvrContext::mixed_char(P, N)?
            } else {
                DvrContext::equal_char(P, N)?
            };
            let ifs = match example {
                4 => Ifs::window(ctx, 1)?,
                _ => Ifs::digit_prepend(ctx),
            };
            (ifs, Ball::unit(&ctx), N as i32)
        }
        18 => {
            let ctx = DvrContext::equal_char(P, N)?;
            let anchor = ctx.element(-1, &[1])?;
            let ifs = Ifs::tail_fixing(ctx);
            let universe = ifs.universe(&anchor)?;
            (ifs, universe, report.k.unwrap_or_default() as i32)
        }
        other => return Err(CliError::Config(format!("unknown demo {other}"))),
    };
    let covering = Covering::uniform(&universe, radius)?;
    Ok(replay_certificate(&ifs, &covering, report)?)
}

/// Invariance, the composition identity up to `depth`, and (SC) with
/// `k = ceil(m / step)` for every uniform radius-`m` covering. The report
/// carries the certificate of the finest covering.
fn ring_demo(ifs: Ifs, depth: usize, budget: Budget) -> Result<VerificationReport, CliError> {
    let ctx = *ifs.context();
    let unit = Ball::unit(&ctx);
    let space = ClopenSet::from_ball(unit.clone());
    let mut checks = vec![("F(R) = R".to_string(), ifs.image(&space)? == space)];
    let mut witness = Vec::new();
    for m in 1..=depth {
        let outcome = ifs.verify_composition_identity(m, &ctx.zero(), budget)?;
        if let IdentityCheck::Counterexample(w) = &outcome {
            witness.push(w.iter().map(|&l| l as i64).collect());
        }
        checks.push((
            format!(
                "depth-{m} images are the balls B({})@(word digits)",
                m as u32 * ifs.step()
            ),
            outcome.holds(),
        ));
    }
    let step = ifs.step() as i32;
    let mut finest = None;
    for m in 0..=ctx.precision() as i32 {
        let covering = Covering::uniform(&unit, m)?;
        let report = verify_sc(&ifs, &covering, budget)?;
        let expected = ((m + step - 1) / step) as u64;
        let ok = report.verdict == Verdict::Holds
            && report.k == Some(expected)
            && replay_certificate(&ifs, &covering, &report).is_ok();
        checks.push((format!("(SC) for radius-{m} balls with k = {expected}"), ok));
        finest = Some(report);
    }
    let finest = finest.expect("at least one radius");
    let mut report = if witness.is_empty() {
        VerificationReport::holds(finest.k.unwrap_or_default(), finest.certificate)
    } else {
        VerificationReport::fails(witness)
    };
    for (name, ok) in checks {
        report.check(name, ok);
    }
    Ok(report
        .detail("context", format!("p = {}, N = {}, {}", ctx.p(), ctx.precision(), ctx.mode()))
        .detail("system", ifs.kind())
        .detail("certificate-covering", format!("all balls of radius {}", ctx.precision())))
}
