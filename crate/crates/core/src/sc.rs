//! Decision procedures for the shrinking condition over ball coverings.
//!
//! For a system `F` on a compact ball `X` and a finite covering by clopen
//! sets, (SC) asks for a depth `k` such that every `k`-fold composition image
//! of `X` fits inside one covering set. Refining the covering to the uniform
//! radius `m` of its finest ball gives `k = ceil(m / step)`, and every word of
//! that length is then certified explicitly.

use rand::Rng;
use rayon::prelude::*;

use crate::ball::{coset_decompose, Ball, ClopenSet};
use crate::dvr::{DvrContext, Element, Valuation};
use crate::error::{Error, Result};
use crate::ifs::{Ifs, IdentityCheck};
use crate::report::{word_i64, CertificateEntry, Verdict, VerificationReport};
use crate::words::{word_at, word_count, Budget};

/// A finite covering of `universe` by clopen sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Covering {
    universe: Ball,
    sets: Vec<ClopenSet>,
}

impl Covering {
    pub fn new(universe: Ball, sets: Vec<ClopenSet>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidInput("a covering needs at least one set".into()));
        }
        let union = sets
            .iter()
            .fold(ClopenSet::empty(), |acc, s| acc.union(s));
        let uncovered = ClopenSet::from_ball(universe.clone()).difference(&union)?;
        if let Some(witness) = uncovered.balls().first() {
            return Err(Error::NotACovering {
                witness: witness.clone(),
            });
        }
        Ok(Self { universe, sets })
    }

    /// Every radius-`m` ball inside `universe`, one set each.
    pub fn uniform(universe: &Ball, m: i32) -> Result<Self> {
        let sets = coset_decompose(universe, m)?
            .into_iter()
            .map(ClopenSet::from_ball)
            .collect();
        Self::new(universe.clone(), sets)
    }

    /// A random partition of `universe` into balls of radius at most
    /// `max_radius`, grouped into sets at random, sometimes with one extra
    /// set that overlaps the others.
    pub fn random<R: Rng>(universe: &Ball, max_radius: i32, rng: &mut R) -> Result<Self> {
        let max_radius = max_radius.min(universe.context().precision() as i32);
        let mut pending = vec![universe.clone()];
        let mut leaves = Vec::new();
        while let Some(b) = pending.pop() {
            if b.radius() < max_radius && rng.gen_bool(0.6) {
                pending.extend(b.children()?);
            } else {
                leaves.push(b);
            }
        }
        let n_sets = rng.gen_range(1..=leaves.len().min(6));
        let mut groups = vec![Vec::new(); n_sets];
        for (i, leaf) in leaves.iter().enumerate() {
            let g = if i < n_sets { i } else { rng.gen_range(0..n_sets) };
            groups[g].push(leaf.clone());
        }
        let mut sets: Vec<ClopenSet> = groups.into_iter().map(ClopenSet::normalize).collect();
        if rng.gen_bool(0.5) {
            let leaf = &leaves[rng.gen_range(0..leaves.len())];
            if leaf.radius() > universe.radius() {
                let at = rng.gen_range(0..=sets.len());
                sets.insert(at, ClopenSet::from_ball(leaf.parent()));
            }
        }
        Self::new(universe.clone(), sets)
    }

    pub fn universe(&self) -> &Ball {
        &self.universe
    }

    pub fn sets(&self) -> &[ClopenSet] {
        &self.sets
    }

    /// First covering set, in input order, that contains `ball`.
    pub fn first_containing(&self, ball: &Ball) -> Option<usize> {
        self.sets.iter().position(|s| s.contains_ball(ball))
    }

    /// Largest radius among covering balls that meet the universe, and at
    /// least the universe radius.
    pub fn refinement_radius(&self) -> i32 {
        self.sets
            .iter()
            .flat_map(|s| s.balls())
            .filter(|b| !b.is_disjoint_from(&self.universe))
            .map(Ball::radius)
            .fold(self.universe.radius(), i32::max)
    }
}

fn check_universe(ifs: &Ifs, covering: &Covering) -> Result<()> {
    let expected = ifs.universe(covering.universe().center())?;
    if &expected != covering.universe() || expected.radius() != 0 {
        return Err(Error::InvalidInput(format!(
            "a {} system acts on {expected}, but the covering is of {}",
            ifs.kind(),
            covering.universe()
        )));
    }
    Ok(())
}

/// Certificate for all words of length `k`: the first covering set holding
/// each image, or `None` where no set does.
fn certify_depth(
    ifs: &Ifs,
    covering: &Covering,
    k: usize,
    budget: Budget,
) -> Result<Vec<Option<usize>>> {
    let count = budget.words(ifs.len(), k)?;
    let n = ifs.len();
    (0..count)
        .into_par_iter()
        .map(|index| {
            let word = word_at(n, k, index);
            let image = ifs.compose_ball(&word, covering.universe())?;
            Ok(covering.first_containing(&image))
        })
        .collect()
}

fn max_depth(ifs: &Ifs) -> usize {
    (ifs.context().precision() / ifs.step()) as usize
}

/// Decides (SC) for `covering` by the uniform-refinement argument.
pub fn verify_sc(ifs: &Ifs, covering: &Covering, budget: Budget) -> Result<VerificationReport> {
    check_universe(ifs, covering)?;
    let m = covering.refinement_radius();
    // every radius-m ball of the universe must sit inside a single set
    for fine in coset_decompose(covering.universe(), m)? {
        if covering.first_containing(&fine).is_none() {
            return Err(Error::NotACovering { witness: fine });
        }
    }
    let step = ifs.step() as i32;
    let k = ((m + step - 1) / step) as usize;
    if k > max_depth(ifs) {
        return Err(Error::Precision {
            required: k as i64 * step as i64,
            precision: ifs.context().precision(),
        });
    }
    let hits = certify_depth(ifs, covering, k, budget)?;
    let n = ifs.len();
    let report = match hits.iter().position(Option::is_none) {
        Some(bad) => VerificationReport::fails(vec![word_i64(&word_at(n, k, bad as u128))]),
        None => {
            let certificate = hits
                .into_iter()
                .enumerate()
                .map(|(i, hit)| {
                    CertificateEntry(word_i64(&word_at(n, k, i as u128)), hit.unwrap_or_default())
                })
                .collect();
            VerificationReport::holds(k as u64, certificate)
        }
    };
    Ok(report
        .detail("system", ifs.kind())
        .detail("universe", covering.universe())
        .detail("refinement-radius", m))
}

/// Least depth at which every composition image lies in one covering set.
/// Images only shrink with depth, so the first depth that works is minimal.
pub fn minimal_k(ifs: &Ifs, covering: &Covering, budget: Budget) -> Result<usize> {
    check_universe(ifs, covering)?;
    for k in 0..=max_depth(ifs) {
        if certify_depth(ifs, covering, k, budget)?
            .iter()
            .all(Option::is_some)
        {
            return Ok(k);
        }
    }
    Err(Error::Precision {
        required: ifs.context().precision() as i64 + 1,
        precision: ifs.context().precision(),
    })
}

/// Re-checks a report produced by [`verify_sc`] without trusting it: the
/// certificate must list every word of length `k` once, in order, with a set
/// that really contains the word's image.
pub fn replay_certificate(ifs: &Ifs, covering: &Covering, report: &VerificationReport) -> Result<()> {
    check_universe(ifs, covering)?;
    if report.verdict != Verdict::Holds {
        return Err(Error::InvalidInput("only a holding verdict carries a certificate".into()));
    }
    let k = report
        .k
        .ok_or_else(|| Error::InvalidInput("report has no depth".into()))? as usize;
    let n = ifs.len();
    let expected = word_count(n, k).unwrap_or(u128::MAX);
    if report.certificate.len() as u128 != expected {
        return Err(Error::InvalidInput(format!(
            "certificate lists {} words, depth {k} has {expected}",
            report.certificate.len()
        )));
    }
    for (i, CertificateEntry(word, set)) in report.certificate.iter().enumerate() {
        let wanted = word_i64(&word_at(n, k, i as u128));
        if *word != wanted {
            return Err(Error::InvalidInput(format!(
                "entry {i} lists word {word:?}, expected {wanted:?}"
            )));
        }
        let letters: Vec<usize> = word.iter().map(|&l| l as usize).collect();
        let image = ifs.compose_ball(&letters, covering.universe())?;
        let target = covering
            .sets()
            .get(*set)
            .ok_or_else(|| Error::InvalidInput(format!("set index {set} out of range")))?;
        if !target.contains_ball(&image) {
            return Err(Error::InvalidInput(format!(
                "image {image} of word {word:?} is not inside set {set}"
            )));
        }
    }
    Ok(())
}

/// Outcome of a pairwise audit: how many (pair, map) combinations were
/// checked and the first violation, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAudit {
    pub checked: u128,
    pub violation: Option<PairViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairViolation {
    pub map: usize,
    pub a: Element,
    pub b: Element,
}

impl PairAudit {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `pred(a, b, f(a), f(b))` for every unordered pair of distinct
/// elements of `space` and every map. The reported violation is the least in
/// enumeration order.
pub fn audit_pairs<M, P>(space: &Ball, maps: &[M], budget: Budget, pred: P) -> Result<PairAudit>
where
    M: Fn(&Element) -> Result<Element> + Sync,
    P: Fn(&Element, &Element, &Element, &Element) -> bool + Sync,
{
    let size = space.element_count().ok_or(Error::Budget {
        required: u128::MAX,
        cap: budget.0,
    })?;
    let pairs = size * size.saturating_sub(1) / 2;
    budget.check(pairs.saturating_mul(maps.len() as u128))?;
    let images: Vec<Vec<Element>> = (0..size)
        .into_par_iter()
        .map(|i| {
            let x = space.element_at(i);
            maps.iter().map(|f| f(&x)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let violation = (0..size).into_par_iter().find_map_first(|i| {
        let a = space.element_at(i);
        ((i + 1)..size).find_map(|j| {
            let b = space.element_at(j);
            (0..maps.len()).find_map(|m| {
                let (fa, fb) = (&images[i as usize][m], &images[j as usize][m]);
                (!pred(&a, &b, fa, fb)).then(|| PairViolation {
                    map: m,
                    a: a.clone(),
                    b: b.clone(),
                })
            })
        })
    });
    Ok(PairAudit {
        checked: pairs * maps.len() as u128,
        violation,
    })
}

fn system_maps(ifs: &Ifs) -> Vec<impl Fn(&Element) -> Result<Element> + Sync + '_> {
    ifs.maps().iter().map(|m| move |x: &Element| m.apply(x)).collect()
}

/// `d(f a, f b) < d(a, b)` for all distinct pairs of `space`.
pub fn audit_weak_contraction<M>(space: &Ball, maps: &[M], budget: Budget) -> Result<PairAudit>
where
    M: Fn(&Element) -> Result<Element> + Sync,
{
    audit_pairs(space, maps, budget, |a, b, fa, fb| fa.distance(fb) < a.distance(b))
}

/// Weak contraction of a system on its universe (`B_0(anchor)`).
pub fn verify_weak_contraction(ifs: &Ifs, anchor: &Element, budget: Budget) -> Result<PairAudit> {
    audit_weak_contraction(&ifs.universe(anchor)?, &system_maps(ifs), budget)
}

/// The valuation of a difference after one map: `v + step`, saturating at
/// the precision.
fn shifted_valuation(v: Valuation, step: u32, precision: u32) -> Valuation {
    match v {
        Valuation::Finite(v) if v + (step as i32) < precision as i32 => {
            Valuation::Finite(v + step as i32)
        }
        _ => Valuation::AtLeast(precision as i32),
    }
}

/// `v(f a - f b) = v(a - b) + step` for all distinct pairs of the universe.
pub fn verify_exact_contraction(ifs: &Ifs, anchor: &Element, budget: Budget) -> Result<PairAudit> {
    let step = ifs.step();
    let precision = ifs.context().precision();
    audit_pairs(&ifs.universe(anchor)?, &system_maps(ifs), budget, |a, b, fa, fb| {
        (fa - fb).valuation() == shifted_valuation((a - b).valuation(), step, precision)
    })
}

/// `(f(a) - f(b))^- = (a - b)^-` for every tail-fixing map and every pair
/// in `B_ell(0)` whose difference has a nonzero tail.
pub fn verify_tail_preservation(ctx: DvrContext, ell: i32, budget: Budget) -> Result<PairAudit> {
    let ifs = Ifs::tail_fixing(ctx);
    let space = Ball::new(&ctx.zero(), ell)?;
    let maps = system_maps(&ifs);
    let audit = audit_pairs(&space, &maps, budget, |a, b, fa, fb| {
        let before = (a - b).minus_part();
        before.is_zero() || (fa - fb).minus_part() == before
    });
    audit
}

/// Weak contraction on `samples` random pairs of the universe, for spaces too
/// large to enumerate.
pub fn sample_weak_contraction<R: Rng>(
    ifs: &Ifs,
    anchor: &Element,
    samples: usize,
    rng: &mut R,
) -> Result<PairAudit> {
    let space = ifs.universe(anchor)?;
    let size = space.element_count().unwrap_or(u128::MAX);
    let mut checked = 0u128;
    for _ in 0..samples {
        let a = space.element_at(rng.gen_range(0..size));
        let b = space.element_at(rng.gen_range(0..size));
        if a == b {
            continue;
        }
        for (m, map) in ifs.maps().iter().enumerate() {
            checked += 1;
            if map.apply(&a)?.distance(&map.apply(&b)?) >= a.distance(&b) {
                return Ok(PairAudit {
                    checked,
                    violation: Some(PairViolation { map: m, a, b }),
                });
            }
        }
    }
    Ok(PairAudit {
        checked,
        violation: None,
    })
}

/// Checks that the tail-fixing system makes `B_0(anchor)` fractal: it is
/// invariant, the composition identity holds up to `max_depth`, the system is
/// conjugate to digit-prepend on `B_0(0)` by translation, and (SC) holds for
/// every uniform covering of radius at most `max_depth`.
pub fn verify_local_fractality(
    anchor: &Element,
    max_depth: usize,
    budget: Budget,
) -> Result<VerificationReport> {
    let ctx: DvrContext = *anchor.context();
    let ifs = Ifs::tail_fixing(ctx);
    let universe = ifs.universe(anchor)?;
    let space = ClopenSet::from_ball(universe.clone());
    let mut checks = Vec::new();

    checks.push(("F(B_0(a)) = B_0(a)".to_string(), ifs.image(&space)? == space));

    let mut witness = Vec::new();
    for depth in 1..=max_depth {
        let outcome = ifs.verify_composition_identity(depth, anchor, budget)?;
        if let IdentityCheck::Counterexample(w) = &outcome {
            witness.push(word_i64(w));
        }
        checks.push((
            format!("composition identity at depth {depth}"),
            outcome.holds(),
        ));
    }

    let tail = anchor.minus_part();
    let ring = Ifs::digit_prepend(ctx);
    let size = universe.element_count().unwrap_or(u128::MAX);
    budget.check(size.saturating_mul(ifs.len() as u128))?;
    let conjugate = (0..size).into_par_iter().all(|i| {
        let x = universe.element_at(i);
        let shifted = &x - &tail;
        ifs.maps().iter().zip(ring.maps()).all(|(f, g)| {
            match (f.apply(&x), g.apply(&shifted)) {
                (Ok(fx), Ok(gx)) => &fx - &tail == gx,
                _ => false,
            }
        })
    });
    checks.push((
        "x -> x - a^- conjugates the system to digit-prepend on B_0(0)".to_string(),
        conjugate,
    ));

    let mut finest = None;
    for radius in 0..=max_depth as i32 {
        let covering = Covering::uniform(&universe, radius)?;
        let report = verify_sc(&ifs, &covering, budget)?;
        let ok = report.verdict == Verdict::Holds
            && report.k == Some(radius as u64)
            && replay_certificate(&ifs, &covering, &report).is_ok();
        witness.extend(report.witness.iter().cloned());
        checks.push((format!("(SC) for the uniform radius-{radius} covering"), ok));
        finest = Some(report);
    }

    let passed = checks.iter().all(|(_, ok)| *ok);
    let mut report = match (passed, finest) {
        (true, Some(r)) => VerificationReport::holds(max_depth as u64, r.certificate),
        _ => {
            let mut r = VerificationReport::fails(witness);
            r.k = None;
            r
        }
    };
    for (name, ok) in checks {
        report.check(name, ok);
    }
    Ok(report
        .detail("anchor", anchor.pretty())
        .detail("universe", universe))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::IfsMap;

    #[test]
    fn tail_preservation_audit() {
        let audit = verify_tail_preservation(eq(2, 3), -2, Budget::DEFAULT).unwrap();
        assert!(audit.passed());
        assert_eq!(audit.checked, 32 * 31 / 2 * 2);
    }

    fn eq(p: u32, n: u32) -> DvrContext {
        DvrContext::equal_char(p, n).unwrap()
    }

    fn ball(ctx: &DvrContext, radius: i32, digits: &[u32]) -> Ball {
        Ball::new(&ctx.element(0, digits).unwrap(), radius).unwrap()
    }

    fn covering_of(ctx: &DvrContext, balls: Vec<Ball>) -> Result<Covering> {
        Covering::new(
            Ball::unit(ctx),
            balls.into_iter().map(ClopenSet::from_ball).collect(),
        )
    }

    #[test]
    fn covering_rejects_gaps_with_witness() {
        let ctx = eq(2, 4);
        let err = covering_of(&ctx, vec![ball(&ctx, 1, &[0]), ball(&ctx, 2, &[1, 0])]).unwrap_err();
        assert_eq!(
            err,
            Error::NotACovering {
                witness: ball(&ctx, 2, &[1, 1])
            }
        );
        assert!(Covering::new(Ball::unit(&ctx), vec![]).is_err());
    }

    #[test]
    fn sc_examples() {
        let ctx = eq(2, 4);
        let ifs = Ifs::digit_prepend(ctx);
        let uniform = Covering::uniform(&Ball::unit(&ctx), 2).unwrap();
        let report = verify_sc(&ifs, &uniform, Budget::DEFAULT).unwrap();
        assert_eq!(report.verdict, Verdict::Holds);
        assert_eq!(report.k, Some(2));
        assert_eq!(report.certificate.len(), 4);
        assert_eq!(report.certificate[1], CertificateEntry(vec![0, 1], 2));
        replay_certificate(&ifs, &uniform, &report).unwrap();
        assert_eq!(minimal_k(&ifs, &uniform, Budget::DEFAULT).unwrap(), 2);

        let mixed = covering_of(
            &ctx,
            vec![ball(&ctx, 1, &[0]), ball(&ctx, 2, &[1, 0]), ball(&ctx, 2, &[1, 1])],
        )
        .unwrap();
        let report = verify_sc(&ifs, &mixed, Budget::DEFAULT).unwrap();
        assert_eq!(report.k, Some(2));
        assert_eq!(minimal_k(&ifs, &mixed, Budget::DEFAULT).unwrap(), 2);

        let window = Ifs::window(ctx, 1).unwrap();
        let report = verify_sc(&window, &uniform, Budget::DEFAULT).unwrap();
        assert_eq!(report.k, Some(1));
        assert_eq!(report.certificate.len(), 4);
    }

    #[test]
    fn whole_space_covering_needs_no_depth() {
        let ctx = eq(2, 4);
        let ifs = Ifs::digit_prepend(ctx);
        let covering = covering_of(&ctx, vec![ball(&ctx, 3, &[1, 1, 1]), Ball::unit(&ctx)]).unwrap();
        assert_eq!(minimal_k(&ifs, &covering, Budget::DEFAULT).unwrap(), 0);
        // the refinement bound is sound but not minimal here
        assert_eq!(verify_sc(&ifs, &covering, Budget::DEFAULT).unwrap().k, Some(3));
    }

    #[test]
    fn precision_and_budget_guards() {
        let ctx = eq(2, 2);
        let ifs = Ifs::window(ctx, 1).unwrap();
        let covering = Covering::uniform(&Ball::unit(&ctx), 2).unwrap();
        assert_eq!(verify_sc(&ifs, &covering, Budget::DEFAULT).unwrap().k, Some(1));

        let ctx = eq(2, 8);
        let ifs = Ifs::digit_prepend(ctx);
        let covering = Covering::uniform(&Ball::unit(&ctx), 8).unwrap();
        assert!(matches!(
            verify_sc(&ifs, &covering, Budget(100)),
            Err(Error::Budget { required: 256, .. })
        ));
    }

    #[test]
    fn universe_must_match_the_system() {
        let ctx = eq(2, 4);
        let a = ctx.monomial(1, -1).unwrap();
        let local = Covering::uniform(&Ball::new(&a, 0).unwrap(), 1).unwrap();
        assert!(verify_sc(&Ifs::digit_prepend(ctx), &local, Budget::DEFAULT).is_err());
        let report = verify_sc(&Ifs::tail_fixing(ctx), &local, Budget::DEFAULT).unwrap();
        assert_eq!(report.k, Some(1));
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let ctx = eq(2, 4);
        let ifs = Ifs::digit_prepend(ctx);
        let covering = Covering::uniform(&Ball::unit(&ctx), 2).unwrap();
        let report = verify_sc(&ifs, &covering, Budget::DEFAULT).unwrap();

        let mut wrong_set = report.clone();
        wrong_set.certificate[0].1 = 3;
        assert!(replay_certificate(&ifs, &covering, &wrong_set).is_err());

        let mut missing = report.clone();
        missing.certificate.pop();
        assert!(replay_certificate(&ifs, &covering, &missing).is_err());

        let mut reordered = report;
        reordered.certificate.swap(0, 1);
        assert!(replay_certificate(&ifs, &covering, &reordered).is_err());
    }

    #[test]
    fn weak_contraction_audits() {
        let ctx = eq(2, 4);
        let audit = verify_weak_contraction(&Ifs::digit_prepend(ctx), &ctx.zero(), Budget::DEFAULT)
            .unwrap();
        assert!(audit.passed());
        assert_eq!(audit.checked, 16 * 15 / 2 * 2);

        let identity = [|x: &Element| Ok(x.clone())];
        let audit = audit_weak_contraction(&Ball::unit(&ctx), &identity, Budget::DEFAULT).unwrap();
        let violation = audit.violation.unwrap();
        assert_eq!(violation.a, ctx.zero());
        assert_eq!(violation.b, ctx.monomial(1, 0).unwrap());

        let mixed = DvrContext::mixed_char(3, 3).unwrap();
        assert!(
            verify_weak_contraction(&Ifs::digit_prepend(mixed), &mixed.zero(), Budget::DEFAULT)
                .unwrap()
                .passed()
        );
    }

    #[test]
    fn exact_contraction_includes_window_maps() {
        let ctx = eq(2, 5);
        let zero = ctx.zero();
        for ifs in [Ifs::digit_prepend(ctx), Ifs::window(ctx, 1).unwrap(), Ifs::tail_fixing(ctx)] {
            assert!(verify_exact_contraction(&ifs, &zero, Budget::DEFAULT).unwrap().passed());
        }
        // a map that scales by t^2 is not a one-step contraction
        let wrong = Ifs::new(ctx, vec![IfsMap::WindowPrepend { block: vec![0, 1] }]).unwrap();
        let audit = audit_pairs(
            &Ball::unit(&ctx),
            &system_maps(&wrong),
            Budget::DEFAULT,
            |a, b, fa, fb| (fa - fb).valuation() == shifted_valuation((a - b).valuation(), 1, 5),
        )
        .unwrap();
        assert!(!audit.passed());
    }

    #[test]
    fn local_fractality_examples() {
        let ctx = eq(2, 4);
        let a = ctx.monomial(1, -1).unwrap();
        let report = verify_local_fractality(&a, 3, Budget::DEFAULT).unwrap();
        assert_eq!(report.verdict, Verdict::Holds, "{}", report.to_text(0));
        assert_eq!(report.k, Some(3));
        assert_eq!(report.certificate.len(), 8);

        let ctx3 = eq(3, 4);
        let a = ctx3.element(-2, &[2, 1]).unwrap();
        let report = verify_local_fractality(&a, 2, Budget::DEFAULT).unwrap();
        assert_eq!(report.verdict, Verdict::Holds, "{}", report.to_text(0));

        let integral = ctx.element(0, &[1, 1]).unwrap();
        let report = verify_local_fractality(&integral, 2, Budget::DEFAULT).unwrap();
        assert_eq!(report.verdict, Verdict::Holds);
    }
}
