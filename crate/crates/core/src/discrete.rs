//! Symbolic models for shift maps on sequence spaces and the two non-metric
//! examples.
//!
//! * Baire space `omega^omega` with `f_i(x) = (i, x_0, x_1, ..)`: the set
//!   `U = {x : x_0 = n and x_1 = .. = x_n = 0 for some n}` splits the cylinder
//!   of `(k, 0, .., 0)` for every `k`, so (SC) fails for `{U, X \ U}`.
//! * `kappa^omega` with the same maps: for a covering by basic cylinders
//!   `A_x` plus one arbitrary open set, depth `max |x_i|` works.
//! * `omega` with the discrete topology, `f_0(n) = 0` and `f_1(n) = n + 1`:
//!   depth `max n_j + 1` works for singletons `{n_j}` plus one open set.
//! * `[0, 1]` with the cofinite topology and the two halving maps: depth-`k`
//!   images are the dyadic intervals of length `2^-k`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::report::{word_i64, CertificateEntry, Verdict, VerificationReport};
use crate::words::{word_at, Budget};

pub type Word = Vec<u64>;

/// `f_i(A_w) = A_{(i, w..)}`.
pub fn shift_image(letter: u64, w: &[u64]) -> Word {
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push(letter);
    out.extend_from_slice(w);
    out
}

/// Image of the whole space under `f_{w_1} o .. o f_{w_k}`, as a cylinder.
pub fn compose_cylinder(word: &[u64]) -> Word {
    word.iter().rev().fold(Vec::new(), |acc, &i| shift_image(i, &acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UClass {
    Inside,
    Disjoint,
    Split,
}

/// Position of the cylinder `A_w` relative to the Baire-space set `U`.
pub fn classify_against_u(w: &[u64]) -> UClass {
    let Some(&n) = w.first() else {
        return UClass::Split;
    };
    let k = w.len() as u64;
    let visible = n.min(k - 1) as usize;
    if w[1..=visible].iter().any(|&x| x != 0) {
        UClass::Disjoint
    } else if n < k {
        UClass::Inside
    } else {
        UClass::Split
    }
}

/// Brute-force classification: membership in `U` depends on the first
/// `x_0 + 1` letters and only on whether they are zero, so extending `w` over
/// `{0, 1}` to that length decides it.
pub fn classify_by_extensions(w: &[u64]) -> UClass {
    let Some(&n) = w.first() else {
        return UClass::Split;
    };
    let need = (n as usize + 1).max(w.len());
    let extra = need - w.len();
    let (mut inside, mut outside) = (false, false);
    for bits in 0..(1u128 << extra.min(127)) {
        let mut x = w.to_vec();
        x.extend((0..extra).map(|i| ((bits >> i) & 1) as u64));
        if x[1..=n as usize].iter().all(|&d| d == 0) {
            inside = true;
        } else {
            outside = true;
        }
        if inside && outside {
            return UClass::Split;
        }
    }
    if inside {
        UClass::Inside
    } else {
        UClass::Disjoint
    }
}

/// Witnesses `(k, 0, .., 0)` of length `k` for `k = 1..=max_k`, each checked
/// to split `U`.
pub fn baire_sc_fails(max_k: u64) -> Result<Vec<Word>> {
    (1..=max_k)
        .map(|k| {
            let mut w = vec![0; k as usize];
            w[0] = k;
            let image = compose_cylinder(&w);
            match classify_against_u(&image) {
                UClass::Split => Ok(image),
                other => Err(Error::InvalidInput(format!(
                    "word {w:?} classified {other:?}, expected a split"
                ))),
            }
        })
        .collect()
}

pub fn baire_report(max_k: u64) -> Result<VerificationReport> {
    let witness = baire_sc_fails(max_k)?
        .into_iter()
        .map(|w| w.into_iter().map(|l| l as i64).collect())
        .collect();
    Ok(VerificationReport::fails(witness)
        .detail("model", "baire")
        .detail("covering", "{U, X \\ U}")
        .detail("certified-through-depth", max_k))
}

/// The non-basic member of an SC* covering of `kappa^omega`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RestSet {
    /// Everything outside the listed basic cylinders.
    Complement,
    /// A union of cylinders.
    Cylinders(Vec<Word>),
}

fn is_prefix(x: &[u64], y: &[u64]) -> bool {
    x.len() <= y.len() && y[..x.len()] == *x
}

fn check_letters(kappa: u64, words: &[Word]) -> Result<()> {
    if kappa == 0 {
        return Err(Error::InvalidInput("kappa must be positive".into()));
    }
    match words.iter().flatten().find(|&&l| l >= kappa) {
        Some(l) => Err(Error::InvalidInput(format!("letter {l} outside alphabet of size {kappa}"))),
        None => Ok(()),
    }
}

fn word_u64(kappa: u64, k: usize, index: u128) -> Word {
    word_at(kappa as usize, k, index).into_iter().map(|l| l as u64).collect()
}

/// Whether `A_y` lies inside the union of the cylinders `us`.
fn cylinder_in_union(kappa: u64, y: &[u64], us: &[Word], budget: Budget) -> Result<bool> {
    if us.iter().any(|u| is_prefix(u, y)) {
        return Ok(true);
    }
    let longer: Vec<&Word> = us.iter().filter(|u| is_prefix(y, u)).collect();
    let Some(depth) = longer.iter().map(|u| u.len()).max() else {
        return Ok(false);
    };
    let extra = depth - y.len();
    let count = budget.words(kappa as usize, extra)?;
    Ok((0..count).all(|i| {
        let mut z = y.to_vec();
        z.extend(word_u64(kappa, extra, i));
        longer.iter().any(|u| is_prefix(u, &z))
    }))
}

/// Set index covering `A_y`: the first basic cylinder (input order) that
/// contains it, else the rest set (index `basics.len()`).
fn cylinder_target(
    kappa: u64,
    y: &[u64],
    basics: &[Word],
    rest: &RestSet,
    budget: Budget,
) -> Result<Option<usize>> {
    if let Some(i) = basics.iter().position(|x| is_prefix(x, y)) {
        return Ok(Some(i));
    }
    let in_rest = match rest {
        RestSet::Complement => !basics.iter().any(|x| is_prefix(y, x)),
        RestSet::Cylinders(us) => cylinder_in_union(kappa, y, us, budget)?,
    };
    Ok(in_rest.then_some(basics.len()))
}

fn check_cylinder_covering(kappa: u64, basics: &[Word], rest: &RestSet, budget: Budget) -> Result<()> {
    let RestSet::Cylinders(us) = rest else {
        return Ok(());
    };
    let depth = basics.iter().chain(us).map(Vec::len).max().unwrap_or(0);
    let count = budget.words(kappa as usize, depth)?;
    for i in 0..count {
        let y = word_u64(kappa, depth, i);
        if !basics.iter().chain(us).any(|x| is_prefix(x, &y)) {
            return Err(Error::InvalidInput(format!("cylinder {y:?} is not covered")));
        }
    }
    Ok(())
}

/// SC* in `kappa^omega`: depth `k = max |x_i|`, certified word by word.
pub fn sc_star_cylinders(
    kappa: u64,
    basics: &[Word],
    rest: &RestSet,
    budget: Budget,
) -> Result<VerificationReport> {
    check_letters(kappa, basics)?;
    if let RestSet::Cylinders(us) = rest {
        check_letters(kappa, us)?;
    }
    check_cylinder_covering(kappa, basics, rest, budget)?;
    let k = basics.iter().map(Vec::len).max().unwrap_or(0);
    let count = budget.words(kappa as usize, k)?;
    let targets: Vec<Option<usize>> = (0..count)
        .into_par_iter()
        .map(|i| cylinder_target(kappa, &compose_cylinder(&word_u64(kappa, k, i)), basics, rest, budget))
        .collect::<Result<_>>()?;
    let report = collect_certificate(k, &targets, |i| {
        word_u64(kappa, k, i).into_iter().map(|l| l as i64).collect()
    });
    Ok(report
        .detail("model", "kappa-omega")
        .detail("kappa", kappa)
        .detail("rest-set-index", basics.len()))
}

/// Brute-force least depth for the cylinder model.
pub fn minimal_k_cylinders(kappa: u64, basics: &[Word], rest: &RestSet, budget: Budget) -> Result<usize> {
    check_letters(kappa, basics)?;
    let bound = basics.iter().map(Vec::len).max().unwrap_or(0);
    for k in 0..=bound {
        let count = budget.words(kappa as usize, k)?;
        let mut all = true;
        for i in 0..count {
            let y = compose_cylinder(&word_u64(kappa, k, i));
            if cylinder_target(kappa, &y, basics, rest, budget)?.is_none() {
                all = false;
                break;
            }
        }
        if all {
            return Ok(k);
        }
    }
    Ok(bound)
}

pub fn replay_cylinders(
    kappa: u64,
    basics: &[Word],
    rest: &RestSet,
    report: &VerificationReport,
    budget: Budget,
) -> Result<()> {
    replay_with(report, kappa as usize, |word| {
        let letters: Word = word.iter().map(|&l| l as u64).collect();
        check_letters(kappa, std::slice::from_ref(&letters))?;
        let y = compose_cylinder(&letters);
        let set = report_set(report, word)?;
        let ok = if set < basics.len() {
            is_prefix(&basics[set], &y)
        } else if set == basics.len() {
            match rest {
                RestSet::Complement => !basics.iter().any(|x| is_prefix(x, &y) || is_prefix(&y, x)),
                RestSet::Cylinders(us) => cylinder_in_union(kappa, &y, us, budget)?,
            }
        } else {
            false
        };
        Ok(ok)
    })
}

/// Image of `omega` under a composition of `f_0: n -> 0` and `f_1: n -> n+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaImage {
    Point(u64),
    /// `{s, s+1, ..}`.
    Tail(u64),
}

/// Letters are `0` for `f_0` and `1` for `f_1`, outermost first.
pub fn omega_image(word: &[u64]) -> Result<OmegaImage> {
    word.iter().rev().try_fold(OmegaImage::Tail(0), |img, &l| match (l, img) {
        (0, _) => Ok(OmegaImage::Point(0)),
        (1, OmegaImage::Point(m)) => Ok(OmegaImage::Point(m + 1)),
        (1, OmegaImage::Tail(s)) => Ok(OmegaImage::Tail(s + 1)),
        _ => Err(Error::InvalidInput(format!("letter {l} is not 0 or 1"))),
    })
}

/// First singleton containing the image, else the rest set (index
/// `singletons.len()`) when the image avoids every listed point.
fn omega_target(image: OmegaImage, singletons: &[u64]) -> Option<usize> {
    match image {
        OmegaImage::Point(m) => Some(
            singletons
                .iter()
                .position(|&n| n == m)
                .unwrap_or(singletons.len()),
        ),
        OmegaImage::Tail(s) => singletons
            .iter()
            .all(|&n| n < s)
            .then_some(singletons.len()),
    }
}

/// SC* for the discrete `omega` model: `k = max n_j + 1` (0 without singletons).
pub fn sc_star_omega_discrete(singletons: &[u64], budget: Budget) -> Result<VerificationReport> {
    let k = singletons.iter().max().map_or(0, |&m| m as usize + 1);
    let count = budget.words(2, k)?;
    let targets: Vec<Option<usize>> = (0..count)
        .into_par_iter()
        .map(|i| Ok(omega_target(omega_image(&word_u64(2, k, i))?, singletons)))
        .collect::<Result<_>>()?;
    let report = collect_certificate(k, &targets, |i| word_i64(&word_at(2, k, i)));
    Ok(report
        .detail("model", "omega-discrete")
        .detail("rest-set-index", singletons.len()))
}

pub fn minimal_k_omega_discrete(singletons: &[u64], budget: Budget) -> Result<usize> {
    let bound = singletons.iter().max().map_or(0, |&m| m as usize + 1);
    for k in 0..=bound {
        let count = budget.words(2, k)?;
        let mut all = true;
        for i in 0..count {
            if omega_target(omega_image(&word_u64(2, k, i))?, singletons).is_none() {
                all = false;
                break;
            }
        }
        if all {
            return Ok(k);
        }
    }
    Ok(bound)
}

pub fn replay_omega_discrete(singletons: &[u64], report: &VerificationReport) -> Result<()> {
    replay_with(report, 2, |word| {
        let letters: Word = word.iter().map(|&l| l as u64).collect();
        let set = report_set(report, word)?;
        Ok(match omega_image(&letters)? {
            OmegaImage::Point(m) if set < singletons.len() => singletons[set] == m,
            OmegaImage::Point(m) => set == singletons.len() && !singletons.contains(&m),
            OmegaImage::Tail(s) => set == singletons.len() && singletons.iter().all(|&n| n < s),
        })
    })
}

/// Complements `F_j` of the cofinite open sets `[0,1] \ F_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CofiniteCovering {
    complements: Vec<Vec<Rational>>,
}

impl CofiniteCovering {
    pub fn new(complements: Vec<Vec<Rational>>) -> Result<Self> {
        if complements.is_empty() {
            return Err(Error::InvalidInput("a covering needs at least one set".into()));
        }
        let unit = Rational::from_integer(1);
        let zero = Rational::from_integer(0);
        let mut complements = complements;
        for f in &mut complements {
            if let Some(q) = f.iter().find(|q| **q < zero || **q > unit) {
                return Err(Error::InvalidInput(format!(
                    "{} is outside [0, 1]",
                    format_rational(q)
                )));
            }
            f.sort();
            f.dedup();
        }
        if let Some(q) = complements[0]
            .iter()
            .find(|q| complements[1..].iter().all(|f| f.binary_search(q).is_ok()))
        {
            return Err(Error::InvalidInput(format!(
                "not a covering: {} lies in every complement",
                format_rational(q)
            )));
        }
        Ok(Self { complements })
    }

    pub fn complements(&self) -> &[Vec<Rational>] {
        &self.complements
    }

    /// First set `[0,1] \ F_j` containing the closed interval `[lo, hi]`.
    pub fn first_containing(&self, lo: Rational, hi: Rational) -> Option<usize> {
        self.complements
            .iter()
            .position(|f| f.iter().all(|q| *q < lo || *q > hi))
    }

    /// Least `k` with `2^-k` below the smallest gap between listed points;
    /// an interval that short meets at most one point, which some `F_j` misses.
    pub fn gap_bound(&self) -> u32 {
        let mut points: Vec<Rational> = self.complements.iter().flatten().copied().collect();
        points.sort();
        points.dedup();
        let Some(gap) = points.windows(2).map(|w| w[1] - w[0]).min() else {
            return 0;
        };
        let mut k = 0;
        let mut width = Rational::from_integer(1);
        while width >= gap {
            width /= 2;
            k += 1;
        }
        k
    }
}

/// `f_1(x) = x/2`, `f_2(x) = 1/2 + x/2`; letter `0` is `f_1`, `1` is `f_2`.
pub fn cofinite_image(word: &[usize]) -> (Rational, Rational) {
    let half = Rational::new(1, 2);
    word.iter().rev().fold(
        (Rational::from_integer(0), Rational::from_integer(1)),
        |(lo, hi), &l| {
            let shift = if l == 0 { Rational::from_integer(0) } else { half };
            (shift + lo * half, shift + hi * half)
        },
    )
}

fn cofinite_targets(c: &CofiniteCovering, k: usize, budget: Budget) -> Result<Vec<Option<usize>>> {
    let count = budget.words(2, k)?;
    budget.check(count.saturating_mul(c.complements.iter().map(Vec::len).sum::<usize>().max(1) as u128))?;
    Ok((0..count)
        .into_par_iter()
        .map(|i| {
            let (lo, hi) = cofinite_image(&word_at(2, k, i));
            c.first_containing(lo, hi)
        })
        .collect())
}

pub fn cofinite_holds_at(c: &CofiniteCovering, k: usize, budget: Budget) -> Result<bool> {
    Ok(cofinite_targets(c, k, budget)?.iter().all(Option::is_some))
}

/// Least depth at which (SC) holds, searched up to `max_k`, together with
/// the gap bound. Falls back to the (certified) gap bound when the search
/// range is too short.
pub fn cofinite_sc(c: &CofiniteCovering, max_k: usize, budget: Budget) -> Result<VerificationReport> {
    let gap = c.gap_bound() as usize;
    let (lo0, hi0) = cofinite_image(&[0]);
    let (lo1, hi1) = cofinite_image(&[1]);
    let surjective = lo0 == Rational::from_integer(0) && hi0 == lo1 && hi1 == Rational::from_integer(1);

    let mut found = None;
    for k in 0..=max_k.min(gap) {
        let targets = cofinite_targets(c, k, budget)?;
        if targets.iter().all(Option::is_some) {
            found = Some((k, targets, Verdict::Holds));
            break;
        }
    }
    if found.is_none() {
        let targets = cofinite_targets(c, gap, budget)?;
        found = Some((gap, targets, Verdict::HoldsWithSoundBound));
    }
    let (k, targets, verdict) = found.expect("set above");
    let mut report = collect_certificate(k, &targets, |i| word_i64(&word_at(2, k, i)));
    if report.verdict != Verdict::Fails {
        report.verdict = verdict;
    }
    report.check("X = f_1[X] u f_2[X]", surjective);
    Ok(report.detail("model", "cofinite").detail("gap-bound", gap))
}

pub fn replay_cofinite(c: &CofiniteCovering, report: &VerificationReport) -> Result<()> {
    replay_with(report, 2, |word| {
        let letters: Vec<usize> = word.iter().map(|&l| l as usize).collect();
        let (lo, hi) = cofinite_image(&letters);
        let set = report_set(report, word)?;
        Ok(c
            .complements
            .get(set)
            .is_some_and(|f| f.iter().all(|q| *q < lo || *q > hi)))
    })
}

fn collect_certificate(
    k: usize,
    targets: &[Option<usize>],
    word: impl Fn(u128) -> Vec<i64>,
) -> VerificationReport {
    match targets.iter().position(Option::is_none) {
        Some(bad) => VerificationReport::fails(vec![word(bad as u128)]),
        None => VerificationReport::holds(
            k as u64,
            targets
                .iter()
                .enumerate()
                .map(|(i, t)| CertificateEntry(word(i as u128), t.unwrap_or_default()))
                .collect(),
        ),
    }
}

fn report_set(report: &VerificationReport, word: &[i64]) -> Result<usize> {
    report
        .certificate
        .iter()
        .find(|e| e.0 == word)
        .map(|e| e.1)
        .ok_or_else(|| Error::InvalidInput(format!("word {word:?} missing from certificate")))
}

/// Generic replay: the certificate must list every word of length `k` over an
/// alphabet of size `n`, in lexicographic order, and `ok` must accept each.
fn replay_with(
    report: &VerificationReport,
    n: usize,
    ok: impl Fn(&[i64]) -> Result<bool>,
) -> Result<()> {
    if !report.verdict.is_success() {
        return Err(Error::InvalidInput("only a holding verdict carries a certificate".into()));
    }
    let k = report
        .k
        .ok_or_else(|| Error::InvalidInput("report has no depth".into()))? as usize;
    let expected = crate::words::word_count(n, k).unwrap_or(u128::MAX);
    if report.certificate.len() as u128 != expected {
        return Err(Error::InvalidInput(format!(
            "certificate lists {} words, depth {k} has {expected}",
            report.certificate.len()
        )));
    }
    for (i, entry) in report.certificate.iter().enumerate() {
        let wanted = word_i64(&word_at(n, k, i as u128));
        if entry.0 != wanted {
            return Err(Error::InvalidInput(format!(
                "entry {i} lists word {:?}, expected {wanted:?}",
                entry.0
            )));
        }
        if !ok(&entry.0)? {
            return Err(Error::InvalidInput(format!(
                "word {:?} is not inside set {}",
                entry.0, entry.1
            )));
        }
    }
    Ok(())
}
