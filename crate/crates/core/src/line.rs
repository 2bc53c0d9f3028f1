//! The shifted Lipschitz family `f_n(x) = n + g(x)` on the rational line,
//! with `g(x) = x / (2(1 + |x|))`, and the constant-`c` procedure for SC*
//! coverings by basic open intervals plus one open set `U`.
//!
//! `g` is an increasing bijection of the line onto `(-1/2, 1/2)` with
//! Lipschitz constant `1/2`, and it maps rationals to rationals, so every
//! image interval is computed exactly.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::report::{CertificateEntry, VerificationReport};
use crate::words::Budget;

/// A point of the extended line. The derived order puts `NegInf` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Extended {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "-inf" => Ok(Extended::NegInf),
            "inf" | "+inf" => Ok(Extended::PosInf),
            other => parse_rational(other).map(Extended::Finite),
        }
    }

    pub fn finite(self) -> Option<Rational> {
        match self {
            Extended::Finite(q) => Some(q),
            _ => None,
        }
    }
}

impl From<Rational> for Extended {
    fn from(q: Rational) -> Self {
        Extended::Finite(q)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::PosInf => f.write_str("inf"),
            Extended::Finite(q) => f.write_str(&format_rational(q)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Extended,
    hi: Extended,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    /// Infinite ends must be open; a single point must be closed on both sides.
    pub fn new(lo: Extended, lo_closed: bool, hi: Extended, hi_closed: bool) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidInput(format!("interval {lo}..{hi}: {why}")));
        if (lo_closed && lo.finite().is_none()) || (hi_closed && hi.finite().is_none()) {
            return bad("infinite ends are open");
        }
        match lo.cmp(&hi) {
            Ordering::Less => {}
            Ordering::Equal if lo_closed && hi_closed && lo.finite().is_some() => {}
            _ => return bad("degenerate"),
        }
        Ok(Self { lo, hi, lo_closed, hi_closed })
    }

    pub fn open(lo: Extended, hi: Extended) -> Result<Self> {
        Self::new(lo, false, hi, false)
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo.into(), true, hi.into(), true)
    }

    pub fn point(q: Rational) -> Self {
        Self { lo: q.into(), hi: q.into(), lo_closed: true, hi_closed: true }
    }

    pub fn whole() -> Self {
        Self { lo: Extended::NegInf, hi: Extended::PosInf, lo_closed: false, hi_closed: false }
    }

    pub fn lo(&self) -> Extended {
        self.lo
    }

    pub fn hi(&self) -> Extended {
        self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_open(&self) -> bool {
        !self.lo_closed && !self.hi_closed
    }

    pub fn contains(&self, q: Rational) -> bool {
        let q = Extended::Finite(q);
        (self.lo < q || (self.lo == q && self.lo_closed))
            && (q < self.hi || (q == self.hi && self.hi_closed))
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lower = other.lo < self.lo || (other.lo == self.lo && (other.lo_closed || !self.lo_closed));
        let upper = self.hi < other.hi || (self.hi == other.hi && (other.hi_closed || !self.hi_closed));
        lower && upper
    }

    pub fn diameter(&self) -> Extended {
        match (self.lo, self.hi) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(b - a),
            _ => Extended::PosInf,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Sorted, pairwise disjoint and non-adjacent intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalUnion {
    parts: Vec<Interval>,
}

impl IntervalUnion {
    pub fn new(parts: impl IntoIterator<Item = Interval>) -> Self {
        let mut parts: Vec<Interval> = parts.into_iter().collect();
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for next in parts {
            if let Some(cur) = out.last_mut() {
                let touches = next.lo < cur.hi || (next.lo == cur.hi && (cur.hi_closed || next.lo_closed));
                if touches {
                    match next.hi.cmp(&cur.hi) {
                        Ordering::Greater => {
                            cur.hi = next.hi;
                            cur.hi_closed = next.hi_closed;
                        }
                        Ordering::Equal => cur.hi_closed |= next.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(next);
        }
        Self { parts: out }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, q: Rational) -> bool {
        self.parts.iter().any(|p| p.contains(q))
    }

    /// An interval is connected, so it lies in the union iff it lies in one part.
    pub fn contains_interval(&self, i: &Interval) -> bool {
        self.parts.iter().any(|p| i.is_subset_of(p))
    }

    pub fn is_whole_line(&self) -> bool {
        self.parts == [Interval::whole()]
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::new(self.parts.iter().chain(&other.parts).copied())
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.parts.iter().map(Interval::to_string).collect();
        f.write_str(&parts.join(" u "))
    }
}

/// `g(x) = x / (2(1 + |x|))`, reduced by hand: with `x = a/b` in lowest
/// terms, `gcd(a, b + |a|) = 1`, so only a factor 2 can cancel.
pub fn g(x: Rational) -> Rational {
    let (a, b) = (*x.numer(), *x.denom());
    let s = b + a.abs();
    if a % 2 == 0 {
        Rational::new_raw(a / 2, s)
    } else {
        Rational::new_raw(a, 2 * s)
    }
}

/// Inverse of `g` on `(-1/2, 1/2)`: `x = 2r / (1 - 2|r|)`.
pub fn g_inverse(r: Rational) -> Option<Rational> {
    let half = Rational::new(1, 2);
    if r.abs() >= half {
        return None;
    }
    Some(r * 2 / (Rational::from_integer(1) - r.abs() * 2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LipschitzShiftMap {
    pub shift: i64,
}

impl LipschitzShiftMap {
    pub fn new(shift: i64) -> Self {
        Self { shift }
    }

    pub fn apply(&self, x: Rational) -> Rational {
        shift_raw(self.shift, g(x))
    }

    /// Infinite points go to the limits `n -/+ 1/2`.
    pub fn apply_extended(&self, x: Extended) -> Extended {
        let n = Rational::from_integer(self.shift as i128);
        Extended::Finite(match x {
            Extended::NegInf => n - Rational::new(1, 2),
            Extended::PosInf => n + Rational::new(1, 2),
            Extended::Finite(q) => self.apply(q),
        })
    }
}

fn shift_raw(n: i64, r: Rational) -> Rational {
    let d = *r.denom();
    Rational::new_raw(r.numer() + n as i128 * d, d)
}

/// `f` is increasing, so the image has the mapped endpoints and keeps the
/// closedness of each end (infinite ends are open and stay open).
pub fn map_image_interval(f: LipschitzShiftMap, i: &Interval) -> Interval {
    Interval {
        lo: f.apply_extended(i.lo),
        hi: f.apply_extended(i.hi),
        lo_closed: i.lo_closed,
        hi_closed: i.hi_closed,
    }
}

/// Image of the line under `f_{n_1} o .. o f_{n_k}`, word outermost first.
pub fn word_image(word: &[i64]) -> Interval {
    word.iter()
        .rev()
        .fold(Interval::whole(), |i, &n| map_image_interval(LipschitzShiftMap::new(n), &i))
}

/// `(1/2)^(k-1)` for `k >= 1`; the whole line at `k = 0`.
pub fn sup_diam_at_depth(k: u32) -> Extended {
    match k {
        0 => Extended::PosInf,
        k => Extended::Finite(Rational::new(1, 1i128 << (k - 1))),
    }
}

/// Basic open intervals `(a_i, b_i)` plus one open set `U` covering the line.
/// Set indices: basics `0..n` in input order, then `U` as `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCovering {
    u: IntervalUnion,
    basics: Vec<(Rational, Rational)>,
}

impl LineCovering {
    pub fn new(u: IntervalUnion, basics: Vec<(Rational, Rational)>) -> Result<Self> {
        if let Some(p) = u.parts().iter().find(|p| !p.is_open()) {
            return Err(Error::InvalidInput(format!("U must be open, found {p}")));
        }
        if let Some((a, b)) = basics.iter().find(|(a, b)| a >= b) {
            return Err(Error::InvalidInput(format!(
                "degenerate basic interval ({}, {})",
                format_rational(a),
                format_rational(b)
            )));
        }
        let cover = u.union(&IntervalUnion::new(
            basics.iter().map(|&(a, b)| Interval::open(a.into(), b.into()).expect("checked above")),
        ));
        if !cover.is_whole_line() {
            return Err(Error::InvalidInput(format!("not a covering: union is {cover}")));
        }
        Ok(Self { u, basics })
    }

    pub fn u(&self) -> &IntervalUnion {
        &self.u
    }

    pub fn basics(&self) -> &[(Rational, Rational)] {
        &self.basics
    }

    fn basic(&self, i: usize) -> Interval {
        let (a, b) = self.basics[i];
        Interval::open(a.into(), b.into()).expect("validated")
    }

    fn sets(&self) -> impl Iterator<Item = Interval> + '_ {
        (0..self.basics.len())
            .map(|i| self.basic(i))
            .chain(self.u.parts().iter().copied())
    }

    pub fn first_containing(&self, i: &Interval) -> Option<usize> {
        (0..self.basics.len())
            .find(|&j| i.is_subset_of(&self.basic(j)))
            .or_else(|| self.u.contains_interval(i).then_some(self.basics.len()))
    }

    /// Largest `r` with `(q - r, q + r)` inside one covering set.
    pub fn margin(&self, q: Rational) -> Extended {
        self.sets()
            .filter(|s| s.contains(q))
            .map(|s| {
                let left = match s.lo {
                    Extended::Finite(a) => Extended::Finite(q - a),
                    _ => Extended::PosInf,
                };
                let right = match s.hi {
                    Extended::Finite(b) => Extended::Finite(b - q),
                    _ => Extended::PosInf,
                };
                left.min(right)
            })
            .max()
            .unwrap_or(Extended::Finite(Rational::from_integer(0)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCertificate {
    /// `c_i = min(margin(a_i), margin(b_i))`.
    pub margins: Vec<Extended>,
    pub c: Extended,
    pub k: u32,
}

/// `c = min(c_i, b_i - a_i) / 2`; `k` is the least depth whose diameter
/// bound is below `c`. Without basics every image lies in `U` and `k = 0`.
pub fn sc_star_line(cov: &LineCovering) -> LineCertificate {
    let margins: Vec<Extended> = cov
        .basics
        .iter()
        .map(|&(a, b)| cov.margin(a).min(cov.margin(b)))
        .collect();
    let c = margins
        .iter()
        .copied()
        .chain(cov.basics.iter().map(|&(a, b)| Extended::Finite(b - a)))
        .min()
        .map_or(Extended::PosInf, |m| match m {
            Extended::Finite(q) => Extended::Finite(q / 2),
            other => other,
        });
    let k = if cov.basics.is_empty() {
        0
    } else {
        (1..).find(|&k| sup_diam_at_depth(k) < c).expect("c is positive")
    };
    LineCertificate { margins, c, k }
}

/// Words with letters in `[-shift_bound, shift_bound]`, lexicographic.
fn shift_word(shift_bound: i64, k: usize, index: u128) -> Vec<i64> {
    crate::words::word_at((2 * shift_bound + 1) as usize, k, index)
        .into_iter()
        .map(|l| l as i64 - shift_bound)
        .collect()
}

/// Report with verdict `holds-with-sound-bound`; the certificate covers the
/// depth-`k` words whose shifts lie in `[-shift_bound, shift_bound]`.
pub fn line_report(cov: &LineCovering, shift_bound: i64, budget: Budget) -> Result<VerificationReport> {
    let cert = sc_star_line(cov);
    let k = cert.k as usize;
    let count = budget.words((2 * shift_bound + 1) as usize, k)?;
    let targets: Vec<Option<usize>> = (0..count)
        .into_par_iter()
        .map(|i| cov.first_containing(&word_image(&shift_word(shift_bound, k, i))))
        .collect();
    let mut report = match targets.iter().position(Option::is_none) {
        Some(bad) => VerificationReport::fails(vec![shift_word(shift_bound, k, bad as u128)]),
        None => {
            let entries = targets
                .iter()
                .enumerate()
                .map(|(i, t)| CertificateEntry(shift_word(shift_bound, k, i as u128), t.unwrap_or_default()))
                .collect();
            let mut r = VerificationReport::holds(k as u64, entries);
            r.verdict = crate::report::Verdict::HoldsWithSoundBound;
            r
        }
    };
    let margins: Vec<String> = cert.margins.iter().map(Extended::to_string).collect();
    report.check("U open and U u basics = line", true);
    Ok(report
        .detail("model", "line")
        .detail("base-map", "g(x) = x/(2(1+|x|)), image (-1/2, 1/2)")
        .detail("margins", margins.join(", "))
        .detail("c", cert.c)
        .detail("sampled-shifts", format!("[-{shift_bound}, {shift_bound}]"))
        .detail("rest-set-index", cov.basics.len()))
}

/// Checks the depth against a fresh computation and every listed word image
/// against its set.
pub fn replay_line(cov: &LineCovering, report: &VerificationReport) -> Result<()> {
    let k = sc_star_line(cov).k as u64;
    if report.k != Some(k) {
        return Err(Error::InvalidInput(format!("report depth {:?}, expected {k}", report.k)));
    }
    for w in report.certificate.windows(2) {
        if w[0].0 >= w[1].0 {
            return Err(Error::InvalidInput("certificate words out of order".into()));
        }
    }
    for CertificateEntry(word, set) in &report.certificate {
        if word.len() as u64 != k {
            return Err(Error::InvalidInput(format!("word {word:?} has the wrong length")));
        }
        let image = word_image(word);
        let inside = match *set {
            s if s < cov.basics.len() => image.is_subset_of(&cov.basic(s)),
            s if s == cov.basics.len() => cov.u.contains_interval(&image),
            _ => false,
        };
        if !inside {
            return Err(Error::InvalidInput(format!("image {image} of {word:?} is not inside set {set}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordAudit {
    pub words: u64,
    /// A word whose image is wider than the depth bound.
    pub diameter_violation: Option<Vec<i64>>,
    /// A word of length at least `k` whose image fits no covering set.
    pub containment_violation: Option<Vec<i64>>,
}

impl WordAudit {
    pub fn passed(&self) -> bool {
        self.diameter_violation.is_none() && self.containment_violation.is_none()
    }

    fn merge(mut self, other: WordAudit) -> WordAudit {
        self.words += other.words;
        self.diameter_violation = self.diameter_violation.or(other.diameter_violation);
        self.containment_violation = self.containment_violation.or(other.containment_violation);
        self
    }
}

/// `a < b` by cross-multiplication; denominators are positive.
fn lt(a: &Rational, b: &Rational) -> bool {
    match (a.numer().checked_mul(*b.denom()), b.numer().checked_mul(*a.denom())) {
        (Some(x), Some(y)) => x < y,
        _ => a < b,
    }
}

fn le_ext(a: Extended, b: &Rational) -> bool {
    match a {
        Extended::NegInf => true,
        Extended::PosInf => false,
        Extended::Finite(a) => !lt(b, &a),
    }
}

fn ge_ext(a: Extended, b: &Rational) -> bool {
    match a {
        Extended::NegInf => false,
        Extended::PosInf => true,
        Extended::Finite(a) => !lt(&a, b),
    }
}

/// `hi - lo <= 2^-e`.
fn diam_within(lo: &Rational, hi: &Rational, e: u32) -> bool {
    let exact = || (hi - lo) * Rational::from_integer(1i128 << e) <= Rational::from_integer(1);
    let (ln, ld, hn, hd) = (*lo.numer(), *lo.denom(), *hi.numer(), *hi.denom());
    let fast = (|| {
        let num = hn.checked_mul(ld)?.checked_sub(ln.checked_mul(hd)?)?;
        Some(num.checked_mul(1i128 << e)? <= hd.checked_mul(ld)?)
    })();
    fast.unwrap_or_else(exact)
}

struct AuditCtx {
    sets: Vec<Interval>,
    k: usize,
    max_len: usize,
    shift_bound: i64,
}

impl AuditCtx {
    /// Open image `(lo, hi)` is inside an open covering set.
    fn fits(&self, lo: &Rational, hi: &Rational) -> bool {
        self.sets.iter().any(|s| le_ext(s.lo, lo) && ge_ext(s.hi, hi))
    }

    /// `stack` holds the letters innermost first.
    fn visit(&self, lo: Rational, hi: Rational, stack: &mut Vec<i64>, acc: &mut WordAudit) {
        let len = stack.len();
        acc.words += 1;
        if acc.diameter_violation.is_none() && !diam_within(&lo, &hi, len as u32 - 1) {
            acc.diameter_violation = Some(stack.iter().rev().copied().collect());
        }
        if len >= self.k && acc.containment_violation.is_none() && !self.fits(&lo, &hi) {
            acc.containment_violation = Some(stack.iter().rev().copied().collect());
        }
        if len == self.max_len {
            return;
        }
        let (glo, ghi) = (g(lo), g(hi));
        for n in -self.shift_bound..=self.shift_bound {
            stack.push(n);
            self.visit(shift_raw(n, glo), shift_raw(n, ghi), stack, acc);
            stack.pop();
        }
    }
}

/// Exhaustive audit of every word of length `1..=max_len` over shifts in
/// `[-shift_bound, shift_bound]`: each image has diameter at most
/// `(1/2)^(len-1)`, and images of words of length at least `k` fit in some
/// covering set.
pub fn audit_words(cov: &LineCovering, k: u32, max_len: usize, shift_bound: i64, budget: Budget) -> Result<WordAudit> {
    let letters = (2 * shift_bound + 1) as u128;
    let total = (1..=max_len as u32).try_fold(0u128, |acc, l| {
        letters.checked_pow(l).and_then(|c| acc.checked_add(c))
    });
    budget.check(total.unwrap_or(u128::MAX))?;
    if max_len == 0 {
        return Ok(WordAudit::default());
    }
    let ctx = AuditCtx {
        sets: cov.sets().collect(),
        k: k as usize,
        max_len,
        shift_bound,
    };
    let half = Rational::new(1, 2);
    let audits: Vec<WordAudit> = (-shift_bound..=shift_bound)
        .into_par_iter()
        .map(|n| {
            let mut acc = WordAudit::default();
            let n_q = Rational::from_integer(n as i128);
            ctx.visit(n_q - half, n_q + half, &mut vec![n], &mut acc);
            acc
        })
        .collect();
    Ok(audits.into_iter().fold(WordAudit::default(), WordAudit::merge))
}

/// Some `f_n` hits `q` exactly: `n` is the nearest integer and `q - n`
/// lies strictly between `-1/2` and `1/2`.
pub fn preimage(q: Rational) -> Option<(i64, Rational)> {
    let n = (q + Rational::new(1, 2)).floor();
    let x = g_inverse(q - n)?;
    Some((*n.numer() as i64, x))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClosureCheck {
    pub checked: u64,
    pub half_integers: u64,
    pub failures: Vec<Rational>,
}

impl ClosureCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn attained(q: Rational) -> bool {
    preimage(q).is_some_and(|(n, x)| LipschitzShiftMap::new(n).apply(x) == q)
}

/// Every rational `num/den` with `den <= max_den` and `|q| <= bound` lies in
/// the closure of the images: it has an exact preimage, or (half-integers)
/// `q - eps` and `q + eps` both do.
pub fn attractor_closure_check(bound: i64, max_den: i128, eps: Rational) -> ClosureCheck {
    let mut out = ClosureCheck::default();
    for den in 1..=max_den {
        let top = bound as i128 * den;
        for num in -top..=top {
            if num_integer::Integer::gcd(&num, &den) != 1 {
                continue;
            }
            let q = Rational::new_raw(num, den);
            out.checked += 1;
            let ok = if attained(q) {
                true
            } else if den == 2 {
                out.half_integers += 1;
                attained(q - eps) && attained(q + eps)
            } else {
                false
            };
            if !ok {
                out.failures.push(q);
            }
        }
    }
    out
}
