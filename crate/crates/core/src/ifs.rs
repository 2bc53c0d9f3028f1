//! The three map families and exact images of elements, balls and clopen sets.
//!
//! * digit-prepend `f_s(a) = s + t a` on the valuation ring;
//! * window-prepend `f(a) = b_0 + b_1 t + .. + b_mu t^mu + t^(mu+1) a`;
//! * tail-fixing `f_s(a) = a^- + s + t (a - a^-)` on the whole field, which
//!   keeps the fractional part and acts as digit-prepend on the rest.
//!
//! Each map sends a ball of radius `r` to a ball of radius `r + 1` (window
//! maps: `r + mu + 1`), so images of balls stay exact.

use std::fmt;

use rayon::prelude::*;

use crate::ball::{coset_decompose, Ball, ClopenSet};
use crate::dvr::{DvrContext, Element};
use crate::error::{Error, Result};
use crate::words::{word_at, Budget};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IfsMap {
    DigitPrepend { digit: u32 },
    WindowPrepend { block: Vec<u32> },
    TailFixing { digit: u32 },
}

impl IfsMap {
    /// How far the map raises the radius of a ball.
    pub fn step(&self) -> u32 {
        match self {
            IfsMap::DigitPrepend { .. } | IfsMap::TailFixing { .. } => 1,
            IfsMap::WindowPrepend { block } => block.len() as u32,
        }
    }

    fn check_digits(&self, ctx: &DvrContext) -> Result<()> {
        let digits: &[u32] = match self {
            IfsMap::DigitPrepend { digit } | IfsMap::TailFixing { digit } => {
                std::slice::from_ref(digit)
            }
            IfsMap::WindowPrepend { block } => block,
        };
        if digits.is_empty() {
            return Err(Error::InvalidInput("window block must not be empty".into()));
        }
        match digits.iter().find(|&&d| d >= ctx.p()) {
            Some(&digit) => Err(Error::InvalidDigit { digit, p: ctx.p() }),
            None => Ok(()),
        }
    }

    pub fn apply(&self, a: &Element) -> Result<Element> {
        let ctx = a.context();
        self.check_digits(ctx)?;
        match self {
            IfsMap::DigitPrepend { digit } => {
                if !a.is_integral() {
                    return Err(Error::Domain(format!(
                        "digit-prepend maps act on the valuation ring, got {}",
                        a.pretty()
                    )));
                }
                Ok(&ctx.monomial(*digit, 0)? + &a.shift(1))
            }
            IfsMap::WindowPrepend { block } => {
                if !a.is_integral() {
                    return Err(Error::Domain(format!(
                        "window maps act on the valuation ring, got {}",
                        a.pretty()
                    )));
                }
                // block digits past the precision vanish modulo t^N
                let kept = block.len().min(ctx.precision() as usize);
                let prefix = ctx.element(0, &block[..kept])?;
                Ok(&prefix + &a.shift(block.len() as u32))
            }
            IfsMap::TailFixing { digit } => {
                if (a.offset() as i64) < -(ctx.precision() as i64) {
                    return Err(Error::Precision {
                        required: -(a.offset() as i64),
                        precision: ctx.precision(),
                    });
                }
                let tail = a.minus_part();
                let integral = a - &tail;
                let moved = &ctx.monomial(*digit, 0)? + &integral.shift(1);
                Ok(&tail + &moved)
            }
        }
    }

    pub fn image_of_ball(&self, b: &Ball) -> Result<Ball> {
        if b.radius() < 0 {
            return Err(Error::Domain(match self {
                IfsMap::TailFixing { .. } => format!(
                    "the image of {b} under a tail-fixing map is not a single ball"
                ),
                _ => format!("{b} is not inside the valuation ring"),
            }));
        }
        let radius = b.radius() as i64 + self.step() as i64;
        let precision = b.context().precision();
        if radius > precision as i64 {
            return Err(Error::Precision {
                required: radius,
                precision,
            });
        }
        Ball::new(&self.apply(b.center())?, radius as i32)
    }

    /// Image of a clopen set. Tail-fixing maps split balls of negative radius
    /// into radius-0 cosets first, since their fractional parts differ.
    pub fn image_of_set(&self, s: &ClopenSet) -> Result<ClopenSet> {
        let mut out = Vec::new();
        for b in s.balls() {
            if b.radius() < 0 && matches!(self, IfsMap::TailFixing { .. }) {
                for coset in coset_decompose(b, 0)? {
                    out.push(self.image_of_ball(&coset)?);
                }
            } else {
                out.push(self.image_of_ball(b)?);
            }
        }
        Ok(ClopenSet::normalize(out))
    }
}

impl fmt::Display for IfsMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IfsMap::DigitPrepend { digit } => write!(f, "f_{digit}(a) = {digit} + t*a"),
            IfsMap::WindowPrepend { block } => {
                let b: Vec<String> = block.iter().map(u32::to_string).collect();
                write!(f, "f_({})(a) = ({}) + t^{}*a", b.join(","), b.join(","), block.len())
            }
            IfsMap::TailFixing { digit } => {
                write!(f, "f_{digit}(a) = a^- + {digit} + t*(a - a^-)")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    DigitPrepend,
    Window { mu: u32 },
    TailFixing,
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemKind::DigitPrepend => f.write_str("digit-prepend"),
            SystemKind::Window { mu } => write!(f, "window (mu = {mu})"),
            SystemKind::TailFixing => f.write_str("tail-fixing"),
        }
    }
}

/// Outcome of [`Ifs::verify_composition_identity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityCheck {
    Holds { words: u128 },
    /// Lexicographically least word whose image differs from the prediction.
    Counterexample(Vec<usize>),
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        matches!(self, IdentityCheck::Holds { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailPreservation {
    Holds,
    Fails,
    /// `(a - b)^- = 0`, so the property says nothing.
    NotApplicable,
}

/// A finite family of maps of one kind over one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ifs {
    ctx: DvrContext,
    kind: SystemKind,
    maps: Vec<IfsMap>,
}

impl Ifs {
    pub fn new(ctx: DvrContext, maps: Vec<IfsMap>) -> Result<Self> {
        let first = maps
            .first()
            .ok_or_else(|| Error::InvalidInput("a system needs at least one map".into()))?;
        let kind = match first {
            IfsMap::DigitPrepend { .. } => SystemKind::DigitPrepend,
            IfsMap::TailFixing { .. } => SystemKind::TailFixing,
            IfsMap::WindowPrepend { block } => SystemKind::Window {
                mu: block.len().saturating_sub(1) as u32,
            },
        };
        for map in &maps {
            map.check_digits(&ctx)?;
            let same = match (first, map) {
                (IfsMap::DigitPrepend { .. }, IfsMap::DigitPrepend { .. })
                | (IfsMap::TailFixing { .. }, IfsMap::TailFixing { .. }) => true,
                (IfsMap::WindowPrepend { block: a }, IfsMap::WindowPrepend { block: b }) => {
                    a.len() == b.len()
                }
                _ => false,
            };
            if !same {
                return Err(Error::InvalidInput(format!(
                    "maps of one system must share a kind: {first} vs {map}"
                )));
            }
        }
        Ok(Self { ctx, kind, maps })
    }

    /// The full canonical system of the given kind. Map `i` uses digit `i`;
    /// window map `i` uses the base-`p` digits of `i`, lowest first.
    pub fn canonical(ctx: DvrContext, kind: SystemKind) -> Result<Self> {
        let maps = (0..canonical_len(&ctx, kind)?)
            .map(|i| canonical_map(&ctx, kind, i))
            .collect();
        Self::new(ctx, maps)
    }

    pub fn digit_prepend(ctx: DvrContext) -> Self {
        Self::canonical(ctx, SystemKind::DigitPrepend).expect("p maps")
    }

    pub fn window(ctx: DvrContext, mu: u32) -> Result<Self> {
        Self::canonical(ctx, SystemKind::Window { mu })
    }

    pub fn tail_fixing(ctx: DvrContext) -> Self {
        Self::canonical(ctx, SystemKind::TailFixing).expect("p maps")
    }

    pub fn context(&self) -> &DvrContext {
        &self.ctx
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn maps(&self) -> &[IfsMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Radius gained by one application of any map.
    pub fn step(&self) -> u32 {
        self.maps[0].step()
    }

    /// Whether this is the full alphabet in canonical order, the setting in
    /// which `F(X) = X` and the composition identity are claimed.
    pub fn is_canonical(&self) -> bool {
        canonical_len(&self.ctx, self.kind).is_ok_and(|n| {
            n == self.maps.len()
                && self
                    .maps
                    .iter()
                    .enumerate()
                    .all(|(i, m)| *m == canonical_map(&self.ctx, self.kind, i))
        })
    }

    /// The space the system acts on: `B_0(0)` for ring systems, `B_0(anchor)`
    /// for tail-fixing systems.
    pub fn universe(&self, anchor: &Element) -> Result<Ball> {
        match self.kind {
            SystemKind::TailFixing => Ball::new(anchor, 0),
            _ if anchor.is_integral() => Ok(Ball::unit(&self.ctx)),
            _ => Err(Error::Domain(format!(
                "{} systems act on B_0(0), not on B_0({})",
                self.kind,
                anchor.pretty()
            ))),
        }
    }

    fn map(&self, i: usize) -> Result<&IfsMap> {
        self.maps.get(i).ok_or_else(|| {
            Error::InvalidInput(format!("map index {i} out of range (n = {})", self.len()))
        })
    }

    /// `F(S) = f_1(S) u .. u f_n(S)`.
    pub fn image(&self, s: &ClopenSet) -> Result<ClopenSet> {
        let mut out = Vec::new();
        for map in &self.maps {
            out.extend(map.image_of_set(s)?.balls().iter().cloned());
        }
        Ok(ClopenSet::normalize(out))
    }

    /// `f_{w_1} o .. o f_{w_k}(start)`; the last letter acts first.
    pub fn compose_image(&self, word: &[usize], start: &ClopenSet) -> Result<ClopenSet> {
        self.check_depth(word.len(), start)?;
        word.iter()
            .rev()
            .try_fold(start.clone(), |set, &i| self.map(i)?.image_of_set(&set))
    }

    /// Composition image of a single ball; fails where the image is not a ball.
    pub fn compose_ball(&self, word: &[usize], start: &Ball) -> Result<Ball> {
        word.iter()
            .rev()
            .try_fold(start.clone(), |b, &i| self.map(i)?.image_of_ball(&b))
    }

    pub fn compose_element(&self, word: &[usize], x: &Element) -> Result<Element> {
        word.iter()
            .rev()
            .try_fold(x.clone(), |y, &i| self.map(i)?.apply(&y))
    }

    fn check_depth(&self, k: usize, start: &ClopenSet) -> Result<()> {
        let finest = start.balls().iter().map(Ball::radius).max().unwrap_or(0).max(0);
        let required = finest as i64 + k as i64 * self.step() as i64;
        if required > self.ctx.precision() as i64 {
            return Err(Error::Precision {
                required,
                precision: self.ctx.precision(),
            });
        }
        Ok(())
    }

    /// The ball the closed-form identity predicts for `word` applied to
    /// `B_0(anchor)`: the fractional part of the anchor followed by the digit
    /// blocks of the word, outermost letter lowest.
    pub fn predicted_image(&self, word: &[usize], anchor: &Element) -> Result<Ball> {
        let n = canonical_len(&self.ctx, self.kind)?;
        let step = self.step() as usize;
        let radius = word.len() * step;
        if radius > self.ctx.precision() as usize {
            return Err(Error::Precision {
                required: radius as i64,
                precision: self.ctx.precision(),
            });
        }
        let tail = anchor.minus_part();
        let low = tail.offset();
        let mut digits: Vec<u32> = (low..0).map(|j| tail.digit(j)).collect();
        for &letter in word {
            if letter >= n {
                return Err(Error::InvalidInput(format!("letter {letter} out of range")));
            }
            let mut rest = letter;
            for _ in 0..step {
                digits.push((rest % self.ctx.p() as usize) as u32);
                rest /= self.ctx.p() as usize;
            }
        }
        Ball::new(&self.ctx.element(low, &digits)?, radius as i32)
    }

    /// Checks `compose_image(w, B_0(anchor)) = predicted_image(w, anchor)` for
    /// every word of length `depth`, reporting the least counterexample.
    pub fn verify_composition_identity(
        &self,
        depth: usize,
        anchor: &Element,
        budget: Budget,
    ) -> Result<IdentityCheck> {
        let universe = ClopenSet::from_ball(self.universe(anchor)?);
        self.check_depth(depth, &universe)?;
        let count = budget.words(self.len(), depth)?;
        let n = self.len();
        let first_bad = (0..count).into_par_iter().find_first(|&index| {
            let word = word_at(n, depth, index);
            let actual = self.compose_image(&word, &universe);
            let predicted = self.predicted_image(&word, anchor);
            match (actual, predicted) {
                (Ok(a), Ok(p)) => a != ClopenSet::from_ball(p),
                _ => true,
            }
        });
        match first_bad {
            None => Ok(IdentityCheck::Holds { words: count }),
            Some(index) => {
                let word = word_at(n, depth, index);
                // surface errors rather than reporting them as counterexamples
                self.compose_image(&word, &universe)?;
                self.predicted_image(&word, anchor)?;
                Ok(IdentityCheck::Counterexample(word))
            }
        }
    }
}

fn canonical_len(ctx: &DvrContext, kind: SystemKind) -> Result<usize> {
    let p = ctx.p() as usize;
    match kind {
        SystemKind::DigitPrepend | SystemKind::TailFixing => Ok(p),
        SystemKind::Window { mu } => p
            .checked_pow(mu + 1)
            .filter(|&n| n <= 1 << 20)
            .ok_or_else(|| Error::InvalidInput(format!("window alphabet p^{} is too large", mu + 1))),
    }
}

fn canonical_map(ctx: &DvrContext, kind: SystemKind, i: usize) -> IfsMap {
    match kind {
        SystemKind::DigitPrepend => IfsMap::DigitPrepend { digit: i as u32 },
        SystemKind::TailFixing => IfsMap::TailFixing { digit: i as u32 },
        SystemKind::Window { mu } => {
            let p = ctx.p() as usize;
            let mut rest = i;
            let block = (0..=mu)
                .map(|_| {
                    let d = rest % p;
                    rest /= p;
                    d as u32
                })
                .collect();
            IfsMap::WindowPrepend { block }
        }
    }
}

/// Checks `(f(a) - f(b))^- = (a - b)^-` whenever `(a - b)^- != 0`.
pub fn tail_preservation(map: &IfsMap, a: &Element, b: &Element) -> Result<TailPreservation> {
    if !matches!(map, IfsMap::TailFixing { .. }) {
        return Err(Error::InvalidInput(
            "tail preservation concerns tail-fixing maps".into(),
        ));
    }
    let before = (a - b).minus_part();
    if before.is_zero() {
        return Ok(TailPreservation::NotApplicable);
    }
    let after = (&map.apply(a)? - &map.apply(b)?).minus_part();
    Ok(if after == before {
        TailPreservation::Holds
    } else {
        TailPreservation::Fails
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(p: u32, n: u32) -> DvrContext {
        DvrContext::equal_char(p, n).unwrap()
    }

    #[test]
    fn apply_examples() {
        let ctx = eq(2, 4);
        let t = ctx.monomial(1, 1).unwrap();
        let f1 = IfsMap::DigitPrepend { digit: 1 };
        assert_eq!(f1.apply(&t).unwrap().digits(), &[1, 0, 1, 0]);

        let ctx3 = eq(3, 3);
        let w = IfsMap::WindowPrepend { block: vec![2, 1] };
        assert_eq!(w.apply(&ctx3.zero()).unwrap().pretty(), "2 + t");

        let a = ctx.element(-1, &[1, 1]).unwrap();
        let g = IfsMap::TailFixing { digit: 1 };
        assert_eq!(g.apply(&a).unwrap().pretty(), "t^-1 + 1 + t");
    }

    #[test]
    fn top_digit_is_dropped() {
        let ctx = eq(2, 3);
        let a = ctx.element(0, &[0, 0, 1]).unwrap();
        assert_eq!(IfsMap::DigitPrepend { digit: 0 }.apply(&a).unwrap(), ctx.zero());
    }

    #[test]
    fn domain_and_digit_errors() {
        let ctx = eq(2, 3);
        let frac = ctx.monomial(1, -1).unwrap();
        assert!(matches!(
            IfsMap::DigitPrepend { digit: 0 }.apply(&frac),
            Err(Error::Domain(_))
        ));
        assert_eq!(
            IfsMap::DigitPrepend { digit: 2 }.apply(&ctx.zero()),
            Err(Error::InvalidDigit { digit: 2, p: 2 })
        );
        let deep = ctx.monomial(1, -4).unwrap();
        assert!(matches!(
            IfsMap::TailFixing { digit: 0 }.apply(&deep),
            Err(Error::Precision { .. })
        ));
        assert!(Ifs::new(ctx, vec![]).is_err());
        assert!(Ifs::new(
            ctx,
            vec![IfsMap::DigitPrepend { digit: 0 }, IfsMap::TailFixing { digit: 1 }]
        )
        .is_err());
        assert!(Ifs::new(
            ctx,
            vec![
                IfsMap::WindowPrepend { block: vec![0] },
                IfsMap::WindowPrepend { block: vec![0, 1] }
            ]
        )
        .is_err());
    }

    #[test]
    fn image_of_ball_examples() {
        let ctx = eq(2, 4);
        let b = Ball::new(&ctx.monomial(1, 1).unwrap(), 2).unwrap();
        let image = IfsMap::DigitPrepend { digit: 1 }.image_of_ball(&b).unwrap();
        assert_eq!(image, Ball::new(&ctx.element(0, &[1, 0, 1]).unwrap(), 3).unwrap());

        for s in 0..2 {
            let image = IfsMap::DigitPrepend { digit: s }
                .image_of_ball(&Ball::unit(&ctx))
                .unwrap();
            assert_eq!(image, Ball::new(&ctx.monomial(s, 0).unwrap(), 1).unwrap());
        }

        let a = ctx.monomial(1, -1).unwrap();
        let image = IfsMap::TailFixing { digit: 0 }
            .image_of_ball(&Ball::new(&a, 0).unwrap())
            .unwrap();
        assert_eq!(image, Ball::new(&a, 1).unwrap());

        let finest = Ball::new(&ctx.zero(), 4).unwrap();
        assert!(matches!(
            IfsMap::DigitPrepend { digit: 0 }.image_of_ball(&finest),
            Err(Error::Precision { .. })
        ));
        let wide = Ball::new(&ctx.zero(), -1).unwrap();
        assert!(matches!(
            IfsMap::TailFixing { digit: 0 }.image_of_ball(&wide),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn system_images_are_invariant() {
        let ctx = eq(2, 6);
        let whole = ClopenSet::from_ball(Ball::unit(&ctx));
        assert_eq!(Ifs::digit_prepend(ctx).image(&whole).unwrap(), whole);
        assert_eq!(Ifs::window(ctx, 1).unwrap().image(&whole).unwrap(), whole);

        let a = ctx.element(-2, &[1, 0, 1]).unwrap();
        let local = ClopenSet::from_ball(Ball::new(&a, 0).unwrap());
        assert_eq!(Ifs::tail_fixing(ctx).image(&local).unwrap(), local);
    }

    #[test]
    fn tail_fixing_splits_wide_balls() {
        let ctx = eq(2, 3);
        let wide = ClopenSet::from_ball(Ball::new(&ctx.zero(), -1).unwrap());
        let image = IfsMap::TailFixing { digit: 1 }.image_of_set(&wide).unwrap();
        assert_eq!(image.balls().len(), 2);
        assert!(image.balls().iter().all(|b| b.radius() == 1));
    }

    #[test]
    fn composition_examples() {
        let ctx = eq(2, 4);
        let ifs = Ifs::digit_prepend(ctx);
        let whole = ClopenSet::from_ball(Ball::unit(&ctx));
        let image = ifs.compose_image(&[1, 0, 1], &whole).unwrap();
        let expected = Ball::new(&ctx.element(0, &[1, 0, 1]).unwrap(), 3).unwrap();
        assert_eq!(image, ClopenSet::from_ball(expected));
        assert_eq!(ifs.compose_image(&[], &whole).unwrap(), whole);

        // blocks (1,0) and (0,1) are canonical letters 1 and 2
        let window = Ifs::window(ctx, 1).unwrap();
        let image = window.compose_image(&[1, 2], &whole).unwrap();
        let expected = Ball::new(&ctx.element(0, &[1, 0, 0, 1]).unwrap(), 4).unwrap();
        assert_eq!(image, ClopenSet::from_ball(expected));

        assert!(matches!(
            window.compose_image(&[0, 0, 0], &whole),
            Err(Error::Precision { required: 6, .. })
        ));
    }

    #[test]
    fn identity_negative_control() {
        let ctx = eq(2, 6);
        let swapped = Ifs::new(
            ctx,
            vec![IfsMap::DigitPrepend { digit: 1 }, IfsMap::DigitPrepend { digit: 0 }],
        )
        .unwrap();
        assert!(!swapped.is_canonical());
        let outcome = swapped
            .verify_composition_identity(3, &ctx.zero(), Budget::DEFAULT)
            .unwrap();
        assert_eq!(outcome, IdentityCheck::Counterexample(vec![0, 0, 0]));

        let canonical = Ifs::digit_prepend(ctx);
        assert!(canonical.is_canonical());
        assert_eq!(
            canonical
                .verify_composition_identity(6, &ctx.zero(), Budget::DEFAULT)
                .unwrap(),
            IdentityCheck::Holds { words: 64 }
        );
    }

    #[test]
    fn tail_preservation_examples() {
        let ctx = eq(2, 3);
        let a = ctx.monomial(1, -1).unwrap();
        for digit in 0..2 {
            let f = IfsMap::TailFixing { digit };
            assert_eq!(
                tail_preservation(&f, &a, &ctx.zero()).unwrap(),
                TailPreservation::Holds
            );
            let integral = ctx.element(0, &[1, 1]).unwrap();
            assert_eq!(
                tail_preservation(&f, &integral, &ctx.zero()).unwrap(),
                TailPreservation::NotApplicable
            );
        }
        assert!(tail_preservation(&IfsMap::DigitPrepend { digit: 0 }, &a, &a).is_err());
    }
}
