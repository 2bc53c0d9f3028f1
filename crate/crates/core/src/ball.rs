//! Ultrametric balls `B_alpha(a) = {b : v(a - b) >= alpha}` and the Boolean
//! algebra of finite disjoint unions of balls.
//!
//! Two balls are either nested or disjoint. A [`ClopenSet`] is kept in a
//! canonical form (no nesting, no complete family of `p` sibling balls), which
//! makes set equality a syntactic comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::dvr::{DvrContext, Element};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    // field order gives the (radius, center) sort order
    radius: i32,
    center: Element,
}

impl Ball {
    /// The center is canonicalized by dropping its digits at indices `>= radius`.
    pub fn new(center: &Element, radius: i32) -> Result<Self> {
        let ctx = center.context();
        if radius > ctx.precision() as i32 {
            return Err(Error::Precision {
                required: radius as i64,
                precision: ctx.precision(),
            });
        }
        Ok(Self {
            radius,
            center: center.truncate(radius),
        })
    }

    /// `B_0(0)`, the valuation ring.
    pub fn unit(ctx: &DvrContext) -> Self {
        Self {
            radius: 0,
            center: ctx.zero(),
        }
    }

    pub fn center(&self) -> &Element {
        &self.center
    }

    pub fn radius(&self) -> i32 {
        self.radius
    }

    pub fn context(&self) -> &DvrContext {
        self.center.context()
    }

    pub fn contains(&self, x: &Element) -> bool {
        (x - &self.center).valuation().at_least(self.radius)
    }

    pub fn is_subset_of(&self, other: &Ball) -> bool {
        self.radius >= other.radius && other.contains(&self.center)
    }

    pub fn is_disjoint_from(&self, other: &Ball) -> bool {
        !self.is_subset_of(other) && !other.is_subset_of(self)
    }

    /// The `p` balls of radius `radius + 1` partitioning this one.
    pub fn children(&self) -> Result<Vec<Ball>> {
        let ctx = self.context();
        if self.radius >= ctx.precision() as i32 {
            return Err(Error::Precision {
                required: self.radius as i64 + 1,
                precision: ctx.precision(),
            });
        }
        (0..ctx.p())
            .map(|d| {
                Ok(Ball {
                    radius: self.radius + 1,
                    center: self.center.with_digit(self.radius, d)?,
                })
            })
            .collect()
    }

    /// Number of elements of the ball at the working precision, if it fits.
    pub fn element_count(&self) -> Option<u128> {
        let free = self.context().precision() as i64 - self.radius as i64;
        (self.context().p() as u128).checked_pow(u32::try_from(free).ok()?)
    }

    /// The `index`-th element: the center with the base-`p` digits of `index`
    /// written from index `radius` upwards.
    pub fn element_at(&self, mut index: u128) -> Element {
        let ctx = self.context();
        let p = ctx.p() as u128;
        let low = self.center.offset().min(self.radius).min(0);
        let digits: Vec<u32> = (low..ctx.precision() as i32)
            .map(|j| {
                if j < self.radius {
                    self.center.digit(j)
                } else {
                    let d = (index % p) as u32;
                    index /= p;
                    d
                }
            })
            .collect();
        ctx.element(low, &digits).expect("digits below p and inside the precision")
    }

    /// Every element of the ball; callers bound [`Ball::element_count`].
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.element_count().unwrap_or(0)).map(move |i| self.element_at(i))
    }

    /// The enclosing ball of radius `radius - 1`.
    pub fn parent(&self) -> Ball {
        Ball {
            radius: self.radius - 1,
            center: self.center.truncate(self.radius - 1),
        }
    }

    /// Parses `B(<radius>)@<digit-text>`.
    pub fn parse(ctx: &DvrContext, text: &str) -> Result<Self> {
        let text = text.trim();
        let rest = text
            .strip_prefix("B(")
            .ok_or_else(|| Error::Parse(format!("ball must start with 'B(': {text:?}")))?;
        let (radius, center) = rest
            .split_once(")@")
            .ok_or_else(|| Error::Parse(format!("ball must look like B(r)@digits: {text:?}")))?;
        let radius = radius
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad radius {radius:?}")))?;
        Ball::new(&ctx.parse_element(center)?, radius)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({})@{}", self.radius, self.center)
    }
}

/// All `p^(m - radius)` balls of radius `m` inside `ball`, lowest new digit
/// varying fastest. The result is deliberately not merged.
pub fn coset_decompose(ball: &Ball, m: i32) -> Result<Vec<Ball>> {
    if m < ball.radius {
        return Err(Error::InvalidInput(format!(
            "finer radius {m} is below the ball radius {}",
            ball.radius
        )));
    }
    let ctx = ball.context();
    if m > ctx.precision() as i32 {
        return Err(Error::Precision {
            required: m as i64,
            precision: ctx.precision(),
        });
    }
    let mut out = vec![ball.clone()];
    for _ in ball.radius..m {
        // keep the lowest new digit varying fastest
        let mut next = Vec::with_capacity(out.len() * ctx.p() as usize);
        let children: Vec<Vec<Ball>> = out.iter().map(Ball::children).collect::<Result<_>>()?;
        for d in 0..ctx.p() as usize {
            next.extend(children.iter().map(|c| c[d].clone()));
        }
        out = next;
    }
    Ok(out)
}

/// Refines a ball covering of `B_0(0)` to all `p^m` balls of radius `m`.
///
/// Every radius in `covering` must be at most `m`; a radius-`m` ball that no
/// covering ball contains is reported as the witness of a failed covering.
pub fn refine_to_uniform_radius(
    ctx: &DvrContext,
    covering: &[Ball],
    m: i32,
) -> Result<Vec<Ball>> {
    if let Some(b) = covering.iter().find(|b| b.radius > m) {
        return Err(Error::InvalidInput(format!(
            "refinement radius {m} is below the radius of {b}"
        )));
    }
    let fine = coset_decompose(&Ball::unit(ctx), m)?;
    if let Some(witness) = fine
        .iter()
        .find(|f| !covering.iter().any(|c| f.is_subset_of(c)))
    {
        return Err(Error::NotACovering {
            witness: witness.clone(),
        });
    }
    Ok(fine)
}

/// A finite disjoint union of balls in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ClopenSet {
    balls: Vec<Ball>,
}

impl ClopenSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_ball(ball: Ball) -> Self {
        Self { balls: vec![ball] }
    }

    /// Removes nested balls, then merges complete sibling families bottom-up.
    pub fn normalize<I: IntoIterator<Item = Ball>>(balls: I) -> Self {
        let mut sorted: Vec<Ball> = balls.into_iter().collect();
        sorted.sort();
        sorted.dedup();

        // larger balls (smaller radius) come first, so every ancestor of a
        // ball is decided before the ball itself
        let min_radius = sorted.first().map_or(0, |b| b.radius);
        let mut kept: BTreeSet<Ball> = BTreeSet::new();
        for b in sorted {
            let mut ancestor = b.clone();
            let mut nested = false;
            while ancestor.radius > min_radius {
                ancestor = ancestor.parent();
                if kept.contains(&ancestor) {
                    nested = true;
                    break;
                }
            }
            if !nested {
                kept.insert(b);
            }
        }

        let mut levels: BTreeMap<i32, BTreeSet<Ball>> = BTreeMap::new();
        for b in kept {
            levels.entry(b.radius).or_default().insert(b);
        }
        // Merging a complete family never creates nesting: the siblings
        // partition the parent, so nothing else can sit inside it.
        let mut balls = Vec::new();
        while let Some((_, level)) = levels.pop_last() {
            let mut by_parent: BTreeMap<Ball, Vec<Ball>> = BTreeMap::new();
            for b in level {
                by_parent.entry(b.parent()).or_default().push(b);
            }
            for (parent, members) in by_parent {
                if members.len() == parent.context().p() as usize {
                    levels.entry(parent.radius).or_default().insert(parent);
                } else {
                    balls.extend(members);
                }
            }
        }
        balls.sort();
        Self { balls }
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.balls.iter().any(|b| b.contains(x))
    }

    /// Ball-by-ball containment. Exact because both sides are canonical: a
    /// ball covered by several canonical balls would force a sibling merge.
    pub fn contains_ball(&self, ball: &Ball) -> bool {
        self.balls.iter().any(|b| ball.is_subset_of(b))
    }

    pub fn is_subset_of(&self, other: &ClopenSet) -> bool {
        self.balls.iter().all(|b| other.contains_ball(b))
    }

    pub fn union(&self, other: &ClopenSet) -> ClopenSet {
        ClopenSet::normalize(self.balls.iter().chain(other.balls.iter()).cloned())
    }

    pub fn intersect(&self, other: &ClopenSet) -> ClopenSet {
        let mut out = Vec::new();
        for a in &self.balls {
            for b in &other.balls {
                if a.is_subset_of(b) {
                    out.push(a.clone());
                } else if b.is_subset_of(a) {
                    out.push(b.clone());
                }
            }
        }
        ClopenSet::normalize(out)
    }

    /// `self \ other`.
    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        let mut out = Vec::new();
        let mut stack: Vec<Ball> = self.balls.iter().rev().cloned().collect();
        while let Some(b) = stack.pop() {
            if other.contains_ball(&b) {
                continue;
            }
            if other.balls.iter().all(|o| o.is_disjoint_from(&b)) {
                out.push(b);
                continue;
            }
            // some ball of `other` sits strictly inside `b`
            let mut children = b.children()?;
            children.reverse();
            stack.extend(children);
        }
        Ok(ClopenSet::normalize(out))
    }

    /// Parses one ball per non-empty line.
    pub fn parse_lines(ctx: &DvrContext, text: &str) -> Result<ClopenSet> {
        let balls = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| Ball::parse(ctx, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClopenSet::normalize(balls))
    }
}

impl FromIterator<Ball> for ClopenSet {
    fn from_iter<T: IntoIterator<Item = Ball>>(iter: T) -> Self {
        ClopenSet::normalize(iter)
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.balls.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.balls.iter().map(Ball::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
