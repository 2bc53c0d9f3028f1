//! Finite-precision arithmetic in discretely valued rings and fields.
//!
//! An [`Element`] is a digit expansion `sum d_j t^j` over the canonical digits
//! `{0, .., p-1}`, tracked from its lowest index `offset` up to (but excluding)
//! the context precision `N`. In equal characteristic this is `F_p((t))`
//! modulo `t^N`; in mixed characteristic it is `Q_p` modulo `p^N` with
//! base-`p` carries, and `t` stands for the uniformizer `p`.
//!
//! Only the operations the map families need are provided: addition,
//! subtraction, multiplication by powers of the uniformizer, truncation and
//! the fractional part `a^-`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Characteristic {
    /// `F_p[[t]]`: digits add without carries.
    EqualChar,
    /// `Z_p`: digits are base-`p` digits, carries propagate upwards.
    MixedChar,
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Characteristic::EqualChar => f.write_str("equal-char"),
            Characteristic::MixedChar => f.write_str("mixed-char"),
        }
    }
}

/// The ambient ring: residue characteristic, arithmetic mode and precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DvrContext {
    p: u32,
    mode: Characteristic,
    precision: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl DvrContext {
    pub fn new(p: u32, mode: Characteristic, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        Ok(Self { p, mode, precision })
    }

    pub fn equal_char(p: u32, precision: u32) -> Result<Self> {
        Self::new(p, Characteristic::EqualChar, precision)
    }

    pub fn mixed_char(p: u32, precision: u32) -> Result<Self> {
        Self::new(p, Characteristic::MixedChar, precision)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn mode(&self) -> Characteristic {
        self.mode
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub(crate) fn top(&self) -> i32 {
        self.precision as i32
    }

    pub fn zero(&self) -> Element {
        Element {
            ctx: *self,
            offset: 0,
            digits: vec![0; self.precision as usize],
        }
    }

    /// Builds an element from digits `d_offset, d_{offset+1}, ..`. Missing high
    /// digits are zero; a nonzero digit at an index `>= N` is a precision error.
    pub fn element(&self, offset: i32, digits: &[u32]) -> Result<Element> {
        for &d in digits {
            if d >= self.p {
                return Err(Error::InvalidDigit { digit: d, p: self.p });
            }
        }
        let top = self.top();
        if let Some(last) = digits.iter().rposition(|&d| d != 0) {
            let index = offset as i64 + last as i64;
            if index >= top as i64 {
                return Err(Error::Precision {
                    required: index + 1,
                    precision: self.precision,
                });
            }
        }
        let low = offset.min(0);
        let mut dense = vec![0u32; (top - low) as usize];
        for (i, &d) in digits.iter().enumerate() {
            let index = offset as i64 + i as i64;
            if index < top as i64 {
                dense[(index - low as i64) as usize] = d;
            }
        }
        Ok(Element::from_dense(*self, low, dense))
    }

    /// `digit * t^index`.
    pub fn monomial(&self, digit: u32, index: i32) -> Result<Element> {
        self.element(index, &[digit])
    }

    /// Every element of `B_0(0)` at this precision, lowest digit varying fastest.
    ///
    /// Callers are responsible for bounding `p^N`.
    pub fn ring_elements(&self) -> impl Iterator<Item = Element> + '_ {
        let count = (self.p as u128).pow(self.precision);
        (0..count).map(move |index| self.ring_element_at(index))
    }

    /// The element whose base-`p` digits are those of `index`.
    pub fn ring_element_at(&self, mut index: u128) -> Element {
        let p = self.p as u128;
        let mut digits = vec![0u32; self.precision as usize];
        for d in digits.iter_mut() {
            *d = (index % p) as u32;
            index /= p;
        }
        Element::from_dense(*self, 0, digits)
    }

    /// Parses the digit-text format `offset=<l>; digits=<d_l>,<d_{l+1}>,..`.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let mut offset = 0i32;
        let mut digits: Option<Vec<u32>> = None;
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            match key.trim() {
                "offset" => {
                    offset = value
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad offset {value:?}")))?;
                }
                "digits" => {
                    let parsed = value
                        .split(',')
                        .map(|d| {
                            d.trim()
                                .parse::<u32>()
                                .map_err(|_| Error::Parse(format!("bad digit {d:?}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    digits = Some(parsed);
                }
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        let digits = digits.ok_or_else(|| Error::Parse("missing digits".into()))?;
        self.element(offset, &digits)
    }
}

/// Result of [`Element::valuation`].
///
/// `AtLeast(N)` means every tracked digit vanishes: the element cannot be told
/// apart from zero at this precision. It orders above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i32),
    AtLeast(i32),
}

impl Valuation {
    pub fn finite(self) -> Option<i32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Whether the valuation is known to be `>= alpha`.
    pub fn at_least(self, alpha: i32) -> bool {
        match self {
            Valuation::Finite(v) => v >= alpha,
            Valuation::AtLeast(n) => n >= alpha,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

/// Ultrametric distance `p^(-v(a - b))`.
///
/// `BelowResolution` is returned when the two elements agree on every tracked
/// digit; it is smaller than every representable distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    BelowResolution,
    /// `base^(-exponent)`.
    Power { base: u32, exponent: i32 },
}

impl Distance {
    pub fn to_rational(self) -> Option<BigRational> {
        match self {
            Distance::BelowResolution => None,
            Distance::Power { base, exponent } => {
                let b = BigInt::from(base);
                let magnitude: BigInt = Pow::pow(&b, exponent.unsigned_abs());
                Some(if exponent >= 0 {
                    BigRational::new(BigInt::one(), magnitude)
                } else {
                    BigRational::from_integer(magnitude)
                })
            }
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::BelowResolution, Distance::BelowResolution) => Ordering::Equal,
            (Distance::BelowResolution, _) => Ordering::Less,
            (_, Distance::BelowResolution) => Ordering::Greater,
            (
                Distance::Power { base: b1, exponent: e1 },
                Distance::Power { base: b2, exponent: e2 },
            ) => {
                debug_assert_eq!(b1, b2, "distances over different primes");
                e2.cmp(e1)
            }
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            None => f.write_str("below-resolution"),
            Some(r) => write!(f, "{r}"),
        }
    }
}

/// A digit expansion `sum_{j >= offset} d_j t^j` tracked below index `N`.
///
/// The representation is canonical: `offset <= 0`, and when `offset < 0` the
/// digit at `offset` is nonzero. Structural equality is therefore value
/// equality at this precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    ctx: DvrContext,
    offset: i32,
    digits: Vec<u32>,
}

impl Element {
    /// `digits` must cover `[low, N)` with `low <= 0`.
    fn from_dense(ctx: DvrContext, low: i32, mut digits: Vec<u32>) -> Self {
        debug_assert!(low <= 0);
        debug_assert_eq!(digits.len() as i32, ctx.top() - low);
        let leading = digits
            .iter()
            .take((-low) as usize)
            .take_while(|&&d| d == 0)
            .count();
        digits.drain(..leading);
        Self {
            ctx,
            offset: low + leading as i32,
            digits,
        }
    }

    pub fn context(&self) -> &DvrContext {
        &self.ctx
    }

    pub fn offset(&self) -> i32 {
        self.offset
    }

    /// Digits from index `offset` up to `N - 1`.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Digit at absolute index `j`; zero outside the tracked range.
    pub fn digit(&self, j: i32) -> u32 {
        if j < self.offset || j >= self.ctx.top() {
            0
        } else {
            self.digits[(j - self.offset) as usize]
        }
    }

    /// Whether the element lies in the valuation ring `B_0(0)`.
    pub fn is_integral(&self) -> bool {
        self.offset == 0
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    fn dense_from(&self, low: i32) -> impl Iterator<Item = u32> + '_ {
        (low..self.ctx.top()).map(move |j| self.digit(j))
    }

    fn check_same(&self, other: &Element) {
        assert_eq!(
            self.ctx, other.ctx,
            "arithmetic on elements from different contexts"
        );
    }

    pub fn valuation(&self) -> Valuation {
        match self.digits.iter().position(|&d| d != 0) {
            Some(i) => Valuation::Finite(self.offset + i as i32),
            None => Valuation::AtLeast(self.ctx.top()),
        }
    }

    pub fn distance(&self, other: &Element) -> Distance {
        match (self - other).valuation() {
            Valuation::Finite(v) => Distance::Power {
                base: self.ctx.p,
                exponent: v,
            },
            Valuation::AtLeast(_) => Distance::BelowResolution,
        }
    }

    /// Multiplication by `t^k`: every digit moves up `k` places and digits
    /// pushed to index `N` or beyond are dropped.
    pub fn shift(&self, k: u32) -> Element {
        let top = self.ctx.top();
        let low = (self.offset as i64 + k as i64).min(0) as i32;
        let dense = (low..top)
            .map(|j| {
                let source = j as i64 - k as i64;
                if source < i32::MIN as i64 {
                    0
                } else {
                    self.digit(source as i32)
                }
            })
            .collect();
        Element::from_dense(self.ctx, low, dense)
    }

    /// The fractional part `a^-`: the digits at negative indices.
    pub fn minus_part(&self) -> Element {
        let low = self.offset;
        let dense = (low..self.ctx.top())
            .map(|j| if j < 0 { self.digit(j) } else { 0 })
            .collect();
        Element::from_dense(self.ctx, low, dense)
    }

    /// Zeroes every digit at index `>= alpha`.
    pub fn truncate(&self, alpha: i32) -> Element {
        let low = self.offset;
        let dense = (low..self.ctx.top())
            .map(|j| if j < alpha { self.digit(j) } else { 0 })
            .collect();
        Element::from_dense(self.ctx, low, dense)
    }

    /// Returns a copy with the digit at index `j` replaced.
    pub fn with_digit(&self, j: i32, digit: u32) -> Result<Element> {
        if digit >= self.ctx.p {
            return Err(Error::InvalidDigit { digit, p: self.ctx.p });
        }
        if j >= self.ctx.top() {
            return Err(Error::Precision {
                required: j as i64 + 1,
                precision: self.ctx.precision,
            });
        }
        let low = self.offset.min(j).min(0);
        let dense = (low..self.ctx.top())
            .map(|i| if i == j { digit } else { self.digit(i) })
            .collect();
        Ok(Element::from_dense(self.ctx, low, dense))
    }

    fn combine(&self, other: &Element, subtract: bool) -> Element {
        self.check_same(other);
        let p = self.ctx.p as u64;
        let low = self.offset.min(other.offset);
        let lhs = self.dense_from(low);
        let rhs = other.dense_from(low);
        let dense: Vec<u32> = match self.ctx.mode {
            Characteristic::EqualChar => lhs
                .zip(rhs)
                .map(|(x, y)| {
                    let (x, y) = (x as u64, y as u64);
                    (if subtract { (x + p - y) % p } else { (x + y) % p }) as u32
                })
                .collect(),
            Characteristic::MixedChar => {
                let mut carry = 0u64;
                lhs.zip(rhs)
                    .map(|(x, y)| {
                        let (x, y) = (x as u64, y as u64);
                        if subtract {
                            // borrow is carry here
                            let sub = y + carry;
                            if x >= sub {
                                carry = 0;
                                (x - sub) as u32
                            } else {
                                carry = 1;
                                (x + p - sub) as u32
                            }
                        } else {
                            let sum = x + y + carry;
                            carry = sum / p;
                            (sum % p) as u32
                        }
                    })
                    .collect()
            }
        };
        Element::from_dense(self.ctx, low, dense)
    }

    /// Polynomial rendering such as `t^-1 + 1 + 2t^3`. Mixed characteristic
    /// uses `p` for the uniformizer.
    pub fn pretty(&self) -> String {
        let var = match self.ctx.mode {
            Characteristic::EqualChar => "t",
            Characteristic::MixedChar => "p",
        };
        let terms: Vec<String> = self
            .digits
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(i, &d)| {
                let j = self.offset + i as i32;
                let coeff = if d == 1 && j != 0 {
                    String::new()
                } else {
                    d.to_string()
                };
                match j {
                    0 => coeff,
                    1 => format!("{coeff}{var}"),
                    _ => format!("{coeff}{var}^{j}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compares contexts first, then digits from the highest index down, so that
/// integral elements in mixed characteristic sort by their integer value.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ctx.cmp(&other.ctx).then_with(|| {
            let low = self.offset.min(other.offset);
            (low..self.ctx.top())
                .rev()
                .map(|j| self.digit(j).cmp(&other.digit(j)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        self.combine(rhs, false)
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        self.combine(rhs, true)
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        &self.ctx.zero() - self
    }
}

/// Digit-text format, high zero digits trimmed.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let used = self
            .digits
            .iter()
            .rposition(|&d| d != 0)
            .map_or(1, |i| i + 1);
        let digits: Vec<String> = self.digits[..used].iter().map(u32::to_string).collect();
        write!(f, "offset={}; digits={}", self.offset, digits.join(","))
    }
}
