//! Slopes `p/q` in `Q ∪ {∞}`, mod 2 framings and continued fractions.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("slope {p}/{q} is not in lowest terms")]
    NotCoprime { p: i64, q: i64 },
    #[error("0/0 is not a slope")]
    ZeroSlopePair,
    #[error("continued fraction needs a nonzero denominator")]
    ZeroDenominator,
    #[error("continued fraction needs a nonzero numerator")]
    ZeroNumerator,
    #[error("cannot parse slope {0:?}: expected p/q, an integer, or inf")]
    Parse(String),
    #[error("mod 2 framing must be 0 or 1, got {0}")]
    Framing(i64),
}

/// A coprime pair `(p, q)`.
///
/// The pair is a concrete sign representative; `(p, q)` and `(-p, -q)` name
/// the same slope and [`SlopeFraction::normalized`] picks the canonical one
/// (`q > 0`, or `(1, 0)` for `∞`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlopeFraction {
    p: i64,
    q: i64,
}

impl SlopeFraction {
    /// Checked constructor that keeps the given sign representative.
    pub fn new(p: i64, q: i64) -> Result<Self, SlopeError> {
        if p == 0 && q == 0 {
            return Err(SlopeError::ZeroSlopePair);
        }
        if p.unsigned_abs().gcd(&q.unsigned_abs()) != 1 {
            return Err(SlopeError::NotCoprime { p, q });
        }
        Ok(Self { p, q })
    }

    pub const INFINITY: SlopeFraction = SlopeFraction { p: 1, q: 0 };
    pub const ZERO: SlopeFraction = SlopeFraction { p: 0, q: 1 };

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn normalized(&self) -> Self {
        if self.q < 0 || (self.q == 0 && self.p < 0) {
            Self {
                p: -self.p,
                q: -self.q,
            }
        } else {
            *self
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            p: -self.p,
            q: -self.q,
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.q == 0
    }
}

/// Canonical representative of `{(p, q), (-p, -q)}`.
pub fn normalize_slope(p: i64, q: i64) -> Result<SlopeFraction, SlopeError> {
    SlopeFraction::new(p, q).map(|s| s.normalized())
}

impl fmt::Display for SlopeFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Parses `p/q` (either sign), a bare integer `p` meaning `p/1`, or `inf`.
/// The sign representative is kept as written.
impl FromStr for SlopeFraction {
    type Err = SlopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let err = || SlopeError::Parse(s.to_string());
        if text.eq_ignore_ascii_case("inf") || text == "∞" {
            return Ok(Self::INFINITY);
        }
        let (p, q) = match text.split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<i64>().map_err(|_| err())?,
                q.trim().parse::<i64>().map_err(|_| err())?,
            ),
            None => (text.parse::<i64>().map_err(|_| err())?, 1),
        };
        Self::new(p, q)
    }
}

impl Serialize for SlopeFraction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SlopeFraction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// The mod 2 framing `ε ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mod2Framing(bool);

impl Mod2Framing {
    pub const ZERO: Mod2Framing = Mod2Framing(false);
    pub const ONE: Mod2Framing = Mod2Framing(true);
    pub const BOTH: [Mod2Framing; 2] = [Self::ZERO, Self::ONE];

    pub fn new(eps: i64) -> Result<Self, SlopeError> {
        match eps {
            0 => Ok(Self::ZERO),
            1 => Ok(Self::ONE),
            other => Err(SlopeError::Framing(other)),
        }
    }

    pub fn value(self) -> u8 {
        u8::from(self.0)
    }
}

impl fmt::Display for Mod2Framing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FromStr for Mod2Framing {
    type Err = SlopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: i64 = s.trim().parse().map_err(|_| SlopeError::Parse(s.to_string()))?;
        Self::new(v)
    }
}

impl Serialize for Mod2Framing {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.value())
    }
}

impl<'de> Deserialize<'de> for Mod2Framing {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Self::new(v).map_err(serde::de::Error::custom)
    }
}

/// `a0 + 1/(a1 + 1/(... + 1/an))` with `a0 >= 0`, `n >= 1` and every `ai >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    a0: u64,
    terms: Vec<u64>,
}

impl ContinuedFraction {
    pub fn new(a0: u64, terms: Vec<u64>) -> Option<Self> {
        (!terms.is_empty() && terms.iter().all(|&a| a >= 1)).then_some(Self { a0, terms })
    }

    pub fn a0(&self) -> u64 {
        self.a0
    }

    /// `a1, ..., an`.
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// Number of terms after `a0`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a0, a1, ..., an` as one sequence.
    pub fn all_terms(&self) -> impl Iterator<Item = u64> + '_ {
        std::iter::once(self.a0).chain(self.terms.iter().copied())
    }
}

/// Shortest expansion of `|p|/|q|` with at least one term after `a0`.
///
/// The plain Euclidean expansion has no tail when `|q| = 1`; that case is
/// written as `(|p| - 1) + 1/1`.
pub fn continued_fraction(p: i64, q: i64) -> Result<ContinuedFraction, SlopeError> {
    if q == 0 {
        return Err(SlopeError::ZeroDenominator);
    }
    if p == 0 {
        return Err(SlopeError::ZeroNumerator);
    }
    let (mut num, mut den) = (p.unsigned_abs(), q.unsigned_abs());
    if num.gcd(&den) != 1 {
        return Err(SlopeError::NotCoprime { p, q });
    }
    let mut quotients = Vec::new();
    while den != 0 {
        quotients.push(num / den);
        (num, den) = (den, num % den);
    }
    if quotients.len() == 1 {
        let a0 = quotients[0];
        return Ok(ContinuedFraction {
            a0: a0 - 1,
            terms: vec![1],
        });
    }
    let a0 = quotients.remove(0);
    Ok(ContinuedFraction {
        a0,
        terms: quotients,
    })
}

/// Evaluates the tower back to a reduced positive fraction.
pub fn reconstruct(cf: &ContinuedFraction) -> (u128, u128) {
    // Evaluate from the innermost term outwards: x = a + 1/x.
    let mut num: u128 = 1;
    let mut den: u128 = 0;
    for a in cf.all_terms().collect::<Vec<_>>().into_iter().rev() {
        (num, den) = (a as u128 * num + den, num);
    }
    let g = num.gcd(&den);
    (num / g, den / g)
}
