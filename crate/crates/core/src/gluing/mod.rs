//! Gluing maps of the pochette boundary as words in the moves `E0..E5`.
//!
//! `E0` is the 1-Rolfsen twist on the first `<0>`-framed component, `E1..E4`
//! are handle slides and `E5` reverses the meridian. A [`MoveWord`] is
//! written in composition order: the first factor is applied last.

mod h2;
mod lift;

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::slope::{continued_fraction, Mod2Framing, SlopeError, SlopeFraction};

pub use h2::{compose_h2, compose_h2_magnitudes, h2_action, H2ActionPattern, H2Composite, SignMark, SignResolution};
pub use lift::{exponent_sums, natural_lift, LiftGenerator, LiftWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    E0,
    E1,
    E2,
    E3,
    E4,
    E5,
}

impl Move {
    pub const ALL: [Move; 6] = [Move::E0, Move::E1, Move::E2, Move::E3, Move::E4, Move::E5];

    pub fn index(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}", self.index())
    }
}

impl FromStr for Move {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "E0" => Ok(Move::E0),
            "E1" => Ok(Move::E1),
            "E2" => Ok(Move::E2),
            "E3" => Ok(Move::E3),
            "E4" => Ok(Move::E4),
            "E5" => Ok(Move::E5),
            _ => Err(WordParseError(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse move word near {0:?}")]
pub struct WordParseError(String);

/// A power `E_i^k` inside a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MovePower {
    pub mv: Move,
    pub exp: u64,
}

/// Finite composite of moves stored as maximal runs.
///
/// Runs never have exponent zero and adjacent runs never repeat a move, so
/// two words are equal exactly when their expanded move sequences are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MoveWord {
    runs: Vec<MovePower>,
}

impl MoveWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Appends `mv^exp` as the new rightmost factor (applied before everything so far).
    pub fn push(&mut self, mv: Move, exp: u64) {
        if exp == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some(last) if last.mv == mv => last.exp += exp,
            _ => self.runs.push(MovePower { mv, exp }),
        }
    }

    pub fn runs(&self) -> &[MovePower] {
        &self.runs
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// Total number of moves.
    pub fn len(&self) -> u64 {
        self.runs.iter().map(|r| r.exp).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// The expanded sequence, leftmost factor first.
    pub fn moves(&self) -> impl Iterator<Item = Move> + '_ {
        self.runs
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.mv, r.exp as usize))
    }
}

impl FromIterator<Move> for MoveWord {
    fn from_iter<I: IntoIterator<Item = Move>>(iter: I) -> Self {
        let mut w = MoveWord::identity();
        for mv in iter {
            w.push(mv, 1);
        }
        w
    }
}

/// `E2.E1^2.E0`; the identity is written `id`.
impl fmt::Display for MoveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "id");
        }
        for (i, r) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            if r.exp == 1 {
                write!(f, "{}", r.mv)?;
            } else {
                write!(f, "{}^{}", r.mv, r.exp)?;
            }
        }
        Ok(())
    }
}

impl FromStr for MoveWord {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut w = MoveWord::identity();
        if s == "id" || s.is_empty() {
            return Ok(w);
        }
        for part in s.split('.') {
            let (mv, exp) = match part.split_once('^') {
                Some((mv, exp)) => (mv, exp.parse().map_err(|_| WordParseError(part.to_string()))?),
                None => (part, 1),
            };
            w.push(mv.parse()?, exp);
        }
        Ok(w)
    }
}

impl Serialize for MoveWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Action on `H1(∂P) = Z[m] + Z[l]`, acting on coefficient columns in the
/// ordered basis `([m], [l])`. Column 0 is the image of `[m]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct H1Action {
    m: [[i128; 2]; 2],
}

impl H1Action {
    pub const IDENTITY: H1Action = H1Action { m: [[1, 0], [0, 1]] };

    pub fn from_rows(rows: [[i128; 2]; 2]) -> Self {
        Self { m: rows }
    }

    pub fn rows(&self) -> [[i128; 2]; 2] {
        self.m
    }

    pub fn determinant(&self) -> i128 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, v: (i128, i128)) -> (i128, i128) {
        (
            self.m[0][0] * v.0 + self.m[0][1] * v.1,
            self.m[1][0] * v.0 + self.m[1][1] * v.1,
        )
    }

    /// Image of `[m]`.
    pub fn image_of_m(&self) -> (i128, i128) {
        (self.m[0][0], self.m[1][0])
    }

    /// Image of `[l]`.
    pub fn image_of_l(&self) -> (i128, i128) {
        (self.m[0][1], self.m[1][1])
    }

    /// Inverse of a unimodular action, `None` otherwise.
    pub fn inverse(&self) -> Option<H1Action> {
        let det = self.determinant();
        if det.abs() != 1 {
            return None;
        }
        let [[a, b], [c, d]] = self.m;
        Some(H1Action {
            m: [[d * det, -b * det], [-c * det, a * det]],
        })
    }

    fn power_of(mv: Move, k: u64) -> H1Action {
        let k = k as i128;
        let m = match mv {
            Move::E0 => [[1, 0], [0, 1]],
            Move::E1 => [[1, 0], [k, 1]],
            Move::E2 => [[1, k], [0, 1]],
            Move::E3 => [[1, 0], [-k, 1]],
            Move::E4 => [[1, -k], [0, 1]],
            Move::E5 => [[if k % 2 == 0 { 1 } else { -1 }, 0], [0, 1]],
        };
        H1Action { m }
    }
}

impl Mul for H1Action {
    type Output = H1Action;

    fn mul(self, rhs: H1Action) -> H1Action {
        let a = self.m;
        let b = rhs.m;
        let mut out = [[0i128; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        H1Action { m: out }
    }
}

impl fmt::Display for H1Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1])
    }
}

impl Serialize for H1Action {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.m.serialize(s)
    }
}

/// Per-move action on `H1(∂P)`.
pub fn h1_action(mv: Move) -> H1Action {
    H1Action::power_of(mv, 1)
}

/// Product of the per-move matrices; the empty word gives the identity.
pub fn compose_h1(word: &MoveWord) -> H1Action {
    word.runs
        .iter()
        .fold(H1Action::IDENTITY, |acc, r| acc * H1Action::power_of(r.mv, r.exp))
}

/// The word `E_{p/q,ε}` for the given sign representative of the slope.
///
/// Quadrants with `pq != 0` expand `|p|/|q| = [a0; a1, ..., an]` into
/// alternating powers of `E2, E1` (`q` and `p` of equal sign) or `E4, E3`
/// (opposite signs); for even `n` the last power is split as
/// `E^{an - 1} . E'`. Negative `p` inserts `E5` just before `E0^ε`.
pub fn synthesize_word(slope: SlopeFraction, eps: Mod2Framing) -> Result<MoveWord, SlopeError> {
    let (p, q) = (slope.p(), slope.q());
    let mut w = MoveWord::identity();
    match (p, q) {
        (1, 0) => {}
        (-1, 0) => w.push(Move::E5, 1),
        (0, 1) => {
            w.push(Move::E4, 1);
            w.push(Move::E1, 1);
        }
        (0, -1) => {
            w.push(Move::E4, 1);
            w.push(Move::E1, 1);
            w.push(Move::E5, 1);
        }
        _ => {
            let cf = continued_fraction(p, q)?;
            let (even, odd) = if (p > 0) == (q > 0) {
                (Move::E2, Move::E1)
            } else {
                (Move::E4, Move::E3)
            };
            let exps: Vec<u64> = cf.all_terms().collect();
            let last = exps.len() - 1;
            let n_is_even = cf.len() % 2 == 0;
            for (i, &a) in exps.iter().enumerate() {
                let mv = if i % 2 == 0 { even } else { odd };
                if i == last && n_is_even {
                    w.push(mv, a - 1);
                    w.push(odd, 1);
                } else {
                    w.push(mv, a);
                }
            }
            if p < 0 {
                w.push(Move::E5, 1);
            }
        }
    }
    w.push(Move::E0, u64::from(eps.value()));
    Ok(w)
}

/// Checks that the synthesized word sends `[m]` to `p[m] + q[l]` for the
/// given representative and is unimodular.
pub fn verify_word(slope: SlopeFraction, eps: Mod2Framing) -> bool {
    let Ok(word) = synthesize_word(slope, eps) else {
        return false;
    };
    let action = compose_h1(&word);
    action.image_of_m() == (slope.p() as i128, slope.q() as i128) && action.determinant().abs() == 1
}
