//! Actions of the moves on `H2(∂P) = Z[B] + Z[S]`.
//!
//! Several entries carry a double sign whose upper and lower readings are
//! coupled across the whole table. The orientation that picks one reading
//! is not fixed, so both are kept and every composite is evaluated under
//! each of them.

use std::fmt;

use serde::Serialize;

use super::{Move, MoveWord};

/// Sign of one coefficient in the per-move table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SignMark {
    Plus,
    Minus,
    /// `±`: `+` under the upper reading.
    PlusMinus,
    /// `∓`: `-` under the upper reading.
    MinusPlus,
}

impl SignMark {
    pub fn is_ambiguous(self) -> bool {
        matches!(self, SignMark::PlusMinus | SignMark::MinusPlus)
    }

    pub fn resolve(self, r: SignResolution) -> i128 {
        match (self, r) {
            (SignMark::Plus, _) => 1,
            (SignMark::Minus, _) => -1,
            (SignMark::PlusMinus, SignResolution::Upper) | (SignMark::MinusPlus, SignResolution::Lower) => 1,
            (SignMark::PlusMinus, SignResolution::Lower) | (SignMark::MinusPlus, SignResolution::Upper) => -1,
        }
    }
}

/// One consistent choice for every double sign in the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SignResolution {
    Upper,
    Lower,
}

impl SignResolution {
    pub const ALL: [SignResolution; 2] = [SignResolution::Upper, SignResolution::Lower];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SignedEntry {
    pub magnitude: u8,
    pub sign: SignMark,
}

impl SignedEntry {
    const ZERO: SignedEntry = SignedEntry {
        magnitude: 0,
        sign: SignMark::Plus,
    };
    const ONE: SignedEntry = SignedEntry {
        magnitude: 1,
        sign: SignMark::Plus,
    };

    const fn unit(sign: SignMark) -> SignedEntry {
        SignedEntry { magnitude: 1, sign }
    }

    fn value(self, r: SignResolution) -> i128 {
        i128::from(self.magnitude) * self.sign.resolve(r)
    }
}

/// Per-move action in the basis `([B], [S])`; column 0 is the image of `[B]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct H2ActionPattern {
    entries: [[SignedEntry; 2]; 2],
}

impl H2ActionPattern {
    pub fn entry(&self, row: usize, col: usize) -> SignedEntry {
        self.entries[row][col]
    }

    pub fn has_ambiguity(&self) -> bool {
        self.entries.iter().flatten().any(|e| e.sign.is_ambiguous())
    }

    pub fn resolve(&self, r: SignResolution) -> [[i128; 2]; 2] {
        let e = &self.entries;
        [
            [e[0][0].value(r), e[0][1].value(r)],
            [e[1][0].value(r), e[1][1].value(r)],
        ]
    }
}

impl fmt::Display for H2ActionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |e: SignedEntry, basis: &str| -> Option<String> {
            if e.magnitude == 0 {
                return None;
            }
            let sign = match e.sign {
                SignMark::Plus => "+",
                SignMark::Minus => "-",
                SignMark::PlusMinus => "±",
                SignMark::MinusPlus => "∓",
            };
            let coeff = if e.magnitude == 1 { String::new() } else { e.magnitude.to_string() };
            Some(format!("{sign}{coeff}[{basis}]"))
        };
        let image = |col: usize| {
            let parts: Vec<String> = [term(self.entries[0][col], "B"), term(self.entries[1][col], "S")]
                .into_iter()
                .flatten()
                .collect();
            if parts.is_empty() { "0".to_string() } else { parts.join("") }
        };
        write!(f, "[B] -> {}, [S] -> {}", image(0), image(1))
    }
}

/// The per-move table on `H2(∂P)`.
pub fn h2_action(mv: Move) -> H2ActionPattern {
    use SignMark::*;
    let (b_image, s_image) = match mv {
        Move::E0 => ([SignedEntry::ONE, SignedEntry::ZERO], [SignedEntry::ZERO, SignedEntry::ONE]),
        Move::E1 => (
            [SignedEntry::ONE, SignedEntry::unit(MinusPlus)],
            [SignedEntry::ZERO, SignedEntry::ONE],
        ),
        Move::E2 => (
            [SignedEntry::ONE, SignedEntry::ZERO],
            [SignedEntry::unit(MinusPlus), SignedEntry::ONE],
        ),
        Move::E3 => (
            [SignedEntry::ONE, SignedEntry::unit(PlusMinus)],
            [SignedEntry::ZERO, SignedEntry::ONE],
        ),
        Move::E4 => (
            [SignedEntry::ONE, SignedEntry::ZERO],
            [SignedEntry::unit(PlusMinus), SignedEntry::ONE],
        ),
        Move::E5 => (
            [SignedEntry::unit(PlusMinus), SignedEntry::ZERO],
            [SignedEntry::ZERO, SignedEntry::unit(MinusPlus)],
        ),
    };
    H2ActionPattern {
        entries: [[b_image[0], s_image[0]], [b_image[1], s_image[1]]],
    }
}

/// A composed `H2` action under every consistent sign resolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H2Composite {
    pub resolutions: Vec<(SignResolution, [[i128; 2]; 2])>,
}

impl H2Composite {
    /// Entrywise absolute values, when every resolution agrees on them.
    pub fn magnitudes(&self) -> Option<[[u128; 2]; 2]> {
        let mut all = self.resolutions.iter().map(|(_, m)| abs_matrix(m));
        let first = all.next()?;
        all.all(|m| m == first).then_some(first)
    }

    /// Distinct signed matrices reachable from the resolutions.
    pub fn sign_patterns(&self) -> Vec<[[i128; 2]; 2]> {
        let mut out: Vec<[[i128; 2]; 2]> = Vec::new();
        for (_, m) in &self.resolutions {
            if !out.contains(m) {
                out.push(*m);
            }
        }
        out
    }
}

fn abs_matrix(m: &[[i128; 2]; 2]) -> [[u128; 2]; 2] {
    [
        [m[0][0].unsigned_abs(), m[0][1].unsigned_abs()],
        [m[1][0].unsigned_abs(), m[1][1].unsigned_abs()],
    ]
}

fn mul(a: [[i128; 2]; 2], b: [[i128; 2]; 2]) -> [[i128; 2]; 2] {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn power(m: [[i128; 2]; 2], mut k: u64) -> [[i128; 2]; 2] {
    let mut acc = [[1, 0], [0, 1]];
    let mut base = m;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        k >>= 1;
    }
    acc
}

pub fn compose_h2(word: &MoveWord) -> H2Composite {
    let resolutions = SignResolution::ALL
        .iter()
        .map(|&r| {
            let m = word.runs().iter().fold([[1, 0], [0, 1]], |acc, run| {
                mul(acc, power(h2_action(run.mv).resolve(r), run.exp))
            });
            (r, m)
        })
        .collect();
    H2Composite { resolutions }
}

/// Entrywise magnitudes of the composed `H2` action.
///
/// Both resolutions give the same magnitudes; should they ever disagree the
/// upper reading is returned and [`H2Composite::magnitudes`] reports `None`.
pub fn compose_h2_magnitudes(word: &MoveWord) -> [[u128; 2]; 2] {
    let c = compose_h2(word);
    c.magnitudes().unwrap_or_else(|| abs_matrix(&c.resolutions[0].1))
}
