//! The natural lift of the reglued meridian to `π1(∂E(P_e))`, as a word in
//! the images `m'` and `l'` of the meridian and longitude.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::slope::SlopeFraction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LiftGenerator {
    M,
    L,
}

impl fmt::Display for LiftGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiftGenerator::M => "m",
            LiftGenerator::L => "l",
        })
    }
}

/// Free-group word in `m'`, `l'` kept freely reduced at the syllable level:
/// no zero exponents, no two adjacent syllables on the same generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LiftWord {
    syllables: Vec<(LiftGenerator, i64)>,
}

impl LiftWord {
    pub fn push(&mut self, g: LiftGenerator, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.0 == g {
                last.1 += exp;
                if last.1 == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push((g, exp));
    }

    pub fn syllables(&self) -> &[(LiftGenerator, i64)] {
        &self.syllables
    }

    /// Number of letters of `g`, counted with multiplicity and ignoring sign.
    pub fn letter_count(&self, g: LiftGenerator) -> u64 {
        self.syllables
            .iter()
            .filter(|(h, _)| *h == g)
            .map(|(_, e)| e.unsigned_abs())
            .sum()
    }
}

/// `l m l^2 m`; the empty word is written `1`.
impl fmt::Display for LiftWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for LiftWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `m'^p l'^q` when `pq = 0`; otherwise the product over `k = 1..|p|` of
/// `l'^(sgn q * (floor(k|q|/|p|) - floor((k-1)|q|/|p|))) m'^(sgn p)`.
pub fn natural_lift(slope: SlopeFraction) -> LiftWord {
    let (p, q) = (slope.p(), slope.q());
    let mut w = LiftWord::default();
    if p == 0 || q == 0 {
        w.push(LiftGenerator::M, p);
        w.push(LiftGenerator::L, q);
        return w;
    }
    let (ap, aq) = (u128::from(p.unsigned_abs()), u128::from(q.unsigned_abs()));
    let (sp, sq) = (p.signum(), q.signum());
    for k in 1..=ap {
        let step = (k * aq / ap - (k - 1) * aq / ap) as i64;
        w.push(LiftGenerator::L, sq * step);
        w.push(LiftGenerator::M, sp);
    }
    w
}

/// Total exponents of `m'` and `l'` (the image in `H1`).
pub fn exponent_sums(w: &LiftWord) -> (i64, i64) {
    w.syllables.iter().fold((0, 0), |(m, l), &(g, e)| match g {
        LiftGenerator::M => (m + e, l),
        LiftGenerator::L => (m, l + e),
    })
}
