use std::fmt;

use serde::{Deserialize, Serialize};

use crate::intlin::AbelianGroup;

/// Integral homology `H0..H4` of a 4-manifold. A group is `None` when it was
/// not determined.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyProfile {
    pub h: [Option<AbelianGroup>; 5],
}

impl HomologyProfile {
    pub fn complete(groups: [AbelianGroup; 5]) -> Self {
        Self { h: groups.map(Some) }
    }

    /// `(Z, 0, 0, 0, Z)`.
    pub fn homology_sphere() -> Self {
        Self::complete([
            AbelianGroup::free(1),
            AbelianGroup::trivial(),
            AbelianGroup::trivial(),
            AbelianGroup::trivial(),
            AbelianGroup::free(1),
        ])
    }

    pub fn group(&self, n: usize) -> Option<&AbelianGroup> {
        self.h.get(n).and_then(Option::as_ref)
    }

    pub fn is_complete(&self) -> bool {
        self.h.iter().all(Option::is_some)
    }

    pub fn is_homology_sphere(&self) -> bool {
        *self == Self::homology_sphere()
    }

    /// Alternating sum of Betti numbers, when every group is known.
    pub fn euler_characteristic(&self) -> Option<i64> {
        let mut chi = 0i64;
        for (n, g) in self.h.iter().enumerate() {
            let b = g.as_ref()?.free_rank() as i64;
            chi += if n % 2 == 0 { b } else { -b };
        }
        Some(chi)
    }

    /// True when the two profiles agree in every degree known to both.
    pub fn agrees_with(&self, other: &HomologyProfile) -> bool {
        self.h.iter().zip(&other.h).all(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        })
    }
}

/// `(Z, Z_5, ?, ?, Z)`
impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .h
            .iter()
            .map(|g| g.as_ref().map_or_else(|| "?".to_string(), ToString::to_string))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;

    #[test]
    fn display_and_agreement() {
        let s4 = HomologyProfile::homology_sphere();
        assert_eq!(s4.to_string(), "(Z, 0, 0, 0, Z)");
        assert_eq!(s4.euler_characteristic(), Some(2));
        let partial = HomologyProfile {
            h: [
                Some(AbelianGroup::free(1)),
                Some(AbelianGroup::cyclic(&BigInt::from(5))),
                None,
                None,
                Some(AbelianGroup::free(1)),
            ],
        };
        assert_eq!(partial.to_string(), "(Z, Z_5, ?, ?, Z)");
        assert!(!partial.is_complete());
        assert!(!partial.agrees_with(&s4));
        assert_eq!(partial.euler_characteristic(), None);
        let json = serde_json::to_string(&partial).unwrap();
        let back: HomologyProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, partial);
    }
}
