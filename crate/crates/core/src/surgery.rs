//! Homology of pochette surgery computed from the homology of `X`.
//!
//! `X(e, p/q, ε)` is `E(P_e) ∪ P` glued along `∂P`. Under the three
//! homological hypotheses the Mayer–Vietoris map on `H1(∂P)` has matrix
//! `[[p, 0], [0, 1]]` in the bases `([m], [l])` and `([m_e], [l])`, so
//! `H1 = Z_|p|`. For `|p| = 1` the whole profile of `X` is recovered; for
//! other `p` only `H0`, `H1`, `H4` are reported.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{self, CheckedDiagram, DiagramError, HomologyProfile, PochetteDesignation};
use crate::gluing::synthesize_word;
use crate::intlin::{self, AbelianGroup, IntMatrix};
use crate::slope::{Mod2Framing, SlopeFraction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("hypotheses not met: {}", .0.join(", "))]
    HypothesesNotMet(Vec<&'static str>),
    #[error("base manifold must be a simply connected closed 4-manifold with known homology; got {0}")]
    BaseProfile(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Caller-asserted hypotheses about the embedding `e: P -> X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurgeryHypotheses {
    /// `t2: H2(X) -> H2(X, E(P_e))` vanishes.
    pub t2_zero: bool,
    /// `i11([l]) = 0`.
    pub l_nullhomologous: bool,
    /// `i21(H2(∂P))` lies in `Z[B_e] + Z[S]`.
    pub h2_image_constrained: bool,
    /// Declared, never computed.
    pub simply_connected_result: Option<bool>,
}

impl Default for SurgeryHypotheses {
    /// All homological hypotheses asserted, simple connectivity undeclared.
    fn default() -> Self {
        Self {
            t2_zero: true,
            l_nullhomologous: true,
            h2_image_constrained: true,
            simply_connected_result: None,
        }
    }
}

impl SurgeryHypotheses {
    fn missing(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.t2_zero {
            out.push("t2_zero");
        }
        if !self.l_nullhomologous {
            out.push("l_nullhomologous");
        }
        if !self.h2_image_constrained {
            out.push("h2_image_constrained");
        }
        out
    }

    pub fn homological(&self) -> bool {
        self.missing().is_empty()
    }

    fn require_all(&self) -> Result<(), SurgeryError> {
        let missing = self.missing();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(SurgeryError::HypothesesNotMet(missing))
        }
    }
}

fn check_base(x: &HomologyProfile) -> Result<(), SurgeryError> {
    if !x.is_complete() || x.group(1).is_some_and(|g| !g.is_trivial()) {
        return Err(SurgeryError::BaseProfile(x.to_string()));
    }
    Ok(())
}

fn z() -> AbelianGroup {
    AbelianGroup::free(1)
}

/// Homology of the exterior `E(P_e)`: `(Z, Z, Z + H2(X), 0, 0)`.
pub fn exterior_homology(x: &HomologyProfile, hyp: &SurgeryHypotheses) -> Result<HomologyProfile, SurgeryError> {
    if !hyp.t2_zero {
        return Err(SurgeryError::HypothesesNotMet(vec!["t2_zero"]));
    }
    check_base(x)?;
    let h2x = x.group(2).cloned().unwrap_or_else(AbelianGroup::trivial);
    Ok(HomologyProfile::complete([
        z(),
        z(),
        z().direct_sum(&h2x),
        AbelianGroup::trivial(),
        AbelianGroup::trivial(),
    ]))
}

/// Images of `[B]` and `[S]` under `i21`. The sign of the `[B]` image is not
/// determined, only its magnitude `|p|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct I21Values {
    pub b_magnitude: u64,
    pub b_sign_ambiguous: bool,
    pub s_image: u64,
}

pub fn i21_values(slope: SlopeFraction, _eps: Mod2Framing, hyp: &SurgeryHypotheses) -> Result<I21Values, SurgeryError> {
    hyp.require_all()?;
    let b = slope.p().unsigned_abs();
    Ok(I21Values {
        b_magnitude: b,
        b_sign_ambiguous: b != 0,
        s_image: 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    HomologySphere,
    SameHomologyAsX,
    /// `H1 = Z_n`; `n = 0` stands for `Z`.
    TorsionH1(u64),
    HypothesesNotMet,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::HomologySphere => f.write_str("homology 4-sphere"),
            Classification::SameHomologyAsX => f.write_str("same homology as X"),
            Classification::TorsionH1(0) => f.write_str("H1 = Z"),
            Classification::TorsionH1(n) => write!(f, "H1 = Z_{n}"),
            Classification::HypothesesNotMet => f.write_str("hypotheses not met"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryResult {
    pub profile: HomologyProfile,
    pub classification: Classification,
    /// Nonzero invariant factors of the Mayer–Vietoris matrix, units included.
    #[serde(serialize_with = "intlin::serialize_bigint_list")]
    pub mv_elementary_divisors: Vec<BigInt>,
    pub mv_free_rank: usize,
}

impl SurgeryResult {
    fn not_met() -> Self {
        Self {
            profile: HomologyProfile {
                h: [Some(z()), None, None, None, Some(z())],
            },
            classification: Classification::HypothesesNotMet,
            mv_elementary_divisors: Vec::new(),
            mv_free_rank: 0,
        }
    }
}

/// The map `Z[m] + Z[l] -> Z[m_e] + Z[l]` on coefficient columns.
pub fn mv_matrix(slope: SlopeFraction) -> IntMatrix {
    IntMatrix::from_rows(&[[slope.p(), 0], [0, 1]]).expect("2x2 literal")
}

pub fn surgery_homology(
    x: &HomologyProfile,
    slope: SlopeFraction,
    _eps: Mod2Framing,
    hyp: &SurgeryHypotheses,
) -> Result<SurgeryResult, SurgeryError> {
    hyp.require_all()?;
    check_base(x)?;
    let mv = mv_matrix(slope);
    let snf = intlin::smith_normal_form(&mv);
    let divisors = snf.invariant_factors();
    let h1 = intlin::cokernel(&mv);
    let n = slope.p().unsigned_abs();
    let (profile, classification) = if n == 1 {
        let c = if x.is_homology_sphere() {
            Classification::HomologySphere
        } else {
            Classification::SameHomologyAsX
        };
        (x.clone(), c)
    } else {
        let p = HomologyProfile {
            h: [Some(z()), Some(h1), None, None, Some(z())],
        };
        (p, Classification::TorsionH1(n))
    };
    Ok(SurgeryResult {
        profile,
        classification,
        mv_free_rank: mv.rows() - divisors.len(),
        mv_elementary_divisors: divisors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Homeomorphic,
    NotHomeomorphic,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Homeomorphic => "homeomorphic to X",
            Verdict::NotHomeomorphic => "not homeomorphic to X",
            Verdict::Indeterminate => "indeterminate",
        })
    }
}

/// Homeomorphic to `X` exactly when `|p| = 1` and the result is simply
/// connected. Without the homological hypotheses nothing is concluded.
pub fn homeomorphism_criterion(result: &SurgeryResult, slope: SlopeFraction, hyp: &SurgeryHypotheses) -> Verdict {
    if !hyp.homological() || result.classification == Classification::HypothesesNotMet {
        return Verdict::Indeterminate;
    }
    if slope.p().abs() != 1 {
        return Verdict::NotHomeomorphic;
    }
    match hyp.simply_connected_result {
        Some(true) => Verdict::Homeomorphic,
        Some(false) => Verdict::NotHomeomorphic,
        None => Verdict::Indeterminate,
    }
}

/// Gluck surgery is slope `1/0` with `ε = 1`.
pub fn is_gluck(slope: SlopeFraction, eps: Mod2Framing) -> bool {
    slope.normalized() == SlopeFraction::INFINITY && eps == Mod2Framing::ONE
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Algebraic,
    Diagram,
}

/// Diagram-level cross-check recorded in a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramCheck {
    pub input: String,
    pub pochette: PochetteDesignation,
    pub output: String,
    pub profile: HomologyProfile,
    pub profile_text: String,
    pub agrees: bool,
}

/// Machine-readable record of one surgery computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub slope: SlopeFraction,
    pub eps: Mod2Framing,
    pub mode: Mode,
    pub hypotheses: SurgeryHypotheses,
    pub word: String,
    pub gluck: bool,
    pub base_profile: HomologyProfile,
    pub profile: HomologyProfile,
    pub profile_text: String,
    pub classification: Classification,
    pub homeomorphism: Verdict,
    #[serde(serialize_with = "intlin::serialize_bigint_list")]
    pub mv_elementary_divisors: Vec<BigInt>,
    pub mv_free_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramCheck>,
}

impl Certificate {
    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("certificate serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn consistent(&self) -> bool {
        self.diagram.as_ref().is_none_or(|d| d.agrees)
    }
}

/// Algebraic certificate. Failing hypotheses give a `HypothesesNotMet`
/// classification rather than an error.
pub fn certify(
    x: &HomologyProfile,
    slope: SlopeFraction,
    eps: Mod2Framing,
    hyp: &SurgeryHypotheses,
) -> Result<Certificate, SurgeryError> {
    let result = match surgery_homology(x, slope, eps, hyp) {
        Ok(r) => r,
        Err(SurgeryError::HypothesesNotMet(_)) => {
            check_base(x)?;
            SurgeryResult::not_met()
        }
        Err(e) => return Err(e),
    };
    let slope = slope.normalized();
    let word = synthesize_word(slope, eps).map(|w| w.to_string()).unwrap_or_default();
    Ok(Certificate {
        slope,
        eps,
        mode: Mode::Algebraic,
        hypotheses: *hyp,
        word,
        gluck: is_gluck(slope, eps),
        base_profile: x.clone(),
        profile_text: result.profile.to_string(),
        homeomorphism: homeomorphism_criterion(&result, slope, hyp),
        profile: result.profile,
        classification: result.classification,
        mv_elementary_divisors: result.mv_elementary_divisors,
        mv_free_rank: result.mv_free_rank,
        diagram: None,
    })
}

/// Certificate for a diagram: the base profile is read off `d`, the surgery
/// is also carried out on the diagram, and the two answers are compared in
/// every degree both determine.
pub fn certify_diagram(
    d: &CheckedDiagram,
    poch: &PochetteDesignation,
    slope: SlopeFraction,
    eps: Mod2Framing,
    hyp: &SurgeryHypotheses,
    mode: Mode,
) -> Result<Certificate, SurgeryError> {
    let x = diagram::homology_closed(d)?;
    poch.check(d)?;
    let mut cert = certify(&x, slope, eps, hyp)?;
    cert.mode = mode;
    if mode == Mode::Diagram {
        let out = diagram::transform_diagram(d, poch, slope, eps)?;
        let profile = diagram::homology_closed(&out)?;
        let agrees = cert.classification == Classification::HypothesesNotMet || profile.agrees_with(&cert.profile);
        cert.diagram = Some(DiagramCheck {
            input: d.name.clone(),
            pochette: poch.clone(),
            output: out.name.clone(),
            profile_text: profile.to_string(),
            profile,
            agrees,
        });
    }
    Ok(cert)
}
