//! Handle diagrams of closed 4-manifolds at the level of algebraic linking
//! data, and the homology they determine.
//!
//! A diagram has one implicit 0-handle, dotted circles for 1-handles,
//! framed 2-handles, and counts of 3- and 4-handles. Only linking numbers
//! are recorded; planar embeddings are not.

mod profile;
mod transform;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Deref;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlin::{self, AbelianGroup, IntMatrix};

pub use profile::HomologyProfile;
pub use transform::{transform_diagram, EntwinedRule, SurgeryPattern, PATTERN_SOURCE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("{from} refers to unknown handle {to}")]
    DanglingReference { from: String, to: String },
    #[error("linking between {a} and {b} is not symmetric")]
    AsymmetricLinking { a: String, b: String },
    #[error("diagram has {0} 4-handles; at most one is allowed")]
    MultipleTopHandles(u32),
    #[error("handle id {0} is used more than once")]
    DuplicateId(String),
    #[error("2-handle {0} lists a linking number with itself")]
    SelfLinking(String),
    #[error("diagram is not closed: it has {0} 4-handles")]
    NotClosed(u32),
    #[error("linking data is inconsistent with a closed orientable 4-manifold: {0}")]
    InconsistentDiagram(String),
    #[error("pochette pattern precondition failed: {0}")]
    PatternPreconditionFailed(String),
    #[error("slope needs 0-framed meridians on 2-handles through the dotted circle; missing on {0:?}")]
    MissingMeridians(Vec<String>),
    #[error("surgery pattern: {0}")]
    Pattern(String),
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// A framed 2-handle with its algebraic linking data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoHandle {
    pub id: String,
    pub framing: i64,
    /// Linking with dotted circles, by 1-handle id.
    #[serde(default)]
    pub linking: BTreeMap<String, i64>,
    /// Carries a 0-framed meridian.
    #[serde(default, skip_serializing_if = "is_false")]
    pub meridian: bool,
    /// Linking with other 2-handles; must be symmetric.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub two_linking: BTreeMap<String, i64>,
}

impl TwoHandle {
    pub fn new(id: impl Into<String>, framing: i64) -> Self {
        Self {
            id: id.into(),
            framing,
            linking: BTreeMap::new(),
            meridian: false,
            two_linking: BTreeMap::new(),
        }
    }

    pub fn links(mut self, one_handle: impl Into<String>, value: i64) -> Self {
        self.linking.insert(one_handle.into(), value);
        self
    }

    pub fn linking_with(&self, one_handle: &str) -> i64 {
        self.linking.get(one_handle).copied().unwrap_or(0)
    }

    pub fn two_linking_with(&self, other: &str) -> i64 {
        self.two_linking.get(other).copied().unwrap_or(0)
    }
}

/// Raw diagram as read from or written to JSON.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandleDiagram {
    #[serde(default)]
    pub name: String,
    pub one_handles: Vec<String>,
    pub two_handles: Vec<TwoHandle>,
    pub n3: u32,
    pub n4: u32,
}

impl HandleDiagram {
    /// The standard diagram of `S^4`: a 0-handle and a 4-handle.
    pub fn standard_s4() -> Self {
        Self {
            name: "S4".to_string(),
            one_handles: Vec::new(),
            two_handles: Vec::new(),
            n3: 0,
            n4: 1,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn two_handle(&self, id: &str) -> Option<&TwoHandle> {
        self.two_handles.iter().find(|h| h.id == id)
    }

    /// Same handles, ignoring the name and the order of handles.
    pub fn same_handles(&self, other: &HandleDiagram) -> bool {
        let ones = |d: &HandleDiagram| d.one_handles.iter().cloned().collect::<BTreeSet<_>>();
        let twos = |d: &HandleDiagram| {
            d.two_handles
                .iter()
                .map(|h| (h.id.clone(), h.clone()))
                .collect::<BTreeMap<_, _>>()
        };
        self.n3 == other.n3 && self.n4 == other.n4 && ones(self) == ones(other) && twos(self) == twos(other)
    }
}

/// A diagram whose structural invariants have been verified.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CheckedDiagram(HandleDiagram);

impl Deref for CheckedDiagram {
    type Target = HandleDiagram;

    fn deref(&self) -> &HandleDiagram {
        &self.0
    }
}

impl CheckedDiagram {
    pub fn into_inner(self) -> HandleDiagram {
        self.0
    }
}

pub fn validate(d: HandleDiagram) -> Result<CheckedDiagram, DiagramError> {
    if d.n4 > 1 {
        return Err(DiagramError::MultipleTopHandles(d.n4));
    }
    let mut ids = BTreeSet::new();
    for id in d.one_handles.iter().chain(d.two_handles.iter().map(|h| &h.id)) {
        if !ids.insert(id.as_str()) {
            return Err(DiagramError::DuplicateId(id.clone()));
        }
    }
    let ones: BTreeSet<&str> = d.one_handles.iter().map(String::as_str).collect();
    let twos: BTreeMap<&str, &TwoHandle> = d.two_handles.iter().map(|h| (h.id.as_str(), h)).collect();
    for h in &d.two_handles {
        for c in h.linking.keys() {
            if !ones.contains(c.as_str()) {
                return Err(DiagramError::DanglingReference {
                    from: h.id.clone(),
                    to: c.clone(),
                });
            }
        }
        for (other, &v) in &h.two_linking {
            if *other == h.id {
                return Err(DiagramError::SelfLinking(h.id.clone()));
            }
            let Some(o) = twos.get(other.as_str()) else {
                return Err(DiagramError::DanglingReference {
                    from: h.id.clone(),
                    to: other.clone(),
                });
            };
            if o.two_linking_with(&h.id) != v {
                return Err(DiagramError::AsymmetricLinking {
                    a: h.id.clone(),
                    b: other.clone(),
                });
            }
        }
    }
    Ok(CheckedDiagram(d))
}

/// Rows are dotted circles, columns are 2-handles; this is the boundary map
/// from 2-chains to 1-chains.
pub fn linking_matrix(d: &CheckedDiagram) -> IntMatrix {
    let mut m = IntMatrix::zeros(d.one_handles.len(), d.two_handles.len());
    for (j, h) in d.two_handles.iter().enumerate() {
        for (i, c) in d.one_handles.iter().enumerate() {
            let v = h.linking_with(c);
            if v != 0 {
                m.set(i, j, BigInt::from(v));
            }
        }
    }
    m
}

pub fn euler_characteristic(d: &CheckedDiagram) -> i64 {
    1 - d.one_handles.len() as i64 + d.two_handles.len() as i64 - i64::from(d.n3) + i64::from(d.n4)
}

/// Homology of the closed 4-manifold presented by `d`.
///
/// `H1` is the cokernel of the linking matrix; the rest follows from the
/// Euler characteristic, Poincaré duality and universal coefficients.
pub fn homology_closed(d: &CheckedDiagram) -> Result<HomologyProfile, DiagramError> {
    if d.n4 != 1 {
        return Err(DiagramError::NotClosed(d.n4));
    }
    let h1 = intlin::cokernel(&linking_matrix(d));
    let b1 = h1.free_rank() as i64;
    let b2 = euler_characteristic(d) - 2 + 2 * b1;
    if b2 < 0 {
        return Err(DiagramError::InconsistentDiagram(format!("second Betti number would be {b2}")));
    }
    if i64::from(d.n3) < b1 {
        return Err(DiagramError::InconsistentDiagram(format!(
            "b3 = {b1} needs at least that many 3-handles, found {}",
            d.n3
        )));
    }
    let h2 = h1.with_free_rank(b2 as usize);
    Ok(HomologyProfile::complete([
        AbelianGroup::free(1),
        h1,
        h2,
        AbelianGroup::free(b1 as usize),
        AbelianGroup::free(1),
    ]))
}

pub fn is_homology_sphere(d: &CheckedDiagram) -> Result<bool, DiagramError> {
    homology_closed(d).map(|p| p.is_homology_sphere())
}

/// Designates the pochette `P = h0 ∪ h1 ∪ h2` inside a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PochetteDesignation {
    pub one_handle: String,
    pub two_handle: String,
}

impl PochetteDesignation {
    pub fn new(one_handle: impl Into<String>, two_handle: impl Into<String>) -> Self {
        Self {
            one_handle: one_handle.into(),
            two_handle: two_handle.into(),
        }
    }

    /// Parses `c1,u1`.
    pub fn parse(text: &str) -> Option<Self> {
        let (a, b) = text.split_once(',')?;
        let (a, b) = (a.trim(), b.trim());
        (!a.is_empty() && !b.is_empty()).then(|| Self::new(a, b))
    }

    /// The designated 2-handle must be 0-framed and algebraically unlinked
    /// from the designated dotted circle.
    pub fn check(&self, d: &CheckedDiagram) -> Result<(), DiagramError> {
        if !d.one_handles.contains(&self.one_handle) {
            return Err(DiagramError::PatternPreconditionFailed(format!(
                "no dotted circle {}",
                self.one_handle
            )));
        }
        let Some(h) = d.two_handle(&self.two_handle) else {
            return Err(DiagramError::PatternPreconditionFailed(format!(
                "no 2-handle {}",
                self.two_handle
            )));
        };
        if h.framing != 0 {
            return Err(DiagramError::PatternPreconditionFailed(format!(
                "{} has framing {}, expected 0",
                h.id, h.framing
            )));
        }
        if h.linking_with(&self.one_handle) != 0 {
            return Err(DiagramError::PatternPreconditionFailed(format!(
                "{} links {} algebraically {} times",
                h.id,
                self.one_handle,
                h.linking_with(&self.one_handle)
            )));
        }
        Ok(())
    }
}

/// Sets the 0-framed meridian flag on every 2-handle entwined with `one_handle`.
pub fn mark_meridians(d: &mut HandleDiagram, one_handle: &str) {
    for h in &mut d.two_handles {
        if h.linking_with(one_handle) != 0 {
            h.meridian = true;
        }
    }
}

struct Pivot {
    one: usize,
    two: usize,
    unit: i64,
}

/// Markowitz-cheapest unit entry of the linking data.
fn find_unit_pivot(d: &HandleDiagram) -> Option<Pivot> {
    let row_count = |c: &str| d.two_handles.iter().filter(|h| h.linking_with(c) != 0).count();
    let mut best: Option<(usize, Pivot)> = None;
    for (j, h) in d.two_handles.iter().enumerate() {
        let col_count = h.linking.values().filter(|&&v| v != 0).count();
        for (i, c) in d.one_handles.iter().enumerate() {
            let v = h.linking_with(c);
            if v.abs() != 1 {
                continue;
            }
            let cost = (row_count(c) - 1) * (col_count - 1);
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, Pivot { one: i, two: j, unit: v }));
            }
        }
    }
    best.map(|(_, p)| p)
}

/// Slides every other 2-handle off dotted circle `pivot.one` using
/// `pivot.two`, then deletes the pair. Returns `None` on arithmetic overflow.
fn cancel_one_two(d: &HandleDiagram, pivot: &Pivot) -> Option<HandleDiagram> {
    let circle = d.one_handles[pivot.one].clone();
    let carrier = d.two_handles[pivot.two].clone();
    let mut out = d.clone();
    let ids: Vec<String> = d.two_handles.iter().map(|h| h.id.clone()).collect();
    for (k, id) in ids.iter().enumerate() {
        if k == pivot.two {
            continue;
        }
        let c = d.two_handles[k].linking_with(&circle);
        if c == 0 {
            continue;
        }
        // k <- k - f * carrier, chosen so that k no longer meets the circle.
        let f = c.checked_mul(pivot.unit)?;
        let lk_kc = d.two_handles[k].two_linking_with(&carrier.id);
        let h = &mut out.two_handles[k];
        for (one, &v) in &carrier.linking {
            let e = h.linking.entry(one.clone()).or_insert(0);
            *e = e.checked_sub(f.checked_mul(v)?)?;
        }
        h.framing = h
            .framing
            .checked_sub(f.checked_mul(2)?.checked_mul(lk_kc)?)?
            .checked_add(f.checked_mul(f)?.checked_mul(carrier.framing)?)?;
        for (other, &v) in &carrier.two_linking {
            if *other == *id {
                continue;
            }
            let delta = f.checked_mul(v)?;
            let e = out.two_handles[k].two_linking.entry(other.clone()).or_insert(0);
            *e = e.checked_sub(delta)?;
            let o = out.two_handles.iter_mut().find(|x| x.id == *other)?;
            let e = o.two_linking.entry(id.clone()).or_insert(0);
            *e = e.checked_sub(delta)?;
        }
    }
    out.one_handles.remove(pivot.one);
    out.two_handles.remove(pivot.two);
    for h in &mut out.two_handles {
        h.linking.remove(&circle);
        h.linking.retain(|_, v| *v != 0);
        h.two_linking.remove(&carrier.id);
        h.two_linking.retain(|_, v| *v != 0);
    }
    Some(out)
}

/// Cancels 1-/2-handle pairs through unit linking entries and then
/// 2-/3-handle pairs through 2-handles that meet no dotted circle, until
/// neither applies. The homology profile is unchanged.
pub fn cancel_chain_pairs(d: &CheckedDiagram) -> CheckedDiagram {
    let mut cur = d.0.clone();
    loop {
        if let Some(pivot) = find_unit_pivot(&cur) {
            if let Some(next) = cancel_one_two(&cur, &pivot) {
                cur = next;
                continue;
            }
        }
        let b1 = {
            let checked = CheckedDiagram(cur.clone());
            cur.one_handles.len() - intlin::rank(&linking_matrix(&checked))
        };
        if cur.n3 as usize <= b1 {
            break;
        }
        let null: Vec<usize> = (0..cur.two_handles.len())
            .filter(|&j| cur.two_handles[j].linking.values().all(|&v| v == 0))
            .collect();
        let unknot = null.iter().copied().find(|&j| {
            let h = &cur.two_handles[j];
            h.framing == 0 && h.two_linking.values().all(|&v| v == 0)
        });
        let Some(j) = unknot.or_else(|| null.first().copied()) else {
            break;
        };
        let removed = cur.two_handles.remove(j);
        for h in &mut cur.two_handles {
            h.two_linking.remove(&removed.id);
        }
        cur.n3 -= 1;
    }
    CheckedDiagram(cur)
}
