//! Diagram-level pochette surgery.
//!
//! The dotted circle `c` and the 0-framed handle `u` of the pochette are kept;
//! every other 2-handle `k` has its linking with `c`, its linking with `u`
//! and its framing rewritten by the rules of a [`SurgeryPattern`]. Rules are
//! integer expressions in
//!
//! - `p, q, r, s`: the composed `H1` action `[[p, r], [q, s]]` of the gluing word,
//! - `det`: its determinant,
//! - `eps`: the mod 2 framing,
//! - `lambda`: `lk(k, c)`, `mu`: `lk(k, u)`, `framing`: the framing of `k`.

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{validate, CheckedDiagram, DiagramError, PochetteDesignation};
use crate::gluing::{compose_h1, synthesize_word};
use crate::slope::{Mod2Framing, SlopeFraction};
use crate::template::expr::{Env, Expr};

/// The pattern data file compiled into the library.
pub const PATTERN_SOURCE: &str = include_str!("../../data/patterns/pochette_surgery.json");

/// Rewriting rules for one 2-handle entwined with the pochette.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntwinedRule {
    pub c_linking: String,
    pub u_linking: String,
    pub framing: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurgeryPattern {
    #[serde(default)]
    pub status: String,
    #[serde(default)]
    pub description: String,
    /// Used for every slope except `0/1`.
    pub general: EntwinedRule,
    /// Used for the slope `0/1`.
    pub zero_slope: EntwinedRule,
}

struct Compiled {
    c_linking: Expr,
    u_linking: Expr,
    framing: Expr,
}

impl EntwinedRule {
    fn compile(&self) -> Result<Compiled, DiagramError> {
        let parse = |s: &str| Expr::parse(s).map_err(|e| DiagramError::Pattern(e.to_string()));
        Ok(Compiled {
            c_linking: parse(&self.c_linking)?,
            u_linking: parse(&self.u_linking)?,
            framing: parse(&self.framing)?,
        })
    }
}

impl SurgeryPattern {
    pub fn builtin() -> &'static SurgeryPattern {
        static PATTERN: OnceLock<SurgeryPattern> = OnceLock::new();
        PATTERN.get_or_init(|| serde_json::from_str(PATTERN_SOURCE).expect("bundled pattern file parses"))
    }

    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        serde_json::from_str(text).map_err(|e| DiagramError::Pattern(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, DiagramError> {
        let text = std::fs::read_to_string(path).map_err(|e| DiagramError::Pattern(e.to_string()))?;
        Self::from_json(&text)
    }

    /// Applies the surgery to `d`, returning the diagram of `X(e, p/q, ε)`.
    pub fn apply(
        &self,
        d: &CheckedDiagram,
        poch: &PochetteDesignation,
        slope: SlopeFraction,
        eps: Mod2Framing,
    ) -> Result<CheckedDiagram, DiagramError> {
        poch.check(d)?;
        let (c, u) = (poch.one_handle.as_str(), poch.two_handle.as_str());
        if slope.p().abs() != 1 {
            let missing: Vec<String> = d
                .two_handles
                .iter()
                .filter(|h| h.id != u && h.linking_with(c) != 0 && !h.meridian)
                .map(|h| h.id.clone())
                .collect();
            if !missing.is_empty() {
                return Err(DiagramError::MissingMeridians(missing));
            }
        }
        let word = synthesize_word(slope, eps).map_err(|e| DiagramError::Pattern(e.to_string()))?;
        let action = compose_h1(&word);
        let narrow = |x: i128| i64::try_from(x).map_err(|_| DiagramError::Pattern("gluing matrix overflows".into()));
        let [[p, r], [q, s]] = action.rows();
        let mut base = Env::new();
        base.set("p", narrow(p)?)
            .set("q", narrow(q)?)
            .set("r", narrow(r)?)
            .set("s", narrow(s)?)
            .set("det", narrow(action.determinant())?)
            .set("eps", i64::from(eps.value()));
        let rule = if slope.normalized() == SlopeFraction::ZERO {
            &self.zero_slope
        } else {
            &self.general
        }
        .compile()?;

        let mut out = d.clone().into_inner();
        let mut u_links = Vec::new();
        for h in out.two_handles.iter_mut().filter(|h| h.id != u) {
            let mut env = base.clone();
            env.set("lambda", h.linking_with(c))
                .set("mu", h.two_linking_with(u))
                .set("framing", h.framing);
            let eval = |e: &Expr| e.eval(&env).map_err(|err| DiagramError::Pattern(format!("`{e}`: {err}")));
            let new_c = eval(&rule.c_linking)?;
            let new_u = eval(&rule.u_linking)?;
            h.framing = eval(&rule.framing)?;
            set_or_clear(&mut h.linking, c, new_c);
            set_or_clear(&mut h.two_linking, u, new_u);
            u_links.push((h.id.clone(), new_u));
        }
        if let Some(uh) = out.two_handles.iter_mut().find(|h| h.id == u) {
            for (id, v) in u_links {
                set_or_clear(&mut uh.two_linking, &id, v);
            }
        }
        let eps_label = eps.value();
        out.name = if d.name.is_empty() {
            format!("surgery {slope}, eps {eps_label}")
        } else {
            format!("{} surgered along {slope}, eps {eps_label}", d.name)
        };
        validate(out)
    }
}

fn set_or_clear(map: &mut std::collections::BTreeMap<String, i64>, key: &str, v: i64) {
    if v == 0 {
        map.remove(key);
    } else {
        map.insert(key.to_string(), v);
    }
}

/// [`SurgeryPattern::apply`] with the bundled pattern.
pub fn transform_diagram(
    d: &CheckedDiagram,
    poch: &PochetteDesignation,
    slope: SlopeFraction,
    eps: Mod2Framing,
) -> Result<CheckedDiagram, DiagramError> {
    SurgeryPattern::builtin().apply(d, poch, slope, eps)
}
