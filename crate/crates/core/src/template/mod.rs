//! Parametrised diagram families stored as JSON data files.
//!
//! A template declares typed parameters and generator rules for handles.
//! Rules may repeat over an inclusive range (`"for": ["i", 1, "k*k-1"]`) and
//! may be guarded (`"when": "i >= 2"`). Ids are interpolated (`"d{i-1}"`),
//! numbers are [`expr`] expressions.

pub mod expr;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{self, CheckedDiagram, DiagramError, HandleDiagram, PochetteDesignation, TwoHandle};
use expr::{interpolate, Env, Expr, ExprError, Value};

const FIG1: &str = include_str!("../../data/templates/fig1.json");
const FIG2: &str = include_str!("../../data/templates/fig2.json");

/// Names of the templates compiled into the library.
pub const BUILTIN: [&str; 2] = ["fig1", "fig2"];

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
    #[error("template file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read template: {0}")]
    Io(#[from] std::io::Error),
    #[error("missing parameter `{0}`")]
    MissingParam(String),
    #[error("unexpected parameter `{0}`")]
    UnexpectedParam(String),
    #[error("parameter `{name}`: {msg}")]
    BadParam { name: String, msg: String },
    #[error("in `{context}`: {source}")]
    Expr { context: String, source: ExprError },
    #[error("instantiated diagram is invalid: {0}")]
    Diagram(#[from] DiagramError),
}

/// An expression written either as a JSON integer or as a string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExprSrc {
    Int(i64),
    Text(String),
}

impl ExprSrc {
    fn eval(&self, env: &Env) -> Result<i64, TemplateError> {
        match self {
            ExprSrc::Int(v) => Ok(*v),
            ExprSrc::Text(s) => Expr::parse(s).and_then(|e| e.eval(env)).map_err(|source| TemplateError::Expr {
                context: s.clone(),
                source,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    Int,
    Tuple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub name: String,
    pub kind: ParamKind,
    #[serde(default)]
    pub description: String,
    /// Lower bound on an integer, or on every tuple entry.
    #[serde(default)]
    pub min: Option<i64>,
    /// Required tuple length.
    #[serde(default)]
    pub len: Option<ExprSrc>,
    /// Required sum of tuple entries.
    #[serde(default)]
    pub sum: Option<i64>,
    #[serde(default)]
    pub allowed: Option<Vec<i64>>,
    /// Integer default, or fill value for an omitted tuple.
    #[serde(default)]
    pub default: Option<i64>,
}

/// `[var, from, to]`, inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForRange(pub String, pub ExprSrc, pub ExprSrc);

/// One range, or a list of ranges nested left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ranges {
    One(ForRange),
    Nested(Vec<ForRange>),
}

impl Ranges {
    fn as_slice(&self) -> &[ForRange] {
        match self {
            Ranges::One(r) => std::slice::from_ref(r),
            Ranges::Nested(rs) => rs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneHandleRule {
    pub id: String,
    #[serde(default, rename = "for")]
    pub range: Option<Ranges>,
    #[serde(default)]
    pub when: Option<ExprSrc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkRule {
    pub to: String,
    pub value: ExprSrc,
    #[serde(default, rename = "for")]
    pub range: Option<Ranges>,
    #[serde(default)]
    pub when: Option<ExprSrc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoHandleRule {
    pub id: String,
    pub framing: ExprSrc,
    #[serde(default)]
    pub linking: Vec<LinkRule>,
    #[serde(default)]
    pub two_linking: Vec<LinkRule>,
    #[serde(default, rename = "for")]
    pub range: Option<Ranges>,
    #[serde(default)]
    pub when: Option<ExprSrc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyTemplate {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub status: String,
    pub params: Vec<ParamSpec>,
    pub one_handles: Vec<OneHandleRule>,
    pub two_handles: Vec<TwoHandleRule>,
    pub n3: ExprSrc,
    pub n4: ExprSrc,
    pub pochette: PochetteDesignation,
}

/// Parameter values supplied by the caller.
pub type FamilyParams = BTreeMap<String, Value>;

/// A family member: the diagram and its designated pochette.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInstance {
    pub diagram: CheckedDiagram,
    pub pochette: PochetteDesignation,
}

pub fn builtin(name: &str) -> Result<FamilyTemplate, TemplateError> {
    let text = match name {
        "fig1" => FIG1,
        "fig2" => FIG2,
        _ => return Err(TemplateError::UnknownTemplate(name.to_string())),
    };
    Ok(serde_json::from_str(text)?)
}

pub fn load(path: &Path) -> Result<FamilyTemplate, TemplateError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn bad(name: &str, msg: impl Into<String>) -> TemplateError {
    TemplateError::BadParam {
        name: name.to_string(),
        msg: msg.into(),
    }
}

fn bind_params(t: &FamilyTemplate, given: &FamilyParams) -> Result<Env, TemplateError> {
    if let Some(extra) = given.keys().find(|k| !t.params.iter().any(|p| &p.name == *k)) {
        return Err(TemplateError::UnexpectedParam(extra.clone()));
    }
    let mut env = Env::new();
    for spec in &t.params {
        let name = spec.name.as_str();
        match spec.kind {
            ParamKind::Int => {
                let v = match given.get(name) {
                    Some(Value::Int(v)) => *v,
                    Some(Value::Tuple(_)) => return Err(bad(name, "expected an integer")),
                    None => spec.default.ok_or_else(|| TemplateError::MissingParam(name.to_string()))?,
                };
                if spec.min.is_some_and(|m| v < m) {
                    return Err(bad(name, format!("must be at least {}", spec.min.unwrap_or_default())));
                }
                if spec.allowed.as_ref().is_some_and(|a| !a.contains(&v)) {
                    return Err(bad(name, format!("must be one of {:?}", spec.allowed.as_deref().unwrap_or(&[]))));
                }
                env.set(name, v);
            }
            ParamKind::Tuple => {
                let len = spec
                    .len
                    .as_ref()
                    .map(|l| l.eval(&env))
                    .transpose()?
                    .map(|l| usize::try_from(l).map_err(|_| bad(name, format!("length expression gives {l}"))))
                    .transpose()?;
                let v = match (given.get(name), spec.default, len) {
                    (Some(Value::Tuple(v)), _, _) => v.clone(),
                    (Some(Value::Int(x)), _, _) => vec![*x],
                    (None, Some(fill), Some(len)) => vec![fill; len],
                    (None, _, _) => return Err(TemplateError::MissingParam(name.to_string())),
                };
                if let Some(len) = len {
                    if v.len() != len {
                        return Err(bad(name, format!("expected {len} entries, got {}", v.len())));
                    }
                }
                if let Some(m) = spec.min {
                    if let Some(x) = v.iter().find(|&&x| x < m) {
                        return Err(bad(name, format!("entry {x} is below {m}")));
                    }
                }
                if let Some(allowed) = &spec.allowed {
                    if let Some(x) = v.iter().find(|x| !allowed.contains(x)) {
                        return Err(bad(name, format!("entry {x} is not one of {allowed:?}")));
                    }
                }
                if let Some(target) = spec.sum {
                    let total: i128 = v.iter().map(|&x| i128::from(x)).sum();
                    if total != i128::from(target) {
                        return Err(bad(name, format!("entries must sum to {target}, got {total}")));
                    }
                }
                env.set_tuple(name, v);
            }
        }
    }
    Ok(env)
}

/// Calls `body` once per binding of the optional ranges, skipping bindings
/// where the guard evaluates to zero.
fn expand(
    env: &Env,
    range: &Option<Ranges>,
    when: &Option<ExprSrc>,
    mut body: impl FnMut(&Env) -> Result<(), TemplateError>,
) -> Result<(), TemplateError> {
    fn go(
        env: &Env,
        ranges: &[ForRange],
        when: &Option<ExprSrc>,
        body: &mut dyn FnMut(&Env) -> Result<(), TemplateError>,
    ) -> Result<(), TemplateError> {
        let Some((ForRange(var, from, to), rest)) = ranges.split_first() else {
            return match when {
                Some(w) if w.eval(env)? == 0 => Ok(()),
                _ => body(env),
            };
        };
        let (a, b) = (from.eval(env)?, to.eval(env)?);
        let mut inner = env.clone();
        for i in a..=b {
            inner.set(var.clone(), i);
            go(&inner, rest, when, body)?;
        }
        Ok(())
    }
    go(env, range.as_ref().map_or(&[], Ranges::as_slice), when, &mut body)
}

fn id(pattern: &str, env: &Env) -> Result<String, TemplateError> {
    interpolate(pattern, env).map_err(|source| TemplateError::Expr {
        context: pattern.to_string(),
        source,
    })
}

fn links(rules: &[LinkRule], env: &Env) -> Result<BTreeMap<String, i64>, TemplateError> {
    let mut out: BTreeMap<String, i64> = BTreeMap::new();
    for rule in rules {
        expand(env, &rule.range, &rule.when, |e| {
            let v = rule.value.eval(e)?;
            let slot = out.entry(id(&rule.to, e)?).or_insert(0);
            *slot = slot.checked_add(v).ok_or(TemplateError::Expr {
                context: rule.to.clone(),
                source: ExprError::Overflow,
            })?;
            Ok(())
        })?;
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

/// Builds and validates one member of the family. With `meridians`, every
/// 2-handle through the pochette's dotted circle gets a 0-framed meridian.
pub fn instantiate(t: &FamilyTemplate, params: &FamilyParams, meridians: bool) -> Result<FamilyInstance, TemplateError> {
    let env = bind_params(t, params)?;
    let mut one_handles = Vec::new();
    for rule in &t.one_handles {
        expand(&env, &rule.range, &rule.when, |e| {
            one_handles.push(id(&rule.id, e)?);
            Ok(())
        })?;
    }
    let mut two_handles = Vec::new();
    for rule in &t.two_handles {
        expand(&env, &rule.range, &rule.when, |e| {
            let mut h = TwoHandle::new(id(&rule.id, e)?, rule.framing.eval(e)?);
            h.linking = links(&rule.linking, e)?;
            h.two_linking = links(&rule.two_linking, e)?;
            two_handles.push(h);
            Ok(())
        })?;
    }
    let count = |x: &ExprSrc, what: &str| -> Result<u32, TemplateError> {
        let v = x.eval(&env)?;
        u32::try_from(v).map_err(|_| bad(what, format!("count evaluates to {v}")))
    };
    let mut d = HandleDiagram {
        name: String::new(),
        one_handles,
        two_handles,
        n3: count(&t.n3, "n3")?,
        n4: count(&t.n4, "n4")?,
    };
    d.name = describe(t, &env);
    let pochette = PochetteDesignation::new(
        id(&t.pochette.one_handle, &env)?,
        id(&t.pochette.two_handle, &env)?,
    );
    if meridians {
        diagram::mark_meridians(&mut d, &pochette.one_handle);
    }
    let checked = diagram::validate(d)?;
    pochette.check(&checked)?;
    Ok(FamilyInstance {
        diagram: checked,
        pochette,
    })
}

/// `fig2(s=2, t=1, m=[1,-1], n=[0,0,0], sign=1)`.
fn describe(t: &FamilyTemplate, env: &Env) -> String {
    let parts: Vec<String> = t
        .params
        .iter()
        .filter_map(|p| {
            env.get(&p.name).map(|v| match v {
                Value::Int(x) => format!("{}={x}", p.name),
                Value::Tuple(xs) => {
                    let xs: Vec<String> = xs.iter().map(i64::to_string).collect();
                    format!("{}=[{}]", p.name, xs.join(","))
                }
            })
        })
        .collect();
    format!("{}({})", t.name, parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{cancel_chain_pairs, euler_characteristic, homology_closed, linking_matrix, HomologyProfile};
    use crate::intlin;

    fn params(pairs: &[(&str, Value)]) -> FamilyParams {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    fn fig1(k: i64) -> FamilyInstance {
        let n = (1..=k * k - 1).map(|i| i % 3 - 1).collect();
        instantiate(
            &builtin("fig1").unwrap(),
            &params(&[("k", Value::Int(k)), ("n", Value::Tuple(n))]),
            false,
        )
        .unwrap()
    }

    fn fig2(s: i64, t: i64, m: Vec<i64>) -> Result<FamilyInstance, TemplateError> {
        let n = vec![0; (s * t + 1) as usize];
        instantiate(
            &builtin("fig2").unwrap(),
            &params(&[
                ("s", Value::Int(s)),
                ("t", Value::Int(t)),
                ("m", Value::Tuple(m)),
                ("n", Value::Tuple(n)),
            ]),
            false,
        )
    }

    #[test]
    fn fig1_handle_counts() {
        for k in 2..=4 {
            let inst = fig1(k);
            let d = &inst.diagram;
            let kk = k as usize;
            assert_eq!(d.one_handles.len(), kk * kk + 2 * kk - 2);
            assert_eq!(d.two_handles.len(), kk * kk + 2 * kk - 1);
            assert_eq!(euler_characteristic(d), 2);
            assert!(homology_closed(d).unwrap().is_homology_sphere());
            assert_eq!(inst.pochette, PochetteDesignation::new("c0", "u"));
        }
    }

    #[test]
    fn fig1_parameters_are_checked() {
        let t = builtin("fig1").unwrap();
        let err = instantiate(&t, &params(&[("k", Value::Int(1)), ("n", Value::Tuple(vec![]))]), false);
        assert!(matches!(err, Err(TemplateError::BadParam { .. })));
        let err = instantiate(&t, &params(&[("k", Value::Int(2)), ("n", Value::Tuple(vec![0; 2]))]), false);
        assert!(matches!(err, Err(TemplateError::BadParam { .. })));
        let err = instantiate(&t, &params(&[("k", Value::Int(2))]), false);
        assert!(matches!(err, Err(TemplateError::MissingParam(_))));
        let err = instantiate(
            &t,
            &params(&[("k", Value::Int(2)), ("n", Value::Tuple(vec![0; 3])), ("x", Value::Int(0))]),
            false,
        );
        assert!(matches!(err, Err(TemplateError::UnexpectedParam(_))));
        let err = instantiate(
            &t,
            &params(&[
                ("k", Value::Int(2)),
                ("n", Value::Tuple(vec![0; 3])),
                ("signs", Value::Tuple(vec![1, 2, 1])),
            ]),
            false,
        );
        assert!(matches!(err, Err(TemplateError::BadParam { .. })));
    }

    #[test]
    fn fig2_members_are_homology_spheres() {
        for (s, t) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 2)] {
            let mut m = vec![0; s as usize];
            if s >= 2 {
                m[0] = 2;
                m[1] = -2;
            }
            let inst = fig2(s, t, m).unwrap();
            assert_eq!(euler_characteristic(&inst.diagram), 2);
            assert_eq!(homology_closed(&inst.diagram).unwrap(), HomologyProfile::homology_sphere());
        }
    }

    #[test]
    fn fig2_rejects_nonzero_sum() {
        let err = fig2(2, 1, vec![1, 1]).unwrap_err();
        assert!(matches!(err, TemplateError::BadParam { ref name, .. } if name == "m"));
    }

    #[test]
    fn pochette_column_is_zero() {
        for inst in [fig1(2), fig1(3), fig2(2, 2, vec![1, -1]).unwrap()] {
            let d = &inst.diagram;
            let l = linking_matrix(d);
            let col = d.two_handles.iter().position(|h| h.id == inst.pochette.two_handle).unwrap();
            assert!((0..l.rows()).all(|i| l.get(i, col) == &0.into()));
        }
    }

    #[test]
    fn families_cancel_to_standard_s4() {
        for inst in [fig1(2), fig1(3), fig2(2, 2, vec![3, -3]).unwrap()] {
            let r = cancel_chain_pairs(&inst.diagram);
            assert!(r.same_handles(&HandleDiagram::standard_s4()), "{}", inst.diagram.name);
        }
    }

    #[test]
    fn meridian_flags() {
        let t = builtin("fig1").unwrap();
        let inst = instantiate(&t, &params(&[("k", Value::Int(2)), ("n", Value::Tuple(vec![0; 3]))]), true).unwrap();
        for h in &inst.diagram.two_handles {
            assert_eq!(h.meridian, h.linking_with("c0") != 0, "{}", h.id);
        }
    }

    #[test]
    fn linking_matrix_is_unimodular_without_pochette() {
        let inst = fig1(3);
        let d = &inst.diagram;
        let l = linking_matrix(d);
        let keep: Vec<usize> = (0..l.cols())
            .filter(|&j| d.two_handles[j].id != inst.pochette.two_handle)
            .collect();
        let mut sq = intlin::IntMatrix::zeros(l.rows(), keep.len());
        for i in 0..l.rows() {
            for (jj, &j) in keep.iter().enumerate() {
                sq.set(i, jj, l.get(i, j).clone());
            }
        }
        assert_eq!(sq.determinant().map(|d| d.magnitude().clone()), Some(1u32.into()));
    }

    #[test]
    fn names_describe_parameters() {
        let inst = fig2(2, 1, vec![1, -1]).unwrap();
        assert_eq!(inst.diagram.name, "fig2(s=2, t=1, m=[1,-1], n=[0,0,0], sign=1)");
        assert!(matches!(builtin("fig9"), Err(TemplateError::UnknownTemplate(_))));
    }
}
