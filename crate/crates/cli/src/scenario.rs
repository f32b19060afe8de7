//! Scenario files, version 1:
//!
//! ```json
//! {
//!   "version": 1,
//!   "seed": 0,
//!   "spaces": ["P(2)", "pt"],
//!   "morphisms": [{"kind": "to-point", "src": "P(2)", "dst": "pt", "params": {}}],
//!   "elements": [{"over": 0, "terms": [{"map": 1, "coeff": 1}]}],
//!   "checks": ["all"]
//! }
//! ```
//!
//! Morphism kinds: `identity`, `to-point`, `projection` (`params.keep`:
//! factor positions of `src`), `bundle-projection`, `linear-embedding`,
//! `center-embedding`, `blow-down`, `exceptional-inclusion`, `zero-section`
//! and `compose` (`params.outer`, `params.inner`: indices of earlier
//! morphisms). `src` and `dst` must be listed spaces and must match the
//! endpoints of the built map. An element is a sum of `coeff · [map]` over
//! the morphism at index `over`.

use std::fmt;

use serde::Deserialize;

use motbiv_core::bivariant::BivariantElement;
use motbiv_core::harness::{CheckKind, Scenario};
use motbiv_core::varmodel::{
    blow_down, bundle_projection, center_embedding, exceptional_inclusion, identity,
    linear_embedding, product_projection, to_point, try_compose, zero_section, Construction,
    Morphism, Variety,
};

use crate::expr;

pub const SCHEMA_VERSION: u32 = 1;

/// A malformed scenario file: where, and what is wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "schema error")?;
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, " at line {l}, column {c}")?;
        }
        if let Some(field) = &self.field {
            write!(f, " in {field}")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for SchemaError {}

fn field_error(field: String, message: impl Into<String>) -> SchemaError {
    SchemaError {
        line: None,
        column: None,
        field: Some(field),
        message: message.into(),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    version: u32,
    #[serde(default)]
    seed: u64,
    spaces: Vec<String>,
    #[serde(default)]
    morphisms: Vec<MorphismSpec>,
    #[serde(default)]
    elements: Vec<ElementSpec>,
    #[serde(default)]
    checks: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismSpec {
    kind: String,
    src: String,
    dst: String,
    #[serde(default)]
    params: Params,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Params {
    keep: Option<Vec<usize>>,
    outer: Option<usize>,
    inner: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementSpec {
    over: usize,
    terms: Vec<TermSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    map: usize,
    coeff: i64,
}

/// Parses and validates a scenario file.
pub fn load(text: &str) -> Result<Scenario, SchemaError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| SchemaError {
        line: Some(e.line()),
        column: Some(e.column()),
        field: None,
        message: e.to_string(),
    })?;
    if file.version != SCHEMA_VERSION {
        return Err(field_error(
            "version".into(),
            format!(
                "unsupported version {}, expected {SCHEMA_VERSION}",
                file.version
            ),
        ));
    }
    let mut spaces = Vec::with_capacity(file.spaces.len());
    for (i, s) in file.spaces.iter().enumerate() {
        let x = expr::variety(s).map_err(|e| field_error(format!("spaces[{i}]"), e.to_string()))?;
        if !spaces.contains(&x) {
            spaces.push(x);
        }
    }
    let mut morphisms: Vec<Morphism> = Vec::with_capacity(file.morphisms.len());
    for (i, spec) in file.morphisms.iter().enumerate() {
        let m = build_morphism(i, spec, &spaces, &morphisms)?;
        morphisms.push(m);
    }
    let mut elements = Vec::with_capacity(file.elements.len());
    for (i, spec) in file.elements.iter().enumerate() {
        let path = format!("elements[{i}]");
        let over = morphisms
            .get(spec.over)
            .ok_or_else(|| field_error(format!("{path}.over"), "no such morphism"))?;
        let mut e = BivariantElement::zero(over);
        for (k, t) in spec.terms.iter().enumerate() {
            let tpath = format!("{path}.terms[{k}]");
            let h = morphisms
                .get(t.map)
                .ok_or_else(|| field_error(format!("{tpath}.map"), "no such morphism"))?;
            let g = BivariantElement::generator(h, over)
                .map_err(|err| field_error(tpath.clone(), err.to_string()))?;
            e = e
                .add(&g.scale(t.coeff))
                .map_err(|err| field_error(tpath, err.to_string()))?;
        }
        elements.push(e);
    }
    let mut script = Vec::new();
    for (i, c) in file.checks.iter().enumerate() {
        for k in CheckKind::parse_group(c)
            .map_err(|e| field_error(format!("checks[{i}]"), e.to_string()))?
        {
            if !script.contains(&k) {
                script.push(k);
            }
        }
    }
    Scenario::new(file.seed, spaces, morphisms, elements, script)
        .map_err(|e| field_error("scenario".into(), e.to_string()))
}

fn build_morphism(
    i: usize,
    spec: &MorphismSpec,
    spaces: &[Variety],
    earlier: &[Morphism],
) -> Result<Morphism, SchemaError> {
    let path = format!("morphisms[{i}]");
    let listed = |field: &str, s: &str| -> Result<Variety, SchemaError> {
        let x =
            expr::variety(s).map_err(|e| field_error(format!("{path}.{field}"), e.to_string()))?;
        if !spaces.contains(&x) {
            return Err(field_error(
                format!("{path}.{field}"),
                format!("{} is not a listed space", x.key()),
            ));
        }
        Ok(x)
    };
    let src = listed("src", &spec.src)?;
    let dst = listed("dst", &spec.dst)?;
    let bad = |message: String| field_error(format!("{path}.kind"), message);
    let param = |name: &str, v: Option<usize>| {
        v.ok_or_else(|| field_error(format!("{path}.params.{name}"), "missing"))
    };
    let earlier_map = |name: &str, v: Option<usize>| -> Result<Morphism, SchemaError> {
        let k = param(name, v)?;
        earlier.get(k).cloned().ok_or_else(|| {
            field_error(
                format!("{path}.params.{name}"),
                format!("no earlier morphism {k}"),
            )
        })
    };
    let proj_dim = |x: &Variety| match x.construction() {
        Construction::Proj(n) => Some(*n),
        Construction::Point => Some(0),
        _ => None,
    };
    let blowup_of = |x: &Variety| match x.construction() {
        Construction::BlowupLinear { n, m } => Some((*n, *m)),
        _ => None,
    };
    let built = match spec.kind.as_str() {
        "identity" => Ok(identity(&src)),
        "to-point" => Ok(to_point(&src)),
        "projection" => {
            let keep = spec
                .params
                .keep
                .clone()
                .ok_or_else(|| field_error(format!("{path}.params.keep"), "missing"))?;
            let nf = src.factors().len();
            if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= nf) {
                return Err(field_error(
                    format!("{path}.params.keep"),
                    format!("need increasing positions below {nf}"),
                ));
            }
            Ok(product_projection(&src, &keep))
        }
        "bundle-projection" => bundle_projection(&src),
        "linear-embedding" | "center-embedding" => match (proj_dim(&src), proj_dim(&dst)) {
            (Some(a), Some(n)) if spec.kind == "linear-embedding" => linear_embedding(a, n),
            (Some(a), Some(n)) => center_embedding(a, n),
            _ => {
                return Err(bad(format!(
                    "{} needs projective spaces at both ends",
                    spec.kind
                )))
            }
        },
        "blow-down" => match blowup_of(&src) {
            Some((n, m)) => blow_down(n, m),
            None => return Err(bad("blow-down starts at a blowup(P(n),P(m))".into())),
        },
        "exceptional-inclusion" => match blowup_of(&dst) {
            Some((n, m)) => exceptional_inclusion(n, m),
            None => {
                return Err(bad(
                    "exceptional-inclusion ends at a blowup(P(n),P(m))".into()
                ))
            }
        },
        "zero-section" => zero_section(&dst),
        "compose" => try_compose(
            &earlier_map("outer", spec.params.outer)?,
            &earlier_map("inner", spec.params.inner)?,
        ),
        other => return Err(bad(format!("unknown kind {other:?}"))),
    };
    let m = built.map_err(|e| bad(e.to_string()))?;
    if m.source() != &src || m.target() != &dst {
        return Err(field_error(
            path,
            format!(
                "built {m}, which does not run {} -> {}",
                src.key(),
                dst.key()
            ),
        ));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scenario_loads() {
        let s = load(r#"{"version": 1, "spaces": []}"#).unwrap();
        assert!(s.script.is_empty());
    }

    #[test]
    fn malformed_files_point_at_the_problem() {
        let e = load("{\"version\": 1,\n \"spaces\": [\"P(1)\",]}").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = load(r#"{"version": 2, "spaces": []}"#).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("version"));
        let e = load(r#"{"version": 1, "spaces": ["P(1)"], "morphisms": [{"kind": "to-point", "src": "P(1)", "dst": "pt"}]}"#).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("morphisms[0].dst"));
        let e = load(r#"{"version": 1, "spaces": ["P(1)"], "extra": 0}"#).unwrap_err();
        assert!(e.line.is_some());
    }

    #[test]
    fn bundled_example_loads() {
        let s = load(include_str!("../examples/p2-blowup.json")).unwrap();
        assert_eq!(s.elements.len(), 2);
        assert!(!s.script.is_empty());
    }
}
