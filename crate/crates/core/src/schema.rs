//! JSON documents for spaces, operators, and verdicts, plus the `l1:n` /
//! `linf:n` / `l2:n` shorthand.
//!
//! ```text
//! space    {"dim": n, "kind": "polytopal", "vertices": [["1","0"], ...]}
//!          {"dim": n, "kind": "lp", "p": "1" | "2" | "inf"}
//! operator {"domain": space, "codomain": space, "matrix": [["1","0"], ...]}
//! verdict  {"decision", "method", "operator_norm", "norm_squared",
//!           "attaining", "span_rank", "witness"}
//! ```
//!
//! Every number is a rational string; polytopal vertices list one point per
//! ± pair and matrices are row-major with one row per codomain coordinate.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::extremality::ExtremalityVerdict;
use crate::linalg::{Matrix, Vector};
use crate::operator::LinearOperator;
use crate::polytope::SymmetricPolytope;
use crate::rational::{format_rational, parse_rational};
use crate::space::{NormedSpace, SpaceKind};

fn schema(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn object<'a>(value: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| schema(format!("{what} must be a JSON object")))
}

fn only_keys(map: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(format!("unknown field '{k}' in {what}"))),
        None => Ok(()),
    }
}

fn field<'a>(map: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    map.get(key)
        .ok_or_else(|| schema(format!("{what} is missing '{key}'")))
}

fn rational_row(value: &Value, what: &str) -> Result<Vector> {
    let items = value
        .as_array()
        .ok_or_else(|| schema(format!("{what} must be an array of rational strings")))?;
    items
        .iter()
        .map(|q| match q.as_str() {
            Some(s) => parse_rational(s),
            None => Err(schema(format!(
                "{what}: numbers must be strings like \"1/2\", got {q}"
            ))),
        })
        .collect::<Result<Vec<_>>>()
        .map(Vector::new)
}

fn rational_rows(value: &Value, what: &str) -> Result<Vec<Vector>> {
    value
        .as_array()
        .ok_or_else(|| schema(format!("{what} must be an array of rows")))?
        .iter()
        .map(|row| rational_row(row, what))
        .collect()
}

/// Parses `l1:n`, `linf:n`, or `l2:n`.
pub fn parse_space_shorthand(text: &str) -> Result<NormedSpace> {
    let (kind, dim) = text
        .split_once(':')
        .ok_or_else(|| schema(format!("space shorthand '{text}' must look like l1:2")))?;
    let dim: usize = dim
        .parse()
        .ok()
        .filter(|&d| d > 0)
        .ok_or_else(|| schema(format!("bad dimension in '{text}'")))?;
    match kind {
        "l1" => Ok(NormedSpace::l1(dim)),
        "l2" => Ok(NormedSpace::l2(dim)),
        "linf" => Ok(NormedSpace::linf(dim)),
        _ => Err(schema(format!(
            "unknown space '{kind}' (expected l1, l2, linf)"
        ))),
    }
}

pub fn space_from_json(value: &Value) -> Result<NormedSpace> {
    let map = object(value, "space")?;
    let dim = field(map, "dim", "space")?
        .as_u64()
        .filter(|&d| d > 0)
        .ok_or_else(|| schema("space 'dim' must be a positive integer"))? as usize;
    let kind = field(map, "kind", "space")?
        .as_str()
        .ok_or_else(|| schema("space 'kind' must be a string"))?;
    match kind {
        "lp" => {
            only_keys(map, &["dim", "kind", "p"], "lp space")?;
            match field(map, "p", "lp space")?.as_str() {
                Some("1") => Ok(NormedSpace::l1(dim)),
                Some("2") => Ok(NormedSpace::l2(dim)),
                Some("inf") => Ok(NormedSpace::linf(dim)),
                _ => Err(schema("lp space 'p' must be \"1\", \"2\", or \"inf\"")),
            }
        }
        "polytopal" => {
            only_keys(map, &["dim", "kind", "vertices"], "polytopal space")?;
            let vertices = rational_rows(field(map, "vertices", "polytopal space")?, "vertices")?;
            if let Some(v) = vertices.iter().find(|v| v.dim() != dim) {
                return Err(schema(format!(
                    "vertex {v} has {} entries, space dim is {dim}",
                    v.dim()
                )));
            }
            Ok(NormedSpace::polytopal(SymmetricPolytope::from_vertices(
                dim, &vertices,
            )?))
        }
        other => Err(schema(format!("unknown space kind '{other}'"))),
    }
}

fn row_json(v: &Vector) -> Value {
    Value::Array(
        v.iter()
            .map(|q| Value::String(format_rational(q)))
            .collect(),
    )
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.row_vectors().iter().map(row_json).collect())
}

pub fn space_to_json(space: &NormedSpace) -> Value {
    match space.kind() {
        SpaceKind::L1 => json!({"dim": space.dim(), "kind": "lp", "p": "1"}),
        SpaceKind::L2 => json!({"dim": space.dim(), "kind": "lp", "p": "2"}),
        SpaceKind::LInf => json!({"dim": space.dim(), "kind": "lp", "p": "inf"}),
        SpaceKind::Polytopal(p) => json!({
            "dim": space.dim(),
            "kind": "polytopal",
            "vertices": p.vertices().iter().map(row_json).collect::<Vec<_>>(),
        }),
    }
}

/// A space given either as shorthand or as an embedded JSON document.
fn space_value(value: &Value, what: &str) -> Result<NormedSpace> {
    match value.as_str() {
        Some(s) => parse_space_shorthand(s),
        None => space_from_json(value).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{what}: {m}")),
            other => other,
        }),
    }
}

pub fn operator_from_json(value: &Value) -> Result<LinearOperator> {
    let map = object(value, "operator")?;
    only_keys(map, &["domain", "codomain", "matrix"], "operator")?;
    let domain = space_value(field(map, "domain", "operator")?, "domain")?;
    let codomain = space_value(field(map, "codomain", "operator")?, "codomain")?;
    let rows = rational_rows(field(map, "matrix", "operator")?, "matrix")?;
    if rows.len() != codomain.dim() {
        return Err(schema(format!(
            "matrix has {} rows, codomain dim is {}",
            rows.len(),
            codomain.dim()
        )));
    }
    if let Some(r) = rows.iter().find(|r| r.dim() != domain.dim()) {
        return Err(schema(format!(
            "matrix row {r} has {} entries, domain dim is {}",
            r.dim(),
            domain.dim()
        )));
    }
    LinearOperator::new(Matrix::from_rows(&rows)?, domain, codomain)
}

pub fn operator_to_json(t: &LinearOperator) -> Value {
    json!({
        "domain": space_to_json(t.domain()),
        "codomain": space_to_json(t.codomain()),
        "matrix": matrix_json(t.matrix()),
    })
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    matrix_json(m)
}

pub fn vector_to_json(v: &Vector) -> Value {
    row_json(v)
}

pub fn verdict_to_json(v: &ExtremalityVerdict) -> Value {
    json!({
        "decision": v.decision.as_str(),
        "method": v.method.as_str(),
        "operator_norm": format_rational(&v.evidence.operator_norm.value),
        "norm_squared": v.evidence.operator_norm.squared,
        "attaining": v.evidence.attaining.iter().map(row_json).collect::<Vec<_>>(),
        "span_rank": v.evidence.span_rank,
        "witness": v.witness.as_ref().map_or(Value::Null, matrix_json),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremality::decide;

    #[test]
    fn shorthand() {
        assert_eq!(parse_space_shorthand("l1:2").unwrap(), NormedSpace::l1(2));
        assert_eq!(
            parse_space_shorthand("linf:3").unwrap(),
            NormedSpace::linf(3)
        );
        for bad in ["l3:2", "l1", "l1:0", "l1:x"] {
            assert!(parse_space_shorthand(bad).is_err());
        }
    }

    #[test]
    fn hexagon_document() {
        let doc = json!({"dim": 2, "kind": "polytopal",
                         "vertices": [["1","0"],["1/2","1"],["-1/2","1"]]});
        let s = space_from_json(&doc).unwrap();
        assert_eq!(s.extreme_points().unwrap().pair_count(), 3);
        assert_eq!(space_from_json(&space_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn schema_errors() {
        let bad = [
            json!({"dim": 2, "kind": "lp", "p": "3"}),
            json!({"dim": 2, "kind": "polytopal", "vertices": [["1.5","0"],["0","1"]]}),
            json!({"dim": 2, "kind": "polytopal", "vertices": [[1, 0]]}),
            json!({"dim": 2, "kind": "polytopal", "vertices": [["1"]]}),
            json!({"dim": 2, "kind": "lp", "p": "1", "extra": true}),
            json!({"kind": "lp", "p": "1"}),
        ];
        for doc in bad {
            assert!(
                matches!(space_from_json(&doc), Err(Error::Parse(_))),
                "{doc}"
            );
        }
    }

    #[test]
    fn operator_and_verdict() {
        let doc = json!({"domain": {"dim": 2, "kind": "lp", "p": "2"},
                         "codomain": "linf:2",
                         "matrix": [["1","0"],["1","0"]]});
        let t = operator_from_json(&doc).unwrap();
        let out = verdict_to_json(&decide(&t).unwrap());
        assert_eq!(out["decision"], "extreme");
        assert_eq!(out["method"], "unit_row_rule");
        assert_eq!(out["operator_norm"], "1");
        assert_eq!(out["norm_squared"], true);
        assert_eq!(out["attaining"], json!([["1", "0"]]));
        assert_eq!(out["span_rank"], 1);
        assert_eq!(out["witness"], Value::Null);
        assert_eq!(operator_from_json(&operator_to_json(&t)).unwrap(), t);

        let ragged = json!({"domain": "l1:2", "codomain": "l1:2", "matrix": [["1","0"]]});
        assert!(operator_from_json(&ragged).is_err());
    }
}
