//! JSON forms of modules, Lie algebras, groups and rationals.
//!
//! A module is `{"d", "e", "basis": [[[int]]], "label"?}`; an algebra adds
//! `"lie": true`; a group is `{"d", "generators": [[[int]]], "label"?}`.
//! Integers may be JSON numbers or decimal strings.

use askzeta::grouporbits::GroupGenSet;
use askzeta::matmodule::MatrixModule;
use askzeta::ring_zpn::IntMatrix;
use askzeta::{AskError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "askzeta/1";

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(AskError::InvalidInput(msg.into()))
}

pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn int_str(x: &BigInt) -> Value {
    json!(x.to_string())
}

pub fn rational_json(r: &BigRational) -> Value {
    json!({"num": r.numer().to_string(), "den": r.denom().to_string()})
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigInt::from(i)),
            None => bad(format!("{n} is not an integer")),
        },
        Value::String(s) => s.trim().parse().map_err(|_| AskError::InvalidInput(format!("{s:?} is not an integer"))),
        other => bad(format!("expected an integer, got {other}")),
    }
}

fn parse_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    match obj.get(key).and_then(Value::as_u64) {
        Some(v) => Ok(v as usize),
        None => bad(format!("missing or invalid field {key:?}")),
    }
}

fn matrix_json(a: &IntMatrix) -> Value {
    Value::Array((0..a.rows).map(|i| Value::Array(a.row(i).iter().map(int_json).collect())).collect())
}

fn parse_matrix(v: &Value, rows: usize, cols: usize) -> Result<IntMatrix> {
    let Some(rs) = v.as_array() else { return bad("a matrix must be an array of rows") };
    if rs.len() != rows {
        return bad(format!("matrix has {} rows, expected {rows}", rs.len()));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in rs {
        let Some(r) = r.as_array() else { return bad("a matrix row must be an array") };
        if r.len() != cols {
            return bad(format!("matrix row has {} entries, expected {cols}", r.len()));
        }
        for x in r {
            data.push(parse_int(x)?);
        }
    }
    Ok(IntMatrix { rows, cols, data })
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().map_or_else(|| bad("expected a JSON object"), Ok)
}

pub fn module_to_json(m: &MatrixModule, lie: bool) -> Value {
    let mut o = Map::new();
    o.insert("d".into(), json!(m.d));
    o.insert("e".into(), json!(m.e));
    o.insert("basis".into(), Value::Array(m.basis.iter().map(matrix_json).collect()));
    if let Some(l) = &m.label {
        o.insert("label".into(), json!(l));
    }
    if lie {
        o.insert("lie".into(), json!(true));
    }
    Value::Object(o)
}

/// Parses a module; the flag reports `"lie": true`.
pub fn module_from_json(v: &Value) -> Result<(MatrixModule, bool)> {
    let o = object(v)?;
    let d = parse_usize(o, "d")?;
    let e = parse_usize(o, "e")?;
    let Some(basis) = o.get("basis").and_then(Value::as_array) else { return bad("missing field \"basis\"") };
    let gens = basis.iter().map(|b| parse_matrix(b, d, e)).collect::<Result<Vec<_>>>()?;
    let label = match o.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.as_str()),
        Some(_) => return bad("\"label\" must be a string"),
    };
    let lie = match o.get("lie") {
        None | Some(Value::Null) => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return bad("\"lie\" must be a boolean"),
    };
    Ok((MatrixModule::new(d, e, &gens, label)?, lie))
}

pub fn group_to_json(g: &GroupGenSet) -> Value {
    let mut o = Map::new();
    o.insert("d".into(), json!(g.d));
    o.insert("generators".into(), Value::Array(g.generators.iter().map(matrix_json).collect()));
    if let Some(l) = &g.label {
        o.insert("label".into(), json!(l));
    }
    Value::Object(o)
}

pub fn group_from_json(v: &Value) -> Result<GroupGenSet> {
    let o = object(v)?;
    let d = parse_usize(o, "d")?;
    let Some(gens) = o.get("generators").and_then(Value::as_array) else { return bad("missing field \"generators\"") };
    let gens = gens.iter().map(|g| parse_matrix(g, d, d)).collect::<Result<Vec<_>>>()?;
    GroupGenSet::new(d, gens, o.get("label").and_then(Value::as_str))
}

pub fn is_group(v: &Value) -> bool {
    v.get("generators").is_some()
}

pub fn read_json(path: &std::path::Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| AskError::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| AskError::InvalidInput(format!("{}: {e}", path.display())))
}
