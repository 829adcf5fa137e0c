//! JSON formats for scalars, polynomials, matrices and functions.
//!
//! ```text
//! scalar    "p/q+r/si"
//! poly      ["c0", "c1", ...]
//! matrix    {"n": 2, "rows": [["a", "b"], ["c", "d"]]}   (a bare rows array is also accepted)
//! function  {"type": "polynomial", "coeffs": [...]}
//!           {"type": "sin_family", "a": .., "b": .., "c": .., "d": ..}
//!           {"type": "exp_poly", "v": .., "p_coeffs": [...], "c": .., "d": ..}
//! ```
//!
//! Parse errors name the JSON path of the offending token.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::function::EntireFunction;
use crate::matrix::MatrixQi;
use crate::poly::Poly;
use crate::scalar::GaussianRational as Q;

impl Serialize for MatrixQi {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let mut st = s.serialize_struct("Matrix", 2)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

fn json_error(raw: &str, err: serde_json::Error) -> Error {
    // serde_json reports 1-based line/column; convert to a byte offset.
    let offset: usize = raw
        .split_inclusive('\n')
        .take(err.line().saturating_sub(1))
        .map(str::len)
        .sum::<usize>()
        + err.column().saturating_sub(1);
    Error::parse(raw, offset, format!("invalid JSON: {err}"))
}

fn parse_json(raw: &str) -> Result<Value> {
    serde_json::from_str(raw).map_err(|e| json_error(raw, e))
}

fn at(path: &str, message: impl std::fmt::Display) -> Error {
    Error::parse(path, 0, format!("{path}: {message}"))
}

fn scalar_at(v: &Value, path: &str) -> Result<Q> {
    match v {
        Value::String(s) => s.parse().map_err(|e| match e {
            Error::Parse {
                input,
                position,
                message,
            } => Error::Parse {
                input,
                position,
                message: format!("{path}: {message}"),
            },
            other => other,
        }),
        Value::Number(n) if n.is_i64() => Ok(Q::from_int(n.as_i64().expect("i64"))),
        other => Err(at(path, format!("expected scalar string, found {other}"))),
    }
}

fn poly_at(v: &Value, path: &str) -> Result<Poly> {
    let arr = v
        .as_array()
        .ok_or_else(|| at(path, "expected array of scalar strings"))?;
    Ok(Poly::new(
        arr.iter()
            .enumerate()
            .map(|(k, c)| scalar_at(c, &format!("{path}[{k}]")))
            .collect::<Result<_>>()?,
    ))
}

fn matrix_at(v: &Value, path: &str) -> Result<MatrixQi> {
    let (declared, rows_value, rows_path) = match v {
        Value::Object(obj) => {
            check_keys(obj, &["n", "rows"], path)?;
            let n = obj
                .get("n")
                .map(|n| {
                    n.as_u64()
                        .ok_or_else(|| at(&format!("{path}.n"), "expected positive integer"))
                })
                .transpose()?;
            let rows = obj
                .get("rows")
                .ok_or_else(|| at(path, "missing field \"rows\""))?;
            (n, rows, format!("{path}.rows"))
        }
        Value::Array(_) => (None, v, path.to_string()),
        other => Err(at(
            path,
            format!("expected matrix object or rows array, found {other}"),
        ))?,
    };
    let rows = rows_value
        .as_array()
        .ok_or_else(|| at(&rows_path, "expected array of rows"))?;
    if rows.is_empty() {
        return Err(at(&rows_path, "matrix must have at least one row"));
    }
    let n = rows.len();
    if let Some(d) = declared {
        if d as usize != n {
            return Err(at(&rows_path, format!("n = {d} but {n} rows given")));
        }
    }
    let mut out = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{rows_path}[{i}]");
        let row = row.as_array().ok_or_else(|| at(&rp, "expected array"))?;
        if row.len() != n {
            return Err(at(
                &rp,
                format!("row has {} entries; matrix must be {n}×{n}", row.len()),
            ));
        }
        out.push(
            row.iter()
                .enumerate()
                .map(|(j, x)| scalar_at(x, &format!("{rp}[{j}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    MatrixQi::from_rows(out)
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(at(path, format!("unknown field {k:?}"))),
        None => Ok(()),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| at(path, format!("missing field {key:?}")))
}

fn function_at(v: &Value, path: &str) -> Result<EntireFunction> {
    let obj = v
        .as_object()
        .ok_or_else(|| at(path, "expected function object"))?;
    let ty = field(obj, "type", path)?
        .as_str()
        .ok_or_else(|| at(&format!("{path}.type"), "expected string"))?;
    let s = |key: &str| scalar_at(field(obj, key, path)?, &format!("{path}.{key}"));
    match ty {
        "polynomial" => {
            check_keys(obj, &["type", "coeffs"], path)?;
            EntireFunction::polynomial(poly_at(
                field(obj, "coeffs", path)?,
                &format!("{path}.coeffs"),
            )?)
        }
        "sin_family" => {
            check_keys(obj, &["type", "a", "b", "c", "d"], path)?;
            EntireFunction::sin_family(s("a")?, s("b")?, s("c")?, s("d")?)
        }
        "exp_poly" => {
            check_keys(obj, &["type", "v", "p_coeffs", "c", "d"], path)?;
            let p = poly_at(field(obj, "p_coeffs", path)?, &format!("{path}.p_coeffs"))?;
            EntireFunction::exp_poly(s("v")?, p, s("c")?, s("d")?)
        }
        other => Err(at(
            &format!("{path}.type"),
            format!("unknown function type {other:?}"),
        )),
    }
}

pub fn parse_scalar(raw: &str) -> Result<Q> {
    raw.parse()
}

pub fn parse_poly(raw: &str) -> Result<Poly> {
    poly_at(&parse_json(raw)?, "$")
}

pub fn parse_matrix(raw: &str) -> Result<MatrixQi> {
    matrix_at(&parse_json(raw)?, "$")
}

/// Parses a function spec; construction invariants are enforced, so a
/// constant polynomial is rejected with [`Error::ConstantPolynomial`].
pub fn parse_function(raw: &str) -> Result<EntireFunction> {
    function_at(&parse_json(raw)?, "$")
}

pub fn poly_to_json(p: &Poly) -> Value {
    json!(p
        .coeffs()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>())
}

pub fn matrix_to_json(m: &MatrixQi) -> Value {
    serde_json::to_value(m).expect("matrix serialises")
}

pub fn function_to_json(f: &EntireFunction) -> Value {
    match f {
        EntireFunction::Polynomial(p) => json!({"type": "polynomial", "coeffs": poly_to_json(p)}),
        EntireFunction::SinFamily { a, b, c, d } => json!({
            "type": "sin_family",
            "a": a.to_string(), "b": b.to_string(), "c": c.to_string(), "d": d.to_string(),
        }),
        EntireFunction::ExpPolyFamily { v, p, c, d } => json!({
            "type": "exp_poly",
            "v": v.to_string(), "p_coeffs": poly_to_json(p), "c": c.to_string(), "d": d.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(matches!(parse_scalar("2/0"), Err(Error::Parse { .. })));
        let err = parse_matrix(r#"[["1","2/0"],["0","1"]]"#).unwrap_err();
        let Error::Parse { message, .. } = err else {
            panic!("expected parse error")
        };
        assert!(message.contains("$[0][1]"), "{message}");
    }

    #[test]
    fn ragged_and_mismatched_matrices() {
        assert!(parse_matrix(r#"[["1","2"],["3"]]"#).is_err());
        assert!(parse_matrix(r#"{"n":3,"rows":[["1","2"],["3","4"]]}"#).is_err());
        assert!(parse_matrix(r#"[]"#).is_err());
        assert!(parse_matrix(r#"[["1","2"]]"#).is_err());
        assert!(parse_matrix(r#"{"n":1,"rows":[["1"]],"extra":0}"#).is_err());
    }

    #[test]
    fn matrix_forms_agree() {
        let a = parse_matrix(r#"[["0","1"],["0","0"]]"#).unwrap();
        let b = parse_matrix(r#"{"n": 2, "rows": [["0","1"],["0","0"]]}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            matrix_to_json(&a).to_string(),
            r#"{"n":2,"rows":[["0","1"],["0","0"]]}"#
        );
    }

    #[test]
    fn function_specs() {
        let f = parse_function(r#"{"type":"sin_family","a":"0","b":"1","c":"1","d":"0"}"#).unwrap();
        assert!(matches!(f, EntireFunction::SinFamily { .. }));
        let g = parse_function(r#"{"type":"exp_poly","v":"5","p_coeffs":["1"],"c":"1","d":"0"}"#)
            .unwrap();
        assert!(matches!(g, EntireFunction::ExpPolyFamily { .. }));
        assert!(parse_function(r#"{"type":"bessel"}"#).is_err());
        assert_eq!(
            parse_function(r#"{"type":"polynomial","coeffs":["5"]}"#),
            Err(Error::ConstantPolynomial)
        );
        let src = r#"{"type":"polynomial","coeffs":["0","1/2","0+1i"]}"#;
        assert_eq!(
            function_to_json(&parse_function(src).unwrap()).to_string(),
            src
        );
    }

    #[test]
    fn json_syntax_errors_carry_offsets() {
        let Error::Parse { position, .. } = parse_matrix("[[\"1\"],\n  x]").unwrap_err() else {
            panic!("expected parse error")
        };
        assert_eq!(position, 10);
    }
}
