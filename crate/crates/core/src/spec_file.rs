//! JSON operator specification files.
//!
//! ```json
//! {
//!   "block_dim": 1,
//!   "exponent": "2",
//!   "diagonals": [
//!     { "offset": 1, "law": { "kind": "constant", "value": [[1, 0]] } }
//!   ]
//! }
//! ```
//!
//! A block is a row-major list of `d * d` entries `[re, im]` (a bare number
//! is read as a real entry). Law kinds:
//!
//! * `constant`: `value` (block);
//! * `periodic`: `values` (list of blocks, `k -> values[k mod q]`);
//! * `eventually_periodic`: `radius`, `core` (`2 radius + 1` blocks for
//!   positions `-radius..=radius`), `left` and `right`, each
//!   `{ "anchor": a, "values": [...] }` with `k -> values[(k - a) mod q]`;
//! * `seeded_random`: `bound`, `seed`.
//!
//! `exponent` is `"1"`, `"2"` or `"inf"` (numbers 1 and 2 are accepted).
//! An optional top-level `description` string is ignored.

use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{Exponent, Matrix};
use crate::operator::{BandOperator, DiagonalSymbol, Law, Tail};

/// Parses and validates a specification document.
pub fn parse_spec(text: &str) -> Result<BandOperator> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_value(&value)
}

/// Reads a specification file.
pub fn load_spec(path: &Path) -> Result<BandOperator> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::spec(path.display().to_string(), format!("cannot read file: {e}")))?;
    parse_spec(&text)
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::spec(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::spec(path, format!("missing field '{key}'")))
}

fn no_extra(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::spec(path, format!("unknown field '{k}'"))),
        None => Ok(()),
    }
}

fn integer(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::spec(path, "expected an integer"))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::spec(path, "expected a finite number"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::spec(path, "expected an array"))
}

fn scalar(v: &Value, path: &str) -> Result<Complex64> {
    if v.is_number() {
        return Ok(Complex64::new(number(v, path)?, 0.0));
    }
    let pair = array(v, path)?;
    if pair.len() != 2 {
        return Err(Error::spec(path, "expected [re, im]"));
    }
    Ok(Complex64::new(
        number(&pair[0], &format!("{path}[0]"))?,
        number(&pair[1], &format!("{path}[1]"))?,
    ))
}

fn block(v: &Value, d: usize, path: &str) -> Result<Matrix> {
    let entries = array(v, path)?;
    if entries.len() != d * d {
        return Err(Error::spec(
            path,
            format!("expected {} entries for a {d}x{d} block, found {}", d * d, entries.len()),
        ));
    }
    let data = entries
        .iter()
        .enumerate()
        .map(|(k, e)| scalar(e, &format!("{path}[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    Matrix::new(d, d, data)
}

fn blocks(v: &Value, d: usize, path: &str) -> Result<Vec<Matrix>> {
    let list = array(v, path)?;
    if list.is_empty() {
        return Err(Error::spec(path, "expected at least one block"));
    }
    list.iter()
        .enumerate()
        .map(|(k, b)| block(b, d, &format!("{path}[{k}]")))
        .collect()
}

fn tail(v: &Value, d: usize, path: &str) -> Result<Tail> {
    let obj = object(v, path)?;
    no_extra(obj, &["anchor", "values"], path)?;
    let anchor = match obj.get("anchor") {
        Some(a) => integer(a, &format!("{path}.anchor"))?,
        None => 0,
    };
    Ok(Tail::new(blocks(field(obj, "values", path)?, d, &format!("{path}.values"))?, anchor))
}

fn law(v: &Value, d: usize, path: &str) -> Result<Law> {
    let obj = object(v, path)?;
    let kind = field(obj, "kind", path)?
        .as_str()
        .ok_or_else(|| Error::spec(format!("{path}.kind"), "expected a string"))?;
    let sub = |k: &str| format!("{path}.{k}");
    match kind {
        "constant" => {
            no_extra(obj, &["kind", "value"], path)?;
            Ok(Law::Constant(block(field(obj, "value", path)?, d, &sub("value"))?))
        }
        "periodic" => {
            no_extra(obj, &["kind", "values"], path)?;
            Ok(Law::Periodic(blocks(field(obj, "values", path)?, d, &sub("values"))?))
        }
        "eventually_periodic" => {
            no_extra(obj, &["kind", "radius", "core", "left", "right"], path)?;
            let radius = integer(field(obj, "radius", path)?, &sub("radius"))?;
            if radius < 0 {
                return Err(Error::spec(sub("radius"), "must be non-negative"));
            }
            let core = blocks(field(obj, "core", path)?, d, &sub("core"))?;
            if core.len() as i64 != 2 * radius + 1 {
                return Err(Error::spec(
                    sub("core"),
                    format!("expected {} blocks (2 * radius + 1), found {}", 2 * radius + 1, core.len()),
                ));
            }
            Ok(Law::EventuallyPeriodic {
                radius,
                core,
                left: tail(field(obj, "left", path)?, d, &sub("left"))?,
                right: tail(field(obj, "right", path)?, d, &sub("right"))?,
            })
        }
        "seeded_random" => {
            no_extra(obj, &["kind", "bound", "seed"], path)?;
            let bound = number(field(obj, "bound", path)?, &sub("bound"))?;
            if bound < 0.0 {
                return Err(Error::spec(sub("bound"), "must be non-negative"));
            }
            let seed = field(obj, "seed", path)?
                .as_u64()
                .ok_or_else(|| Error::spec(sub("seed"), "expected a non-negative integer"))?;
            Ok(Law::SeededRandom { bound, seed })
        }
        other => Err(Error::spec(
            sub("kind"),
            format!("unknown kind '{other}' (expected constant, periodic, eventually_periodic or seeded_random)"),
        )),
    }
}

fn exponent(v: &Value) -> Result<Exponent> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(Error::spec("exponent", "expected \"1\", \"2\" or \"inf\"")),
    };
    Exponent::parse(&text).ok_or_else(|| Error::spec("exponent", format!("unsupported exponent '{text}'")))
}

/// Builds an operator from a parsed document.
pub fn from_value(v: &Value) -> Result<BandOperator> {
    let obj = object(v, "$")?;
    no_extra(obj, &["block_dim", "exponent", "diagonals", "description"], "$")?;
    let d = field(obj, "block_dim", "$")?
        .as_u64()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::spec("block_dim", "expected a positive integer"))? as usize;
    let p = exponent(field(obj, "exponent", "$")?)?;
    let mut diagonals = Vec::new();
    for (k, entry) in array(field(obj, "diagonals", "$")?, "diagonals")?.iter().enumerate() {
        let path = format!("diagonals[{k}]");
        let e = object(entry, &path)?;
        no_extra(e, &["offset", "law"], &path)?;
        let offset = integer(field(e, "offset", &path)?, &format!("{path}.offset"))?;
        diagonals.push(DiagonalSymbol::new(offset, law(field(e, "law", &path)?, d, &format!("{path}.law"))?));
    }
    BandOperator::new(d, p, diagonals).map_err(|e| Error::spec("diagonals", e.to_string()))
}

fn block_value(m: &Matrix) -> Value {
    Value::Array(m.data().iter().map(|z| json!([z.re, z.im])).collect())
}

fn blocks_value(list: &[Matrix]) -> Value {
    Value::Array(list.iter().map(block_value).collect())
}

fn law_value(law: &Law) -> Value {
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(law.kind()));
    match law {
        Law::Constant(m) => {
            obj.insert("value".into(), block_value(m));
        }
        Law::Periodic(values) => {
            obj.insert("values".into(), blocks_value(values));
        }
        Law::EventuallyPeriodic {
            radius,
            core,
            left,
            right,
        } => {
            obj.insert("radius".into(), json!(radius));
            obj.insert("core".into(), blocks_value(core));
            for (name, t) in [("left", left), ("right", right)] {
                obj.insert(name.into(), json!({ "anchor": t.anchor, "values": blocks_value(&t.values) }));
            }
        }
        Law::SeededRandom { bound, seed } => {
            obj.insert("bound".into(), json!(bound));
            obj.insert("seed".into(), json!(seed));
        }
    }
    Value::Object(obj)
}

/// The canonical document of an operator.
pub fn to_value(a: &BandOperator) -> Value {
    json!({
        "block_dim": a.block_dim(),
        "exponent": a.exponent().as_str(),
        "diagonals": a
            .diagonals()
            .iter()
            .map(|d| json!({ "offset": d.offset, "law": law_value(&d.law) }))
            .collect::<Vec<_>>(),
    })
}

/// Canonical pretty-printed form (sorted keys, trailing newline).
pub fn to_canonical_string(a: &BandOperator) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(a)).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn roundtrip_corpus() {
        let mut ops: Vec<BandOperator> = corpus::eventually_periodic_corpus().into_iter().map(|(_, a)| a).collect();
        ops.push(corpus::seeded_random_band(5, 2, 1, 0.5, Exponent::Infinity));
        for a in ops {
            let text = to_canonical_string(&a);
            let b = parse_spec(&text).unwrap();
            assert_eq!(a, b);
            assert_eq!(to_canonical_string(&b), text);
        }
    }

    #[test]
    fn shorthand_entries() {
        let a = parse_spec(
            r#"{"block_dim": 1, "exponent": 2,
                "diagonals": [{"offset": 1, "law": {"kind": "constant", "value": [1]}}]}"#,
        )
        .unwrap();
        assert_eq!(a, corpus::bilateral_shift());
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_spec("{\n  \"block_dim\": 1,\n  \"exponent\": \n}").unwrap_err();
        assert!(matches!(err, Error::Json { line: 4, .. }), "{err:?}");
    }

    #[test]
    fn field_errors_carry_paths() {
        let cases = [
            (r#"{"exponent": "2", "diagonals": []}"#, "$"),
            (r#"{"block_dim": 1, "exponent": "3", "diagonals": []}"#, "exponent"),
            (
                r#"{"block_dim": 2, "exponent": "2", "diagonals": [{"offset": 0, "law": {"kind": "constant", "value": [[1, 0]]}}]}"#,
                "diagonals[0].law.value",
            ),
            (
                r#"{"block_dim": 1, "exponent": "2", "diagonals": [{"offset": 0, "law": {"kind": "wavy"}}]}"#,
                "diagonals[0].law.kind",
            ),
            (
                r#"{"block_dim": 1, "exponent": "2", "diagonals": [{"offset": 0, "law": {"kind": "eventually_periodic", "radius": 1, "core": [[1]], "left": {"values": [[0]]}, "right": {"values": [[0]]}}}]}"#,
                "diagonals[0].law.core",
            ),
            (r#"{"block_dim": 1, "exponent": "2", "diagonals": [], "extra": 1}"#, "$"),
        ];
        for (text, want) in cases {
            match parse_spec(text) {
                Err(Error::Spec { path, .. }) => assert_eq!(path, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
