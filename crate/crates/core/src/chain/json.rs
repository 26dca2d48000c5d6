use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::Matrix;

fn matrix_to_json(m: &Matrix) -> Value {
    let f = m.field();
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|&v| json!(f.to_signed(v))).collect()))
            .collect(),
    )
}

fn matrix_from_json(f: Fp, rows: usize, cols: usize, v: &Value, path: &str) -> Result<Matrix> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::schema(path, "matrix must be an array of rows"))?;
    if arr.len() != rows {
        return Err(Error::schema(path, format!("expected {rows} rows, found {}", arr.len())));
    }
    let mut m = Matrix::zeros(f, rows, cols);
    for (r, row) in arr.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::schema(format!("{path}[{r}]"), "row must be an array"))?;
        if row.len() != cols {
            return Err(Error::schema(
                format!("{path}[{r}]"),
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
        for (c, e) in row.iter().enumerate() {
            let x = e
                .as_i64()
                .ok_or_else(|| Error::schema(format!("{path}[{r}][{c}]"), "entry must be an integer"))?;
            m.set(r, c, f.from_i64(x));
        }
    }
    Ok(m)
}

/// `{"p", "lo", "hi", "dims": [...], "d": {"n": rows}}` with `d_n` listed for
/// `lo < n <= hi`.
pub fn complex_to_json(c: &ChainComplex) -> Value {
    let (lo, hi) = c.support().unwrap_or((0, -1));
    let mut d = Map::new();
    for n in lo + 1..=hi {
        d.insert(n.to_string(), matrix_to_json(&c.d(n)));
    }
    json!({
        "schema": crate::error::SCHEMA_TAG,
        "p": c.field().p(),
        "lo": lo,
        "hi": hi,
        "dims": (lo..=hi).map(|n| c.dim(n)).collect::<Vec<_>>(),
        "d": d,
    })
}

pub fn complex_from_json(v: &Value) -> Result<ChainComplex> {
    crate::error::check_schema_tag(v)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::schema("", "chain complex must be an object"))?;
    let p = obj
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::schema("p", "missing prime"))?;
    let f = Fp::new(p as u32).map_err(|e| Error::schema("p", e.to_string()))?;
    let lo = obj
        .get("lo")
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::schema("lo", "missing integer"))?;
    let hi = obj
        .get("hi")
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::schema("hi", "missing integer"))?;
    let dims: Vec<usize> = obj
        .get("dims")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::schema("dims", "missing array"))?
        .iter()
        .enumerate()
        .map(|(i, d)| {
            d.as_u64()
                .map(|d| d as usize)
                .ok_or_else(|| Error::schema(format!("dims[{i}]"), "expected a natural number"))
        })
        .collect::<Result<_>>()?;
    if hi < lo {
        return Ok(ChainComplex::zero(f));
    }
    if dims.len() as i64 != hi - lo + 1 {
        return Err(Error::schema("dims", format!("expected {} entries", hi - lo + 1)));
    }
    let empty = Map::new();
    let d = match obj.get("d") {
        Some(Value::Object(m)) => m,
        None => &empty,
        Some(_) => return Err(Error::schema("d", "must be an object keyed by degree")),
    };
    for k in d.keys() {
        match k.parse::<i64>() {
            Ok(n) if n > lo && n <= hi => {}
            _ => return Err(Error::schema(format!("d.{k}"), "degree key out of range")),
        }
    }
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let (r, c) = (dims[(n - 1 - lo) as usize], dims[(n - lo) as usize]);
        diffs.push(match d.get(&n.to_string()) {
            Some(m) => matrix_from_json(f, r, c, m, &format!("d.{n}"))?,
            None => Matrix::zeros(f, r, c),
        });
    }
    ChainComplex::new(f, lo, dims, diffs).map_err(|e| Error::schema("d", e.to_string()))
}

/// `{"src": complex, "dst": complex, "components": {"n": rows}}`.
pub fn map_to_json(m: &ChainMap) -> Value {
    let mut comps = Map::new();
    for (n, c) in m.components() {
        if !c.is_empty() {
            comps.insert(n.to_string(), matrix_to_json(&c));
        }
    }
    json!({
        "schema": crate::error::SCHEMA_TAG,
        "src": complex_to_json(m.src()),
        "dst": complex_to_json(m.dst()),
        "components": comps,
    })
}

pub fn map_from_json(v: &Value) -> Result<ChainMap> {
    crate::error::check_schema_tag(v)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::schema("", "chain map must be an object"))?;
    let src = complex_from_json(obj.get("src").ok_or_else(|| Error::schema("src", "missing"))?)
        .map_err(|e| prefix("src", e))?;
    let dst = complex_from_json(obj.get("dst").ok_or_else(|| Error::schema("dst", "missing"))?)
        .map_err(|e| prefix("dst", e))?;
    if src.field() != dst.field() {
        return Err(Error::schema("dst.p", "field differs from src"));
    }
    let f = src.field();
    let mut comps = BTreeMap::new();
    if let Some(c) = obj.get("components") {
        let c = c
            .as_object()
            .ok_or_else(|| Error::schema("components", "must be an object keyed by degree"))?;
        for (k, m) in c {
            let n: i64 = k
                .parse()
                .map_err(|_| Error::schema(format!("components.{k}"), "degree key must be an integer"))?;
            comps.insert(
                n,
                matrix_from_json(f, dst.dim(n), src.dim(n), m, &format!("components.{k}"))?,
            );
        }
    }
    ChainMap::new(src, dst, comps).map_err(|e| Error::schema("components", e.to_string()))
}

fn prefix(p: &str, e: Error) -> Error {
    match e {
        Error::Schema { path, message } if path.is_empty() => Error::schema(p, message),
        Error::Schema { path, message } => Error::schema(format!("{p}.{path}"), message),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let f = Fp::new(3).unwrap();
        let j = ChainComplex::interval_j(f);
        assert_eq!(complex_from_json(&complex_to_json(&j)).unwrap(), j);
        let m = ChainMap::identity(&j);
        assert_eq!(map_from_json(&map_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn reports_location() {
        let v = json!({"p": 2, "lo": 0, "hi": 1, "dims": [1, 1], "d": {"1": [[1, 0]]}});
        match complex_from_json(&v) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "d.1[0]"),
            other => panic!("{other:?}"),
        }
        let v = json!({"p": 4, "lo": 0, "hi": 0, "dims": [1]});
        assert!(matches!(complex_from_json(&v), Err(Error::Schema { .. })));
    }
}
