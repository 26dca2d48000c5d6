use serde_json::{json, Map, Value};

use super::{Cell, CubicalSet, DegCell};
use crate::cube::CubeMor;
use crate::error::{Error, Result};

/// `{"cells": [{"id", "dim"}], "faces": {"id:k:i": {"eta": [...], "cell": "id"}}}`.
/// A face `eta` has source dimension `dim - 1` of the cell it belongs to.
pub fn cset_to_json(x: &CubicalSet) -> Value {
    let cells: Vec<Value> = x
        .cells()
        .iter()
        .map(|c| json!({"id": c.id, "dim": c.dim}))
        .collect();
    let mut faces = Map::new();
    for (c, cell) in x.cells().iter().enumerate() {
        for k in 0..cell.dim {
            for i in 0..2u8 {
                let f = x.face(c, k, i);
                faces.insert(
                    format!("{}:{k}:{i}", cell.id),
                    json!({"eta": f.eta.to_json(), "cell": x.cells()[f.cell].id}),
                );
            }
        }
    }
    json!({"schema": crate::error::SCHEMA_TAG, "cells": cells, "faces": faces})
}

pub fn cset_from_json(v: &Value) -> Result<CubicalSet> {
    crate::error::check_schema_tag(v)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::schema("", "cubical set must be an object"))?;
    let raw_cells = obj
        .get("cells")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::schema("cells", "missing array"))?;
    let mut cells = Vec::with_capacity(raw_cells.len());
    for (i, c) in raw_cells.iter().enumerate() {
        let id = c
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::schema(format!("cells[{i}].id"), "missing string"))?;
        let dim = c
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::schema(format!("cells[{i}].dim"), "missing natural number"))?;
        cells.push(Cell {
            id: id.to_string(),
            dim: dim as usize,
        });
    }
    let lookup = |id: &str| cells.iter().position(|c| c.id == id);
    let empty = Map::new();
    let raw_faces = match obj.get("faces") {
        Some(Value::Object(m)) => m,
        None => &empty,
        Some(_) => return Err(Error::schema("faces", "must be an object")),
    };
    let mut faces: Vec<Vec<Option<DegCell>>> = cells.iter().map(|c| vec![None; 2 * c.dim]).collect();
    for (key, f) in raw_faces {
        let path = format!("faces.{key}");
        let parts: Vec<&str> = key.rsplitn(3, ':').collect();
        if parts.len() != 3 {
            return Err(Error::schema(&path, "key must be `cellid:k:i`"));
        }
        let (id, k, i) = (parts[2], parts[1], parts[0]);
        let c = lookup(id).ok_or_else(|| Error::schema(&path, format!("unknown cell `{id}`")))?;
        let k: usize = k.parse().map_err(|_| Error::schema(&path, "bad face position"))?;
        let i: usize = match i {
            "0" => 0,
            "1" => 1,
            _ => return Err(Error::schema(&path, "face end must be 0 or 1")),
        };
        if k >= cells[c].dim {
            return Err(Error::schema(&path, "face position out of range"));
        }
        let tgt = f
            .get("cell")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::schema(format!("{path}.cell"), "missing string"))?;
        let t = lookup(tgt).ok_or_else(|| Error::schema(format!("{path}.cell"), format!("unknown cell `{tgt}`")))?;
        let eta_v = f
            .get("eta")
            .ok_or_else(|| Error::schema(format!("{path}.eta"), "missing"))?;
        let eta = CubeMor::from_json(cells[c].dim - 1, eta_v).map_err(|e| match e {
            Error::Schema { message, .. } => Error::schema(format!("{path}.eta"), message),
            other => other,
        })?;
        faces[c][2 * k + i] = Some(DegCell { eta, cell: t });
    }
    let mut table = Vec::with_capacity(cells.len());
    for (c, row) in faces.into_iter().enumerate() {
        let mut r = Vec::with_capacity(row.len());
        for (j, f) in row.into_iter().enumerate() {
            r.push(f.ok_or_else(|| {
                Error::schema(format!("faces.{}:{}:{}", cells[c].id, j / 2, j % 2), "missing face")
            })?);
        }
        table.push(r);
    }
    CubicalSet::new(cells, table).map_err(|e| Error::schema("faces", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::{boundary, representable, day_tensor};

    #[test]
    fn roundtrip() {
        for x in [representable(2), boundary(3).0, day_tensor(&boundary(1).0, &representable(1))] {
            let back = cset_from_json(&cset_to_json(&x)).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn missing_face_is_located() {
        let mut v = cset_to_json(&representable(1));
        v["faces"].as_object_mut().unwrap().remove("x:0:1");
        match cset_from_json(&v) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "faces.x:0:1"),
            other => panic!("{other:?}"),
        }
    }
}
