use std::collections::HashMap;

use serde_json::{json, Value};

use super::{FiniteCategory, Morphism};
use crate::error::{Error, Result};

/// `{"objects": [..], "morphisms": [{"name","src","dst"}], "identities": [..],
/// "compose": [[g, f, g∘f], ..]}` with every composable pair listed.
pub fn category_to_json(c: &FiniteCategory) -> Value {
    let name = |f: usize| c.morphisms()[f].name.clone();
    let mut compose = Vec::new();
    for f in 0..c.num_morphisms() {
        for &g in c.outs(c.dst(f)) {
            compose.push(json!([name(g), name(f), name(c.compose(g, f))]));
        }
    }
    json!({
        "schema": crate::error::SCHEMA_TAG,
        "objects": c.objects(),
        "morphisms": c.morphisms().iter().map(|m| json!({
            "name": m.name,
            "src": c.objects()[m.src],
            "dst": c.objects()[m.dst],
        })).collect::<Vec<_>>(),
        "identities": (0..c.num_objects()).map(|a| name(c.id(a))).collect::<Vec<_>>(),
        "compose": compose,
    })
}

fn str_at<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::schema(path, "expected a string"))
}

fn arr_at<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::schema(path, "expected an array"))
}

pub fn category_from_json(v: &Value) -> Result<FiniteCategory> {
    crate::error::check_schema_tag(v)?;
    let objects: Vec<String> = arr_at(&v["objects"], "objects")?
        .iter()
        .enumerate()
        .map(|(i, o)| str_at(o, &format!("objects[{i}]")).map(String::from))
        .collect::<Result<_>>()?;
    let obj_index: HashMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
    let mut mors = Vec::new();
    for (i, m) in arr_at(&v["morphisms"], "morphisms")?.iter().enumerate() {
        let p = format!("morphisms[{i}]");
        let name = str_at(&m["name"], &format!("{p}.name"))?.to_string();
        let end = |k: &str| -> Result<usize> {
            let s = str_at(&m[k], &format!("{p}.{k}"))?;
            obj_index
                .get(s)
                .copied()
                .ok_or_else(|| Error::schema(&format!("{p}.{k}"), &format!("unknown object `{s}`")))
        };
        mors.push(Morphism {
            name,
            src: end("src")?,
            dst: end("dst")?,
        });
    }
    let mor_index: HashMap<String, usize> = mors.iter().enumerate().map(|(i, m)| (m.name.clone(), i)).collect();
    if mor_index.len() != mors.len() {
        return Err(Error::schema("morphisms", "duplicate morphism names"));
    }
    let lookup = |s: &str, p: &str| {
        mor_index
            .get(s)
            .copied()
            .ok_or_else(|| Error::schema(p, &format!("unknown morphism `{s}`")))
    };
    let ids = arr_at(&v["identities"], "identities")?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let p = format!("identities[{i}]");
            lookup(str_at(x, &p)?, &p)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = HashMap::new();
    for (i, t) in arr_at(&v["compose"], "compose")?.iter().enumerate() {
        let p = format!("compose[{i}]");
        let t = arr_at(t, &p)?;
        if t.len() != 3 {
            return Err(Error::schema(&p, "expected [g, f, g∘f]"));
        }
        let g = lookup(str_at(&t[0], &format!("{p}[0]"))?, &format!("{p}[0]"))?;
        let f = lookup(str_at(&t[1], &format!("{p}[1]"))?, &format!("{p}[1]"))?;
        let h = lookup(str_at(&t[2], &format!("{p}[2]"))?, &format!("{p}[2]"))?;
        table.insert((g, f), h);
    }
    let mut missing = None;
    let c = FiniteCategory::new_unchecked(objects, mors.clone(), ids.clone(), |g, f| {
        if ids.contains(&g) {
            return f;
        }
        if ids.contains(&f) {
            return g;
        }
        *table.get(&(g, f)).unwrap_or_else(|| {
            missing.get_or_insert((g, f));
            &usize::MAX
        })
    });
    if let Some((g, f)) = missing {
        return Err(Error::schema(
            "compose",
            &format!("missing composite of `{}` after `{}`", mors[g].name, mors[f].name),
        ));
    }
    let c = c?;
    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        for c in [FiniteCategory::ordinal(2), FiniteCategory::cyclic_group(3), FiniteCategory::span()] {
            assert_eq!(category_from_json(&category_to_json(&c)).unwrap(), c);
        }
    }

    #[test]
    fn missing_composite_is_located() {
        let mut v = category_to_json(&FiniteCategory::ordinal(2));
        v["compose"].as_array_mut().unwrap().retain(|t| t[0] != "1<2" || t[1] != "0<1");
        let e = category_from_json(&v).unwrap_err();
        assert!(e.to_string().contains("compose"), "{e}");
        let mut v = category_to_json(&FiniteCategory::ordinal(1));
        v["morphisms"][1]["dst"] = json!("7");
        let e = category_from_json(&v).unwrap_err();
        assert!(e.to_string().contains("morphisms[1].dst"), "{e}");
    }
}
