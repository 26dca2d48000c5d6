//! Basis-indexed JSON for dg algebras and coalgebras.
//!
//! ```json
//! {"p": 2, "degrees": [0, 0], "d": [], "products": [[0, 0, 0, 1], ...],
//!  "unit": [[0, 1]], "augmentation": [1, 0]}
//! ```
//! `degrees` is sorted; `d` lists `[source, target, coefficient]`,
//! `products` lists `[a, b, k, c]` for `e_a e_b ∋ c e_k`, and a coalgebra
//! lists `coproducts` as `[g, a, b, c]` for `Δe_g ∋ c e_a ⊗ e_b`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{collect, complex_from_columns, push, DGAlgebra, DGCoalgebra, GradedBasis, SVec, Term};
use crate::error::{Error, Result};
use crate::field::Fp;

fn ints(v: &Value, path: &str, arity: usize) -> Result<Vec<Vec<i64>>> {
    let arr = v.as_array().ok_or_else(|| Error::schema(path, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, t)| {
            let p = format!("{path}[{i}]");
            let t = t.as_array().ok_or_else(|| Error::schema(&p, "expected an array"))?;
            if t.len() != arity {
                return Err(Error::schema(&p, format!("expected {arity} entries, found {}", t.len())));
            }
            t.iter()
                .enumerate()
                .map(|(j, x)| x.as_i64().ok_or_else(|| Error::schema(format!("{p}[{j}]"), "expected an integer")))
                .collect()
        })
        .collect()
}

fn index(x: i64, n: usize, path: &str) -> Result<usize> {
    if x < 0 || x as usize >= n {
        return Err(Error::schema(path, format!("basis index {x} out of range 0..{n}")));
    }
    Ok(x as usize)
}

struct Common {
    f: Fp,
    basis: GradedBasis,
    diff: Vec<SVec>,
}

fn common(v: &Value) -> Result<Common> {
    let obj = v.as_object().ok_or_else(|| Error::schema("", "expected an object"))?;
    let p = obj.get("p").and_then(Value::as_u64).ok_or_else(|| Error::schema("p", "missing prime"))?;
    let f = Fp::new(p as u32).map_err(|e| Error::schema("p", e.to_string()))?;
    let degrees: Vec<i64> = obj
        .get("degrees")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::schema("degrees", "missing array"))?
        .iter()
        .enumerate()
        .map(|(i, d)| d.as_i64().ok_or_else(|| Error::schema(format!("degrees[{i}]"), "expected an integer")))
        .collect::<Result<_>>()?;
    if let Some(i) = degrees.windows(2).position(|w| w[0] > w[1]) {
        return Err(Error::schema(format!("degrees[{}]", i + 1), "degrees must be sorted"));
    }
    let n = degrees.len();
    let basis = GradedBasis::from_degrees(degrees);
    let mut acc = vec![BTreeMap::new(); n];
    for (i, t) in ints(obj.get("d").unwrap_or(&json!([])), "d", 3)?.into_iter().enumerate() {
        let p = format!("d[{i}]");
        let (s, tg) = (index(t[0], n, &p)?, index(t[1], n, &p)?);
        if basis.degree(tg) + 1 != basis.degree(s) {
            return Err(Error::schema(p, "differential must lower degree by one"));
        }
        push(f, &mut acc[s], tg, f.from_i64(t[2]));
    }
    Ok(Common {
        f,
        basis,
        diff: acc.into_iter().map(collect).collect(),
    })
}

fn diff_json(f: Fp, diff: &[SVec]) -> Vec<Value> {
    diff.iter()
        .enumerate()
        .flat_map(|(g, d)| d.iter().map(move |&(t, c)| json!([g, t, f.to_signed(c)])))
        .collect()
}

pub fn algebra_to_json(a: &DGAlgebra) -> Value {
    let f = a.field();
    let n = a.len();
    let mut products = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for (k, c) in a.product(x, y) {
                products.push(json!([x, y, k, f.to_signed(c)]));
            }
        }
    }
    let diff: Vec<SVec> = (0..n).map(|g| a.d_basis(g).clone()).collect();
    json!({
        "schema": crate::error::SCHEMA_TAG,
        "p": f.p(),
        "degrees": (0..n).map(|g| a.degree(g)).collect::<Vec<_>>(),
        "d": diff_json(f, &diff),
        "products": products,
        "unit": a.unit().iter().map(|&(g, c)| json!([g, f.to_signed(c)])).collect::<Vec<_>>(),
        "augmentation": a.augmentation().iter().map(|&c| f.to_signed(c)).collect::<Vec<_>>(),
    })
}

pub fn algebra_from_json(v: &Value) -> Result<DGAlgebra> {
    crate::error::check_schema_tag(v)?;
    let Common { f, basis, diff } = common(v)?;
    let n = basis.len();
    let complex = complex_from_columns(f, &basis, &diff, true)?;
    let mut products: BTreeMap<(usize, usize), BTreeMap<usize, u32>> = BTreeMap::new();
    for (i, t) in ints(v.get("products").unwrap_or(&json!([])), "products", 4)?.into_iter().enumerate() {
        let p = format!("products[{i}]");
        let (a, b, k) = (index(t[0], n, &p)?, index(t[1], n, &p)?, index(t[2], n, &p)?);
        push(f, products.entry((a, b)).or_default(), k, f.from_i64(t[3]));
    }
    let mut unit = BTreeMap::new();
    for (i, t) in ints(v.get("unit").unwrap_or(&json!([])), "unit", 2)?.into_iter().enumerate() {
        push(f, &mut unit, index(t[0], n, &format!("unit[{i}]"))?, f.from_i64(t[1]));
    }
    let aug = v
        .get("augmentation")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::schema("augmentation", "missing array"))?;
    if aug.len() != n {
        return Err(Error::schema("augmentation", format!("expected {n} entries, found {}", aug.len())));
    }
    let augmentation = aug
        .iter()
        .enumerate()
        .map(|(i, x)| x.as_i64().map(|x| f.from_i64(x)).ok_or_else(|| Error::schema(format!("augmentation[{i}]"), "expected an integer")))
        .collect::<Result<_>>()?;
    let products = products.into_iter().map(|(k, m)| (k, collect(m))).collect();
    DGAlgebra::new(complex, products, collect(unit), augmentation)
}

pub fn coalgebra_to_json(c: &DGCoalgebra) -> Value {
    let f = c.field();
    let n = c.len();
    let diff: Vec<SVec> = (0..n).map(|g| c.d_basis(g).clone()).collect();
    let coproducts: Vec<Value> = (0..n)
        .flat_map(|g| c.coproduct(g).iter().map(move |&(a, b, k)| json!([g, a, b, f.to_signed(k)])))
        .collect();
    json!({
        "schema": crate::error::SCHEMA_TAG,
        "p": f.p(),
        "degrees": (0..n).map(|g| c.degree(g)).collect::<Vec<_>>(),
        "d": diff_json(f, &diff),
        "coproducts": coproducts,
        "counit": c.counit().iter().map(|&x| f.to_signed(x)).collect::<Vec<_>>(),
        "coaugmentation": c.coaugmentation(),
        "weights": (0..n).map(|g| c.weight(g)).collect::<Vec<_>>(),
    })
}

pub fn coalgebra_from_json(v: &Value) -> Result<DGCoalgebra> {
    crate::error::check_schema_tag(v)?;
    let Common { f, basis, diff } = common(v)?;
    let n = basis.len();
    let complex = complex_from_columns(f, &basis, &diff, true)?;
    let mut acc: Vec<BTreeMap<(usize, usize), u32>> = vec![BTreeMap::new(); n];
    for (i, t) in ints(v.get("coproducts").unwrap_or(&json!([])), "coproducts", 4)?.into_iter().enumerate() {
        let p = format!("coproducts[{i}]");
        let (g, a, b) = (index(t[0], n, &p)?, index(t[1], n, &p)?, index(t[2], n, &p)?);
        let e = acc[g].entry((a, b)).or_insert(0);
        *e = f.add(*e, f.from_i64(t[3]));
    }
    let coproducts: Vec<Vec<Term>> = acc
        .into_iter()
        .map(|m| m.into_iter().filter(|&(_, c)| c != 0).map(|((a, b), c)| (a, b, c)).collect())
        .collect();
    let vec_of = |key: &str| -> Result<Vec<i64>> {
        let arr = v.get(key).and_then(Value::as_array).ok_or_else(|| Error::schema(key, "missing array"))?;
        if arr.len() != n {
            return Err(Error::schema(key, format!("expected {n} entries, found {}", arr.len())));
        }
        arr.iter()
            .enumerate()
            .map(|(i, x)| x.as_i64().ok_or_else(|| Error::schema(format!("{key}[{i}]"), "expected an integer")))
            .collect()
    };
    let counit = vec_of("counit")?.into_iter().map(|x| f.from_i64(x)).collect();
    let weights = match v.get("weights") {
        Some(_) => vec_of("weights")?
            .into_iter()
            .map(|w| usize::try_from(w).map_err(|_| Error::schema("weights", "weights must be nonnegative")))
            .collect::<Result<_>>()?,
        None => vec![0; n],
    };
    let u = v
        .get("coaugmentation")
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::schema("coaugmentation", "missing integer"))?;
    let u = index(u, n, "coaugmentation")?;
    DGCoalgebra::new(complex, coproducts, counit, u, weights)
}
