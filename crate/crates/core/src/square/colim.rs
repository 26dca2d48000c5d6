use std::collections::BTreeMap;

use super::SquareStructure;
use crate::chain::{pushout, ChainComplex, ChainMap};
use crate::cset::{CubicalMap, CubicalSet};
use crate::cube::CubeMor;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Quotient};

/// `Q_A(X) = colim_{□[n] -> A} Q_n(X)` presented as a cokernel of
/// `⊕_a Q_{dim a}(X)` over the nondegenerate cells `a` of `A`.
#[derive(Debug, Clone)]
pub struct QColimit {
    pub object: ChainComplex,
    /// `Q_{dim a}(X) -> Q_A(X)` for each cell `a`.
    pub cocone: Vec<ChainMap>,
    dims: Vec<usize>,
    offsets: BTreeMap<i64, Vec<usize>>,
    quotients: BTreeMap<i64, Quotient>,
}

impl QColimit {
    /// The map out of the colimit determined by `u_a : Q_{dim a}(X) -> Z`.
    pub fn induced(&self, z: &ChainComplex, legs: &[ChainMap]) -> ChainMap {
        let f = z.field();
        let comps = self
            .quotients
            .iter()
            .map(|(&n, q)| {
                let mut g = Matrix::zeros(f, z.dim(n), q.section.rows());
                for (a, leg) in legs.iter().enumerate() {
                    let c = leg.component(n);
                    if c.cols() > 0 {
                        g.paste(0, self.offsets[&n][a], &c);
                    }
                }
                (n, g.mul(&q.section))
            })
            .collect();
        ChainMap::new(self.object.clone(), z.clone(), comps).expect("legs form a cocone")
    }
}

fn degree_range(x: &ChainComplex, top: usize) -> (i64, i64) {
    match x.support() {
        Some((lo, hi)) => (lo, hi + top as i64),
        None => (0, -1),
    }
}

pub fn q_of_cubical<Q: SquareStructure + ?Sized>(q: &Q, a: &CubicalSet, x: &ChainComplex) -> QColimit {
    let f = q.field();
    let blocks: Vec<ChainComplex> = (0..a.len()).map(|c| q.on_object(a.dim(c), x)).collect();
    let top = if a.is_empty() { 0 } else { a.max_dim() };
    let (lo, hi) = degree_range(x, top);
    let mut offsets = BTreeMap::new();
    let mut totals = BTreeMap::new();
    for n in lo..=hi {
        let mut off = Vec::with_capacity(a.len());
        let mut t = 0;
        for b in &blocks {
            off.push(t);
            t += b.dim(n);
        }
        offsets.insert(n, off);
        totals.insert(n, t);
    }
    // relation columns ι_a Q(δ) u - ι_b Q(η) u
    let mut rels: BTreeMap<i64, Vec<Vec<u32>>> = BTreeMap::new();
    for c in 0..a.len() {
        let d = a.dim(c);
        for k in 0..d {
            for i in 0..2u8 {
                let face = a.face(c, k, i);
                let delta = q.on_cube_mor(&CubeMor::coface(d - 1, k, i).expect("in range"), x);
                let eta = q.on_cube_mor(&face.eta, x);
                for n in lo..=hi {
                    let (dm, em) = (delta.component(n), eta.component(n));
                    for col in 0..dm.cols() {
                        let mut v = vec![0; totals[&n]];
                        for r in 0..dm.rows() {
                            v[offsets[&n][c] + r] = f.add(v[offsets[&n][c] + r], dm.get(r, col));
                        }
                        for r in 0..em.rows() {
                            let idx = offsets[&n][face.cell] + r;
                            v[idx] = f.sub(v[idx], em.get(r, col));
                        }
                        rels.entry(n).or_default().push(v);
                    }
                }
            }
        }
    }
    let mut quotients = BTreeMap::new();
    for n in lo..=hi {
        let t = totals[&n];
        let cols = rels.remove(&n).unwrap_or_default();
        let mut m = Matrix::zeros(f, t, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for (r, &e) in v.iter().enumerate() {
                if e != 0 {
                    m.set(r, j, e);
                }
            }
        }
        quotients.insert(n, Quotient::new(f, t, &m));
    }
    let ambient_d = |n: i64| {
        let mut m = Matrix::zeros(f, totals[&(n - 1)], totals[&n]);
        for (b, blk) in blocks.iter().enumerate() {
            let d = blk.d(n);
            if !d.is_empty() {
                m.paste(offsets[&(n - 1)][b], offsets[&n][b], &d);
            }
        }
        m
    };
    let object = if hi < lo {
        ChainComplex::zero(f)
    } else {
        ChainComplex::new(
            f,
            lo,
            (lo..=hi).map(|n| quotients[&n].dim()).collect(),
            (lo + 1..=hi)
                .map(|n| quotients[&(n - 1)].proj.mul(&ambient_d(n)).mul(&quotients[&n].section))
                .collect(),
        )
        .expect("quotient by a subcomplex")
    };
    let cocone = blocks
        .iter()
        .enumerate()
        .map(|(b, blk)| {
            let comps = (lo..=hi)
                .map(|n| {
                    let cols: Vec<usize> = (offsets[&n][b]..offsets[&n][b] + blk.dim(n)).collect();
                    (n, quotients[&n].proj.select_cols(&cols))
                })
                .collect();
            ChainMap::new(blk.clone(), object.clone(), comps).expect("cocone leg")
        })
        .collect();
    QColimit {
        object,
        cocone,
        dims: (0..a.len()).map(|c| a.dim(c)).collect(),
        offsets,
        quotients,
    }
}

/// `Q_i(X) : Q_A(X) -> Q_B(X)` for a cubical map `i : A -> B`.
pub fn q_on_cubical_map<Q: SquareStructure + ?Sized>(
    q: &Q,
    i: &CubicalMap,
    x: &ChainComplex,
    qa: &QColimit,
    qb: &QColimit,
) -> ChainMap {
    let legs: Vec<ChainMap> = i
        .assign()
        .iter()
        .map(|img| {
            let eta = q.on_cube_mor(&img.eta, x);
            qb.cocone[img.cell].compose(&eta).expect("matching ends")
        })
        .collect();
    qa.induced(&qb.object, &legs)
}

/// `Q_A(f) : Q_A(X) -> Q_A(Y)` for a chain map `f : X -> Y`.
pub fn q_on_map<Q: SquareStructure + ?Sized>(q: &Q, f: &ChainMap, qx: &QColimit, qy: &QColimit) -> ChainMap {
    let legs: Vec<ChainMap> = qx
        .dims
        .iter()
        .enumerate()
        .map(|(a, &d)| qy.cocone[a].compose(&q.on_map(d, f)).expect("matching ends"))
        .collect();
    qx.induced(&qy.object, &legs)
}

/// The pushout-product `Q_B(X) ⊔_{Q_A(X)} Q_A(Y) -> Q_B(Y)`.
#[derive(Debug, Clone)]
pub struct PushoutProduct {
    pub map: ChainMap,
}

pub fn pushout_product<Q: SquareStructure + ?Sized>(q: &Q, i: &CubicalMap, f: &ChainMap) -> Result<PushoutProduct> {
    if q.field() != f.field() {
        return Err(Error::FieldMismatch(q.field().p(), f.field().p()));
    }
    let (a, b) = (i.src(), i.dst());
    let (x, y) = (f.src(), f.dst());
    let qax = q_of_cubical(q, a, x);
    let qay = q_of_cubical(q, a, y);
    let qbx = q_of_cubical(q, b, x);
    let qby = q_of_cubical(q, b, y);
    let ix = q_on_cubical_map(q, i, x, &qax, &qbx);
    let iy = q_on_cubical_map(q, i, y, &qay, &qby);
    let fa = q_on_map(q, f, &qax, &qay);
    let fb = q_on_map(q, f, &qbx, &qby);
    let po = pushout(&fa, &ix)?;
    let map = po.induced(&iy, &fb)?;
    Ok(PushoutProduct { map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::{boundary, open_box, representable};
    use crate::field::Fp;
    use crate::square::chain_square;

    #[test]
    fn representable_gives_q_n() {
        let f = Fp::new(3).unwrap();
        let q = chain_square(f);
        let x = ChainComplex::disk(f, 1);
        for n in 0..=2 {
            let c = q_of_cubical(&q, &representable(n), &x);
            let qn = q.on_object(n, &x);
            let dims = |c: &ChainComplex| (-1..=4).map(|k| c.dim(k)).collect::<Vec<_>>();
            assert_eq!(dims(&c.object), dims(&qn));
            // the leg at the top cell is an isomorphism
            let top = (0..representable(n).len()).find(|&a| representable(n).dim(a) == n).unwrap();
            assert!(c.cocone[top].is_iso());
        }
    }

    #[test]
    fn boundaries() {
        let f = Fp::two();
        let q = chain_square(f);
        let x = ChainComplex::unit(f);
        let c = q_of_cubical(&q, &boundary(1).0, &x);
        assert_eq!(c.object.homology_in(0, 1), vec![2, 0]);
        assert_eq!(c.object.total_dim(), 2);
        let c = q_of_cubical(&q, &boundary(2).0, &x);
        assert_eq!(c.object.homology_in(0, 2), vec![1, 1, 0]);
    }

    #[test]
    fn pushout_products_of_examples() {
        let f = Fp::two();
        let q = chain_square(f);
        let z = ChainComplex::zero(f);
        let pt = ChainComplex::unit(f);
        let g = ChainMap::zero(&z, &pt);
        let pp = pushout_product(&q, &boundary(1).1, &g).unwrap();
        assert_eq!(pp.map.src().total_dim(), 2);
        assert!(pp.map.is_cofibration());
        assert!(!pp.map.is_quasi_iso());
        let pp = pushout_product(&q, &open_box(1, 0, 0).unwrap().1, &g).unwrap();
        assert_eq!(pp.map.src().total_dim(), 1);
        assert!(pp.map.is_cofibration() && pp.map.is_quasi_iso());
        // empty into a point: Q_0 of the map itself
        let pp = pushout_product(&q, &boundary(0).1, &g).unwrap();
        assert_eq!(pp.map.src().total_dim(), 0);
        assert!(pp.map.is_cofibration());
    }
}
