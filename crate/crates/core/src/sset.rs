//! Finite simplicial sets, truncated at a top dimension, presented by
//! nondegenerate simplices and face tables in Eilenberg–Zilber normal form.

use std::collections::HashMap;
use std::hash::Hash;

use crate::chain::sparse::{SparseColumn, SparseComplex};
use crate::error::{Error, Result};
use crate::field::Fp;

/// A possibly degenerate simplex `eta^* y`: `eta : [n] -> [dim]` is a monotone
/// surjection stored as its value list, and `y` is nondegenerate of
/// dimension `dim`, numbered `idx` within that dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SDeg {
    pub eta: Vec<usize>,
    pub dim: usize,
    pub idx: usize,
}

impl SDeg {
    pub fn nondegenerate(dim: usize, idx: usize) -> Self {
        Self {
            eta: (0..=dim).collect(),
            dim,
            idx,
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.eta.len() == self.dim + 1
    }

    /// Dimension of the simplex this denotes.
    pub fn total_dim(&self) -> usize {
        self.eta.len() - 1
    }
}

/// Split a monotone list `c : [m] -> [k]` into `(surjection, image)`.
pub fn epi_mono<T: Copy + PartialEq>(c: &[T]) -> (Vec<usize>, Vec<T>) {
    let mut image: Vec<T> = c.to_vec();
    image.dedup();
    let mut epi = Vec::with_capacity(c.len());
    let mut r = 0;
    for (i, &v) in c.iter().enumerate() {
        if i > 0 && v != c[i - 1] {
            r += 1;
        }
        epi.push(r);
    }
    (epi, image)
}

/// Monotone surjections `[n] -> [k]` as value lists.
pub fn monotone_surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().expect("nonempty");
        if cur.len() == n + 1 {
            if last == k {
                out.push(cur.clone());
            }
            return;
        }
        let left = n + 1 - cur.len();
        if last + left > k {
            cur.push(last);
            rec(n, k, cur, out);
            cur.pop();
        }
        if last < k {
            cur.push(last + 1);
            rec(n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(n, k, &mut vec![0], &mut out);
    }
    out
}

/// A source of nondegenerate simplices with normalized faces.
pub trait SimplexSource {
    type Key: Clone + Eq + Hash;
    fn nondegenerate(&self, n: usize) -> Vec<Self::Key>;
    /// The `i`-th face of a nondegenerate `n`-simplex as `(eta, key)` with
    /// `key` nondegenerate of dimension `eta.last() + 1`.
    fn face(&self, key: &Self::Key, n: usize, i: usize) -> (Vec<usize>, Self::Key);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialSet {
    cap: usize,
    counts: Vec<usize>,
    /// `faces[n][idx][i]` for `n >= 1`.
    faces: Vec<Vec<Vec<SDeg>>>,
}

/// A simplicial set together with the keys of its nondegenerate simplices.
#[derive(Debug, Clone)]
pub struct Indexed<K> {
    pub set: SimplicialSet,
    pub keys: Vec<Vec<K>>,
    pub index: Vec<HashMap<K, usize>>,
}

impl<K: Clone + Eq + Hash> Indexed<K> {
    pub fn lookup(&self, n: usize, key: &K) -> Option<usize> {
        self.index.get(n)?.get(key).copied()
    }
}

impl SimplicialSet {
    /// Build from raw tables and validate the simplicial identities.
    pub fn new(cap: usize, counts: Vec<usize>, faces: Vec<Vec<Vec<SDeg>>>) -> Result<Self> {
        let s = Self { cap, counts, faces };
        s.validate()?;
        Ok(s)
    }

    /// Enumerate a source up to dimension `cap`.
    pub fn build<S: SimplexSource>(src: &S, cap: usize) -> Result<Indexed<S::Key>> {
        let mut keys: Vec<Vec<S::Key>> = Vec::new();
        let mut index: Vec<HashMap<S::Key, usize>> = Vec::new();
        for n in 0..=cap {
            let ks = src.nondegenerate(n);
            let map: HashMap<S::Key, usize> = ks.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
            if map.len() != ks.len() {
                return Err(Error::InvalidSimplicialSet(format!("duplicate simplices in dimension {n}")));
            }
            keys.push(ks);
            index.push(map);
        }
        let mut faces = vec![Vec::new()];
        for n in 1..=cap {
            let mut fs = Vec::with_capacity(keys[n].len());
            for k in &keys[n] {
                let mut row = Vec::with_capacity(n + 1);
                for i in 0..=n {
                    let (eta, fk) = src.face(k, n, i);
                    if eta.len() != n {
                        return Err(Error::InvalidSimplicialSet(format!(
                            "face {i} of a {n}-simplex has {} vertices",
                            eta.len()
                        )));
                    }
                    let dim = eta.last().map_or(0, |&v| v);
                    let idx = *index
                        .get(dim)
                        .and_then(|m| m.get(&fk))
                        .ok_or_else(|| Error::InvalidSimplicialSet(format!("face {i} of a {n}-simplex is unknown")))?;
                    row.push(SDeg { eta, dim, idx });
                }
                fs.push(row);
            }
            faces.push(fs);
        }
        let counts = keys.iter().map(Vec::len).collect();
        let set = SimplicialSet::new(cap, counts, faces)?;
        Ok(Indexed { set, keys, index })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Number of nondegenerate simplices per dimension.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts.get(n).copied().unwrap_or(0)
    }

    pub fn face(&self, n: usize, idx: usize, i: usize) -> &SDeg {
        &self.faces[n][idx][i]
    }

    /// Apply a monotone map `theta : [m] -> [n]` to `x`, an `n`-simplex.
    pub fn act(&self, theta: &[usize], x: &SDeg) -> SDeg {
        let c: Vec<usize> = theta.iter().map(|&t| x.eta[t]).collect();
        self.act_on_nondeg(&c, x.dim, x.idx)
    }

    fn act_on_nondeg(&self, c: &[usize], dim: usize, idx: usize) -> SDeg {
        let mut present = vec![false; dim + 1];
        for &v in c {
            present[v] = true;
        }
        match (0..=dim).rev().find(|&j| !present[j]) {
            None => SDeg {
                eta: c.to_vec(),
                dim,
                idx,
            },
            Some(j) => {
                let c2: Vec<usize> = c.iter().map(|&v| if v > j { v - 1 } else { v }).collect();
                let y = &self.faces[dim][idx][j];
                self.act(&c2, y)
            }
        }
    }

    /// All `n`-simplices, degenerate ones included, as `(eta, y)` pairs.
    pub fn elements(&self, n: usize) -> Vec<SDeg> {
        let mut out = Vec::new();
        for k in 0..=n.min(self.cap) {
            let surj = monotone_surjections(n, k);
            for idx in 0..self.count(k) {
                for eta in &surj {
                    out.push(SDeg { eta: eta.clone(), dim: k, idx });
                }
            }
        }
        out
    }

    /// `d_i` on an arbitrary simplex.
    pub fn face_of(&self, x: &SDeg, i: usize) -> SDeg {
        let n = x.total_dim();
        let theta: Vec<usize> = (0..n).map(|k| if k < i { k } else { k + 1 }).collect();
        self.act(&theta, x)
    }

    pub fn validate(&self) -> Result<()> {
        if self.counts.len() != self.cap + 1 || self.faces.len() != self.cap + 1 {
            return Err(Error::InvalidSimplicialSet("table sizes disagree with cap".into()));
        }
        for n in 1..=self.cap {
            if self.faces[n].len() != self.counts[n] {
                return Err(Error::InvalidSimplicialSet(format!("face table size in dimension {n}")));
            }
            for (idx, row) in self.faces[n].iter().enumerate() {
                if row.len() != n + 1 {
                    return Err(Error::InvalidSimplicialSet(format!("simplex {n}:{idx} has {} faces", row.len())));
                }
                for f in row {
                    let ok = f.total_dim() + 1 == n
                        && f.dim < n
                        && f.idx < self.count(f.dim)
                        && f.eta.first() == Some(&0)
                        && f.eta.last() == Some(&f.dim)
                        && f.eta.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1);
                    if !ok {
                        return Err(Error::InvalidSimplicialSet(format!("malformed face of {n}:{idx}")));
                    }
                }
                if n >= 2 {
                    let x = SDeg::nondegenerate(n, idx);
                    for j in 1..=n {
                        for i in 0..j {
                            let a = self.face_of(&self.face_of(&x, j), i);
                            let b = self.face_of(&self.face_of(&x, i), j - 1);
                            if a != b {
                                return Err(Error::InvalidSimplicialSet(format!(
                                    "d_{i} d_{j} != d_{} d_{i} on {n}:{idx}",
                                    j - 1
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Normalized chains: nondegenerate simplices, `∂ = Σ (-1)^i d_i` with
    /// degenerate faces dropped.
    pub fn chains(&self, field: Fp) -> SparseComplex {
        let mut d = vec![Vec::new()];
        for n in 1..=self.cap {
            let cols = self.faces[n]
                .iter()
                .map(|row| {
                    let mut col: SparseColumn = Vec::new();
                    for (i, f) in row.iter().enumerate() {
                        if f.is_nondegenerate() {
                            col.push((f.idx, field.sign(i)));
                        }
                    }
                    col
                })
                .collect();
            d.push(cols);
        }
        SparseComplex::new(field, self.counts.clone(), d)
    }

    /// `dim H_n` for `n < cap`; the top dimension is excluded because its
    /// cycles are not cut down by the missing `(cap+1)`-simplices.
    pub fn homology(&self, field: Fp) -> Vec<usize> {
        if self.cap == 0 {
            return Vec::new();
        }
        self.chains(field).homology(self.cap - 1)
    }

    /// Opposite simplicial set: vertex order reversed, `d_i ↦ d_{n-i}`.
    pub fn opposite(&self) -> SimplicialSet {
        let faces = self
            .faces
            .iter()
            .enumerate()
            .map(|(n, fs)| {
                fs.iter()
                    .map(|row| {
                        (0..row.len())
                            .map(|i| {
                                let f = &row[n - i];
                                let k = f.dim;
                                let eta = f.eta.iter().rev().map(|&v| k - v).collect();
                                SDeg { eta, dim: k, idx: f.idx }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        SimplicialSet {
            cap: self.cap,
            counts: self.counts.clone(),
            faces,
        }
    }
}

/// A simplicial map given on nondegenerate simplices.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    /// `images[n][idx]` is the image of the nondegenerate `n`-simplex `idx`.
    pub images: Vec<Vec<SDeg>>,
}

impl SimplicialMap {
    pub fn validate(&self, src: &SimplicialSet, dst: &SimplicialSet) -> Result<()> {
        for n in 1..=src.cap.min(self.images.len().saturating_sub(1)) {
            for idx in 0..src.count(n) {
                for i in 0..=n {
                    let f = src.face(n, idx, i);
                    let lhs = self.apply(dst, f);
                    let rhs = dst.face_of(&self.images[n][idx], i);
                    if lhs != rhs {
                        return Err(Error::InvalidSimplicialSet(format!("map fails on face {i} of {n}:{idx}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, dst: &SimplicialSet, x: &SDeg) -> SDeg {
        dst.act(&x.eta, &self.images[x.dim][x.idx])
    }

    /// Induced map on normalized chains, one sparse column per source simplex.
    pub fn chain_columns(&self) -> Vec<Vec<SparseColumn>> {
        self.images
            .iter()
            .map(|imgs| {
                imgs.iter()
                    .map(|y| if y.is_nondegenerate() { vec![(y.idx, 1)] } else { Vec::new() })
                    .collect()
            })
            .collect()
    }

    /// Whether the map induces isomorphisms on homology in degrees `<= max`,
    /// decided by acyclicity of the mapping cone. Both sets need
    /// `cap >= max + 2`.
    pub fn is_homology_iso(&self, src: &SimplicialSet, dst: &SimplicialSet, field: Fp, max: usize) -> Result<bool> {
        let need = max + 2;
        if src.cap < need || dst.cap < need {
            return Err(Error::CapExceeded {
                cap: src.cap.min(dst.cap),
                requested: need,
            });
        }
        let cone = SparseComplex::cone(&src.chains(field), &dst.chains(field), &self.chain_columns());
        Ok(cone.homology(max + 1).iter().all(|&h| h == 0))
    }
}

/// The standard simplex `Δ[n]`, truncated at `cap`: nondegenerate
/// `k`-simplices are the strictly increasing vertex lists.
pub struct StandardSimplex(pub usize);

impl SimplexSource for StandardSimplex {
    type Key = Vec<usize>;

    fn nondegenerate(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k + 1 {
                out.push(cur.clone());
                return;
            }
            for v in start..=n {
                cur.push(v);
                rec(n, k, v + 1, cur, out);
                cur.pop();
            }
        }
        rec(self.0, k, 0, &mut cur, &mut out);
        out
    }

    fn face(&self, key: &Vec<usize>, n: usize, i: usize) -> (Vec<usize>, Vec<usize>) {
        let mut k = key.clone();
        k.remove(i);
        ((0..n).collect(), k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_simplex_is_contractible() {
        for n in 0..=4 {
            let s = SimplicialSet::build(&StandardSimplex(n), 5).unwrap().set;
            let h = s.homology(Fp::two());
            assert_eq!(h[0], 1);
            assert!(h[1..].iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn boundary_of_simplex_is_sphere() {
        // Δ[3] truncated at 2 is ∂Δ[3] ≅ S^2
        let s = SimplicialSet::build(&StandardSimplex(3), 2).unwrap().set;
        let c = s.chains(Fp::new(3).unwrap());
        assert_eq!(c.homology(2), vec![1, 0, 1]);
    }

    #[test]
    fn surjection_counts() {
        for n in 0..6 {
            for k in 0..=n {
                assert_eq!(monotone_surjections(n, k).len() as u64, crate::cube::binom(n, k));
            }
        }
    }

    #[test]
    fn epi_mono_splits() {
        assert_eq!(epi_mono(&[0, 0, 2, 3, 3]), (vec![0, 0, 1, 2, 2], vec![0, 2, 3]));
    }

    #[test]
    fn opposite_is_valid() {
        let s = SimplicialSet::build(&StandardSimplex(3), 3).unwrap().set;
        s.opposite().validate().unwrap();
    }
}
