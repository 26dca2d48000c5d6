//! Bounded chain complexes of finite-dimensional `F_p`-spaces.
//!
//! Grading is homological: `d_n : C_n -> C_{n-1}`. A complex stores a
//! contiguous degree range `[lo, hi]`; everything outside is zero.

mod json;
mod ops;
mod random;
pub mod sparse;

use std::collections::BTreeMap;

pub use random::random_complex;
pub use json::{complex_from_json, complex_to_json, map_from_json, map_to_json};
pub use ops::{
    cone, direct_sum, direct_sum_map, hom_degree_layout, internal_hom, pullback, pushout,
    tensor, tensor_map, tensor_power, HomLayout, Pullback, Pushout, TensorLayout,
};

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::Matrix;

#[derive(Clone)]
pub struct ChainComplex {
    field: Fp,
    lo: i64,
    dims: Vec<usize>,
    /// `d[i]` is `d_{lo+i}`, of shape `dim(lo+i-1) x dims[i]`.
    d: Vec<Matrix>,
}

/// Equality ignores zero padding of the stored degree range.
impl PartialEq for ChainComplex {
    fn eq(&self, other: &Self) -> bool {
        if self.field != other.field {
            return false;
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).all(|n| self.dim(n) == other.dim(n))
            && (lo + 1..=hi).all(|n| self.d(n) == other.d(n))
    }
}

impl Eq for ChainComplex {}

impl std::fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ChainComplex(F_{}, lo={}, dims={:?})", self.field.p(), self.lo, self.dims)
    }
}

impl ChainComplex {
    /// Build from dimensions starting at degree `lo` and differentials
    /// `d_{lo+1}, ..., d_{hi}` (one fewer than `dims`).
    pub fn new(field: Fp, lo: i64, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if dims.is_empty() {
            return Ok(Self::zero(field));
        }
        if diffs.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        let mut d = vec![Matrix::zeros(field, 0, dims[0])];
        for (i, m) in diffs.into_iter().enumerate() {
            if m.field() != field {
                return Err(Error::FieldMismatch(field.p(), m.field().p()));
            }
            if m.shape() != (dims[i], dims[i + 1]) {
                return Err(Error::DimensionMismatch(format!(
                    "d_{} has shape {:?}, expected {:?}",
                    lo + i as i64 + 1,
                    m.shape(),
                    (dims[i], dims[i + 1])
                )));
            }
            d.push(m);
        }
        let c = Self { field, lo, dims, d };
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(field: Fp, lo: i64, dims: Vec<usize>, diffs: Vec<Matrix>) -> Self {
        if dims.is_empty() {
            return Self::zero(field);
        }
        let mut d = vec![Matrix::zeros(field, 0, dims[0])];
        d.extend(diffs);
        debug_assert_eq!(d.len(), dims.len());
        Self { field, lo, dims, d }
    }

    /// Build from a sparse description over `[lo, hi]`: `dim(n)` and `d(n)`.
    pub fn from_fn(
        field: Fp,
        lo: i64,
        hi: i64,
        dim: impl Fn(i64) -> usize,
        d: impl Fn(i64) -> Matrix,
    ) -> Result<Self> {
        if hi < lo {
            return Ok(Self::zero(field));
        }
        let dims: Vec<usize> = (lo..=hi).map(&dim).collect();
        let diffs = (lo + 1..=hi).map(d).collect();
        Self::new(field, lo, dims, diffs)
    }

    pub fn zero(field: Fp) -> Self {
        Self {
            field,
            lo: 0,
            dims: Vec::new(),
            d: Vec::new(),
        }
    }

    /// `F` concentrated in degree `n`.
    pub fn sphere(field: Fp, n: i64) -> Self {
        Self::new_unchecked(field, n, vec![1], vec![])
    }

    /// The unit `F[0]`.
    pub fn unit(field: Fp) -> Self {
        Self::sphere(field, 0)
    }

    /// `F` in degrees `n` and `n-1` with identity differential.
    pub fn disk(field: Fp, n: i64) -> Self {
        Self::new_unchecked(field, n - 1, vec![1, 1], vec![Matrix::identity(field, 1)])
    }

    /// The cellular interval: basis `|0>, |1>` in degree 0 and `|01>` in
    /// degree 1 with `d|01> = |1> - |0>`.
    pub fn interval_j(field: Fp) -> Self {
        let d = Matrix::from_rows(field, 2, 1, &[vec![-1], vec![1]]);
        Self::new_unchecked(field, 0, vec![2, 1], vec![d])
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn is_zero_complex(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Lowest stored degree (meaningless for the zero complex).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored degree; `lo - 1` when empty.
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    /// Smallest and largest degree with nonzero dimension.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.dims.iter().position(|&d| d > 0)?;
        let last = self.dims.iter().rposition(|&d| d > 0)?;
        Some((self.lo + first as i64, self.lo + last as i64))
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d_n : C_n -> C_{n-1}` as a `dim(n-1) x dim(n)` matrix.
    pub fn d(&self, n: i64) -> Matrix {
        if n < self.lo || n > self.hi() {
            Matrix::zeros(self.field, self.dim(n - 1), self.dim(n))
        } else {
            self.d[(n - self.lo) as usize].clone()
        }
    }

    pub(crate) fn d_ref(&self, n: i64) -> Option<&Matrix> {
        if n <= self.lo || n > self.hi() {
            None
        } else {
            Some(&self.d[(n - self.lo) as usize])
        }
    }

    /// Checks `d_{n-1} d_n = 0` for every `n`.
    pub fn validate(&self) -> Result<()> {
        for n in self.lo + 2..=self.hi() {
            let dd = self.d(n - 1).mul(&self.d(n));
            if !dd.is_zero() {
                return Err(Error::DSquaredNonzero(n));
            }
        }
        Ok(())
    }

    /// Rank of `d_n`.
    pub fn rank_d(&self, n: i64) -> usize {
        self.d_ref(n).map_or(0, Matrix::rank)
    }

    /// `dim H_n`.
    pub fn homology_dim(&self, n: i64) -> usize {
        self.dim(n) - self.rank_d(n) - self.rank_d(n + 1)
    }

    /// `dim H_n` for every stored degree.
    pub fn homology(&self) -> BTreeMap<i64, usize> {
        let ranks: Vec<usize> = (self.lo..=self.hi() + 1).map(|n| self.rank_d(n)).collect();
        (self.lo..=self.hi())
            .map(|n| {
                let i = (n - self.lo) as usize;
                (n, self.dims[i] - ranks[i] - ranks[i + 1])
            })
            .collect()
    }

    /// `dim H_n` for `n` in `lo..=hi`, zero outside the stored range.
    pub fn homology_in(&self, lo: i64, hi: i64) -> Vec<usize> {
        (lo..=hi).map(|n| self.homology_dim(n)).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.homology().values().all(|&h| h == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi())
            .map(|n| if n.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(n) as i64)
            .sum()
    }

    /// Basis of the cycles `Z_n` as columns.
    pub fn cycles(&self, n: i64) -> Matrix {
        match self.d_ref(n) {
            Some(d) => d.kernel(),
            None => Matrix::identity(self.field, self.dim(n)),
        }
    }

    /// Basis of the boundaries `B_n` as columns.
    pub fn boundaries(&self, n: i64) -> Matrix {
        match self.d_ref(n + 1) {
            Some(d) => d.column_space(),
            None => Matrix::zeros(self.field, self.dim(n), 0),
        }
    }

    /// Degree shift: `(X[k])_n = X_{n-k}` with differential `(-1)^k d`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let f = self.field;
        let s = f.sign(k.rem_euclid(2) as usize);
        let diffs = (self.lo + 1..=self.hi()).map(|n| self.d(n).scale(s)).collect();
        Self::new_unchecked(f, self.lo + k, self.dims.clone(), diffs)
    }

    /// Restrict to the degree window `[lo, hi]` (brutal truncation at both
    /// ends). This is a subquotient, so only homology strictly inside the
    /// window is preserved.
    pub fn window(&self, lo: i64, hi: i64) -> ChainComplex {
        let f = self.field;
        if hi < lo {
            return Self::zero(f);
        }
        let dims = (lo..=hi).map(|n| self.dim(n)).collect();
        let diffs = (lo + 1..=hi).map(|n| self.d(n)).collect();
        Self::new_unchecked(f, lo, dims, diffs)
    }

    /// Same complex with the stored range widened to include `[lo, hi]`.
    pub fn padded(&self, lo: i64, hi: i64) -> ChainComplex {
        let (l, h) = if self.dims.is_empty() {
            (lo, hi)
        } else {
            (lo.min(self.lo), hi.max(self.hi()))
        };
        self.window(l, h)
    }

    /// Change of basis in every degree: `P_n` invertible, new `d_n = P_{n-1} d_n P_n^{-1}`.
    pub fn rebased(&self, p: &BTreeMap<i64, Matrix>) -> Result<ChainComplex> {
        let f = self.field;
        let get = |n: i64| p.get(&n).cloned().unwrap_or_else(|| Matrix::identity(f, self.dim(n)));
        let mut diffs = Vec::new();
        for n in self.lo + 1..=self.hi() {
            let inv = get(n)
                .inverse()
                .ok_or_else(|| Error::Precondition(format!("basis change in degree {n} not invertible")))?;
            diffs.push(get(n - 1).mul(&self.d(n)).mul(&inv));
        }
        ChainComplex::new(f, self.lo, self.dims.clone(), diffs)
    }
}

/// A degree-0 chain map.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainMap {
    src: ChainComplex,
    dst: ChainComplex,
    /// Components for `src` degrees `src.lo ..= src.hi`.
    comps: Vec<Matrix>,
}

impl std::fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ChainMap({:?} -> {:?})", self.src, self.dst)
    }
}

impl ChainMap {
    /// Build from components indexed by degree; missing degrees are zero.
    pub fn new(src: ChainComplex, dst: ChainComplex, comps: BTreeMap<i64, Matrix>) -> Result<Self> {
        let m = Self::new_unchecked(src, dst, comps)?;
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        src: ChainComplex,
        dst: ChainComplex,
        mut comps: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        if src.field != dst.field {
            return Err(Error::FieldMismatch(src.field.p(), dst.field.p()));
        }
        let f = src.field;
        let mut v = Vec::with_capacity(src.dims.len());
        for n in src.lo..=src.hi() {
            let m = comps
                .remove(&n)
                .unwrap_or_else(|| Matrix::zeros(f, dst.dim(n), src.dim(n)));
            if m.shape() != (dst.dim(n), src.dim(n)) {
                return Err(Error::DimensionMismatch(format!(
                    "component in degree {n} has shape {:?}, expected {:?}",
                    m.shape(),
                    (dst.dim(n), src.dim(n))
                )));
            }
            v.push(m);
        }
        if let Some((n, m)) = comps.into_iter().find(|(_, m)| !m.is_empty()) {
            return Err(Error::DimensionMismatch(format!(
                "component in degree {n} of shape {:?} outside source range",
                m.shape()
            )));
        }
        Ok(Self { src, dst, comps: v })
    }

    pub(crate) fn from_fn(
        src: &ChainComplex,
        dst: &ChainComplex,
        comp: impl Fn(i64) -> Matrix,
    ) -> ChainMap {
        let comps = (src.lo..=src.hi()).map(comp).collect::<Vec<_>>();
        debug_assert!(comps
            .iter()
            .zip(src.lo..)
            .all(|(m, n)| m.shape() == (dst.dim(n), src.dim(n))));
        ChainMap {
            src: src.clone(),
            dst: dst.clone(),
            comps,
        }
    }

    pub fn zero(src: &ChainComplex, dst: &ChainComplex) -> ChainMap {
        let f = src.field;
        Self::from_fn(src, dst, |n| Matrix::zeros(f, dst.dim(n), src.dim(n)))
    }

    pub fn identity(x: &ChainComplex) -> ChainMap {
        Self::from_fn(x, x, |n| Matrix::identity(x.field, x.dim(n)))
    }

    pub fn src(&self) -> &ChainComplex {
        &self.src
    }

    pub fn dst(&self) -> &ChainComplex {
        &self.dst
    }

    pub fn field(&self) -> Fp {
        self.src.field
    }

    /// `f_n : X_n -> Y_n`.
    pub fn component(&self, n: i64) -> Matrix {
        if n < self.src.lo || n > self.src.hi() {
            Matrix::zeros(self.src.field, self.dst.dim(n), self.src.dim(n))
        } else {
            self.comps[(n - self.src.lo) as usize].clone()
        }
    }


    pub fn components(&self) -> BTreeMap<i64, Matrix> {
        (self.src.lo..=self.src.hi()).map(|n| (n, self.component(n))).collect()
    }

    /// Checks `f_{n-1} d = d f_n` in every degree.
    pub fn validate(&self) -> Result<()> {
        let lo = self.src.lo.min(self.dst.lo);
        let hi = self.src.hi().max(self.dst.hi());
        for n in lo..=hi + 1 {
            let lhs = self.component(n - 1).mul(&self.src.d(n));
            let rhs = self.dst.d(n).mul(&self.component(n));
            if lhs != rhs {
                return Err(Error::NotChainMap(format!("fails in degree {n}")));
            }
        }
        Ok(())
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &ChainMap) -> Result<ChainMap> {
        if g.dst != self.src {
            return Err(Error::DimensionMismatch("composing maps with mismatched ends".into()));
        }
        Ok(self.after(g))
    }

    pub(crate) fn after(&self, g: &ChainMap) -> ChainMap {
        ChainMap::from_fn(&g.src, &self.dst, |n| self.component(n).mul(&g.component(n)))
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::DimensionMismatch("adding maps with different ends".into()));
        }
        Ok(ChainMap::from_fn(&self.src, &self.dst, |n| {
            self.component(n).add(&other.component(n))
        }))
    }

    pub fn scale(&self, c: u32) -> ChainMap {
        ChainMap::from_fn(&self.src, &self.dst, |n| self.component(n).scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        let lo = self.src.lo.min(self.dst.lo);
        let hi = self.src.hi().max(self.dst.hi());
        lo..=hi
    }

    /// Degreewise injective. Over a field cokernels are automatically
    /// projective, so this is the cofibration predicate.
    pub fn is_cofibration(&self) -> bool {
        self.degrees().all(|n| self.component(n).rank() == self.src.dim(n))
    }

    /// Degreewise surjective.
    pub fn is_fibration(&self) -> bool {
        self.degrees().all(|n| self.component(n).rank() == self.dst.dim(n))
    }

    pub fn is_iso(&self) -> bool {
        self.is_cofibration() && self.is_fibration()
    }

    /// Rank of the induced map `H_n(X) -> H_n(Y)`, computed as
    /// `dim(f(Z_n) + B_n) - dim B_n`.
    pub fn homology_rank(&self, n: i64) -> usize {
        let z = self.src.cycles(n);
        let b = self.dst.boundaries(n);
        let fz = self.component(n).mul(&z);
        fz.hstack(&b).rank() - b.cols()
    }

    /// Whether the induced map on homology is an isomorphism in every degree.
    pub fn is_quasi_iso(&self) -> bool {
        self.degrees().all(|n| self.is_quasi_iso_at(n))
    }

    pub fn is_quasi_iso_at(&self, n: i64) -> bool {
        let hx = self.src.homology_dim(n);
        let hy = self.dst.homology_dim(n);
        hx == hy && self.homology_rank(n) == hx
    }

    /// Quasi-isomorphism restricted to the degrees `lo..=hi`.
    pub fn is_quasi_iso_in(&self, lo: i64, hi: i64) -> bool {
        (lo..=hi).all(|n| self.is_quasi_iso_at(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fp {
        Fp::two()
    }

    #[test]
    fn interval_validates_and_is_contractible() {
        for p in [2, 3, 5] {
            let f = Fp::new(p).unwrap();
            let j = ChainComplex::interval_j(f);
            j.validate().unwrap();
            assert_eq!(j.homology_in(0, 1), vec![1, 0]);
        }
    }

    #[test]
    fn disk_and_sphere() {
        let f = f2();
        for n in -1..4 {
            assert!(ChainComplex::disk(f, n).is_acyclic());
            let s = ChainComplex::sphere(f, n);
            assert_eq!(s.homology_dim(n), 1);
        }
    }

    #[test]
    fn rejects_bad_differential() {
        let f = Fp::new(3).unwrap();
        let d1 = Matrix::from_rows(f, 1, 1, &[vec![1]]);
        let d2 = Matrix::from_rows(f, 1, 1, &[vec![1]]);
        assert!(matches!(
            ChainComplex::new(f, 0, vec![1, 1, 1], vec![d1, d2]),
            Err(Error::DSquaredNonzero(2))
        ));
    }

    #[test]
    fn counit_of_interval_is_quasi_iso() {
        let f = Fp::new(5).unwrap();
        let j = ChainComplex::interval_j(f);
        let u = ChainComplex::unit(f);
        let mut c = BTreeMap::new();
        c.insert(0, Matrix::from_rows(f, 1, 2, &[vec![1, 1]]));
        let sigma = ChainMap::new(j.clone(), u.clone(), c).unwrap();
        assert!(sigma.is_quasi_iso());
        assert!(sigma.is_fibration());
        for i in 0..2 {
            let mut c = BTreeMap::new();
            let mut m = Matrix::zeros(f, 2, 1);
            m.set(i, 0, 1);
            c.insert(0, m);
            let delta = ChainMap::new(u.clone(), j.clone(), c).unwrap();
            assert!(sigma.compose(&delta).unwrap().is_iso());
            assert!(delta.is_quasi_iso() && delta.is_cofibration());
        }
    }

    #[test]
    fn zero_and_identity_maps() {
        let f = f2();
        let j = ChainComplex::interval_j(f);
        let s = ChainComplex::sphere(f, 3);
        ChainMap::zero(&j, &s).validate().unwrap();
        assert!(ChainMap::zero(&ChainComplex::zero(f), &j).is_cofibration());
        assert!(ChainMap::zero(&j, &ChainComplex::zero(f)).is_fibration());
        assert!(ChainMap::identity(&j).is_iso());
    }

    #[test]
    fn sphere_into_disk() {
        let f = f2();
        for n in 1..4 {
            let s = ChainComplex::sphere(f, n - 1);
            let d = ChainComplex::disk(f, n);
            let mut c = BTreeMap::new();
            c.insert(n - 1, Matrix::identity(f, 1));
            let i = ChainMap::new(s, d, c).unwrap();
            assert!(i.is_cofibration());
            assert!(!i.is_fibration());
            assert!(!i.is_quasi_iso());
        }
    }
}
