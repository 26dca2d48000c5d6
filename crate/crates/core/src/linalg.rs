//! Dense exact linear algebra over `F_p`.
//!
//! Matrices act on column vectors: a linear map `F^n -> F^m` is an `m x n`
//! matrix. Gaussian elimination to reduced row echelon form is the single
//! rank kernel; everything else (kernels, solves, quotients) is derived from it.
//! A sparse column reduction is provided for the large, very sparse boundary
//! matrices of nerves and triangulations.

use std::collections::HashMap;
use std::fmt;

use crate::field::Fp;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{}", self.rows, self.cols, self.field.p())?;
        for r in 0..self.rows.min(12) {
            writeln!(f, "  {:?}", &self.row(r)[..self.cols.min(24)])?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from signed integer rows; every row must have length `cols`.
    pub fn from_rows(field: Fp, rows: usize, cols: usize, entries: &[Vec<i64>]) -> Self {
        assert_eq!(entries.len(), rows, "row count");
        let mut m = Self::zeros(field, rows, cols);
        for (r, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "row length");
            for (c, &v) in row.iter().enumerate() {
                m.data[r * cols + c] = field.from_i64(v);
            }
        }
        m
    }

    /// Column vector from field elements.
    pub fn column(field: Fp, v: &[u32]) -> Self {
        Self {
            field,
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }
    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = self.field.add(self.data[i], v);
    }
    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "matrix product shape {:?} * {:?}",
            self.shape(),
            other.shape()
        );
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        if f.p() == 2 {
            for r in 0..self.rows {
                for k in 0..self.cols {
                    if self.get(r, k) == 0 {
                        continue;
                    }
                    let src = other.row(k);
                    let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= *s;
                    }
                }
            }
        } else {
            for r in 0..self.rows {
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if a == 0 {
                        continue;
                    }
                    let src = other.row(k);
                    let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d = f.add(*d, f.mul(a, *s));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape");
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        self.with_data(data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape");
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        self.with_data(data)
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        self.with_data(data)
    }

    pub fn neg(&self) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.neg(a)).collect();
        self.with_data(data)
    }

    fn with_data(&self, data: Vec<u32>) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack rows");
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            m.data[r * m.cols..r * m.cols + self.cols].copy_from_slice(self.row(r));
            m.data[r * m.cols + self.cols..(r + 1) * m.cols].copy_from_slice(other.row(r));
        }
        m
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack cols");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        m
    }

    /// Copy `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "paste bounds");
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            m.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(self.row(r));
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (i, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + i] = self.get(r, c);
            }
        }
        m
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in c..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]);
            if inv != 1 {
                for j in c..cols {
                    let i = r * cols + j;
                    self.data[i] = f.mul(self.data[i], inv);
                }
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (prow, after) = rest.split_at_mut(cols);
            let prow = &prow[c..];
            for other in before.chunks_exact_mut(cols).chain(after.chunks_exact_mut(cols)) {
                let factor = other[c];
                if factor == 0 {
                    continue;
                }
                let dst = &mut other[c..];
                if f.p() == 2 {
                    for (d, s) in dst.iter_mut().zip(prow) {
                        *d ^= *s;
                    }
                } else {
                    let neg = f.neg(factor);
                    for (d, s) in dst.iter_mut().zip(prow) {
                        if *s != 0 {
                            *d = f.add(*d, f.mul(neg, *s));
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the shorter side
        if self.rows > self.cols {
            self.transpose().rref().1.len()
        } else {
            self.rref().1.len()
        }
    }

    /// Basis of the null space as the columns of a `cols x nullity` matrix.
    ///
    /// The basis is in reduced form: on the free coordinates (returned second)
    /// it is the identity, so coordinates of a kernel vector are read off at
    /// those positions.
    pub fn kernel_with_free(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let (r, piv) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &piv {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = Matrix::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, 1 % f.p());
            for (row, &pc) in piv.iter().enumerate() {
                let v = r.get(row, fc);
                if v != 0 {
                    k.set(pc, j, f.neg(v));
                }
            }
        }
        (k, free)
    }

    pub fn kernel(&self) -> Matrix {
        self.kernel_with_free().0
    }

    /// A basis of the column space, as the pivot columns of `self`.
    pub fn column_space(&self) -> Matrix {
        let piv = self.rref().1;
        self.select_cols(&piv)
    }

    /// Solve `self * X = B`; `None` if inconsistent.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "solve shape");
        let f = self.field;
        let aug = self.hstack(b);
        let (r, piv) = aug.rref();
        if piv.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(f, self.cols, b.cols);
        for (row, &pc) in piv.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(row, self.cols + j));
            }
        }
        Some(x)
    }

    /// Whether every column of `b` lies in the column space of `self`.
    pub fn spans(&self, b: &Matrix) -> bool {
        self.solve(b).is_some()
    }

    /// Kronecker product: `(A ⊗ B)[(i,k),(j,l)] = A[i,j] B[k,l]`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b != 0 {
                            out.set(i * other.rows + k, j * other.cols + l, f.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        self.solve(&Matrix::identity(self.field, self.rows))
    }
}

/// A subspace given by a reduced kernel-style basis: the basis restricted to
/// the `free` coordinates is the identity, so coordinates of a member vector
/// are read off directly.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub basis: Matrix,
    pub free: Vec<usize>,
}

impl Subspace {
    /// Null space of `m`.
    pub fn kernel_of(m: &Matrix) -> Subspace {
        let (basis, free) = m.kernel_with_free();
        Subspace { basis, free }
    }

    /// Whole space `F^n`.
    pub fn full(field: Fp, n: usize) -> Subspace {
        Subspace {
            basis: Matrix::identity(field, n),
            free: (0..n).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of the columns of `v`, assumed to lie in the subspace.
    pub fn coords(&self, v: &Matrix) -> Matrix {
        v.select_rows(&self.free)
    }

    pub fn contains(&self, v: &Matrix) -> bool {
        self.basis.mul(&self.coords(v)) == *v
    }
}

/// A quotient `F^n -> F^n / W` presented by a projection and a section.
#[derive(Debug, Clone)]
pub struct Quotient {
    /// `q x n`, surjective with kernel `W`.
    pub proj: Matrix,
    /// `n x q`, with `proj * section = id`.
    pub section: Matrix,
}

impl Quotient {
    /// Quotient of `F^ambient` by the span of the columns of `sub`.
    pub fn new(field: Fp, ambient: usize, sub: &Matrix) -> Quotient {
        assert_eq!(sub.rows(), ambient, "quotient ambient");
        let basis = if sub.cols() == 0 { sub.clone() } else { sub.column_space() };
        // Extend the subspace basis by standard vectors at non-pivot positions
        // of the row-reduced transpose.
        let (_, piv) = basis.transpose().rref();
        let mut is_piv = vec![false; ambient];
        for &c in &piv {
            is_piv[c] = true;
        }
        let comp: Vec<usize> = (0..ambient).filter(|&i| !is_piv[i]).collect();
        let mut section = Matrix::zeros(field, ambient, comp.len());
        for (j, &i) in comp.iter().enumerate() {
            section.set(i, j, 1);
        }
        let full = basis.hstack(&section);
        let inv = full.inverse().expect("completed basis is invertible");
        let proj = inv.select_rows(&(basis.cols()..ambient).collect::<Vec<_>>());
        Quotient { proj, section }
    }

    pub fn dim(&self) -> usize {
        self.proj.rows()
    }
}

/// Rank of a sparse matrix given by columns of `(row, value)` pairs, computed
/// by column reduction with pivot lookup on the lowest nonzero row.
pub fn sparse_rank(field: Fp, columns: Vec<Vec<(usize, u32)>>) -> usize {
    let mut owner: HashMap<usize, Vec<(usize, u32)>> = HashMap::new();
    let mut rank = 0;
    for mut col in columns {
        col.sort_unstable_by_key(|&(r, _)| r);
        let mut col = coalesce(field, col);
        loop {
            let Some(&(low, lv)) = col.last() else { break };
            match owner.get(&low) {
                None => {
                    owner.insert(low, col);
                    rank += 1;
                    break;
                }
                Some(piv) => {
                    let plv = piv.last().unwrap().1;
                    let factor = field.mul(lv, field.inv(plv));
                    col = axpy_sparse(field, &col, piv, field.neg(factor));
                }
            }
        }
    }
    rank
}

/// Merge repeated rows of a row-sorted sparse vector and drop zeros.
fn coalesce(field: Fp, col: Vec<(usize, u32)>) -> Vec<(usize, u32)> {
    let mut out: Vec<(usize, u32)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        let v = v % field.p();
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 = field.add(last.1, v),
            _ => out.push((r, v)),
        }
    }
    out.retain(|&(_, v)| v != 0);
    out
}

/// `a + c * b` for sorted sparse vectors.
fn axpy_sparse(field: Fp, a: &[(usize, u32)], b: &[(usize, u32)], c: u32) -> Vec<(usize, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, field.mul(c, b[j].1)));
            j += 1;
        } else {
            let v = field.add(a[i].1, field.mul(c, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> Fp {
        Fp::new(3).unwrap()
    }

    #[test]
    fn rank_and_kernel() {
        let f = f3();
        let m = Matrix::from_rows(f, 2, 3, &[vec![1, 2, 0], vec![2, 1, 0]]);
        // rows are proportional mod 3: 2*(1,2,0) = (2,1,0)
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_inconsistent() {
        let f = Fp::two();
        let a = Matrix::from_rows(f, 2, 1, &[vec![1], vec![1]]);
        let b = Matrix::from_rows(f, 2, 1, &[vec![1], vec![0]]);
        assert!(a.solve(&b).is_none());
    }

    #[test]
    fn quotient_of_line() {
        let f = f3();
        let w = Matrix::from_rows(f, 3, 1, &[vec![1], vec![1], vec![0]]);
        let q = Quotient::new(f, 3, &w);
        assert_eq!(q.dim(), 2);
        assert!(q.proj.mul(&w).is_zero());
        assert_eq!(q.proj.mul(&q.section), Matrix::identity(f, 2));
    }

    fn arb_matrix(p: u32) -> impl Strategy<Value = Matrix> {
        (1usize..7, 1usize..7).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p, r * c).prop_map(move |d| {
                let f = Fp::new(p).unwrap();
                let mut m = Matrix::zeros(f, r, c);
                for i in 0..r {
                    for j in 0..c {
                        m.set(i, j, d[i * c + j]);
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix(5)) {
            prop_assert_eq!(m.rank() + m.kernel().cols(), m.cols());
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn sparse_rank_agrees(m in arb_matrix(3)) {
            let cols = (0..m.cols())
                .map(|c| (0..m.rows()).map(|r| (r, m.get(r, c))).collect())
                .collect();
            prop_assert_eq!(sparse_rank(m.field(), cols), m.rank());
        }
    }
}
