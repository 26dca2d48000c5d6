//! Sparse non-negatively graded complexes, for the large and very sparse
//! boundary matrices of nerves, triangulations and homotopy colimits.

use crate::field::Fp;
use crate::linalg::{sparse_rank, Matrix};

use super::ChainComplex;

pub type SparseColumn = Vec<(usize, u32)>;

#[derive(Debug, Clone)]
pub struct SparseComplex {
    field: Fp,
    dims: Vec<usize>,
    /// `d[n]` lists the columns of `d_n : C_n -> C_{n-1}`; `d[0]` is empty.
    d: Vec<Vec<SparseColumn>>,
}

impl SparseComplex {
    pub fn new(field: Fp, dims: Vec<usize>, d: Vec<Vec<SparseColumn>>) -> Self {
        assert_eq!(dims.len(), d.len());
        Self { field, dims, d }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    /// Highest stored degree plus one.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn columns(&self, n: usize) -> &[SparseColumn] {
        self.d.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn rank_d(&self, n: usize) -> usize {
        if n == 0 || n >= self.dims.len() {
            return 0;
        }
        sparse_rank(self.field, self.d[n].clone())
    }

    /// `dim H_n` for `0 <= n <= max`. Degrees at or above the stored top are
    /// unreliable and the caller must keep `max < len() - 1`.
    pub fn homology(&self, max: usize) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=max + 1).map(|n| self.rank_d(n)).collect();
        (0..=max)
            .map(|n| self.dim(n) - ranks[n] - ranks[n + 1])
            .collect()
    }

    /// Dense copy, for small complexes.
    pub fn to_dense(&self) -> ChainComplex {
        let f = self.field;
        if self.dims.is_empty() {
            return ChainComplex::zero(f);
        }
        let diffs = (1..self.dims.len())
            .map(|n| {
                let mut m = Matrix::zeros(f, self.dims[n - 1], self.dims[n]);
                for (c, col) in self.d[n].iter().enumerate() {
                    for &(r, v) in col {
                        m.add_at(r, c, v);
                    }
                }
                m
            })
            .collect();
        ChainComplex::new_unchecked(f, 0, self.dims.clone(), diffs)
    }

    /// Mapping cone of a degree-0 map given by sparse columns
    /// `map[n][j]` = image of the `j`-th basis vector of `X_n` in `Y_n`.
    /// `C_n = X_{n-1} ⊕ Y_n`, `d(x, y) = (-dx, f x + dy)`.
    pub fn cone(x: &SparseComplex, y: &SparseComplex, map: &[Vec<SparseColumn>]) -> SparseComplex {
        let f = x.field;
        let top = x.len().max(y.len());
        let dims: Vec<usize> = (0..top).map(|n| y.dim(n) + if n > 0 { x.dim(n - 1) } else { 0 }).collect();
        let mut d = vec![Vec::new()];
        for n in 1..top {
            let xoff = if n >= 2 { x.dim(n - 2) } else { 0 };
            let mut cols = Vec::with_capacity(dims[n]);
            // X_{n-1} part
            for j in 0..x.dim(n - 1) {
                let mut col: SparseColumn = Vec::new();
                for &(r, v) in x.columns(n - 1).get(j).map_or(&[][..], Vec::as_slice) {
                    col.push((r, f.neg(v)));
                }
                if let Some(img) = map.get(n - 1).and_then(|m| m.get(j)) {
                    for &(r, v) in img {
                        col.push((xoff + r, v));
                    }
                }
                cols.push(col);
            }
            for j in 0..y.dim(n) {
                let col = y
                    .columns(n)
                    .get(j)
                    .map_or(Vec::new(), |c| c.iter().map(|&(r, v)| (xoff + r, v)).collect());
                cols.push(col);
            }
            d.push(cols);
        }
        SparseComplex::new(f, dims, d)
    }
}
