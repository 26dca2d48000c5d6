use std::collections::BTreeMap;

use super::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::{Matrix, Quotient, Subspace};

fn same_field(a: &ChainComplex, b: &ChainComplex) -> Result<Fp> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().p(), b.field().p()));
    }
    Ok(a.field())
}

/// Basis layout of `X ⊗ Y`: degree `n` is the direct sum of blocks
/// `X_i ⊗ Y_{n-i}` in increasing `i`, and `a ⊗ b` sits at `a * dim Y_{n-i} + b`
/// inside its block.
#[derive(Debug, Clone)]
pub struct TensorLayout {
    xdims: BTreeMap<i64, usize>,
    ydims: BTreeMap<i64, usize>,
}

impl TensorLayout {
    pub fn new(x: &ChainComplex, y: &ChainComplex) -> Self {
        let dims = |c: &ChainComplex| (c.lo()..=c.hi()).map(|n| (n, c.dim(n))).collect();
        Self {
            xdims: dims(x),
            ydims: dims(y),
        }
    }

    fn yd(&self, j: i64) -> usize {
        self.ydims.get(&j).copied().unwrap_or(0)
    }

    /// Degree range of the product.
    pub fn range(&self) -> (i64, i64) {
        match (
            self.xdims.keys().next(),
            self.xdims.keys().last(),
            self.ydims.keys().next(),
            self.ydims.keys().last(),
        ) {
            (Some(a), Some(b), Some(c), Some(d)) => (a + c, b + d),
            _ => (0, -1),
        }
    }

    /// Start of block `X_i ⊗ Y_{n-i}` inside degree `n`.
    pub fn offset(&self, n: i64, i: i64) -> usize {
        self.xdims
            .range(..i)
            .map(|(&k, &dx)| dx * self.yd(n - k))
            .sum()
    }

    pub fn index(&self, n: i64, i: i64, a: usize, b: usize) -> usize {
        self.offset(n, i) + a * self.yd(n - i) + b
    }

    pub fn dim(&self, n: i64) -> usize {
        self.xdims.iter().map(|(&i, &dx)| dx * self.yd(n - i)).sum()
    }

    /// `(i, a, b)` for every basis element of degree `n`, in layout order.
    pub fn basis(&self, n: i64) -> Vec<(i64, usize, usize)> {
        let mut out = Vec::with_capacity(self.dim(n));
        for (&i, &dx) in &self.xdims {
            let dy = self.yd(n - i);
            for a in 0..dx {
                for b in 0..dy {
                    out.push((i, a, b));
                }
            }
        }
        out
    }

    fn blocks(&self, n: i64) -> Vec<(i64, usize, usize, usize)> {
        let mut off = 0;
        let mut out = Vec::new();
        for (&i, &dx) in &self.xdims {
            let dy = self.yd(n - i);
            out.push((i, off, dx, dy));
            off += dx * dy;
        }
        out
    }
}

/// `X ⊗ Y` with `d(a ⊗ b) = da ⊗ b + (-1)^{|a|} a ⊗ db`.
pub fn tensor(x: &ChainComplex, y: &ChainComplex) -> Result<ChainComplex> {
    let f = same_field(x, y)?;
    let lay = TensorLayout::new(x, y);
    let (lo, hi) = lay.range();
    if hi < lo {
        return Ok(ChainComplex::zero(f));
    }
    let dims: Vec<usize> = (lo..=hi).map(|n| lay.dim(n)).collect();
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let mut m = Matrix::zeros(f, lay.dim(n - 1), lay.dim(n));
        for (i, off, dx, dy) in lay.blocks(n) {
            if dx == 0 || dy == 0 {
                continue;
            }
            let j = n - i;
            // da ⊗ b
            if x.dim(i - 1) > 0 {
                let dxm = x.d(i);
                let tgt = lay.offset(n - 1, i - 1);
                for a in 0..dx {
                    for a2 in 0..x.dim(i - 1) {
                        let c = dxm.get(a2, a);
                        if c == 0 {
                            continue;
                        }
                        for b in 0..dy {
                            m.add_at(tgt + a2 * dy + b, off + a * dy + b, c);
                        }
                    }
                }
            }
            // (-1)^i a ⊗ db
            if y.dim(j - 1) > 0 {
                let dym = y.d(j);
                let s = f.sign(i.rem_euclid(2) as usize);
                let tgt = lay.offset(n - 1, i);
                let dy2 = y.dim(j - 1);
                for a in 0..dx {
                    for b in 0..dy {
                        for b2 in 0..dy2 {
                            let c = dym.get(b2, b);
                            if c != 0 {
                                m.add_at(tgt + a * dy2 + b2, off + a * dy + b, f.mul(s, c));
                            }
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    Ok(ChainComplex::new_unchecked(f, lo, dims, diffs))
}

/// `f ⊗ g` for degree-0 maps (no Koszul sign arises).
pub fn tensor_map(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let field = same_field(f.src(), g.src())?;
    let src = tensor(f.src(), g.src())?;
    let dst = tensor(f.dst(), g.dst())?;
    let ls = TensorLayout::new(f.src(), g.src());
    let ld = TensorLayout::new(f.dst(), g.dst());
    Ok(ChainMap::from_fn(&src, &dst, |n| {
        let mut m = Matrix::zeros(field, dst.dim(n), src.dim(n));
        for (i, off, dx, dy) in ls.blocks(n) {
            if dx == 0 || dy == 0 {
                continue;
            }
            let k = f.component(i).kron(&g.component(n - i));
            if k.rows() > 0 {
                m.paste(ld.offset(n, i), off, &k);
            }
        }
        m
    }))
}

/// `X^{⊗n}`, associated to the left, with `X^{⊗0} = F[0]`.
pub fn tensor_power(x: &ChainComplex, n: usize) -> ChainComplex {
    let mut acc = ChainComplex::unit(x.field());
    for _ in 0..n {
        acc = tensor(&acc, x).expect("same field");
    }
    acc
}

pub fn direct_sum(x: &ChainComplex, y: &ChainComplex) -> Result<ChainComplex> {
    let f = same_field(x, y)?;
    let (lo, hi) = match (x.support(), y.support()) {
        (None, None) => return Ok(ChainComplex::zero(f)),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1)),
    };
    let dims = (lo..=hi).map(|n| x.dim(n) + y.dim(n)).collect();
    let diffs = (lo + 1..=hi).map(|n| x.d(n).block_diag(&y.d(n))).collect();
    Ok(ChainComplex::new_unchecked(f, lo, dims, diffs))
}

pub fn direct_sum_map(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let src = direct_sum(f.src(), g.src())?;
    let dst = direct_sum(f.dst(), g.dst())?;
    Ok(ChainMap::from_fn(&src, &dst, |n| {
        f.component(n).block_diag(&g.component(n))
    }))
}

/// Mapping cone: `C_n = X_{n-1} ⊕ Y_n`, `d(x, y) = (-dx, f x + dy)`.
pub fn cone(f: &ChainMap) -> ChainComplex {
    let x = f.src();
    let y = f.dst();
    let field = f.field();
    let lo = x.lo().min(y.lo());
    let hi = (x.hi() + 1).max(y.hi());
    if hi < lo {
        return ChainComplex::zero(field);
    }
    let dims = (lo..=hi).map(|n| x.dim(n - 1) + y.dim(n)).collect();
    let diffs = (lo + 1..=hi)
        .map(|n| {
            let top = x.d(n - 1).neg().hstack(&Matrix::zeros(field, x.dim(n - 2), y.dim(n)));
            let bottom = f.component(n - 1).hstack(&y.d(n));
            top.vstack(&bottom)
        })
        .collect();
    ChainComplex::new_unchecked(field, lo, dims, diffs)
}

/// Basis layout of `[X, Y]_n = ∏_i Hom(X_i, Y_{i+n})`: blocks in increasing
/// `i`, each a `dim Y_{i+n} x dim X_i` matrix flattened row-major.
#[derive(Debug, Clone)]
pub struct HomLayout {
    x: ChainComplex,
    y: ChainComplex,
}

pub fn hom_degree_layout(x: &ChainComplex, y: &ChainComplex) -> HomLayout {
    HomLayout {
        x: x.clone(),
        y: y.clone(),
    }
}

impl HomLayout {
    pub fn range(&self) -> (i64, i64) {
        match (self.x.support(), self.y.support()) {
            (Some((xl, xh)), Some((yl, yh))) => (yl - xh, yh - xl),
            _ => (0, -1),
        }
    }

    fn xrange(&self) -> std::ops::RangeInclusive<i64> {
        match self.x.support() {
            Some((a, b)) => a..=b,
            None => 0..=-1,
        }
    }

    pub fn offset(&self, n: i64, i: i64) -> usize {
        self.xrange()
            .take_while(|&k| k < i)
            .map(|k| self.x.dim(k) * self.y.dim(k + n))
            .sum()
    }

    pub fn dim(&self, n: i64) -> usize {
        self.xrange().map(|k| self.x.dim(k) * self.y.dim(k + n)).sum()
    }

    /// Flatten degree-`n` components `f_i : X_i -> Y_{i+n}` into a vector.
    pub fn flatten(&self, n: i64, comps: &dyn Fn(i64) -> Matrix) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.dim(n));
        for i in self.xrange() {
            let m = comps(i);
            debug_assert_eq!(m.shape(), (self.y.dim(i + n), self.x.dim(i)));
            for r in 0..m.rows() {
                v.extend_from_slice(m.row(r));
            }
        }
        v
    }

    /// Component `f_i` of a degree-`n` vector.
    pub fn component(&self, n: i64, v: &[u32], i: i64) -> Matrix {
        let f = self.x.field();
        let (r, c) = (self.y.dim(i + n), self.x.dim(i));
        let mut m = Matrix::zeros(f, r, c);
        if r * c == 0 {
            return m;
        }
        let off = self.offset(n, i);
        for a in 0..r {
            for b in 0..c {
                m.set(a, b, v[off + a * c + b]);
            }
        }
        m
    }

    /// Interpret a degree-0 vector as a chain map (unchecked).
    pub fn to_map(&self, v: &[u32]) -> ChainMap {
        ChainMap::from_fn(&self.x, &self.y, |i| self.component(0, v, i))
    }

    pub fn from_map(&self, m: &ChainMap) -> Vec<u32> {
        self.flatten(0, &|i| m.component(i))
    }

    /// `∂ : [X,Y]_n -> [X,Y]_{n-1}`, `∂f = d f - (-1)^n f d`.
    pub fn differential(&self, n: i64) -> Matrix {
        let field = self.x.field();
        let (x, y) = (&self.x, &self.y);
        let mut m = Matrix::zeros(field, self.dim(n - 1), self.dim(n));
        let s = field.neg(field.sign(n.rem_euclid(2) as usize));
        for i in self.xrange() {
            let (rows, cols) = (y.dim(i + n), x.dim(i));
            if rows * cols == 0 {
                continue;
            }
            let off = self.offset(n, i);
            let dy = y.d(i + n);
            let dx = x.d(i + 1);
            let tgt_same = self.offset(n - 1, i);
            let tgt_next = self.offset(n - 1, i + 1);
            let rows_m1 = y.dim(i + n - 1);
            let cols_next = x.dim(i + 1);
            for r in 0..rows {
                for c in 0..cols {
                    let col = off + r * cols + c;
                    // (d ∘ E_rc) has column c equal to dy[:, r]
                    for r2 in 0..rows_m1 {
                        let v = dy.get(r2, r);
                        if v != 0 {
                            m.add_at(tgt_same + r2 * cols + c, col, v);
                        }
                    }
                    // -(-1)^n E_rc ∘ dx_{i+1} has row r equal to dx[c, :]
                    for c2 in 0..cols_next {
                        let v = dx.get(c, c2);
                        if v != 0 {
                            m.add_at(tgt_next + r * cols_next + c2, col, field.mul(s, v));
                        }
                    }
                }
            }
        }
        m
    }
}

/// `[X, Y]` with `∂f = d∘f - (-1)^n f∘d`.
pub fn internal_hom(x: &ChainComplex, y: &ChainComplex) -> Result<ChainComplex> {
    let f = same_field(x, y)?;
    let lay = hom_degree_layout(x, y);
    let (lo, hi) = lay.range();
    if hi < lo {
        return Ok(ChainComplex::zero(f));
    }
    let dims = (lo..=hi).map(|n| lay.dim(n)).collect();
    let diffs = (lo + 1..=hi).map(|n| lay.differential(n)).collect();
    Ok(ChainComplex::new_unchecked(f, lo, dims, diffs))
}

/// Pushout of `X <-f- A -g-> Y`, realized as `(X ⊕ Y) / {(f a, -g a)}`.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub object: ChainComplex,
    pub from_left: ChainMap,
    pub from_right: ChainMap,
    quotients: BTreeMap<i64, Quotient>,
    left: ChainComplex,
    right: ChainComplex,
}

impl Pushout {
    /// The map out of the pushout induced by `u : X -> Z`, `v : Y -> Z`,
    /// assumed to agree on `A`.
    pub fn induced(&self, u: &ChainMap, v: &ChainMap) -> Result<ChainMap> {
        if u.src() != &self.left || v.src() != &self.right || u.dst() != v.dst() {
            return Err(Error::DimensionMismatch("pushout cocone ends".into()));
        }
        let z = u.dst();
        let f = z.field();
        Ok(ChainMap::from_fn(&self.object, z, |n| match self.quotients.get(&n) {
            Some(q) => u.component(n).hstack(&v.component(n)).mul(&q.section),
            None => Matrix::zeros(f, z.dim(n), 0),
        }))
    }
}

pub fn pushout(f: &ChainMap, g: &ChainMap) -> Result<Pushout> {
    if f.src() != g.src() {
        return Err(Error::DimensionMismatch("pushout legs have different sources".into()));
    }
    let field = same_field(f.dst(), g.dst())?;
    let (x, y) = (f.dst(), g.dst());
    let sum = direct_sum(x, y)?;
    let lo = x.lo().min(y.lo()).min(f.src().lo());
    let hi = x.hi().max(y.hi()).max(f.src().hi());
    let mut quotients = BTreeMap::new();
    for n in lo..=hi {
        let img = f.component(n).vstack(&g.component(n).neg());
        quotients.insert(n, Quotient::new(field, sum.dim(n), &img));
    }
    let dims: Vec<usize> = (lo..=hi).map(|n| quotients[&n].dim()).collect();
    let diffs = (lo + 1..=hi)
        .map(|n| quotients[&(n - 1)].proj.mul(&sum.d(n)).mul(&quotients[&n].section))
        .collect();
    let object = ChainComplex::new_unchecked(field, lo, dims, diffs);
    let from_left = ChainMap::from_fn(x, &object, |n| {
        let q = &quotients[&n];
        q.proj.select_cols(&(0..x.dim(n)).collect::<Vec<_>>())
    });
    let from_right = ChainMap::from_fn(y, &object, |n| {
        let q = &quotients[&n];
        q.proj
            .select_cols(&(x.dim(n)..x.dim(n) + y.dim(n)).collect::<Vec<_>>())
    });
    Ok(Pushout {
        object,
        from_left,
        from_right,
        quotients,
        left: x.clone(),
        right: y.clone(),
    })
}

/// Pullback of `X -f-> B <-g- Y`, realized as the kernel of `(f, -g)`.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub object: ChainComplex,
    pub to_left: ChainMap,
    pub to_right: ChainMap,
    kernels: BTreeMap<i64, Subspace>,
}

impl Pullback {
    /// The map into the pullback induced by `u : W -> X`, `v : W -> Y`,
    /// assumed to agree in `B`.
    pub fn induced(&self, u: &ChainMap, v: &ChainMap) -> Result<ChainMap> {
        if u.src() != v.src() {
            return Err(Error::DimensionMismatch("pullback cone ends".into()));
        }
        let w = u.src();
        let f = w.field();
        Ok(ChainMap::from_fn(w, &self.object, |n| match self.kernels.get(&n) {
            Some(k) => k.coords(&u.component(n).vstack(&v.component(n))),
            None => Matrix::zeros(f, 0, w.dim(n)),
        }))
    }
}

pub fn pullback(f: &ChainMap, g: &ChainMap) -> Result<Pullback> {
    if f.dst() != g.dst() {
        return Err(Error::DimensionMismatch("pullback legs have different targets".into()));
    }
    let field = same_field(f.src(), g.src())?;
    let (x, y) = (f.src(), g.src());
    let sum = direct_sum(x, y)?;
    let lo = x.lo().min(y.lo());
    let hi = x.hi().max(y.hi());
    let mut kernels = BTreeMap::new();
    for n in lo..=hi {
        let m = f.component(n).hstack(&g.component(n).neg());
        kernels.insert(n, Subspace::kernel_of(&m));
    }
    let dims: Vec<usize> = (lo..=hi).map(|n| kernels[&n].dim()).collect();
    let diffs = (lo + 1..=hi)
        .map(|n| kernels[&(n - 1)].coords(&sum.d(n).mul(&kernels[&n].basis)))
        .collect();
    let object = ChainComplex::new_unchecked(field, lo, dims, diffs);
    let to_left = ChainMap::from_fn(&object, x, |n| {
        kernels[&n].basis.select_rows(&(0..x.dim(n)).collect::<Vec<_>>())
    });
    let to_right = ChainMap::from_fn(&object, y, |n| {
        kernels[&n]
            .basis
            .select_rows(&(x.dim(n)..x.dim(n) + y.dim(n)).collect::<Vec<_>>())
    });
    Ok(Pullback {
        object,
        to_left,
        to_right,
        kernels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn tensor_of_intervals() {
        for p in [2, 3] {
            let j = ChainComplex::interval_j(fp(p));
            let jj = tensor(&j, &j).unwrap();
            assert_eq!((0..=2).map(|n| jj.dim(n)).collect::<Vec<_>>(), vec![4, 4, 1]);
            let j3 = tensor_power(&j, 3);
            j3.validate().unwrap();
            assert_eq!(j3.homology_in(0, 3), vec![1, 0, 0, 0]);
        }
    }

    #[test]
    fn unit_is_neutral() {
        let f = fp(3);
        let j = ChainComplex::interval_j(f);
        let u = ChainComplex::unit(f);
        assert_eq!(tensor(&j, &u).unwrap(), j);
        assert_eq!(tensor(&u, &j).unwrap(), j);
        assert_eq!(internal_hom(&u, &j).unwrap(), j);
    }

    #[test]
    fn degree_zero_cycles_are_chain_maps() {
        let f = fp(3);
        let x = ChainComplex::interval_j(f);
        let y = tensor(&x, &x).unwrap();
        let h = internal_hom(&x, &y).unwrap();
        h.validate().unwrap();
        let lay = hom_degree_layout(&x, &y);
        let z = h.cycles(0);
        for c in 0..z.cols() {
            lay.to_map(&z.col(c)).validate().unwrap();
        }
    }

    #[test]
    fn pushout_and_pullback_over_zero() {
        let f = fp(2);
        let x = ChainComplex::interval_j(f);
        let y = ChainComplex::disk(f, 2);
        let z = ChainComplex::zero(f);
        let po = pushout(&ChainMap::zero(&z, &x), &ChainMap::zero(&z, &y)).unwrap();
        assert_eq!(po.object, direct_sum(&x, &y).unwrap());
        let pb = pullback(&ChainMap::zero(&x, &z), &ChainMap::zero(&y, &z)).unwrap();
        assert_eq!(pb.object, direct_sum(&x, &y).unwrap());
    }

    #[test]
    fn pushout_along_identity() {
        let f = fp(3);
        let x = ChainComplex::interval_j(f);
        let y = ChainComplex::sphere(f, 0);
        let mut c = BTreeMap::new();
        c.insert(0, Matrix::from_rows(f, 1, 2, &[vec![1, 1]]));
        let g = ChainMap::new(x.clone(), y.clone(), c).unwrap();
        let po = pushout(&ChainMap::identity(&x), &g).unwrap();
        po.object.validate().unwrap();
        po.from_left.validate().unwrap();
        assert!(po.from_right.is_iso());
        let ind = po.induced(&g, &ChainMap::identity(&y)).unwrap();
        ind.validate().unwrap();
        assert!(ind.compose(&po.from_right).unwrap().is_iso());
    }

    #[test]
    fn cone_detects_quasi_iso() {
        let f = fp(2);
        let j = ChainComplex::interval_j(f);
        let u = ChainComplex::unit(f);
        let mut c = BTreeMap::new();
        c.insert(0, Matrix::from_rows(f, 1, 2, &[vec![1, 1]]));
        let s = ChainMap::new(j, u.clone(), c).unwrap();
        assert!(cone(&s).is_acyclic());
        assert!(!cone(&ChainMap::zero(&u, &u)).is_acyclic());
    }
}
