//! Cubical objects in finite-dimensional vector spaces, truncated at a cap.

use super::{boundary, open_box, representable_monos, CubicalMap};
use crate::cube::CubeMor;
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::{Matrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCubicalSet {
    field: Fp,
    cap: usize,
    dims: Vec<usize>,
    /// `faces[n][2k + i]` is the action of `δ_k^i : [n-1] -> [n]`, a
    /// `dims[n-1] x dims[n]` matrix; `faces[0]` is empty.
    faces: Vec<Vec<Matrix>>,
    /// `degens[n][k]` is the action of `σ_k : [n+1] -> [n]`, a
    /// `dims[n+1] x dims[n]` matrix, for `n < cap`.
    degens: Vec<Vec<Matrix>>,
}

/// Which generating inclusions a fibration check lifts against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Battery {
    /// `⊓^{k,ε}[n] -> □[n]`, detecting fibrations.
    OpenBoxes,
    /// `∂□[n] -> □[n]`, detecting acyclic fibrations.
    Boundaries,
}

impl LinearCubicalSet {
    pub fn new(
        field: Fp,
        cap: usize,
        dims: Vec<usize>,
        faces: Vec<Vec<Matrix>>,
        degens: Vec<Vec<Matrix>>,
    ) -> Result<Self> {
        let x = Self {
            field,
            cap,
            dims,
            faces,
            degens,
        };
        x.validate()?;
        Ok(x)
    }

    pub(crate) fn new_unchecked(
        field: Fp,
        cap: usize,
        dims: Vec<usize>,
        faces: Vec<Vec<Matrix>>,
        degens: Vec<Vec<Matrix>>,
    ) -> Self {
        Self {
            field,
            cap,
            dims,
            faces,
            degens,
        }
    }

    /// `F_p` in every dimension with identity actions.
    pub fn constant(field: Fp, cap: usize) -> Self {
        let id = Matrix::identity(field, 1);
        let faces = (0..=cap).map(|n| vec![id.clone(); 2 * n]).collect();
        let degens = (0..cap).map(|n| vec![id.clone(); n + 1]).collect();
        Self::new_unchecked(field, cap, vec![1; cap + 1], faces, degens)
    }

    pub fn zero(field: Fp, cap: usize) -> Self {
        let z = Matrix::zeros(field, 0, 0);
        let faces = (0..=cap).map(|n| vec![z.clone(); 2 * n]).collect();
        let degens = (0..cap).map(|n| vec![z.clone(); n + 1]).collect();
        Self::new_unchecked(field, cap, vec![0; cap + 1], faces, degens)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn face_action(&self, n: usize, k: usize, i: u8) -> &Matrix {
        &self.faces[n][2 * k + i as usize]
    }

    pub fn degeneracy_action(&self, n: usize, k: usize) -> &Matrix {
        &self.degens[n][k]
    }

    /// `M(phi) : M_n -> M_m` for `phi : [m] -> [n]`, through the
    /// Eilenberg–Zilber decomposition of `phi` into generators.
    pub fn action(&self, phi: &CubeMor) -> Result<Matrix> {
        if phi.src() > self.cap || phi.dst() > self.cap {
            return Err(Error::CapExceeded {
                cap: self.cap,
                requested: phi.src().max(phi.dst()),
            });
        }
        Ok(self.action_unchecked(phi))
    }

    fn action_unchecked(&self, phi: &CubeMor) -> Matrix {
        if let Some((p, i, rest)) = phi.split_first_constant() {
            let n = phi.dst();
            let f = &self.faces[n][2 * p + i as usize];
            return self.action_unchecked(&rest).mul(f);
        }
        if let Some((q, rest)) = phi.split_last_unused() {
            let s = &self.degens[phi.src() - 1][q];
            return s.mul(&self.action_unchecked(&rest));
        }
        Matrix::identity(self.field, self.dims[phi.src()])
    }

    fn generators(&self) -> Vec<(CubeMor, Matrix)> {
        let mut out = Vec::new();
        for n in 1..=self.cap {
            for k in 0..n {
                for i in 0..2u8 {
                    out.push((
                        CubeMor::coface(n - 1, k, i).expect("in range"),
                        self.faces[n][2 * k + i as usize].clone(),
                    ));
                }
            }
        }
        for n in 0..self.cap {
            for k in 0..=n {
                out.push((CubeMor::codegeneracy(n, k).expect("in range"), self.degens[n][k].clone()));
            }
        }
        out
    }

    /// Shapes, then contravariant functoriality on all composable pairs of
    /// generators (the cubical identities are quadratic, so this suffices).
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCubicalSet(m));
        if self.dims.len() != self.cap + 1 || self.faces.len() != self.cap + 1 || self.degens.len() != self.cap {
            return bad("linear cubical set tables do not match the cap".into());
        }
        for n in 0..=self.cap {
            if self.faces[n].len() != 2 * n {
                return bad(format!("dimension {n} needs {} face maps", 2 * n));
            }
            for m in &self.faces[n] {
                if m.shape() != (self.dims[n - 1], self.dims[n]) || m.field() != self.field {
                    return bad(format!("face map into dimension {} has wrong shape", n - 1));
                }
            }
        }
        for n in 0..self.cap {
            if self.degens[n].len() != n + 1 {
                return bad(format!("dimension {n} needs {} degeneracy maps", n + 1));
            }
            for m in &self.degens[n] {
                if m.shape() != (self.dims[n + 1], self.dims[n]) || m.field() != self.field {
                    return bad(format!("degeneracy map into dimension {} has wrong shape", n + 1));
                }
            }
        }
        let gens = self.generators();
        for (g1, a1) in &gens {
            for (g2, a2) in &gens {
                if g1.dst() != g2.src() {
                    continue;
                }
                let composite = g2.after(g1);
                if self.action_unchecked(&composite) != a1.mul(a2) {
                    return bad(format!("action not functorial on {g2:?} ∘ {g1:?}"));
                }
            }
        }
        Ok(())
    }
}

/// A levelwise linear map `M -> N` commuting with the actions.
#[derive(Debug, Clone)]
pub struct LevelwiseMap {
    pub src: LinearCubicalSet,
    pub dst: LinearCubicalSet,
    /// `comps[n] : M_n -> N_n`.
    pub comps: Vec<Matrix>,
}

impl LevelwiseMap {
    pub fn new(src: LinearCubicalSet, dst: LinearCubicalSet, comps: Vec<Matrix>) -> Result<Self> {
        let m = Self { src, dst, comps };
        m.validate()?;
        Ok(m)
    }

    pub fn identity(m: &LinearCubicalSet) -> Self {
        let comps = m.dims.iter().map(|&d| Matrix::identity(m.field, d)).collect();
        Self {
            src: m.clone(),
            dst: m.clone(),
            comps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let cap = self.src.cap;
        if self.dst.cap != cap || self.comps.len() != cap + 1 {
            return Err(Error::DimensionMismatch("levelwise map caps".into()));
        }
        for n in 0..=cap {
            if self.comps[n].shape() != (self.dst.dims[n], self.src.dims[n]) {
                return Err(Error::DimensionMismatch(format!("levelwise map component {n}")));
            }
        }
        for (g, a) in self.src.generators() {
            let b = self.dst.action_unchecked(&g);
            // q_m ∘ M(g) = N(g) ∘ q_n for g : [m] -> [n]
            if self.comps[g.src()].mul(&a) != b.mul(&self.comps[g.dst()]) {
                return Err(Error::Precondition(format!("levelwise map does not commute with {g:?}")));
            }
        }
        Ok(())
    }
}

/// The matching space of `M` over a sub-cubical set `S ⊆ □[n]`.
#[derive(Debug, Clone)]
pub struct Matching {
    /// Compatible families, inside `⊕_{c ∈ S} M_{dim c}`.
    pub space: Subspace,
    /// Restriction `M_n -> ⊕_c M_{dim c}`, landing in `space`.
    pub restriction: Matrix,
    /// Restriction in the coordinates of `space`.
    pub comparison: Matrix,
    /// Block offsets of the cells of `S` in the ambient sum.
    pub offsets: Vec<usize>,
}

/// Limit of `M` over the nondegenerate cells of `S`, with the comparison
/// map from `M_n`. `inc` must be an inclusion of a subcomplex of `□[n]`.
pub fn linear_matching(m: &LinearCubicalSet, inc: &CubicalMap) -> Result<Matching> {
    let s = inc.src();
    let n = inc.dst().max_dim();
    if n > m.cap {
        return Err(Error::CapExceeded {
            cap: m.cap,
            requested: n,
        });
    }
    let monos = representable_monos(n);
    if inc.dst().len() != monos.len() {
        return Err(Error::Precondition("matching needs a subcomplex of a representable".into()));
    }
    let f = m.field;
    let mut offsets = Vec::with_capacity(s.len());
    let mut total = 0;
    for c in 0..s.len() {
        offsets.push(total);
        total += m.dims[s.dim(c)];
    }
    // one block row per (cell, face)
    let mut rows: Vec<Matrix> = Vec::new();
    for c in 0..s.len() {
        let d = s.dim(c);
        for k in 0..d {
            for i in 0..2u8 {
                let face = s.face(c, k, i);
                let mut row = Matrix::zeros(f, m.dims[d - 1], total);
                row.paste(0, offsets[c], m.face_action(d, k, i));
                row.paste(0, offsets[face.cell], &m.action(&face.eta)?.neg());
                rows.push(row);
            }
        }
    }
    let constraint = rows
        .into_iter()
        .reduce(|a, b| a.vstack(&b))
        .unwrap_or_else(|| Matrix::zeros(f, 0, total));
    let space = Subspace::kernel_of(&constraint);
    let mut restriction = Matrix::zeros(f, total, m.dims[n]);
    for c in 0..s.len() {
        let img = &inc.assign()[c];
        if !img.is_nondegenerate() {
            return Err(Error::Precondition("matching shape is not a subcomplex".into()));
        }
        let a = m.action(&monos[img.cell])?;
        restriction.paste(offsets[c], 0, &a);
    }
    let comparison = space.coords(&restriction);
    Ok(Matching {
        space,
        restriction,
        comparison,
        offsets,
    })
}

/// One corner computation in a fibration check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerEntry {
    pub n: usize,
    pub shape: String,
    pub corner_rank: usize,
    pub target_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationReport {
    pub pass: bool,
    pub entries: Vec<CornerEntry>,
}

impl FibrationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CornerEntry> {
        self.entries.iter().filter(|e| e.corner_rank < e.target_dim)
    }
}

fn battery_shapes(battery: Battery, n: usize) -> Vec<(String, CubicalMap)> {
    match battery {
        Battery::Boundaries => vec![(format!("boundary({n})"), boundary(n).1)],
        Battery::OpenBoxes => {
            let mut v = Vec::new();
            for k in 0..n {
                for e in 0..2u8 {
                    v.push((format!("open_box({n},{k},{e})"), open_box(n, k, e).expect("in range").1));
                }
            }
            v
        }
    }
}

/// Right lifting property of `q` against the chosen battery for `n <= cap`:
/// surjectivity of every corner map `M_n -> N_n ×_{N(S)} M(S)`.
pub fn linear_fibration_check(q: &LevelwiseMap, battery: Battery, cap: usize) -> Result<FibrationReport> {
    if cap > q.src.cap {
        return Err(Error::CapExceeded {
            cap: q.src.cap,
            requested: cap,
        });
    }
    let f = q.src.field;
    let mut entries = Vec::new();
    for n in 0..=cap {
        for (shape, inc) in battery_shapes(battery, n) {
            let mm = linear_matching(&q.src, &inc)?;
            let nm = linear_matching(&q.dst, &inc)?;
            let s = inc.src();
            // block-diagonal q on the ambient sums
            let mut qa = Matrix::zeros(f, nm.restriction.rows(), mm.restriction.rows());
            for c in 0..s.len() {
                qa.paste(nm.offsets[c], mm.offsets[c], &q.comps[s.dim(c)]);
            }
            let lhs = nm.restriction.hstack(&qa.mul(&mm.space.basis).neg());
            let target_dim = lhs.cols() - lhs.rank();
            let corner = q.comps[n].vstack(&mm.comparison);
            let corner_rank = corner.rank();
            entries.push(CornerEntry {
                n,
                shape,
                corner_rank,
                target_dim,
            });
        }
    }
    let pass = entries.iter().all(|e| e.corner_rank == e.target_dim);
    Ok(FibrationReport { pass, entries })
}

/// `M -> 0`.
pub fn to_zero(m: &LinearCubicalSet) -> LevelwiseMap {
    let z = LinearCubicalSet::zero(m.field, m.cap);
    let comps = m.dims.iter().map(|&d| Matrix::zeros(m.field, 0, d)).collect();
    LevelwiseMap {
        src: m.clone(),
        dst: z,
        comps,
    }
}

/// `0 -> M`.
pub fn from_zero(m: &LinearCubicalSet) -> LevelwiseMap {
    let z = LinearCubicalSet::zero(m.field, m.cap);
    let comps = m.dims.iter().map(|&d| Matrix::zeros(m.field, d, 0)).collect();
    LevelwiseMap {
        src: z,
        dst: m.clone(),
        comps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::representable;

    fn f2() -> Fp {
        Fp::two()
    }

    #[test]
    fn constant_validates() {
        LinearCubicalSet::constant(f2(), 3).validate().unwrap();
        let c = LinearCubicalSet::constant(f2(), 2);
        let phi = CubeMor::coface(1, 0, 1).unwrap().after(&CubeMor::codegeneracy(1, 1).unwrap());
        assert_eq!(c.action(&phi).unwrap(), Matrix::identity(f2(), 1));
    }

    #[test]
    fn rejects_non_functorial() {
        let f = f2();
        let mut c = LinearCubicalSet::constant(f, 1);
        c.faces[1][0] = Matrix::zeros(f, 1, 1);
        assert!(c.validate().is_err());
    }

    #[test]
    fn matching_examples() {
        let c = LinearCubicalSet::constant(f2(), 3);
        let m = linear_matching(&c, &boundary(0).1).unwrap();
        assert_eq!(m.space.dim(), 0);
        assert_eq!(m.comparison.shape(), (0, 1));
        let r = representable(2);
        let id = CubicalMap::identity(&r);
        let m = linear_matching(&c, &id).unwrap();
        assert_eq!(m.space.dim(), 1);
        assert_eq!(m.comparison.rank(), 1);
        let m = linear_matching(&c, &boundary(2).1).unwrap();
        assert_eq!(m.space.dim(), 1);
        assert_eq!(m.comparison, Matrix::identity(f2(), 1));
    }

    #[test]
    fn fibration_examples() {
        let c = LinearCubicalSet::constant(f2(), 3);
        let id = LevelwiseMap::identity(&c);
        assert!(linear_fibration_check(&id, Battery::OpenBoxes, 3).unwrap().pass);
        assert!(linear_fibration_check(&id, Battery::Boundaries, 3).unwrap().pass);
        assert!(linear_fibration_check(&to_zero(&c), Battery::OpenBoxes, 3).unwrap().pass);
        let r = linear_fibration_check(&from_zero(&c), Battery::Boundaries, 3).unwrap();
        assert!(!r.pass);
        let first = r.failures().next().unwrap();
        assert_eq!((first.n, first.corner_rank, first.target_dim), (0, 0, 1));
    }
}
