use std::collections::BTreeMap;

use super::SquareStructure;
use crate::chain::{hom_degree_layout, internal_hom, ChainComplex, ChainMap, HomLayout};
use crate::cset::LinearCubicalSet;
use crate::cube::CubeMor;
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::{Matrix, Quotient, Subspace};

/// `M^Q(X, Y)` truncated at `cap`: level `n` is the space of chain maps
/// `Q_n X -> Y`, stored as a basis of solutions inside `Hom^0(Q_n X, Y)`.
#[derive(Debug, Clone)]
pub struct MappingSpace {
    pub x: ChainComplex,
    pub y: ChainComplex,
    pub cap: usize,
    pub space: LinearCubicalSet,
    layouts: Vec<HomLayout>,
    bases: Vec<Subspace>,
}

/// An `n`-cell in the coordinates of level `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MapCell {
    pub level: usize,
    pub coords: Vec<u32>,
}

impl MapCell {
    pub fn zero(m: &MappingSpace, level: usize) -> Self {
        Self {
            level,
            coords: vec![0; m.space.dim(level)],
        }
    }
}

impl MappingSpace {
    pub fn field(&self) -> Fp {
        self.space.field()
    }

    /// The chain map `Q_n X -> Y` of a cell.
    pub fn cell_to_map(&self, cell: &MapCell) -> Result<ChainMap> {
        let n = cell.level;
        if n > self.cap {
            return Err(Error::CapExceeded {
                cap: self.cap,
                requested: n,
            });
        }
        if cell.coords.len() != self.space.dim(n) {
            return Err(Error::DimensionMismatch(format!("cell coordinates at level {n}")));
        }
        let v = self.bases[n].basis.apply(&cell.coords);
        Ok(self.layouts[n].to_map(&v))
    }

    /// The cell of a chain map `Q_n X -> Y`.
    pub fn map_to_cell(&self, n: usize, f: &ChainMap) -> Result<MapCell> {
        if n > self.cap {
            return Err(Error::CapExceeded {
                cap: self.cap,
                requested: n,
            });
        }
        let v = self.layouts[n].from_map(f);
        let col = Matrix::column(self.field(), &v);
        if !self.bases[n].contains(&col) {
            return Err(Error::NotChainMap(format!("level {n} cell")));
        }
        Ok(MapCell {
            level: n,
            coords: self.bases[n].coords(&col).col(0),
        })
    }

    /// `Hom^0(Q_n X, Y)` dimension, the ambient of level `n`.
    pub fn ambient_dim(&self, n: usize) -> usize {
        self.layouts[n].dim(0)
    }
}

pub fn mapping_space<Q: SquareStructure + ?Sized>(
    q: &Q,
    x: &ChainComplex,
    y: &ChainComplex,
    cap: usize,
) -> Result<MappingSpace> {
    let f = q.field();
    if x.field() != f || y.field() != f {
        return Err(Error::FieldMismatch(f.p(), x.field().p()));
    }
    x.validate()?;
    y.validate()?;
    let sources: Vec<ChainComplex> = (0..=cap).map(|n| q.on_object(n, x)).collect();
    let layouts: Vec<HomLayout> = sources.iter().map(|s| hom_degree_layout(s, y)).collect();
    let bases: Vec<Subspace> = layouts
        .iter()
        .map(|l| {
            let c = l.differential(0);
            if c.rows() == 0 {
                Subspace::full(f, l.dim(0))
            } else {
                Subspace::kernel_of(&c)
            }
        })
        .collect();
    let dims: Vec<usize> = bases.iter().map(Subspace::dim).collect();
    let precompose = |phi: &CubeMor| -> Matrix {
        let (m, n) = (phi.src(), phi.dst());
        let qphi = q.on_cube_mor(phi, x);
        let mut out = Matrix::zeros(f, dims[m], dims[n]);
        for j in 0..dims[n] {
            let v = bases[n].basis.col(j);
            let g = layouts[n].to_map(&v).compose(&qphi).expect("matching ends");
            let w = Matrix::column(f, &layouts[m].from_map(&g));
            let c = bases[m].coords(&w);
            for r in 0..dims[m] {
                out.set(r, j, c.get(r, 0));
            }
        }
        out
    };
    let faces = (0..=cap)
        .map(|n| {
            (0..n)
                .flat_map(|k| (0..2u8).map(move |i| (k, i)))
                .map(|(k, i)| precompose(&CubeMor::coface(n - 1, k, i).expect("in range")))
                .collect()
        })
        .collect();
    let degens = (0..cap)
        .map(|n| {
            (0..=n)
                .map(|k| precompose(&CubeMor::codegeneracy(n, k).expect("in range")))
                .collect()
        })
        .collect();
    let space = LinearCubicalSet::new_unchecked(f, cap, dims, faces, degens);
    Ok(MappingSpace {
        x: x.clone(),
        y: y.clone(),
        cap,
        space,
        layouts,
        bases,
    })
}

/// `f ∘ Q_n(g) ∘ α_{n,m}` for an `n`-cell `f` of `M(Y,Z)` and an `m`-cell
/// `g` of `M(X,Y)`, as an `(n+m)`-cell of `M(X,Z)`.
pub fn compose_cells<Q: SquareStructure + ?Sized>(
    q: &Q,
    myz: &MappingSpace,
    f: &MapCell,
    mxy: &MappingSpace,
    g: &MapCell,
    mxz: &MappingSpace,
) -> Result<MapCell> {
    if myz.x != mxy.y || mxz.x != mxy.x || mxz.y != myz.y {
        return Err(Error::DimensionMismatch("mapping spaces do not compose".into()));
    }
    let (n, m) = (f.level, g.level);
    if n + m > mxz.cap {
        return Err(Error::CapExceeded {
            cap: mxz.cap,
            requested: n + m,
        });
    }
    let fm = myz.cell_to_map(f)?;
    let gm = mxy.cell_to_map(g)?;
    let comp = fm.compose(&q.on_map(n, &gm))?.compose(&q.alpha(n, m, &mxy.x))?;
    mxz.map_to_cell(n + m, &comp)
}

/// The image `f ∘ β` of a chain map under the canonical functor `C -> C^Q`.
pub fn canonical_cell<Q: SquareStructure + ?Sized>(q: &Q, m: &MappingSpace, f: &ChainMap) -> Result<MapCell> {
    m.map_to_cell(0, &f.compose(&q.beta(&m.x))?)
}

/// The unit 0-cell `β(X)` of `M(X, X)`.
pub fn unit_cell<Q: SquareStructure + ?Sized>(q: &Q, m: &MappingSpace) -> Result<MapCell> {
    if m.x != m.y {
        return Err(Error::Precondition("unit cells live in endomorphism spaces".into()));
    }
    m.map_to_cell(0, &q.beta(&m.x))
}

/// A quotient `V / W` of a finite vector space, read as a set of cosets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cosets {
    pub field: Fp,
    pub ambient: usize,
    pub relations: usize,
}

impl Cosets {
    pub fn dim(&self) -> usize {
        self.ambient - self.relations
    }

    /// `p^dim`, if it fits.
    pub fn cardinality(&self) -> Option<u128> {
        (self.field.p() as u128).checked_pow(self.dim() as u32)
    }
}

/// Connected components of the 0-cells: two maps are joined by an edge iff
/// they differ by `d^1 e - d^0 e`, a linear subspace.
pub fn pi0(m: &MappingSpace) -> Result<Cosets> {
    let s = &m.space;
    let f = s.field();
    if s.cap() < 1 {
        return Err(Error::CapExceeded { cap: 0, requested: 1 });
    }
    let ends = s.face_action(1, 0, 1).sub(s.face_action(1, 0, 0));
    Ok(Cosets {
        field: f,
        ambient: s.dim(0),
        relations: ends.rank(),
    })
}

/// Chain maps `X -> Y` modulo null-homotopic ones, from the explicit
/// equations `d f = f d` and `f = dh + hd`.
pub fn homotopy_classes_oracle(x: &ChainComplex, y: &ChainComplex) -> Cosets {
    let f = x.field();
    let (lo, hi) = match x.support() {
        Some(r) => r,
        None => {
            return Cosets {
                field: f,
                ambient: 0,
                relations: 0,
            }
        }
    };
    // flattened components f_i : X_i -> Y_i
    let mut off = BTreeMap::new();
    let mut total = 0;
    for i in lo..=hi {
        off.insert(i, total);
        total += y.dim(i) * x.dim(i);
    }
    let flat = |comps: &BTreeMap<i64, Matrix>| -> Vec<u32> {
        let mut v = vec![0; total];
        for (i, m) in comps {
            if let Some(&o) = off.get(i) {
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        v[o + r * m.cols() + c] = m.get(r, c);
                    }
                }
            }
        }
        v
    };
    // chain condition: d_Y f_i - f_{i-1} d_X = 0 for each i
    let mut rows = Vec::new();
    for t in 0..total {
        let mut comps = BTreeMap::new();
        for i in lo..=hi {
            let (r, c) = (y.dim(i), x.dim(i));
            let o = off[&i];
            let mut m = Matrix::zeros(f, r, c);
            if t >= o && t < o + r * c {
                m.set((t - o) / c, (t - o) % c, 1);
            }
            comps.insert(i, m);
        }
        let mut eqs = Vec::new();
        for i in lo..=hi + 1 {
            let fi = comps.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(f, y.dim(i), x.dim(i)));
            let fim = comps
                .get(&(i - 1))
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(f, y.dim(i - 1), x.dim(i - 1)));
            let e = y.d(i).mul(&fi).sub(&fim.mul(&x.d(i)));
            for r in 0..e.rows() {
                eqs.extend_from_slice(e.row(r));
            }
        }
        rows.push(eqs);
    }
    let neq = rows.first().map_or(0, Vec::len);
    let mut constraint = Matrix::zeros(f, neq, total);
    for (t, col) in rows.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            constraint.set(r, t, v);
        }
    }
    let maps = Subspace::kernel_of(&constraint);
    // null-homotopic maps dh + hd for h_i : X_i -> Y_{i+1}
    let mut null = Vec::new();
    for i in lo..=hi {
        let (r, c) = (y.dim(i + 1), x.dim(i));
        for a in 0..r {
            for b in 0..c {
                let mut h = Matrix::zeros(f, r, c);
                h.set(a, b, 1);
                let mut comps = BTreeMap::new();
                comps.insert(i + 1, h.mul(&x.d(i + 1)));
                let dh = y.d(i + 1).mul(&h);
                comps.insert(i, dh);
                null.push(flat(&comps));
            }
        }
    }
    let mut nm = Matrix::zeros(f, total, null.len());
    for (j, v) in null.iter().enumerate() {
        for (r, &e) in v.iter().enumerate() {
            nm.set(r, j, e);
        }
    }
    Cosets {
        field: f,
        ambient: maps.dim(),
        relations: nm.rank(),
    }
}

/// Normalized chains: `M_n` modulo degenerate elements, with
/// `∂ = Σ_k (-1)^k (d_k^1 - d_k^0)`.
pub fn normalized_chains(m: &LinearCubicalSet) -> ChainComplex {
    let f = m.field();
    let cap = m.cap();
    let quotients: Vec<Quotient> = (0..=cap)
        .map(|n| {
            let mut deg = Matrix::zeros(f, m.dim(n), 0);
            if n > 0 {
                for k in 0..n {
                    deg = deg.hstack(m.degeneracy_action(n - 1, k));
                }
            }
            Quotient::new(f, m.dim(n), &deg)
        })
        .collect();
    let dims = quotients.iter().map(Quotient::dim).collect();
    let diffs = (1..=cap)
        .map(|n| {
            let mut d = Matrix::zeros(f, m.dim(n - 1), m.dim(n));
            for k in 0..n {
                let t = m.face_action(n, k, 1).sub(m.face_action(n, k, 0));
                d = if k % 2 == 0 { d.add(&t) } else { d.sub(&t) };
            }
            quotients[n - 1].proj.mul(&d).mul(&quotients[n].section)
        })
        .collect();
    ChainComplex::new(f, 0, dims, diffs).expect("cubical identities give a complex")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyComparison {
    pub cap: usize,
    /// `H_n` of the normalized chains of the mapping space, `n < cap`.
    pub mapping: Vec<usize>,
    /// `H_n([X, Y])`, `n < cap`.
    pub derived: Vec<usize>,
}

impl HomologyComparison {
    pub fn pass(&self) -> bool {
        self.mapping == self.derived
    }
}

pub fn mapping_space_homology_compare<Q: SquareStructure + ?Sized>(
    q: &Q,
    x: &ChainComplex,
    y: &ChainComplex,
    cap: usize,
) -> Result<HomologyComparison> {
    if cap < 2 {
        return Err(Error::Precondition("homology comparison needs cap >= 2".into()));
    }
    let m = mapping_space(q, x, y, cap)?;
    let top = cap as i64 - 1;
    let mapping = normalized_chains(&m.space).homology_in(0, top);
    let derived = internal_hom(x, y)?.homology_in(0, top);
    Ok(HomologyComparison { cap, mapping, derived })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square::chain_square;

    #[test]
    fn unit_to_unit() {
        let f = Fp::two();
        let q = chain_square(f);
        let x = ChainComplex::unit(f);
        let m = mapping_space(&q, &x, &x, 3).unwrap();
        m.space.validate().unwrap();
        assert_eq!(m.space.dims(), &[1, 1, 1, 1]);
        let p = pi0(&m).unwrap();
        assert_eq!(p.cardinality(), Some(2));
        assert_eq!(homotopy_classes_oracle(&x, &x).cardinality(), Some(2));
        // the nonzero cell above level 0 is the degenerate counit composite
        for n in 1..=3 {
            let s = m.space.degeneracy_action(n - 1, 0);
            assert_eq!(s.rank(), 1);
        }
        let c = mapping_space_homology_compare(&q, &x, &x, 3).unwrap();
        assert_eq!(c.mapping, vec![1, 0, 0]);
        assert!(c.pass());
    }

    #[test]
    fn disk_to_sphere() {
        let f = Fp::two();
        let q = chain_square(f);
        let m = mapping_space(&q, &ChainComplex::disk(f, 1), &ChainComplex::sphere(f, 0), 2).unwrap();
        // f_0 d = 0 forces f_0 = 0
        assert_eq!(m.space.dim(0), 0);
        let m = mapping_space(&q, &ChainComplex::disk(f, 1), &ChainComplex::disk(f, 1), 2).unwrap();
        assert_eq!(m.space.dim(0), 1);
        assert_eq!(pi0(&m).unwrap().cardinality(), Some(1));
    }

    #[test]
    fn loop_at_zero() {
        let f = Fp::new(3).unwrap();
        let q = chain_square(f);
        let c = mapping_space_homology_compare(&q, &ChainComplex::unit(f), &ChainComplex::sphere(f, 1), 3).unwrap();
        assert_eq!(c.mapping, vec![0, 1, 0]);
        assert!(c.pass());
    }

    #[test]
    fn cells_compose_unitally() {
        let f = Fp::new(3).unwrap();
        let q = chain_square(f);
        let x = ChainComplex::disk(f, 1);
        let y = ChainComplex::sphere(f, 1);
        let mxy = mapping_space(&q, &x, &y, 2).unwrap();
        let mxx = mapping_space(&q, &x, &x, 2).unwrap();
        let myy = mapping_space(&q, &y, &y, 2).unwrap();
        let (ux, uy) = (unit_cell(&q, &mxx).unwrap(), unit_cell(&q, &myy).unwrap());
        for n in 0..=2 {
            for j in 0..mxy.space.dim(n) {
                let mut g = MapCell::zero(&mxy, n);
                g.coords[j] = 1;
                assert_eq!(compose_cells(&q, &myy, &uy, &mxy, &g, &mxy).unwrap(), g);
                assert_eq!(compose_cells(&q, &mxy, &g, &mxx, &ux, &mxy).unwrap(), g);
            }
        }
    }
}
