//! Finite cubical sets presented by nondegenerate cells and normalized face
//! tables.

mod chains;
mod json;
mod linear;
mod map;
mod random;
mod triangulate;

use std::collections::{BTreeSet, HashMap};

pub use chains::normalized_chains;
pub use json::{cset_from_json, cset_to_json};
pub use linear::{
    from_zero, linear_fibration_check, linear_matching, to_zero, Battery, CornerEntry, FibrationReport,
    LevelwiseMap, LinearCubicalSet, Matching,
};
pub use map::{check_mono, check_rlp_brute, find_isomorphism, CubicalMap, RlpReport};
pub use random::random_cubical_set;
pub use triangulate::{triangulate, triangulate_map, TriangulationKey};

use crate::cube::{enumerate_epis, enumerate_monos, CubeMor, Entry};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
}

/// An element `eta^* c` of a cubical set: `eta` an epi onto the dimension
/// of the nondegenerate cell `c` (an index into the cell list).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegCell {
    pub eta: CubeMor,
    pub cell: usize,
}

impl DegCell {
    pub fn is_nondegenerate(&self) -> bool {
        self.eta.is_identity()
    }

    pub fn dim(&self) -> usize {
        self.eta.src()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalSet {
    cells: Vec<Cell>,
    index: HashMap<String, usize>,
    /// `faces[c][2k + i]` is `d_k^i c`.
    faces: Vec<Vec<DegCell>>,
}

impl CubicalSet {
    /// Build from cells and face tables; validates the cubical identities and
    /// intrinsic nondegeneracy.
    pub fn new(cells: Vec<Cell>, faces: Vec<Vec<DegCell>>) -> Result<Self> {
        let mut index = HashMap::with_capacity(cells.len());
        for (i, c) in cells.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(Error::InvalidCubicalSet(format!("duplicate cell id `{}`", c.id)));
            }
        }
        let x = Self { cells, index, faces };
        x.validate()?;
        Ok(x)
    }

    pub fn empty() -> Self {
        Self {
            cells: Vec::new(),
            index: HashMap::new(),
            faces: Vec::new(),
        }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn dim(&self, c: usize) -> usize {
        self.cells[c].dim
    }

    pub fn max_dim(&self) -> usize {
        self.cells.iter().map(|c| c.dim).max().unwrap_or(0)
    }

    /// Nondegenerate cells per dimension, `0..=max_dim`.
    pub fn counts(&self) -> Vec<usize> {
        if self.cells.is_empty() {
            return Vec::new();
        }
        let mut v = vec![0; self.max_dim() + 1];
        for c in &self.cells {
            v[c.dim] += 1;
        }
        v
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&c| self.cells[c].dim == d).collect()
    }

    pub fn face(&self, c: usize, k: usize, i: u8) -> &DegCell {
        &self.faces[c][2 * k + i as usize]
    }

    pub fn faces_of(&self, c: usize) -> &[DegCell] {
        &self.faces[c]
    }

    pub fn nondeg(&self, c: usize) -> DegCell {
        DegCell {
            eta: CubeMor::identity(self.cells[c].dim),
            cell: c,
        }
    }

    /// `phi^* x` for `phi : [m] -> [n]` and `x` an `n`-element.
    pub fn act(&self, phi: &CubeMor, x: &DegCell) -> DegCell {
        debug_assert_eq!(phi.dst(), x.eta.src());
        let c = x.eta.after(phi);
        self.act_on_cell(c, x.cell)
    }

    fn act_on_cell(&self, c: CubeMor, cell: usize) -> DegCell {
        match c.split_first_constant() {
            None => DegCell { eta: c, cell },
            Some((p, i, rest)) => {
                let f = &self.faces[cell][2 * p + i as usize];
                let c2 = f.eta.after(&rest);
                self.act_on_cell(c2, f.cell)
            }
        }
    }

    /// All `m`-elements, degenerate ones included.
    pub fn elements(&self, m: usize) -> Vec<DegCell> {
        let mut out = Vec::new();
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.dim <= m {
                for eta in enumerate_epis(m, cell.dim) {
                    out.push(DegCell { eta, cell: c });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.faces.len() != self.cells.len() {
            return Err(Error::InvalidCubicalSet("face table length".into()));
        }
        for (c, cell) in self.cells.iter().enumerate() {
            let d = cell.dim;
            if self.faces[c].len() != 2 * d {
                return Err(Error::InvalidCubicalSet(format!(
                    "cell `{}` of dim {d} has {} faces",
                    cell.id,
                    self.faces[c].len()
                )));
            }
            for f in &self.faces[c] {
                let ok = f.cell < self.cells.len()
                    && f.eta.src() + 1 == d
                    && f.eta.is_epi()
                    && f.eta.dst() == self.cells[f.cell].dim;
                if !ok {
                    return Err(Error::InvalidCubicalSet(format!("malformed face of `{}`", cell.id)));
                }
            }
        }
        // cubical identities: for p < q, d_{q-1}^b d_p^a = d_p^a d_q^b
        for (c, cell) in self.cells.iter().enumerate() {
            let d = cell.dim;
            for p in 0..d {
                for q in p + 1..d {
                    for a in 0..2u8 {
                        for b in 0..2u8 {
                            let r1 = self.act(&CubeMor::coface(d - 2, q - 1, b)?, self.face(c, p, a));
                            let r2 = self.act(&CubeMor::coface(d - 2, p, a)?, self.face(c, q, b));
                            if r1 != r2 {
                                return Err(Error::InvalidCubicalSet(format!(
                                    "cubical identity fails on `{}` at faces ({p},{a}), ({q},{b})",
                                    cell.id
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Disjoint union, with ids prefixed `l.` and `r.`.
    pub fn coproduct(&self, other: &CubicalSet) -> CubicalSet {
        let n = self.cells.len();
        let mut cells = Vec::with_capacity(n + other.cells.len());
        let mut faces = Vec::with_capacity(n + other.cells.len());
        for (c, cell) in self.cells.iter().enumerate() {
            cells.push(Cell {
                id: format!("l.{}", cell.id),
                dim: cell.dim,
            });
            faces.push(self.faces[c].clone());
        }
        for (c, cell) in other.cells.iter().enumerate() {
            cells.push(Cell {
                id: format!("r.{}", cell.id),
                dim: cell.dim,
            });
            faces.push(
                other.faces[c]
                    .iter()
                    .map(|f| DegCell {
                        eta: f.eta.clone(),
                        cell: f.cell + n,
                    })
                    .collect(),
            );
        }
        CubicalSet::new(cells, faces).expect("coproduct of valid sets")
    }

    /// Whether a set of cells is closed under faces.
    pub fn is_subcomplex(&self, cells: &BTreeSet<usize>) -> bool {
        cells
            .iter()
            .all(|&c| self.faces[c].iter().all(|f| cells.contains(&f.cell)))
    }

    /// Smallest subcomplex containing the given cells.
    pub fn closure(&self, seeds: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<usize> = seeds.into_iter().collect();
        while let Some(c) = stack.pop() {
            if out.insert(c) {
                stack.extend(self.faces[c].iter().map(|f| f.cell));
            }
        }
        out
    }

    /// The subcomplex on the given cells (assumed closed) and its inclusion.
    pub fn subcomplex(&self, keep: &BTreeSet<usize>) -> Result<(CubicalSet, CubicalMap)> {
        if !self.is_subcomplex(keep) {
            return Err(Error::InvalidCubicalSet("cell set is not closed under faces".into()));
        }
        let order: Vec<usize> = keep.iter().copied().collect();
        let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let cells = order.iter().map(|&c| self.cells[c].clone()).collect();
        let faces = order
            .iter()
            .map(|&c| {
                self.faces[c]
                    .iter()
                    .map(|f| DegCell {
                        eta: f.eta.clone(),
                        cell: pos[&f.cell],
                    })
                    .collect()
            })
            .collect();
        let sub = CubicalSet::new(cells, faces)?;
        let assign = order.iter().map(|&c| self.nondeg(c)).collect();
        let inc = CubicalMap::new(sub.clone(), self.clone(), assign)?;
        Ok((sub, inc))
    }

    /// `X / A`: the subcomplex `A` collapsed to a single vertex `*`.
    pub fn collapse(&self, a: &BTreeSet<usize>) -> Result<CubicalSet> {
        if a.is_empty() {
            return Ok(self.clone());
        }
        if !self.is_subcomplex(a) {
            return Err(Error::InvalidCubicalSet("collapsed cells are not a subcomplex".into()));
        }
        let order: Vec<usize> = (0..self.cells.len()).filter(|c| !a.contains(c)).collect();
        let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &c)| (c, i + 1)).collect();
        let mut cells = vec![Cell {
            id: "*".into(),
            dim: 0,
        }];
        let mut faces = vec![Vec::new()];
        for &c in &order {
            let mut id = self.cells[c].id.clone();
            if id == "*" {
                id = "*'".into();
            }
            cells.push(Cell {
                id,
                dim: self.cells[c].dim,
            });
            faces.push(
                self.faces[c]
                    .iter()
                    .map(|f| match pos.get(&f.cell) {
                        Some(&p) => DegCell {
                            eta: f.eta.clone(),
                            cell: p,
                        },
                        None => DegCell {
                            eta: CubeMor::from_parts_unchecked(f.eta.src(), Vec::new()),
                            cell: 0,
                        },
                    })
                    .collect(),
            );
        }
        CubicalSet::new(cells, faces)
    }
}

fn mono_id(m: &CubeMor) -> String {
    if m.dst() == 0 {
        return "*".into();
    }
    m.entries()
        .iter()
        .map(|e| match e {
            Entry::Const(0) => '0',
            Entry::Const(_) => '1',
            Entry::Var(_) => 'x',
        })
        .collect()
}

/// The sub-cubical set of `□[n]` on the monos satisfying `keep` (which must
/// be closed under faces), with its inclusion into `□[n]`.
fn sub_representable(n: usize, keep: impl Fn(&CubeMor) -> bool) -> (CubicalSet, CubicalMap) {
    let mut monos: Vec<CubeMor> = Vec::new();
    for m in 0..=n {
        monos.extend(enumerate_monos(m, n).into_iter().filter(|mo| keep(mo)));
    }
    let full = representable(n);
    let keep_idx: BTreeSet<usize> = monos
        .iter()
        .map(|m| full.cell_index(&mono_id(m)).expect("mono is a cell"))
        .collect();
    full.subcomplex(&keep_idx).expect("closed under faces")
}

/// The nondegenerate cells of `□[n]`, in cell order.
pub fn representable_monos(n: usize) -> Vec<CubeMor> {
    (0..=n).flat_map(|m| enumerate_monos(m, n)).collect()
}

/// `□[n]`: nondegenerate `m`-cells are the monos `[m] -> [n]`.
pub fn representable(n: usize) -> CubicalSet {
    let monos = representable_monos(n);
    let index: HashMap<CubeMor, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let cells = monos
        .iter()
        .map(|m| Cell {
            id: mono_id(m),
            dim: m.src(),
        })
        .collect();
    let faces = monos
        .iter()
        .map(|mo| {
            let d = mo.src();
            let mut fs = Vec::with_capacity(2 * d);
            for k in 0..d {
                for i in 0..2u8 {
                    let f = mo.after(&CubeMor::coface(d - 1, k, i).expect("in range"));
                    fs.push(DegCell {
                        eta: CubeMor::identity(d - 1),
                        cell: index[&f],
                    });
                }
            }
            fs
        })
        .collect();
    CubicalSet::new(cells, faces).expect("representable is valid")
}

/// `∂□[n]`, the union of all proper faces; empty for `n = 0`.
pub fn boundary(n: usize) -> (CubicalSet, CubicalMap) {
    sub_representable(n, |m| !m.is_identity())
}

/// `⊓^{k,ε}[n]`: the union of the faces `δ_a^b` with `(a, b) != (k, ε)`.
pub fn open_box(n: usize, k: usize, eps: u8) -> Result<(CubicalSet, CubicalMap)> {
    if n == 0 || k >= n || eps > 1 {
        return Err(Error::OutOfRange(format!("open box ({n}, {k}, {eps})")));
    }
    Ok(sub_representable(n, |m| {
        m.entries()
            .iter()
            .enumerate()
            .any(|(a, e)| matches!(e, Entry::Const(b) if (a, *b) != (k, eps)))
    }))
}

/// Geometric product: nondegenerate cells are pairs of nondegenerate cells.
pub fn day_tensor(a: &CubicalSet, b: &CubicalSet) -> CubicalSet {
    let nb = b.cells.len();
    let mut cells = Vec::with_capacity(a.cells.len() * nb);
    let mut faces = Vec::with_capacity(a.cells.len() * nb);
    for (ia, ca) in a.cells.iter().enumerate() {
        for (ib, cb) in b.cells.iter().enumerate() {
            cells.push(Cell {
                id: format!("({},{})", ca.id, cb.id),
                dim: ca.dim + cb.dim,
            });
            let mut fs = Vec::with_capacity(2 * (ca.dim + cb.dim));
            for k in 0..ca.dim {
                for i in 0..2u8 {
                    let f = a.face(ia, k, i);
                    fs.push(DegCell {
                        eta: f.eta.tensor(&CubeMor::identity(cb.dim)),
                        cell: f.cell * nb + ib,
                    });
                }
            }
            for k in 0..cb.dim {
                for i in 0..2u8 {
                    let f = b.face(ib, k, i);
                    fs.push(DegCell {
                        eta: CubeMor::identity(ca.dim).tensor(&f.eta),
                        cell: ia * nb + f.cell,
                    });
                }
            }
            faces.push(fs);
        }
    }
    CubicalSet::new(cells, faces).expect("product of valid sets")
}

/// `∂□[n] -> □[n]` and `⊓^{k,ε}[n] -> □[n]` for `n <= max`.
pub fn generating_inclusions(max: usize, acyclic: bool) -> Vec<(String, CubicalMap)> {
    let mut out = Vec::new();
    for n in 0..=max {
        if acyclic {
            for k in 0..n {
                for e in 0..2u8 {
                    let (_, inc) = open_box(n, k, e).expect("in range");
                    out.push((format!("open_box({n},{k},{e})"), inc));
                }
            }
        } else {
            out.push((format!("boundary({n})"), boundary(n).1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{binom, hom_count};
    use crate::field::Fp;

    #[test]
    fn representable_counts() {
        assert_eq!(representable(0).counts(), vec![1]);
        assert_eq!(representable(2).counts(), vec![4, 4, 1]);
        for n in 0..=4 {
            let c = representable(n).counts();
            for (m, &k) in c.iter().enumerate() {
                assert_eq!(k as u64, binom(n, m) << (n - m));
            }
        }
        let r1 = representable(1);
        assert_eq!(r1.elements(0).len(), 2);
        assert_eq!(r1.elements(1).len(), 3);
        for n in 0..=3 {
            for m in 0..=3 {
                assert_eq!(representable(n).elements(m).len() as u64, hom_count(m, n));
            }
        }
    }

    #[test]
    fn boundary_and_open_box_counts() {
        assert!(boundary(0).0.is_empty());
        assert_eq!(boundary(2).0.counts(), vec![4, 4]);
        assert_eq!(open_box(1, 0, 0).unwrap().0.counts(), vec![1]);
        assert_eq!(open_box(1, 0, 0).unwrap().0.cells()[0].id, "1");
        assert_eq!(open_box(2, 0, 1).unwrap().0.counts(), vec![4, 3]);
        assert!(open_box(2, 2, 0).is_err());
        assert!(open_box(0, 0, 0).is_err());
    }

    #[test]
    fn normalization_is_idempotent() {
        let sets = vec![
            representable(3),
            boundary(3).0,
            day_tensor(&boundary(2).0, &representable(1)),
        ];
        for x in sets {
            for c in 0..x.len() {
                for f in x.faces_of(c) {
                    let again = x.act(&CubeMor::identity(f.dim()), f);
                    assert_eq!(&again, f);
                }
            }
        }
    }

    #[test]
    fn rejects_broken_identities() {
        // a square whose faces disagree at a corner
        let (b, _) = boundary(2);
        let mut cells = b.cells().to_vec();
        let mut faces: Vec<Vec<DegCell>> = (0..b.len()).map(|c| b.faces_of(c).to_vec()).collect();
        let mut top: Vec<DegCell> = Vec::new();
        let edges: Vec<usize> = b.cells_of_dim(1);
        for (k, e) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let id = if k == 0 { format!("{e}x") } else { format!("x{e}") };
            top.push(b.nondeg(b.cell_index(&id).unwrap()));
        }
        top.swap(0, 1);
        cells.push(Cell { id: "sq".into(), dim: 2 });
        faces.push(top);
        assert_eq!(edges.len(), 4);
        assert!(matches!(CubicalSet::new(cells, faces), Err(Error::InvalidCubicalSet(_))));
    }

    #[test]
    fn presented_cells_are_nondegenerate() {
        let r = representable(1);
        let x = r.cell_index("x").unwrap();
        let zero = r.cell_index("0").unwrap();
        let one = r.cell_index("1").unwrap();
        let mut cells = r.cells().to_vec();
        let mut faces: Vec<Vec<DegCell>> = (0..r.len()).map(|c| r.faces_of(c).to_vec()).collect();
        // d_0^0 = d_0^1 = x, the other faces degenerate vertices: the face
        // table of σ_0 x, yet a genuine 2-cell
        let s = |c: usize| DegCell { eta: CubeMor::codegeneracy(0, 0).unwrap(), cell: c };
        cells.push(Cell { id: "flat".into(), dim: 2 });
        faces.push(vec![r.nondeg(x), r.nondeg(x), s(zero), s(one)]);
        let flat = CubicalSet::new(cells, faces).unwrap();
        let h = normalized_chains(&flat, Fp::two()).homology_in(0, 2);
        assert_eq!(h, vec![1, 0, 1]);
    }

    #[test]
    fn collapse_makes_circle() {
        let r = representable(1);
        let (b, _) = boundary(1);
        let ends: BTreeSet<usize> = b.cells().iter().map(|c| r.cell_index(&c.id).unwrap()).collect();
        let circle = r.collapse(&ends).unwrap();
        assert_eq!(circle.counts(), vec![1, 1]);
        let h = normalized_chains(&circle, Fp::two()).homology_in(0, 1);
        assert_eq!(h, vec![1, 1]);
    }
}
