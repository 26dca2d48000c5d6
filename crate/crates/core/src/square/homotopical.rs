use std::collections::{BTreeMap, BTreeSet};

use super::colim::pushout_product;
use super::mapping::{mapping_space, MapCell, MappingSpace};
use super::SquareStructure;
use crate::chain::{direct_sum, direct_sum_map, pushout, ChainComplex, ChainMap};
use crate::cset::{
    boundary, linear_fibration_check, open_box, representable, Battery, CubicalMap, CubicalSet, FibrationReport,
    LevelwiseMap, LinearCubicalSet,
};
use crate::cube::CubeMor;
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::{Matrix, Subspace};

/// A chain map in a battery, with its acyclicity flag.
#[derive(Debug, Clone)]
pub struct ChainArrow {
    pub name: String,
    pub map: ChainMap,
    pub acyclic: bool,
}

/// A monomorphism of cubical sets in a battery.
#[derive(Debug, Clone)]
pub struct MonoArrow {
    pub name: String,
    pub map: CubicalMap,
    pub acyclic: bool,
}

fn sphere_into_disk(f: Fp, n: i64) -> ChainMap {
    let s = ChainComplex::sphere(f, n - 1);
    let d = ChainComplex::disk(f, n);
    ChainMap::new(s, d, BTreeMap::from([(n - 1, Matrix::identity(f, 1))])).expect("bottom cell")
}

fn disk_onto_sphere(f: Fp, n: i64) -> ChainMap {
    let d = ChainComplex::disk(f, n);
    let s = ChainComplex::sphere(f, n);
    ChainMap::new(d, s, BTreeMap::from([(n, Matrix::identity(f, 1))])).expect("top cell")
}

/// `0 -> Dⁿ` (acyclic) and `Sⁿ⁻¹ -> Dⁿ` for `0 <= n <= max`.
pub fn standard_cofibrations(f: Fp, max: usize) -> Vec<ChainArrow> {
    let z = ChainComplex::zero(f);
    let mut out = Vec::new();
    for n in 0..=max as i64 {
        out.push(ChainArrow {
            name: format!("0->D{n}"),
            map: ChainMap::zero(&z, &ChainComplex::disk(f, n)),
            acyclic: true,
        });
        out.push(ChainArrow {
            name: format!("S{}->D{n}", n - 1),
            map: sphere_into_disk(f, n),
            acyclic: false,
        });
    }
    out
}

/// `Dⁿ -> 0` (acyclic) and the projection `Dⁿ -> Sⁿ` for `0 <= n <= max`.
pub fn standard_fibrations(f: Fp, max: usize) -> Vec<ChainArrow> {
    let z = ChainComplex::zero(f);
    let mut out = Vec::new();
    for n in 0..=max as i64 {
        out.push(ChainArrow {
            name: format!("D{n}->0"),
            map: ChainMap::zero(&ChainComplex::disk(f, n), &z),
            acyclic: true,
        });
        out.push(ChainArrow {
            name: format!("D{n}->S{n}"),
            map: disk_onto_sphere(f, n),
            acyclic: false,
        });
    }
    out
}

fn sub_inclusion(b: &CubicalSet, seeds: &[usize]) -> CubicalMap {
    let keep: BTreeSet<usize> = b.closure(seeds.iter().copied());
    b.subcomplex(&keep).expect("closure is a subcomplex").1
}

/// Generating inclusions `∂□[n] -> □[n]` and `⊓^{k,ε}[n] -> □[n]` for
/// `n <= max`, followed (when `extra`) by further monomorphisms.
pub fn standard_monos(max: usize, extra: bool) -> Vec<MonoArrow> {
    let mut out = Vec::new();
    for n in 0..=max {
        out.push(MonoArrow {
            name: format!("boundary({n})"),
            map: boundary(n).1,
            acyclic: false,
        });
        for k in 0..n {
            for e in 0..2u8 {
                out.push(MonoArrow {
                    name: format!("open_box({n},{k},{e})"),
                    map: open_box(n, k, e).expect("in range").1,
                    acyclic: true,
                });
            }
        }
    }
    if extra {
        // cells of □[2]: vertices 0..4, edges 4..8, the square 8
        let sq = representable(2);
        out.push(MonoArrow {
            name: "vertex->square".into(),
            map: sub_inclusion(&sq, &[0]),
            acyclic: true,
        });
        out.push(MonoArrow {
            name: "edge->square".into(),
            map: sub_inclusion(&sq, &[4]),
            acyclic: true,
        });
        out.push(MonoArrow {
            name: "empty->interval".into(),
            map: CubicalMap::new(CubicalSet::empty(), representable(1), Vec::new())
                .expect("empty map"),
            acyclic: false,
        });
        let circle = boundary(2).0;
        out.push(MonoArrow {
            name: "vertex->circle".into(),
            map: sub_inclusion(&circle, &[0]),
            acyclic: false,
        });
        out.push(MonoArrow {
            name: "edge->circle".into(),
            map: sub_inclusion(&circle, &[4]),
            acyclic: false,
        });
    }
    out
}

/// A levelwise map between mapping spaces given by a map-level operation.
fn levelwise(src: &MappingSpace, dst: &MappingSpace, op: impl Fn(usize, &ChainMap) -> ChainMap) -> Result<Vec<Matrix>> {
    let f = src.field();
    (0..=src.cap)
        .map(|n| {
            let (ds, dd) = (src.space.dim(n), dst.space.dim(n));
            let mut m = Matrix::zeros(f, dd, ds);
            for j in 0..ds {
                let mut cell = MapCell::zero(src, n);
                cell.coords[j] = 1;
                let img = dst.map_to_cell(n, &op(n, &src.cell_to_map(&cell)?))?;
                for (r, &v) in img.coords.iter().enumerate() {
                    m.set(r, j, v);
                }
            }
            Ok(m)
        })
        .collect()
}

/// Levelwise pullback of `A -a-> C <-b- B`.
fn linear_pullback(
    a_src: &LinearCubicalSet,
    a: &[Matrix],
    b_src: &LinearCubicalSet,
    b: &[Matrix],
) -> (LinearCubicalSet, Vec<Subspace>) {
    let f = a_src.field();
    let cap = a_src.cap();
    let kernels: Vec<Subspace> = (0..=cap)
        .map(|n| Subspace::kernel_of(&a[n].hstack(&b[n].neg())))
        .collect();
    let dims = kernels.iter().map(Subspace::dim).collect();
    // an action M_n -> M_m on pairs, in kernel coordinates
    let restrict = |m: usize, n: usize, am: &Matrix, bm: &Matrix| -> Matrix {
        let blk = am.block_diag(bm);
        kernels[m].coords(&blk.mul(&kernels[n].basis))
    };
    let faces = (0..=cap)
        .map(|n| {
            (0..n)
                .flat_map(|k| (0..2u8).map(move |i| (k, i)))
                .map(|(k, i)| restrict(n - 1, n, a_src.face_action(n, k, i), b_src.face_action(n, k, i)))
                .collect()
        })
        .collect();
    let degens = (0..cap)
        .map(|n| {
            (0..=n)
                .map(|k| restrict(n + 1, n, a_src.degeneracy_action(n, k), b_src.degeneracy_action(n, k)))
                .collect()
        })
        .collect();
    (LinearCubicalSet::new_unchecked(f, cap, dims, faces, degens), kernels)
}

/// The corner map `M(X', Y) -> M(X, Y) ×_{M(X, Y')} M(X', Y')` of a
/// cofibration `f : X -> X'` and a fibration `g : Y -> Y'`.
#[derive(Debug, Clone)]
pub struct Corner {
    pub source: MappingSpace,
    pub target: LinearCubicalSet,
    pub map: LevelwiseMap,
}

pub fn corner_map<Q: SquareStructure + ?Sized>(q: &Q, f: &ChainMap, g: &ChainMap, cap: usize) -> Result<Corner> {
    if !f.is_cofibration() {
        return Err(Error::Precondition("corner map needs a cofibration".into()));
    }
    if !g.is_fibration() {
        return Err(Error::Precondition("corner map needs a fibration".into()));
    }
    let (x, x2) = (f.src(), f.dst());
    let (y, y2) = (g.src(), g.dst());
    let m_x2_y = mapping_space(q, x2, y, cap)?;
    let m_x_y = mapping_space(q, x, y, cap)?;
    let m_x_y2 = mapping_space(q, x, y2, cap)?;
    let m_x2_y2 = mapping_space(q, x2, y2, cap)?;
    let pre = |n: usize, h: &ChainMap| h.compose(&q.on_map(n, f)).expect("matching ends");
    let post = |_: usize, h: &ChainMap| g.compose(h).expect("matching ends");
    let g_star = levelwise(&m_x_y, &m_x_y2, post)?;
    let f_star = levelwise(&m_x2_y2, &m_x_y2, pre)?;
    let (target, kernels) = linear_pullback(&m_x_y.space, &g_star, &m_x2_y2.space, &f_star);
    let to_left = levelwise(&m_x2_y, &m_x_y, pre)?;
    let to_right = levelwise(&m_x2_y, &m_x2_y2, post)?;
    let comps = (0..=cap)
        .map(|n| kernels[n].coords(&to_left[n].vstack(&to_right[n])))
        .collect();
    let map = LevelwiseMap {
        src: m_x2_y.space.clone(),
        dst: target.clone(),
        comps,
    };
    Ok(Corner {
        source: m_x2_y,
        target,
        map,
    })
}

#[derive(Debug, Clone)]
pub struct CornerCheck {
    pub cofibration: String,
    pub fibration: String,
    pub open_boxes: FibrationReport,
    /// Present when either leg is acyclic.
    pub boundaries: Option<FibrationReport>,
}

impl CornerCheck {
    pub fn pass(&self) -> bool {
        self.open_boxes.pass && self.boundaries.as_ref().map_or(true, |b| b.pass)
    }
}

fn check_corner<Q: SquareStructure + ?Sized>(q: &Q, f: &ChainArrow, g: &ChainArrow, cap: usize) -> Result<CornerCheck> {
    let c = corner_map(q, &f.map, &g.map, cap)?;
    let open_boxes = linear_fibration_check(&c.map, Battery::OpenBoxes, cap)?;
    let boundaries = if f.acyclic || g.acyclic {
        Some(linear_fibration_check(&c.map, Battery::Boundaries, cap)?)
    } else {
        None
    };
    Ok(CornerCheck {
        cofibration: f.name.clone(),
        fibration: g.name.clone(),
        open_boxes,
        boundaries,
    })
}

/// `β : Q_0 X -> X` a quasi-isomorphism for each listed object, and
/// `0 -> Q_0(0)` a cofibration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitClauses {
    pub beta_quasi_iso: Vec<(String, bool)>,
    pub empty_cofibrant: bool,
}

impl UnitClauses {
    pub fn pass(&self) -> bool {
        self.empty_cofibrant && self.beta_quasi_iso.iter().all(|(_, b)| *b)
    }
}

fn unit_clauses<Q: SquareStructure + ?Sized>(q: &Q, objects: &[(String, ChainComplex)]) -> UnitClauses {
    let beta_quasi_iso = objects
        .iter()
        .map(|(n, x)| (n.clone(), q.beta(x).is_quasi_iso()))
        .collect();
    let z = ChainComplex::zero(q.field());
    let q0 = q.on_object(0, &z);
    UnitClauses {
        beta_quasi_iso,
        empty_cofibrant: ChainMap::zero(&z, &q0).is_cofibration(),
    }
}

fn battery_objects(cofs: &[ChainArrow], fibs: &[ChainArrow]) -> Vec<(String, ChainComplex)> {
    let mut out: Vec<(String, ChainComplex)> = Vec::new();
    for a in cofs.iter().chain(fibs) {
        let (s, t) = a.name.split_once("->").unwrap_or((&a.name, &a.name));
        for (n, x) in [(s, a.map.src()), (t, a.map.dst())] {
            if !out.iter().any(|(m, _)| m == n) {
                out.push((n.to_string(), x.clone()));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct HomotopicalReport {
    pub cap: usize,
    pub corners: Vec<CornerCheck>,
    pub units: UnitClauses,
}

impl HomotopicalReport {
    pub fn pass(&self) -> bool {
        self.units.pass() && self.corners.iter().all(CornerCheck::pass)
    }
}

/// Corner fibrations for every battery pair, plus `β` a quasi-isomorphism
/// and `Q_0(0)` cofibrant.
pub fn verify_homotopical<Q: SquareStructure + ?Sized>(
    q: &Q,
    cofs: &[ChainArrow],
    fibs: &[ChainArrow],
    cap: usize,
) -> Result<HomotopicalReport> {
    let mut corners = Vec::new();
    for f in cofs {
        for g in fibs {
            corners.push(check_corner(q, f, g, cap)?);
        }
    }
    Ok(HomotopicalReport {
        cap,
        corners,
        units: unit_clauses(q, &battery_objects(cofs, fibs)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductVerdict {
    pub mono: String,
    pub cofibration: String,
    pub is_cofibration: bool,
    pub is_quasi_iso: bool,
    pub needs_acyclic: bool,
}

impl ProductVerdict {
    pub fn pass(&self) -> bool {
        self.is_cofibration && (!self.needs_acyclic || self.is_quasi_iso)
    }
}

pub fn pushout_product_check<Q: SquareStructure + ?Sized>(q: &Q, i: &MonoArrow, f: &ChainArrow) -> Result<ProductVerdict> {
    if !f.map.is_cofibration() {
        return Err(Error::Precondition(format!("{} is not a cofibration", f.name)));
    }
    let pp = pushout_product(q, &i.map, &f.map)?;
    Ok(ProductVerdict {
        mono: i.name.clone(),
        cofibration: f.name.clone(),
        is_cofibration: pp.map.is_cofibration(),
        is_quasi_iso: pp.map.is_quasi_iso(),
        needs_acyclic: i.acyclic || f.acyclic,
    })
}

/// Verdicts of the three equivalent conditions on one battery pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementEntry {
    pub cofibration: String,
    pub fibration: String,
    /// Corner fibrations.
    pub corners: bool,
    /// Pushout-products with every mono of the battery.
    pub products: bool,
    /// Pushout-products with the generating inclusions only.
    pub generating: bool,
}

impl AgreementEntry {
    pub fn agree(&self) -> bool {
        self.corners == self.products && self.products == self.generating
    }
}

#[derive(Debug, Clone)]
pub struct AgreementReport {
    pub cap: usize,
    pub entries: Vec<AgreementEntry>,
    pub units: UnitClauses,
}

impl AgreementReport {
    pub fn agree(&self) -> bool {
        self.entries.iter().all(AgreementEntry::agree)
    }

    /// All three checkers pass everywhere; an empty battery passes vacuously.
    pub fn pass(&self) -> bool {
        self.agree() && self.entries.iter().all(|e| e.corners)
    }

    pub fn is_vacuous(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Runs the three conditions independently on every pair of the battery.
/// The unit clauses (`β` a weak equivalence, `Q_0(0)` cofibrant) belong to
/// each condition.
pub fn conditions_agree<Q: SquareStructure + ?Sized>(
    q: &Q,
    cofs: &[ChainArrow],
    fibs: &[ChainArrow],
    monos: &[MonoArrow],
    cap: usize,
) -> Result<AgreementReport> {
    let units = unit_clauses(q, &battery_objects(cofs, fibs));
    let generating: Vec<&MonoArrow> = monos
        .iter()
        .filter(|m| m.name.starts_with("boundary(") || m.name.starts_with("open_box("))
        .filter(|m| m.map.dst().max_dim() <= cap)
        .collect();
    let mut entries = Vec::new();
    for f in cofs {
        let mut all = true;
        let mut gen = true;
        for i in monos {
            let v = pushout_product_check(q, i, f)?.pass();
            all &= v;
            if generating.iter().any(|g| g.name == i.name) {
                gen &= v;
            }
        }
        for g in fibs {
            let c = check_corner(q, f, g, cap)?.pass();
            entries.push(AgreementEntry {
                cofibration: f.name.clone(),
                fibration: g.name.clone(),
                corners: c && units.pass(),
                products: all && units.pass(),
                generating: gen && units.pass(),
            });
        }
    }
    Ok(AgreementReport { cap, entries, units })
}

/// The two conditions of the coherent-cylinder criterion for one cofibration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceEntry {
    pub cofibration: String,
    /// `Q_1 X ⊔_{X ⊔ X} (Y ⊔ Y) -> Q_1 Y`: cofibration, acyclic if `f` is.
    pub ends: bool,
    /// `Q_1 X ⊔_X Y -> Q_1 Y` an acyclic cofibration, for `δ^0` then `δ^1`.
    pub cofaces: [bool; 2],
}

impl CoherenceEntry {
    pub fn pass(&self) -> bool {
        self.ends && self.cofaces.iter().all(|&b| b)
    }
}

#[derive(Debug, Clone)]
pub struct CoherenceReport {
    pub entries: Vec<CoherenceEntry>,
}

impl CoherenceReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(CoherenceEntry::pass)
    }
}

/// Checks both conditions with `X` read as `Q_0 X`, built from direct sums
/// and chain pushouts rather than cubical colimits.
pub fn coherent_cylinder_check<Q: SquareStructure + ?Sized>(q: &Q, battery: &[ChainArrow]) -> Result<CoherenceReport> {
    let mut entries = Vec::new();
    for a in battery {
        let f = &a.map;
        if !f.is_cofibration() {
            return Err(Error::Precondition(format!("{} is not a cofibration", a.name)));
        }
        let (x, y) = (f.src(), f.dst());
        let d = |i: u8, z: &ChainComplex| q.on_cube_mor(&CubeMor::coface(0, 0, i).expect("in range"), z);
        let q0f = q.on_map(0, f);
        let q1f = q.on_map(1, f);
        let both = |z: &ChainComplex| -> Result<ChainMap> {
            // [d0 | d1] : Q_0 Z ⊕ Q_0 Z -> Q_1 Z
            let (d0, d1) = (d(0, z), d(1, z));
            let src = direct_sum(d0.src(), d1.src())?;
            let comps = (src.lo()..=src.hi())
                .map(|n| (n, d0.component(n).hstack(&d1.component(n))))
                .collect();
            ChainMap::new(src, d0.dst().clone(), comps)
        };
        let (bx, by) = (both(x)?, both(y)?);
        let ff = direct_sum_map(&q0f, &q0f)?;
        let po = pushout(&bx, &ff)?;
        let m = po.induced(&q1f, &by)?;
        let ends = m.is_cofibration() && (!a.acyclic || m.is_quasi_iso());
        let mut cofaces = [false; 2];
        for (i, slot) in cofaces.iter_mut().enumerate() {
            let po = pushout(&d(i as u8, x), &q0f)?;
            let m = po.induced(&q1f, &d(i as u8, y))?;
            *slot = m.is_cofibration() && m.is_quasi_iso();
        }
        entries.push(CoherenceEntry {
            cofibration: a.name.clone(),
            ends,
            cofaces,
        });
    }
    Ok(CoherenceReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square::{chain_square, ChainSquare, Interval, Mutation};

    #[test]
    fn battery_shapes() {
        let f = Fp::two();
        for a in standard_cofibrations(f, 3) {
            assert!(a.map.is_cofibration(), "{}", a.name);
            assert_eq!(a.acyclic, a.map.is_quasi_iso(), "{}", a.name);
        }
        for a in standard_fibrations(f, 3) {
            assert!(a.map.is_fibration(), "{}", a.name);
            assert_eq!(a.acyclic, a.map.is_quasi_iso(), "{}", a.name);
        }
        for m in standard_monos(2, true) {
            m.map.validate().unwrap();
            let h = |x: &crate::cset::CubicalSet| crate::cset::normalized_chains(x, f).homology_in(0, 2);
            if m.acyclic {
                assert_eq!(h(m.map.src()), h(m.map.dst()), "{}", m.name);
            }
        }
    }

    #[test]
    fn degenerate_corners() {
        let f = Fp::two();
        let q = chain_square(f);
        let x = ChainComplex::disk(f, 1);
        let y = ChainComplex::sphere(f, 1);
        let id = ChainMap::identity(&x);
        let g = ChainMap::zero(&y, &ChainComplex::zero(f));
        let c = corner_map(&q, &id, &g, 2).unwrap();
        for n in 0..=2 {
            assert_eq!(c.map.comps[n].rank(), c.source.space.dim(n));
            assert_eq!(c.target.dim(n), c.source.space.dim(n));
        }
        let c = corner_map(&q, &sphere_into_disk(f, 1), &ChainMap::identity(&y), 2).unwrap();
        for n in 0..=2 {
            assert_eq!(c.map.comps[n].rank(), c.target.dim(n));
            assert_eq!(c.target.dim(n), c.source.space.dim(n));
        }
    }

    #[test]
    fn unit_corner_passes() {
        let f = Fp::two();
        let q = chain_square(f);
        let pt = ChainComplex::unit(f);
        let z = ChainComplex::zero(f);
        let c = corner_map(&q, &ChainMap::zero(&z, &pt), &ChainMap::zero(&pt, &z), 3).unwrap();
        assert!(linear_fibration_check(&c.map, Battery::OpenBoxes, 3).unwrap().pass);
    }

    #[test]
    fn chain_square_is_homotopical() {
        let f = Fp::two();
        let q = chain_square(f);
        let r = verify_homotopical(&q, &standard_cofibrations(f, 2), &standard_fibrations(f, 2), 3).unwrap();
        assert!(r.pass());
        assert!(r.corners.iter().any(|c| c.boundaries.is_some()));
    }

    #[test]
    fn three_checkers_agree() {
        let f = Fp::two();
        let q = chain_square(f);
        let (c, g, m) = (standard_cofibrations(f, 1), standard_fibrations(f, 1), standard_monos(2, true));
        let r = conditions_agree(&q, &c, &g, &m, 2).unwrap();
        assert!(r.agree() && r.pass());
        let broken = chain_square(f).mutated(Mutation::BetaZero);
        let r = conditions_agree(&broken, &c, &g, &m, 2).unwrap();
        assert!(r.agree());
        assert!(r.entries.iter().all(|e| !e.corners));
        assert!(conditions_agree(&q, &[], &[], &m, 2).unwrap().is_vacuous());
    }

    #[test]
    fn discrete_interval_fails_every_condition() {
        let f = Fp::two();
        let q = ChainSquare::new(Interval::discrete(f));
        let (c, g, m) = (standard_cofibrations(f, 1), standard_fibrations(f, 1), standard_monos(2, true));
        let r = conditions_agree(&q, &c, &g, &m, 2).unwrap();
        assert!(r.entries.iter().any(|e| !e.corners));
        assert!(r.entries.iter().any(|e| !e.products));
        assert!(r.entries.iter().any(|e| !e.generating));
        assert!(!coherent_cylinder_check(&q, &c).unwrap().pass());
    }

    #[test]
    fn cylinder_is_coherent() {
        let f = Fp::new(3).unwrap();
        let q = chain_square(f);
        let mut battery = standard_cofibrations(f, 3);
        let x = ChainComplex::disk(f, 2);
        battery.push(ChainArrow {
            name: "id".into(),
            map: ChainMap::identity(&x),
            acyclic: true,
        });
        let r = coherent_cylinder_check(&q, &battery).unwrap();
        assert!(r.pass(), "{r:?}");
    }
}
