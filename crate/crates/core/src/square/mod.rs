//! Square structures on chain complexes: `Q_n(X) = I^{⊗n} ⊗ X` for an
//! interval object `I`, the cubical enrichment `M^Q(X, Y)`, and checkers for
//! the homotopical and coherence conditions.

mod colim;
mod homotopical;
mod mapping;

use std::collections::BTreeMap;

pub use colim::{pushout_product, q_of_cubical, q_on_cubical_map, q_on_map, PushoutProduct, QColimit};
pub use homotopical::{
    coherent_cylinder_check, conditions_agree, corner_map, pushout_product_check, standard_cofibrations,
    standard_fibrations, standard_monos, verify_homotopical, AgreementEntry, AgreementReport, ChainArrow,
    CoherenceEntry, CoherenceReport, Corner, CornerCheck, HomotopicalReport, MonoArrow, ProductVerdict,
};
pub use mapping::{
    canonical_cell, compose_cells, homotopy_classes_oracle, mapping_space, mapping_space_homology_compare, normalized_chains,
    pi0, unit_cell, Cosets, HomologyComparison, MapCell, MappingSpace,
};

use crate::chain::{tensor, tensor_map, ChainComplex, ChainMap, TensorLayout};
use crate::cube::{enumerate_hom, CubeMor, Entry};
use crate::field::Fp;
use crate::linalg::Matrix;

/// A left square structure on chain complexes, as an oplax action of the
/// box category.
pub trait SquareStructure {
    fn field(&self) -> Fp;
    /// `Q_n X`.
    fn on_object(&self, n: usize, x: &ChainComplex) -> ChainComplex;
    /// `Q_φ X : Q_m X -> Q_n X` for `φ : [m] -> [n]`.
    fn on_cube_mor(&self, phi: &CubeMor, x: &ChainComplex) -> ChainMap;
    /// `Q_n f : Q_n X -> Q_n Y`.
    fn on_map(&self, n: usize, f: &ChainMap) -> ChainMap;
    /// `α_{n,m} : Q_{n+m} X -> Q_n Q_m X`.
    fn alpha(&self, n: usize, m: usize, x: &ChainComplex) -> ChainMap;
    /// `β : Q_0 X -> X`.
    fn beta(&self, x: &ChainComplex) -> ChainMap;
}

/// A cellular interval: a complex in degrees 0 and 1 with a basis of
/// letters, two endpoint letters and a counit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    field: Fp,
    degrees: Vec<usize>,
    /// `(target letter, coefficient)` for each letter.
    boundary: Vec<Vec<(usize, u32)>>,
    ends: [usize; 2],
    counit: Vec<u32>,
}

impl Interval {
    /// `J`: `|0>, |1>` in degree 0, `|01>` in degree 1, `d|01> = |1> - |0>`.
    pub fn cellular(field: Fp) -> Self {
        Self {
            field,
            degrees: vec![0, 0, 1],
            boundary: vec![vec![], vec![], vec![(1, 1), (0, field.neg(1))]],
            ends: [0, 1],
            counit: vec![1, 1, 0],
        }
    }

    /// `F ⊕ F`, two points with no path between them.
    pub fn discrete(field: Fp) -> Self {
        Self {
            field,
            degrees: vec![0, 0],
            boundary: vec![vec![], vec![]],
            ends: [0, 1],
            counit: vec![1, 1],
        }
    }

    fn letters(&self) -> usize {
        self.degrees.len()
    }
}

/// Words of length `n` in the letters of an interval, indexed in
/// lexicographic order inside each degree.
#[derive(Debug, Clone)]
struct WordBasis {
    /// Words of each degree, as letter sequences.
    by_degree: Vec<Vec<Vec<usize>>>,
    index: BTreeMap<Vec<usize>, (usize, usize)>,
}

impl WordBasis {
    fn new(interval: &Interval, n: usize) -> Self {
        let l = interval.letters();
        let total = l.pow(n as u32);
        let mut by_degree = vec![Vec::new(); n + 1];
        let mut index = BTreeMap::new();
        for t in 0..total {
            let mut w = vec![0; n];
            let mut r = t;
            for p in (0..n).rev() {
                w[p] = r % l;
                r /= l;
            }
            let d: usize = w.iter().map(|&c| interval.degrees[c]).sum();
            index.insert(w.clone(), (d, by_degree[d].len()));
            by_degree[d].push(w);
        }
        Self { by_degree, index }
    }

    fn degree(&self, w: &[usize]) -> usize {
        self.index[w].0
    }

    fn position(&self, w: &[usize]) -> usize {
        self.index[w].1
    }
}

/// What to break on purpose in a square structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// `α_{1,1}` exchanges the two interval factors.
    AlphaSwap,
    /// `β = 0`.
    BetaZero,
}

/// `Q_n(X) = I^{⊗n} ⊗ X`, with `Q_φ = L_I(φ) ⊗ id`, `α` the reassociation
/// and `β` the unit identification.
#[derive(Debug, Clone)]
pub struct ChainSquare {
    interval: Interval,
    mutation: Option<Mutation>,
}

/// The square structure `J^{⊗n} ⊗ -` on chain complexes over `F_p`.
pub fn chain_square(field: Fp) -> ChainSquare {
    ChainSquare::new(Interval::cellular(field))
}

impl ChainSquare {
    pub fn new(interval: Interval) -> Self {
        Self {
            interval,
            mutation: None,
        }
    }

    pub fn mutated(mut self, m: Mutation) -> Self {
        self.mutation = Some(m);
        self
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    /// `I^{⊗n}` on the word basis.
    pub fn interval_power(&self, n: usize) -> ChainComplex {
        let iv = &self.interval;
        let f = iv.field;
        let wb = WordBasis::new(iv, n);
        let dims: Vec<usize> = wb.by_degree.iter().map(Vec::len).collect();
        let diffs = (1..=n)
            .map(|k| {
                let mut m = Matrix::zeros(f, dims[k - 1], dims[k]);
                for (col, w) in wb.by_degree[k].iter().enumerate() {
                    let mut prefix = 0;
                    for p in 0..n {
                        let s = f.sign(prefix);
                        for &(l, c) in &iv.boundary[w[p]] {
                            let mut w2 = w.clone();
                            w2[p] = l;
                            m.add_at(wb.position(&w2), col, f.mul(s, c));
                        }
                        prefix += iv.degrees[w[p]];
                    }
                }
                m
            })
            .collect();
        ChainComplex::new(f, 0, dims, diffs).expect("tensor power of an interval is a complex")
    }

    /// `L_I(φ) : I^{⊗m} -> I^{⊗n}`.
    pub fn interval_map(&self, phi: &CubeMor) -> ChainMap {
        let iv = &self.interval;
        let f = iv.field;
        let (m, n) = (phi.src(), phi.dst());
        let (src, dst) = (self.interval_power(m), self.interval_power(n));
        let (ws, wd) = (WordBasis::new(iv, m), WordBasis::new(iv, n));
        let used = phi.used_vars();
        let mut comps = BTreeMap::new();
        for k in 0..=m {
            let mut mat = Matrix::zeros(f, dst.dim(k as i64), src.dim(k as i64));
            for (col, w) in ws.by_degree[k].iter().enumerate() {
                let mut c = 1;
                for (j, &l) in w.iter().enumerate() {
                    if !used.contains(&(j + 1)) {
                        c = f.mul(c, iv.counit[l]);
                    }
                }
                if c == 0 {
                    continue;
                }
                let out: Vec<usize> = phi
                    .entries()
                    .iter()
                    .map(|e| match *e {
                        Entry::Const(b) => iv.ends[b as usize],
                        Entry::Var(j) => w[j - 1],
                    })
                    .collect();
                debug_assert_eq!(wd.degree(&out), k);
                mat.add_at(wd.position(&out), col, c);
            }
            comps.insert(k as i64, mat);
        }
        ChainMap::new(src, dst, comps).expect("L_I(φ) is a chain map")
    }

    fn words(&self, n: usize) -> WordBasis {
        WordBasis::new(&self.interval, n)
    }
}

impl SquareStructure for ChainSquare {
    fn field(&self) -> Fp {
        self.interval.field
    }

    fn on_object(&self, n: usize, x: &ChainComplex) -> ChainComplex {
        tensor(&self.interval_power(n), x).expect("same field")
    }

    fn on_cube_mor(&self, phi: &CubeMor, x: &ChainComplex) -> ChainMap {
        tensor_map(&self.interval_map(phi), &ChainMap::identity(x)).expect("same field")
    }

    fn on_map(&self, n: usize, f: &ChainMap) -> ChainMap {
        tensor_map(&ChainMap::identity(&self.interval_power(n)), f).expect("same field")
    }

    fn alpha(&self, n: usize, m: usize, x: &ChainComplex) -> ChainMap {
        let f = self.field();
        let swap = self.mutation == Some(Mutation::AlphaSwap) && n == 1 && m == 1;
        let (inm, i_n, i_m) = (self.interval_power(n + m), self.interval_power(n), self.interval_power(m));
        let (wnm, wn, wm) = (self.words(n + m), self.words(n), self.words(m));
        let src = tensor(&inm, x).expect("same field");
        let inner = tensor(&i_m, x).expect("same field");
        let dst = tensor(&i_n, &inner).expect("same field");
        let ls = TensorLayout::new(&inm, x);
        let li = TensorLayout::new(&i_m, x);
        let ld = TensorLayout::new(&i_n, &inner);
        let mut comps = BTreeMap::new();
        for deg in src.lo()..=src.hi() {
            let mut mat = Matrix::zeros(f, dst.dim(deg), src.dim(deg));
            for (col, (i, a, b)) in ls.basis(deg).into_iter().enumerate() {
                let w = &wnm.by_degree[i as usize][a];
                let (mut u, mut v) = (w[..n].to_vec(), w[n..].to_vec());
                let mut c = 1;
                if swap {
                    std::mem::swap(&mut u, &mut v);
                    let (du, dv) = (wn.degree(&u), wm.degree(&v));
                    c = f.sign(du * dv);
                }
                let (du, dv) = (wn.degree(&u) as i64, wm.degree(&v) as i64);
                let j = deg - i;
                let inner_idx = li.index(dv + j, dv, wm.position(&v), b);
                let row = ld.index(deg, du, wn.position(&u), inner_idx);
                mat.add_at(row, col, c);
            }
            comps.insert(deg, mat);
        }
        ChainMap::new(src, dst, comps).expect("reassociation is a chain map")
    }

    fn beta(&self, x: &ChainComplex) -> ChainMap {
        let q0 = self.on_object(0, x);
        if self.mutation == Some(Mutation::BetaZero) {
            return ChainMap::zero(&q0, x);
        }
        let comps = (x.lo()..=x.hi())
            .map(|n| (n, Matrix::identity(self.field(), x.dim(n))))
            .collect();
        ChainMap::new(q0, x.clone(), comps).expect("unit identification")
    }
}

/// One axiom instance checked on a square structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: String,
    pub instance: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub checks: Vec<AxiomCheck>,
}

impl InvariantReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Per-axiom `(passed, total)`.
    pub fn tally(&self) -> BTreeMap<String, (usize, usize)> {
        let mut t = BTreeMap::new();
        for c in &self.checks {
            let e = t.entry(c.axiom.clone()).or_insert((0, 0));
            e.0 += c.pass as usize;
            e.1 += 1;
        }
        t
    }
}

fn maps_equal(a: &ChainMap, b: &ChainMap) -> bool {
    a.src() == b.src() && a.dst() == b.dst() && a.components() == b.components()
}

fn morphisms_up_to(max: usize) -> Vec<CubeMor> {
    let mut out = Vec::new();
    for m in 0..=max {
        for n in 0..=max {
            out.extend(enumerate_hom(m, n));
        }
    }
    out
}

/// Functoriality, naturality of `α`, associativity and the unit triangles,
/// exhaustively over cube morphisms between dimensions `<= max_dim`.
pub fn check_invariants<Q: SquareStructure + ?Sized>(q: &Q, x: &ChainComplex, max_dim: usize) -> InvariantReport {
    let mut checks = Vec::new();
    let mut push = |axiom: &str, instance: String, pass: bool| {
        checks.push(AxiomCheck {
            axiom: axiom.into(),
            instance,
            pass,
        })
    };
    let mors = morphisms_up_to(max_dim);
    let qmap: BTreeMap<String, ChainMap> = mors.iter().map(|p| (format!("{p:?}"), q.on_cube_mor(p, x))).collect();
    let get = |p: &CubeMor| &qmap[&format!("{p:?}")];

    for n in 0..=max_dim {
        let id = get(&CubeMor::identity(n));
        push(
            "identity",
            format!("id[{n}]"),
            maps_equal(id, &ChainMap::identity(&q.on_object(n, x))),
        );
    }
    for phi in &mors {
        for psi in &mors {
            if phi.dst() != psi.src() {
                continue;
            }
            let comp = psi.after(phi);
            let lhs = get(&comp);
            let rhs = get(psi).compose(get(phi)).expect("composable");
            push("functoriality", format!("{psi:?} ∘ {phi:?}"), maps_equal(lhs, &rhs));
        }
    }

    // α_{n',m'} ∘ Q_{φ⊗ψ} = Q_φ(Q_{m'}) ∘ Q_n(Q_ψ) ∘ α_{n,m}
    for phi in &mors {
        for psi in &mors {
            let (n, m, n2, m2) = (phi.src(), psi.src(), phi.dst(), psi.dst());
            if n + m > max_dim || n2 + m2 > max_dim {
                continue;
            }
            let lhs = q.alpha(n2, m2, x).after_checked(&q.on_cube_mor(&phi.tensor(psi), x));
            let qm2 = q.on_object(m2, x);
            let rhs = q
                .on_cube_mor(phi, &qm2)
                .after_checked(&q.on_map(n, &q.on_cube_mor(psi, x)))
                .after_checked(&q.alpha(n, m, x));
            push("alpha-naturality", format!("{phi:?} ⊗ {psi:?}"), maps_equal(&lhs, &rhs));
        }
    }

    // Q_n(α_{m,l}) ∘ α_{n,m+l} = α_{n,m}(Q_l) ∘ α_{n+m,l}, total one past max_dim
    for n in 0..=max_dim {
        for m in 0..=max_dim {
            for l in 0..=max_dim {
                if n + m + l > max_dim + 1 {
                    continue;
                }
                let lhs = q.on_map(n, &q.alpha(m, l, x)).after_checked(&q.alpha(n, m + l, x));
                let rhs = q.alpha(n, m, &q.on_object(l, x)).after_checked(&q.alpha(n + m, l, x));
                push("associativity", format!("({n},{m},{l})"), maps_equal(&lhs, &rhs));
            }
        }
    }

    for n in 0..=max_dim {
        let id = ChainMap::identity(&q.on_object(n, x));
        let right = q.on_map(n, &q.beta(x)).after_checked(&q.alpha(n, 0, x));
        push("right-unit", format!("n={n}"), maps_equal(&right, &id));
        let left = q.beta(&q.on_object(n, x)).after_checked(&q.alpha(0, n, x));
        push("left-unit", format!("n={n}"), maps_equal(&left, &id));
    }
    InvariantReport { checks }
}

trait AfterChecked {
    fn after_checked(&self, g: &ChainMap) -> ChainMap;
}

impl AfterChecked for ChainMap {
    fn after_checked(&self, g: &ChainMap) -> ChainMap {
        self.compose(g).expect("composable structure maps")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_objects(f: Fp) -> Vec<ChainComplex> {
        vec![ChainComplex::unit(f), ChainComplex::sphere(f, 1), ChainComplex::disk(f, 2)]
    }

    #[test]
    fn interval_power_is_tensor_power() {
        for p in [2, 3] {
            let f = Fp::new(p).unwrap();
            let q = chain_square(f);
            assert_eq!(q.interval_power(1), ChainComplex::interval_j(f));
            for n in 0..=3 {
                let j = q.interval_power(n);
                assert_eq!(j.homology_in(0, n as i64)[0], 1);
                assert!(j.homology_in(1, n as i64).iter().all(|&h| h == 0));
                let dims: Vec<usize> = (0..=n as i64).map(|k| j.dim(k)).collect();
                let want: Vec<usize> = (0..=n)
                    .map(|k| (crate::cube::binom(n, k) as usize) << (n - k))
                    .collect();
                assert_eq!(dims, want);
            }
        }
    }

    #[test]
    fn chain_square_satisfies_invariants() {
        for p in [2, 3] {
            let f = Fp::new(p).unwrap();
            let q = chain_square(f);
            for x in test_objects(f) {
                let r = check_invariants(&q, &x, 2);
                assert!(r.pass(), "{:?}", r.failures().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn unit_object_and_cubical_identity() {
        let f = Fp::new(3).unwrap();
        let q = chain_square(f);
        let x = ChainComplex::disk(f, 2);
        assert_eq!(q.on_object(0, &x), x);
        assert!(q.beta(&x).is_iso());
        for i in 0..2 {
            let s = q.on_cube_mor(&CubeMor::codegeneracy(0, 0).unwrap(), &x);
            let d = q.on_cube_mor(&CubeMor::coface(0, 0, i).unwrap(), &x);
            assert!(maps_equal(&s.compose(&d).unwrap(), &ChainMap::identity(&q.on_object(0, &x))));
        }
    }

    #[test]
    fn mutants_are_detected() {
        let f = Fp::two();
        let x = ChainComplex::unit(f);
        let swapped = chain_square(f).mutated(Mutation::AlphaSwap);
        let r = check_invariants(&swapped, &x, 2);
        assert!(!r.pass());
        assert!(r.failures().any(|c| c.axiom == "associativity"));
        let zero = chain_square(f).mutated(Mutation::BetaZero);
        let r = check_invariants(&zero, &x, 2);
        assert!(r.failures().any(|c| c.axiom == "right-unit"));
        // the discrete interval is a valid, non-homotopical, square structure
        let discrete = ChainSquare::new(Interval::discrete(f));
        assert!(check_invariants(&discrete, &x, 2).pass());
    }
}
