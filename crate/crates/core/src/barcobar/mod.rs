//! Bar and cobar constructions over `F_p`, the interval coalgebra `J`, the
//! convolution path object `[J, A]` and the square structure
//! `C_n(A) = B^∨(J^{⊗n} ⊗ B(A))`.
//!
//! Structures are stored on a global basis ordered by degree, with structure
//! constants as sparse vectors. The infinite constructions are truncated by
//! weight (number of bar letters), which keeps them genuine subcomplexes.

mod bar;
mod interval;
pub mod json;
mod random;
mod replacement;

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;
use std::sync::Arc;

pub use bar::{bar, cobar, Cobar};
pub use interval::{
    convolution_path, cylinder_cog, interval_coalgebra, j_coalgebra, ConvolutionPath, JEnd, Orientation,
};
pub use random::random_algebra;
pub use replacement::{
    bar_safe_degrees, c0_replacement_check, c_n_map, c_n_square, counit_check, counit_map, CnSquare,
    DegreeVerdict, QuasiIsoReport,
};

use crate::chain::{tensor, ChainComplex, TensorLayout};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::Matrix;

/// A sparse vector on a global basis: `(index, coefficient)` pairs.
pub type SVec = Vec<(usize, u32)>;

fn push(f: Fp, acc: &mut BTreeMap<usize, u32>, i: usize, c: u32) {
    if c != 0 {
        let e = acc.entry(i).or_insert(0);
        *e = f.add(*e, c);
    }
}

fn collect(acc: BTreeMap<usize, u32>) -> SVec {
    acc.into_iter().filter(|&(_, c)| c != 0).collect()
}

/// Weight cap and degree window for the infinite constructions.
///
/// The weight cap bounds the number of bar letters, which cuts out a
/// subcomplex. The degree window `[lo, hi]` is a brutal truncation applied to
/// reported complexes, so only degrees strictly inside it are claimed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TruncationPolicy {
    pub weight_cap: usize,
    pub lo: i64,
    pub hi: i64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            weight_cap: 6,
            lo: -1,
            hi: 5,
        }
    }
}

impl TruncationPolicy {
    pub fn new(weight_cap: usize, lo: i64, hi: i64) -> Self {
        Self { weight_cap, lo, hi }
    }

    /// Degrees strictly inside the window.
    pub fn interior(&self) -> Range<i64> {
        self.lo + 1..self.hi
    }

    pub(crate) fn check_window(&self) -> Result<()> {
        if self.hi - self.lo < 2 {
            return Err(Error::WindowTooSmall {
                lo: self.lo,
                hi: self.hi,
                reason: "no degree strictly inside the window".into(),
            });
        }
        Ok(())
    }
}

/// A basis ordered by degree, indexed globally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    degrees: Vec<i64>,
    offsets: BTreeMap<i64, usize>,
}

impl GradedBasis {
    pub fn of(c: &ChainComplex) -> Self {
        let mut degrees = Vec::new();
        let mut offsets = BTreeMap::new();
        if let Some((lo, hi)) = c.support() {
            for n in lo..=hi {
                offsets.insert(n, degrees.len());
                degrees.extend(std::iter::repeat(n).take(c.dim(n)));
            }
        }
        Self { degrees, offsets }
    }

    /// From a degree-sorted list of degrees.
    fn from_degrees(degrees: Vec<i64>) -> Self {
        debug_assert!(degrees.windows(2).all(|w| w[0] <= w[1]));
        let mut offsets = BTreeMap::new();
        for (g, &n) in degrees.iter().enumerate() {
            offsets.entry(n).or_insert(g);
        }
        Self { degrees, offsets }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degree(&self, g: usize) -> i64 {
        self.degrees[g]
    }

    pub fn global(&self, n: i64, k: usize) -> usize {
        self.offsets[&n] + k
    }

    pub fn local(&self, g: usize) -> usize {
        g - self.offsets[&self.degrees[g]]
    }

    pub fn in_degree(&self, n: i64) -> Range<usize> {
        match self.offsets.get(&n) {
            Some(&o) => o..o + self.degrees[o..].iter().take_while(|&&d| d == n).count(),
            None => 0..0,
        }
    }
}

fn diff_columns(c: &ChainComplex, basis: &GradedBasis) -> Vec<SVec> {
    (0..basis.len())
        .map(|g| {
            let n = basis.degree(g);
            let d = c.d(n);
            let k = basis.local(g);
            (0..d.rows())
                .filter_map(|r| {
                    let v = d.get(r, k);
                    (v != 0).then(|| (basis.global(n - 1, r), v))
                })
                .collect()
        })
        .collect()
}

/// Dense complex from a degree-sorted basis and sparse differential columns.
fn complex_from_columns(f: Fp, basis: &GradedBasis, diff: &[SVec], validate: bool) -> Result<ChainComplex> {
    if basis.is_empty() {
        return Ok(ChainComplex::zero(f));
    }
    let lo = basis.degree(0);
    let hi = basis.degree(basis.len() - 1);
    let dims: Vec<usize> = (lo..=hi).map(|n| basis.in_degree(n).len()).collect();
    let mut diffs = Vec::new();
    for n in lo + 1..=hi {
        let mut m = Matrix::zeros(f, basis.in_degree(n - 1).len(), basis.in_degree(n).len());
        for g in basis.in_degree(n) {
            for &(t, c) in &diff[g] {
                if basis.degree(t) != n - 1 {
                    return Err(Error::InvalidAlgebra(format!(
                        "differential of basis element {g} has a term in degree {}",
                        basis.degree(t)
                    )));
                }
                m.add_at(basis.local(t), basis.local(g), c);
            }
        }
        diffs.push(m);
    }
    if validate {
        ChainComplex::new(f, lo, dims, diffs)
    } else {
        Ok(ChainComplex::new_unchecked(f, lo, dims, diffs))
    }
}

/// Index of `x ⊗ y` in the tensor complex, for global `x`, `y`.
fn tensor_index(xb: &GradedBasis, yb: &GradedBasis, lay: &TensorLayout) -> (HashMap<(usize, usize), usize>, Vec<(usize, usize)>) {
    let (lo, hi) = lay.range();
    let mut idx = HashMap::new();
    let mut pairs = Vec::new();
    for n in lo..=hi {
        for (i, a, b) in lay.basis(n) {
            let pair = (xb.global(i, a), yb.global(n - i, b));
            idx.insert(pair, pairs.len());
            pairs.push(pair);
        }
    }
    (idx, pairs)
}

/// Concatenation of words, truncated by total weight and length.
#[derive(Debug)]
pub(crate) struct WordIndex {
    pub(crate) words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl WordIndex {
    pub(crate) fn new(words: Vec<Vec<usize>>) -> Self {
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Self { words, index }
    }

    pub(crate) fn find(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }
}

#[derive(Debug, Clone)]
enum Mult {
    Table(BTreeMap<(usize, usize), SVec>),
    Concat(Arc<WordIndex>),
}

/// An augmented dg algebra with `d(ab) = da·b + (-1)^{|a|} a·db`.
///
/// A weight cap marks a truncation: products whose weights add beyond the cap
/// are not part of the structure, and axioms are validated below the cap.
#[derive(Debug, Clone)]
pub struct DGAlgebra {
    complex: ChainComplex,
    basis: GradedBasis,
    diff: Vec<SVec>,
    mult: Mult,
    unit: SVec,
    augmentation: Vec<u32>,
    weights: Vec<usize>,
    weight_cap: Option<usize>,
}

impl DGAlgebra {
    /// Validated construction from structure constants `e_a e_b = Σ c e_k`.
    pub fn new(
        complex: ChainComplex,
        products: BTreeMap<(usize, usize), SVec>,
        unit: SVec,
        augmentation: Vec<u32>,
    ) -> Result<Self> {
        let a = Self::from_table(complex, products, unit, augmentation);
        a.validate()?;
        Ok(a)
    }

    pub(crate) fn from_table(
        complex: ChainComplex,
        products: BTreeMap<(usize, usize), SVec>,
        unit: SVec,
        augmentation: Vec<u32>,
    ) -> Self {
        let basis = GradedBasis::of(&complex);
        let diff = diff_columns(&complex, &basis);
        let n = basis.len();
        let products = products.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Self {
            complex,
            basis,
            diff,
            mult: Mult::Table(products),
            unit,
            augmentation,
            weights: vec![0; n],
            weight_cap: None,
        }
    }

    pub(crate) fn from_words(
        complex: ChainComplex,
        words: Arc<WordIndex>,
        unit: SVec,
        augmentation: Vec<u32>,
        weights: Vec<usize>,
        weight_cap: usize,
    ) -> Self {
        let basis = GradedBasis::of(&complex);
        let diff = diff_columns(&complex, &basis);
        Self {
            complex,
            basis,
            diff,
            mult: Mult::Concat(words),
            unit,
            augmentation,
            weights,
            weight_cap: Some(weight_cap),
        }
    }

    /// The ground field as an algebra.
    pub fn ground(f: Fp) -> Self {
        Self::from_table(ChainComplex::unit(f), BTreeMap::from([((0, 0), vec![(0, 1)])]), vec![(0, 1)], vec![1])
    }

    /// `F[x]/(x^k)` with `|x| = degree`.
    pub fn truncated_polynomial(f: Fp, degree: i64, k: usize) -> Result<Self> {
        if k == 0 || degree < 0 {
            return Err(Error::Precondition("need k >= 1 and a nonnegative degree".into()));
        }
        let mut by_degree: BTreeMap<i64, usize> = BTreeMap::new();
        for j in 0..k {
            *by_degree.entry(j as i64 * degree).or_default() += 1;
        }
        let hi = (k as i64 - 1) * degree;
        let c = ChainComplex::from_fn(
            f,
            0,
            hi,
            |n| by_degree.get(&n).copied().unwrap_or(0),
            |n| Matrix::zeros(f, by_degree.get(&(n - 1)).copied().unwrap_or(0), by_degree.get(&n).copied().unwrap_or(0)),
        )?;
        // powers are already sorted by degree
        let mut products = BTreeMap::new();
        for i in 0..k {
            for j in 0..k {
                if i + j < k {
                    products.insert((i, j), vec![(i + j, 1)]);
                }
            }
        }
        let mut aug = vec![0; k];
        aug[0] = 1;
        Self::new(c, products, vec![(0, 1)], aug)
    }

    /// The exterior algebra on one generator of the given degree.
    pub fn exterior(f: Fp, degree: i64) -> Result<Self> {
        Self::truncated_polynomial(f, degree, 2)
    }

    /// `Λ(y) ⊗ F[x]/(x²)` with `|x| = 0`, `|y| = 1`, `dy = x`.
    pub fn small_dga(f: Fp) -> Self {
        let d = Matrix::from_rows(f, 2, 2, &[vec![0, 0], vec![1, 0]]);
        let c = ChainComplex::new(f, 0, vec![2, 2], vec![d]).expect("d² = 0");
        // basis: 0 = 1, 1 = x, 2 = y, 3 = xy
        let mut products = BTreeMap::new();
        for g in 0..4 {
            products.insert((0, g), vec![(g, 1)]);
            products.insert((g, 0), vec![(g, 1)]);
        }
        products.insert((1, 2), vec![(3, 1)]);
        products.insert((2, 1), vec![(3, 1)]);
        Self::new(c, products, vec![(0, 1)], vec![1, 0, 0, 0]).expect("valid dga")
    }

    pub fn field(&self) -> Fp {
        self.complex.field()
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degree(&self, g: usize) -> i64 {
        self.basis.degree(g)
    }

    pub fn unit(&self) -> &SVec {
        &self.unit
    }

    pub fn augmentation(&self) -> &[u32] {
        &self.augmentation
    }

    pub fn weight(&self, g: usize) -> usize {
        self.weights[g]
    }

    pub fn weight_cap(&self) -> Option<usize> {
        self.weight_cap
    }

    /// `d e_g`.
    pub fn d_basis(&self, g: usize) -> &SVec {
        &self.diff[g]
    }

    pub fn d(&self, x: &SVec) -> SVec {
        let f = self.field();
        let mut acc = BTreeMap::new();
        for &(g, c) in x {
            for &(t, e) in &self.diff[g] {
                push(f, &mut acc, t, f.mul(c, e));
            }
        }
        collect(acc)
    }

    /// `e_a e_b`; empty beyond the weight cap.
    pub fn product(&self, a: usize, b: usize) -> SVec {
        match &self.mult {
            Mult::Table(t) => t.get(&(a, b)).cloned().unwrap_or_default(),
            Mult::Concat(w) => {
                let mut word = w.words[a].clone();
                word.extend_from_slice(&w.words[b]);
                w.find(&word).map(|k| vec![(k, 1)]).unwrap_or_default()
            }
        }
    }

    pub fn mul(&self, x: &SVec, y: &SVec) -> SVec {
        let f = self.field();
        let mut acc = BTreeMap::new();
        for &(a, c) in x {
            for &(b, e) in y {
                for (k, v) in self.product(a, b) {
                    push(f, &mut acc, k, f.mul(f.mul(c, e), v));
                }
            }
        }
        collect(acc)
    }

    /// Index of the unit when the basis is adapted to the augmentation:
    /// the unit is a basis element and `ε` is its dual.
    pub fn adapted_unit(&self) -> Option<usize> {
        match self.unit.as_slice() {
            &[(u, 1)] => {
                let ok = self.augmentation.iter().enumerate().all(|(g, &e)| e == u32::from(g == u));
                ok.then_some(u)
            }
            _ => None,
        }
    }

    fn within_cap(&self, gs: &[usize]) -> bool {
        match self.weight_cap {
            Some(cap) => gs.iter().map(|&g| self.weights[g]).sum::<usize>() <= cap,
            None => true,
        }
    }

    /// Exhaustive check of the algebra axioms on basis pairs and triples.
    pub fn validate(&self) -> Result<()> {
        let f = self.field();
        let n = self.len();
        let bad = |m: String| Err(Error::InvalidAlgebra(m));
        if self.augmentation.len() != n {
            return bad("augmentation has the wrong length".into());
        }
        if self.unit.iter().any(|&(g, _)| self.degree(g) != 0) || !self.d(&self.unit).is_empty() {
            return bad("unit must be a cycle of degree 0".into());
        }
        for g in 0..n {
            if self.augmentation[g] != 0 && self.degree(g) != 0 {
                return bad(format!("augmentation nonzero on element {g} of degree {}", self.degree(g)));
            }
            let dg = self.d_basis(g);
            let e: u32 = dg.iter().fold(0, |s, &(t, c)| f.add(s, f.mul(c, self.augmentation[t])));
            if e != 0 {
                return bad(format!("augmentation does not vanish on d e_{g}"));
            }
        }
        let eps = |x: &SVec| x.iter().fold(0, |s, &(t, c)| f.add(s, f.mul(c, self.augmentation[t])));
        if eps(&self.unit) != 1 {
            return bad("augmentation of the unit is not 1".into());
        }
        for a in 0..n {
            let ea = vec![(a, 1)];
            if self.mul(&self.unit, &ea) != ea || self.mul(&ea, &self.unit) != ea {
                return bad(format!("unit law fails on e_{a}"));
            }
            for b in 0..n {
                if !self.within_cap(&[a, b]) {
                    continue;
                }
                let ab = self.product(a, b);
                let deg = self.degree(a) + self.degree(b);
                if ab.iter().any(|&(k, _)| self.degree(k) != deg) {
                    return bad(format!("product e_{a} e_{b} is not homogeneous of degree {deg}"));
                }
                if eps(&ab) != f.mul(self.augmentation[a], self.augmentation[b]) {
                    return bad(format!("augmentation is not multiplicative on e_{a}, e_{b}"));
                }
                let eb = vec![(b, 1)];
                let lhs = self.d(&ab);
                let s = f.sign(self.degree(a).rem_euclid(2) as usize);
                let t1 = self.mul(self.d_basis(a), &eb);
                let t2 = self.mul(&ea, self.d_basis(b));
                let rhs = add(f, &t1, &scale(f, &t2, s));
                if lhs != rhs {
                    return bad(format!("Leibniz rule fails on e_{a}, e_{b}"));
                }
                for c in 0..n {
                    if !self.within_cap(&[a, b, c]) {
                        continue;
                    }
                    let ec = vec![(c, 1)];
                    if self.mul(&ab, &ec) != self.mul(&ea, &self.product(b, c)) {
                        return bad(format!("associativity fails on e_{a}, e_{b}, e_{c}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// `A ⊗ B` with `(a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb'`.
    pub fn tensor(&self, other: &DGAlgebra) -> Result<DGAlgebra> {
        let f = self.field();
        let c = tensor(&self.complex, &other.complex)?;
        let lay = TensorLayout::new(&self.complex, &other.complex);
        let (idx, pairs) = tensor_index(&self.basis, &other.basis, &lay);
        let mut products = BTreeMap::new();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for (j, &(a2, b2)) in pairs.iter().enumerate() {
                let s = f.sign((other.degree(b) * self.degree(a2)).rem_euclid(2) as usize);
                let mut acc = BTreeMap::new();
                for (x, cx) in self.product(a, a2) {
                    for &(y, cy) in &other.product(b, b2) {
                        push(f, &mut acc, idx[&(x, y)], f.mul(s, f.mul(cx, cy)));
                    }
                }
                let v = collect(acc);
                if !v.is_empty() {
                    products.insert((i, j), v);
                }
            }
        }
        let unit = tensor_vec(f, &self.unit, &other.unit, &idx);
        let augmentation = pairs
            .iter()
            .map(|&(a, b)| f.mul(self.augmentation[a], other.augmentation[b]))
            .collect();
        DGAlgebra::new(c, products, unit, augmentation)
    }
}

fn tensor_vec(f: Fp, x: &SVec, y: &SVec, idx: &HashMap<(usize, usize), usize>) -> SVec {
    let mut acc = BTreeMap::new();
    for &(a, c) in x {
        for &(b, e) in y {
            push(f, &mut acc, idx[&(a, b)], f.mul(c, e));
        }
    }
    collect(acc)
}

pub(crate) fn add(f: Fp, x: &SVec, y: &SVec) -> SVec {
    let mut acc = BTreeMap::new();
    for &(g, c) in x.iter().chain(y) {
        push(f, &mut acc, g, c);
    }
    collect(acc)
}

pub(crate) fn scale(f: Fp, x: &SVec, s: u32) -> SVec {
    x.iter().map(|&(g, c)| (g, f.mul(c, s))).filter(|&(_, c)| c != 0).collect()
}

/// A term `c · e_a ⊗ e_b` of a coproduct.
pub type Term = (usize, usize, u32);

/// A coaugmented dg coalgebra with weights on the basis.
///
/// Coproduct and differential never raise weight, so bounding the total
/// weight of a cobar word cuts out a subcomplex.
#[derive(Debug, Clone)]
pub struct DGCoalgebra {
    complex: ChainComplex,
    basis: GradedBasis,
    diff: Vec<SVec>,
    coproducts: Vec<Vec<Term>>,
    counit: Vec<u32>,
    coaugmentation: usize,
    weights: Vec<usize>,
}

impl DGCoalgebra {
    pub fn new(
        complex: ChainComplex,
        coproducts: Vec<Vec<Term>>,
        counit: Vec<u32>,
        coaugmentation: usize,
        weights: Vec<usize>,
    ) -> Result<Self> {
        let c = Self::new_unchecked(complex, coproducts, counit, coaugmentation, weights);
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(
        complex: ChainComplex,
        coproducts: Vec<Vec<Term>>,
        counit: Vec<u32>,
        coaugmentation: usize,
        weights: Vec<usize>,
    ) -> Self {
        let basis = GradedBasis::of(&complex);
        let diff = diff_columns(&complex, &basis);
        Self {
            complex,
            basis,
            diff,
            coproducts,
            counit,
            coaugmentation,
            weights,
        }
    }

    /// The ground field as a coalgebra.
    pub fn ground(f: Fp) -> Self {
        Self::new_unchecked(ChainComplex::unit(f), vec![vec![(0, 0, 1)]], vec![1], 0, vec![0])
    }

    pub fn field(&self) -> Fp {
        self.complex.field()
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degree(&self, g: usize) -> i64 {
        self.basis.degree(g)
    }

    pub fn coproduct(&self, g: usize) -> &[Term] {
        &self.coproducts[g]
    }

    pub fn counit(&self) -> &[u32] {
        &self.counit
    }

    pub fn coaugmentation(&self) -> usize {
        self.coaugmentation
    }

    pub fn weight(&self, g: usize) -> usize {
        self.weights[g]
    }

    pub fn d_basis(&self, g: usize) -> &SVec {
        &self.diff[g]
    }

    /// Whether `ε` is the dual of the coaugmentation, so that the other basis
    /// elements span the coideal `ker ε`.
    pub fn is_adapted(&self) -> bool {
        self.counit
            .iter()
            .enumerate()
            .all(|(g, &e)| e == u32::from(g == self.coaugmentation))
    }

    /// Exhaustive check of the coalgebra axioms on basis elements.
    pub fn validate(&self) -> Result<()> {
        let f = self.field();
        let n = self.len();
        let bad = |m: String| Err(Error::InvalidAlgebra(m));
        if self.counit.len() != n || self.weights.len() != n || self.coproducts.len() != n {
            return bad("structure vectors have the wrong length".into());
        }
        let u = self.coaugmentation;
        if u >= n || self.degree(u) != 0 || self.counit[u] != 1 || !self.diff[u].is_empty() || self.weights[u] != 0 {
            return bad("coaugmentation must be a weight-0 cycle of degree 0 with counit 1".into());
        }
        if self.coproducts[u] != [(u, u, 1)] {
            return bad("coaugmentation is not grouplike".into());
        }
        for g in 0..n {
            if self.counit[g] != 0 && self.degree(g) != 0 {
                return bad(format!("counit nonzero on element {g} of degree {}", self.degree(g)));
            }
            let e = self.diff[g].iter().fold(0, |s, &(t, c)| f.add(s, f.mul(c, self.counit[t])));
            if e != 0 {
                return bad(format!("counit does not vanish on d e_{g}"));
            }
            if self.diff[g].iter().any(|&(t, _)| self.weights[t] > self.weights[g]) {
                return bad(format!("differential raises the weight of e_{g}"));
            }
            let mut left = BTreeMap::new();
            let mut right = BTreeMap::new();
            for &(a, b, c) in &self.coproducts[g] {
                if self.degree(a) + self.degree(b) != self.degree(g) {
                    return bad(format!("coproduct of e_{g} is not homogeneous"));
                }
                if self.weights[a] + self.weights[b] > self.weights[g] {
                    return bad(format!("coproduct raises the weight of e_{g}"));
                }
                push(f, &mut left, b, f.mul(c, self.counit[a]));
                push(f, &mut right, a, f.mul(c, self.counit[b]));
            }
            let eg = vec![(g, 1)];
            if collect(left) != eg || collect(right) != eg {
                return bad(format!("counit law fails on e_{g}"));
            }
            // coassociativity
            let mut l3: BTreeMap<(usize, usize, usize), u32> = BTreeMap::new();
            let mut r3: BTreeMap<(usize, usize, usize), u32> = BTreeMap::new();
            let add3 = |m: &mut BTreeMap<(usize, usize, usize), u32>, k, c: u32| {
                let e = m.entry(k).or_insert(0);
                *e = f.add(*e, c);
            };
            for &(a, b, c) in &self.coproducts[g] {
                for &(a1, a2, c2) in &self.coproducts[a] {
                    add3(&mut l3, (a1, a2, b), f.mul(c, c2));
                }
                for &(b1, b2, c2) in &self.coproducts[b] {
                    add3(&mut r3, (a, b1, b2), f.mul(c, c2));
                }
            }
            l3.retain(|_, c| *c != 0);
            r3.retain(|_, c| *c != 0);
            if l3 != r3 {
                return bad(format!("coassociativity fails on e_{g}"));
            }
            // co-Leibniz: Δd = (d ⊗ 1 + 1 ⊗ d)Δ
            let mut lhs: BTreeMap<(usize, usize), u32> = BTreeMap::new();
            let mut rhs: BTreeMap<(usize, usize), u32> = BTreeMap::new();
            let add2 = |m: &mut BTreeMap<(usize, usize), u32>, k, c: u32| {
                let e = m.entry(k).or_insert(0);
                *e = f.add(*e, c);
            };
            for &(t, c) in &self.diff[g] {
                for &(a, b, c2) in &self.coproducts[t] {
                    add2(&mut lhs, (a, b), f.mul(c, c2));
                }
            }
            for &(a, b, c) in &self.coproducts[g] {
                for &(t, c2) in &self.diff[a] {
                    add2(&mut rhs, (t, b), f.mul(c, c2));
                }
                let s = f.sign(self.degree(a).rem_euclid(2) as usize);
                for &(t, c2) in &self.diff[b] {
                    add2(&mut rhs, (a, t), f.mul(s, f.mul(c, c2)));
                }
            }
            lhs.retain(|_, c| *c != 0);
            rhs.retain(|_, c| *c != 0);
            if lhs != rhs {
                return bad(format!("co-Leibniz rule fails on e_{g}"));
            }
        }
        Ok(())
    }

    /// `C ⊗ D` with `Δ(x⊗y) = Σ (-1)^{|x''||y'|} (x'⊗y') ⊗ (x''⊗y'')`.
    pub fn tensor(&self, other: &DGCoalgebra) -> Result<DGCoalgebra> {
        let f = self.field();
        let c = tensor(&self.complex, &other.complex)?;
        let lay = TensorLayout::new(&self.complex, &other.complex);
        let (idx, pairs) = tensor_index(&self.basis, &other.basis, &lay);
        let coproducts = pairs
            .iter()
            .map(|&(x, y)| {
                let mut acc: BTreeMap<(usize, usize), u32> = BTreeMap::new();
                for &(x1, x2, cx) in &self.coproducts[x] {
                    for &(y1, y2, cy) in &other.coproducts[y] {
                        let s = f.sign((self.degree(x2) * other.degree(y1)).rem_euclid(2) as usize);
                        let e = acc.entry((idx[&(x1, y1)], idx[&(x2, y2)])).or_insert(0);
                        *e = f.add(*e, f.mul(s, f.mul(cx, cy)));
                    }
                }
                acc.into_iter().filter(|&(_, c)| c != 0).map(|((a, b), c)| (a, b, c)).collect()
            })
            .collect();
        let counit = pairs.iter().map(|&(x, y)| f.mul(self.counit[x], other.counit[y])).collect();
        let weights = pairs.iter().map(|&(x, y)| self.weights[x] + other.weights[y]).collect();
        let coaug = idx[&(self.coaugmentation, other.coaugmentation)];
        Ok(DGCoalgebra::new_unchecked(c, coproducts, counit, coaug, weights))
    }

    /// Rewrite on the basis `{u} ∪ {b - ε(b) u}` so that `ε` becomes the dual
    /// of the coaugmentation `u`. Also returns the coordinates of each old
    /// basis element in the new basis.
    pub fn adapted(&self) -> (DGCoalgebra, Vec<SVec>) {
        let f = self.field();
        let u = self.coaugmentation;
        let to_new: Vec<SVec> = (0..self.len())
            .map(|g| {
                let e = self.counit[g];
                if g == u || e == 0 {
                    vec![(g, 1)]
                } else {
                    let mut v = vec![(g, 1), (u, e)];
                    v.sort_unstable();
                    v
                }
            })
            .collect();
        let conv = |x: &SVec| {
            let mut acc = BTreeMap::new();
            for &(g, c) in x {
                for &(h, e) in &to_new[g] {
                    push(f, &mut acc, h, f.mul(c, e));
                }
            }
            collect(acc)
        };
        // new basis element b' = b - ε(b) u
        let mut coproducts = Vec::with_capacity(self.len());
        let mut diffs = Vec::with_capacity(self.len());
        for g in 0..self.len() {
            let e = if g == u { 0 } else { self.counit[g] };
            let mut acc: BTreeMap<(usize, usize), u32> = BTreeMap::new();
            let mut add2 = |k, c: u32| {
                let v = acc.entry(k).or_insert(0);
                *v = f.add(*v, c);
            };
            for &(a, b, c) in &self.coproducts[g] {
                for &(a2, ca) in &to_new[a] {
                    for &(b2, cb) in &to_new[b] {
                        add2((a2, b2), f.mul(c, f.mul(ca, cb)));
                    }
                }
            }
            if e != 0 {
                add2((u, u), f.neg(e));
            }
            coproducts.push(acc.into_iter().filter(|&(_, c)| c != 0).map(|((a, b), c)| (a, b, c)).collect());
            diffs.push(conv(&self.diff[g]));
        }
        let basis = &self.basis;
        let complex = complex_from_columns(f, basis, &diffs, false).expect("same degrees");
        let counit = (0..self.len()).map(|g| u32::from(g == u)).collect();
        let c = DGCoalgebra::new_unchecked(complex, coproducts, counit, u, self.weights.clone());
        (c, to_new)
    }

    /// Reduced coproduct `Δ̄c = Δc - c⊗u - u⊗c` of an adapted coalgebra.
    pub fn reduced_coproduct(&self, g: usize) -> Vec<Term> {
        let u = self.coaugmentation;
        self.coproducts[g].iter().copied().filter(|&(a, b, _)| a != u && b != u).collect()
    }

    /// Smallest `k` with `Δ̄^k = 0` on the coideal of an adapted coalgebra,
    /// searched up to `max`; `None` when iterated reduced coproducts survive.
    pub fn conilpotency_depth(&self, max: usize) -> Option<usize> {
        let f = self.field();
        let u = self.coaugmentation;
        // iterate on tensors of coideal elements
        let mut layer: BTreeMap<Vec<usize>, u32> = (0..self.len()).filter(|&g| g != u).map(|g| (vec![g], 1)).collect();
        for k in 0..=max {
            if layer.is_empty() {
                return Some(k);
            }
            // split the first factor
            let mut next: BTreeMap<Vec<usize>, u32> = BTreeMap::new();
            for (w, c) in &layer {
                for (a, b, e) in self.reduced_coproduct(w[0]) {
                    let mut w2 = vec![a, b];
                    w2.extend_from_slice(&w[1..]);
                    let v = next.entry(w2).or_insert(0);
                    *v = f.add(*v, f.mul(*c, e));
                }
            }
            next.retain(|_, c| *c != 0);
            layer = next;
        }
        None
    }
}

#[cfg(test)]
mod tests;
