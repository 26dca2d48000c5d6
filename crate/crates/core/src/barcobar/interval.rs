use std::collections::BTreeMap;

use super::{collect, push, DGAlgebra, DGCoalgebra, GradedBasis, SVec, Term};
use crate::chain::{direct_sum, hom_degree_layout, internal_hom, ChainMap};
use crate::error::Result;
use crate::field::Fp;
use crate::linalg::Matrix;

/// Which of the two coderivation-compatible coproducts on `|01>` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Orientation {
    /// `Δ|01> = |0>⊗|01> + |01>⊗|1>`.
    #[default]
    Standard,
    /// `Δ|01> = |1>⊗|01> + |01>⊗|0>`.
    Mirror,
}

/// The endpoint used as coaugmentation of `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum JEnd {
    #[default]
    Zero,
    One,
}

// letters: 0 = |0>, 1 = |1>, 2 = |01>
const DEGREE: [i64; 3] = [0, 0, 1];

fn letter_coproduct(o: Orientation, l: usize) -> &'static [(usize, usize)] {
    match (l, o) {
        (0, _) => &[(0, 0)],
        (1, _) => &[(1, 1)],
        (_, Orientation::Standard) => &[(0, 2), (2, 1)],
        (_, Orientation::Mirror) => &[(1, 2), (2, 0)],
    }
}

/// Words of length `n` in `|0>, |1>, |01>`, grouped by degree and
/// lexicographic inside each degree (the word basis of `J^{⊗n}`).
fn words(n: usize) -> Vec<Vec<usize>> {
    let total = 3usize.pow(n as u32);
    let mut all: Vec<Vec<usize>> = (0..total)
        .map(|t| {
            let mut w = vec![0; n];
            let mut r = t;
            for p in (0..n).rev() {
                w[p] = r % 3;
                r /= 3;
            }
            w
        })
        .collect();
    all.sort_by_key(|w| w.iter().filter(|&&l| l == 2).count());
    all
}

/// `J^{⊗n}` as a coalgebra on the word basis, coaugmented at the constant
/// word on `end`.
pub fn interval_coalgebra(f: Fp, n: usize, orientation: Orientation, end: JEnd) -> DGCoalgebra {
    let ws = words(n);
    let index: BTreeMap<&[usize], usize> = ws.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let degrees: Vec<i64> = ws.iter().map(|w| w.iter().map(|&l| DEGREE[l]).sum()).collect();
    let basis = GradedBasis::from_degrees(degrees);
    let diff: Vec<SVec> = ws
        .iter()
        .map(|w| {
            let mut acc = BTreeMap::new();
            let mut before = 0;
            for p in 0..n {
                if w[p] == 2 {
                    let s = f.sign(before);
                    for (l, c) in [(1, s), (0, f.neg(s))] {
                        let mut w2 = w.clone();
                        w2[p] = l;
                        push(f, &mut acc, index[w2.as_slice()], c);
                    }
                    before += 1;
                }
            }
            collect(acc)
        })
        .collect();
    let coproducts: Vec<Vec<Term>> = ws
        .iter()
        .map(|w| {
            // expand letter by letter, tracking the Koszul sign of moving
            // right factors past later left factors
            let mut partial: Vec<(Vec<usize>, Vec<usize>, usize)> = vec![(vec![], vec![], 0)];
            for &l in w {
                let mut next = Vec::new();
                for (a, b, s) in &partial {
                    for &(x, y) in letter_coproduct(orientation, l) {
                        let right_deg: i64 = b.iter().map(|&k| DEGREE[k]).sum();
                        let mut a2 = a.clone();
                        a2.push(x);
                        let mut b2 = b.clone();
                        b2.push(y);
                        next.push((a2, b2, s + (right_deg * DEGREE[x]) as usize));
                    }
                }
                partial = next;
            }
            let mut acc: BTreeMap<(usize, usize), u32> = BTreeMap::new();
            for (a, b, s) in partial {
                let e = acc.entry((index[a.as_slice()], index[b.as_slice()])).or_insert(0);
                *e = f.add(*e, f.sign(s));
            }
            acc.into_iter().filter(|&(_, c)| c != 0).map(|((a, b), c)| (a, b, c)).collect()
        })
        .collect();
    let counit = ws.iter().map(|w| u32::from(w.iter().all(|&l| l != 2))).collect();
    let e = match end {
        JEnd::Zero => 0,
        JEnd::One => 1,
    };
    let coaug = index[vec![e; n].as_slice()];
    let complex = super::complex_from_columns(f, &basis, &diff, false).expect("sorted by degree");
    DGCoalgebra::new_unchecked(complex, coproducts, counit, coaug, vec![0; ws.len()])
}

/// The interval coalgebra `J` with the standard coproduct, coaugmented at `|0>`.
pub fn j_coalgebra(f: Fp) -> DGCoalgebra {
    interval_coalgebra(f, 1, Orientation::Standard, JEnd::Zero)
}

/// `J ⊗ C`, coaugmented at `|end> ⊗ u_C`.
pub fn cylinder_cog(c: &DGCoalgebra, orientation: Orientation, end: JEnd) -> Result<DGCoalgebra> {
    interval_coalgebra(c.field(), 1, orientation, end).tensor(c)
}

/// The convolution algebra `[J, A]` with its path factorization
/// `A -> [J, A] -> A × A`.
#[derive(Debug, Clone)]
pub struct ConvolutionPath {
    pub algebra: DGAlgebra,
    /// Precomposition with the counit of `J`.
    pub first: ChainMap,
    /// Evaluation at `|0>` and `|1>`.
    pub second: ChainMap,
    pub first_quasi_iso: bool,
    pub second_surjective: bool,
    pub composite_is_diagonal: bool,
}

impl ConvolutionPath {
    pub fn pass(&self) -> bool {
        self.first_quasi_iso && self.second_surjective && self.composite_is_diagonal
    }
}

/// `(f·g)(j) = Σ (-1)^{|g||j'|} f(j') g(j'')` over `Δj = Σ j' ⊗ j''`.
pub fn convolution_path(a: &DGAlgebra, orientation: Orientation) -> Result<ConvolutionPath> {
    let f = a.field();
    let j = interval_coalgebra(f, 1, orientation, JEnd::Zero);
    let hom = internal_hom(j.complex(), a.complex())?;
    let lay = hom_degree_layout(j.complex(), a.complex());
    let hb = GradedBasis::of(&hom);
    let (ab, jb) = (a.basis(), j.basis());
    // basis element of [J, A] as (a, j): the map sending j to a
    let decode: Vec<(usize, usize)> = (0..hb.len())
        .map(|g| {
            let n = hb.degree(g);
            let mut k = hb.local(g);
            let (lo, hi) = j.complex().support().expect("J is nonzero");
            let mut found = None;
            for i in lo..=hi {
                let (rows, cols) = (a.complex().dim(i + n), j.complex().dim(i));
                if k < rows * cols {
                    found = Some((ab.global(i + n, k / cols), jb.global(i, k % cols)));
                    break;
                }
                k -= rows * cols;
            }
            found.expect("index inside the layout")
        })
        .collect();
    let encode = |x: usize, y: usize| {
        let (i, n) = (jb.degree(y), ab.degree(x) - jb.degree(y));
        let cols = j.complex().dim(i);
        hb.global(n, lay.offset(n, i) + ab.local(x) * cols + jb.local(y))
    };
    let mut products = BTreeMap::new();
    for (p, &(x1, y1)) in decode.iter().enumerate() {
        for (q, &(x2, y2)) in decode.iter().enumerate() {
            let gdeg = hb.degree(q);
            let mut acc = BTreeMap::new();
            let xy = a.product(x1, x2);
            if xy.is_empty() {
                continue;
            }
            for y in 0..j.len() {
                for &(t1, t2, c) in j.coproduct(y) {
                    if t1 != y1 || t2 != y2 {
                        continue;
                    }
                    let s = f.sign((gdeg * j.degree(t1)).rem_euclid(2) as usize);
                    for &(x, e) in &xy {
                        push(f, &mut acc, encode(x, y), f.mul(s, f.mul(c, e)));
                    }
                }
            }
            let v = collect(acc);
            if !v.is_empty() {
                products.insert((p, q), v);
            }
        }
    }
    let lift = |x: &SVec| {
        let mut acc = BTreeMap::new();
        for &(g, c) in x {
            for y in 0..j.len() {
                push(f, &mut acc, encode(g, y), f.mul(c, j.counit()[y]));
            }
        }
        collect(acc)
    };
    let unit = lift(a.unit());
    let j0 = j.coaugmentation();
    let augmentation = decode
        .iter()
        .map(|&(x, y)| if y == j0 { a.augmentation()[x] } else { 0 })
        .collect();
    let algebra = DGAlgebra::new(hom.clone(), products, unit, augmentation)?;

    let ac = a.complex();
    let first = ChainMap::new(ac.clone(), hom.clone(), {
        let mut comps = BTreeMap::new();
        if let Some((lo, hi)) = ac.support() {
            for n in lo..=hi {
                let mut m = Matrix::zeros(f, hom.dim(n), ac.dim(n));
                for x in ab.in_degree(n) {
                    for (t, c) in lift(&vec![(x, 1)]) {
                        m.add_at(hb.local(t), ab.local(x), c);
                    }
                }
                comps.insert(n, m);
            }
        }
        comps
    })?;
    let aa = direct_sum(ac, ac)?;
    let j1 = 1 - j0;
    let second = ChainMap::new(hom.clone(), aa.clone(), {
        let mut comps = BTreeMap::new();
        if let Some((lo, hi)) = hom.support() {
            for n in lo..=hi {
                let mut m = Matrix::zeros(f, aa.dim(n), hom.dim(n));
                for g in hb.in_degree(n) {
                    let (x, y) = decode[g];
                    if y == j0 {
                        m.add_at(ab.local(x), hb.local(g), 1);
                    } else if y == j1 {
                        m.add_at(ac.dim(n) + ab.local(x), hb.local(g), 1);
                    }
                }
                comps.insert(n, m);
            }
        }
        comps
    })?;
    let diagonal = ChainMap::new(ac.clone(), aa.clone(), {
        let mut comps = BTreeMap::new();
        if let Some((lo, hi)) = ac.support() {
            for n in lo..=hi {
                let id = Matrix::identity(f, ac.dim(n));
                comps.insert(n, id.vstack(&id));
            }
        }
        comps
    })?;
    let composite = second.compose(&first)?;
    Ok(ConvolutionPath {
        first_quasi_iso: first.is_quasi_iso(),
        second_surjective: second.is_fibration(),
        composite_is_diagonal: composite == diagonal,
        algebra,
        first,
        second,
    })
}

/// The complex of `J^{⊗n}` on the word basis, for comparison with the
/// square structure on chain complexes.
#[cfg(test)]
pub(crate) fn interval_complex(f: Fp, n: usize) -> crate::chain::ChainComplex {
    interval_coalgebra(f, n, Orientation::Standard, JEnd::Zero).complex().clone()
}
