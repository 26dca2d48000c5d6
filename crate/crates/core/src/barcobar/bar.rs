use std::collections::BTreeMap;
use std::sync::Arc;

use super::{collect, complex_from_columns, push, DGAlgebra, DGCoalgebra, GradedBasis, SVec, Term, TruncationPolicy, WordIndex};
use crate::error::{Error, Result};

/// Words `[a_1|…|a_w]` in the augmentation ideal, `w ≤ cap`, sorted by
/// degree `Σ(|a_i| + 1)`.
pub(crate) fn bar_words(a: &DGAlgebra, u: usize, cap: usize) -> Vec<Vec<usize>> {
    let letters: Vec<usize> = (0..a.len()).filter(|&g| g != u).collect();
    let mut all = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..cap {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                let mut w2 = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort_by_key(|w| w.iter().map(|&g| a.degree(g) + 1).sum::<i64>());
    all
}

/// The bar construction `B(A)`, truncated to at most `weight_cap` letters.
///
/// `d[a_1|…|a_w] = -Σ (-1)^{ε_{i-1}} […|da_i|…] + Σ (-1)^{ε_i} […|a_i a_{i+1}|…]`
/// with `ε_i = Σ_{j≤i} (|a_j| + 1)`; the coproduct is deconcatenation.
pub fn bar(a: &DGAlgebra, policy: &TruncationPolicy) -> Result<DGCoalgebra> {
    policy.check_window()?;
    let f = a.field();
    let u = a
        .adapted_unit()
        .ok_or_else(|| Error::Precondition("the unit must be a basis element dual to the augmentation".into()))?;
    let words = bar_words(a, u, policy.weight_cap);
    let index = WordIndex::new(words.clone());
    let basis = GradedBasis::from_degrees(
        words
            .iter()
            .map(|w| w.iter().map(|&g| a.degree(g) + 1).sum())
            .collect(),
    );
    let mut diff = Vec::with_capacity(words.len());
    for w in &words {
        let mut acc = BTreeMap::new();
        let mut eps = 0i64;
        for i in 0..w.len() {
            let before = eps;
            eps += a.degree(w[i]) + 1;
            for &(t, c) in a.d_basis(w[i]) {
                let mut w2 = w.clone();
                w2[i] = t;
                let s = f.neg(f.sign(before.rem_euclid(2) as usize));
                push(f, &mut acc, index.find(&w2).expect("same length"), f.mul(s, c));
            }
            if i + 1 < w.len() {
                for (t, c) in a.product(w[i], w[i + 1]) {
                    if t == u {
                        return Err(Error::InvalidAlgebra("augmentation ideal is not closed under products".into()));
                    }
                    let mut w2 = w[..i].to_vec();
                    w2.push(t);
                    w2.extend_from_slice(&w[i + 2..]);
                    let s = f.sign(eps.rem_euclid(2) as usize);
                    push(f, &mut acc, index.find(&w2).expect("shorter word"), f.mul(s, c));
                }
            }
        }
        diff.push(collect(acc));
    }
    let complex = complex_from_columns(f, &basis, &diff, true)?;
    let coproducts: Vec<Vec<Term>> = words
        .iter()
        .map(|w| {
            (0..=w.len())
                .map(|k| (index.find(&w[..k]).unwrap(), index.find(&w[k..]).unwrap(), 1))
                .collect()
        })
        .collect();
    let empty = index.find(&[]).unwrap();
    let counit = (0..words.len()).map(|g| u32::from(g == empty)).collect();
    let weights = words.iter().map(Vec::len).collect();
    Ok(DGCoalgebra::new_unchecked(complex, coproducts, counit, empty, weights))
}

/// A truncated cobar construction together with its word basis.
#[derive(Debug, Clone)]
pub struct Cobar {
    pub algebra: DGAlgebra,
    /// The input rewritten on a basis adapted to its counit.
    pub adapted: DGCoalgebra,
    /// Coordinates of the input basis in the adapted basis.
    pub to_adapted: Vec<SVec>,
    words: Arc<WordIndex>,
}

impl Cobar {
    /// Letters (adapted coalgebra basis elements) of each basis word.
    pub fn words(&self) -> &[Vec<usize>] {
        &self.words.words
    }

    pub fn find(&self, w: &[usize]) -> Option<usize> {
        self.words.find(w)
    }
}

/// The cobar construction `B^∨(C)` on the coideal `ker ε`, keeping words of
/// total weight and length at most `weight_cap`.
///
/// Total weight ≤ cap is a subcomplex and length > cap an ideal inside it, so
/// the result is a genuine subquotient. For a coalgebra with no weight-0
/// coideal elements the length bound is implied by the weight bound.
///
/// `d⟨c_1|…|c_n⟩ = Σ (-1)^{η_{i-1}} (-⟨…|dc_i|…⟩ + Σ (-1)^{|c_i'|} ⟨…|c_i'|c_i''|…⟩)`
/// with `η_i = Σ_{j≤i} (|c_j| - 1)`.
pub fn cobar(c: &DGCoalgebra, policy: &TruncationPolicy) -> Result<Cobar> {
    policy.check_window()?;
    let f = c.field();
    let (ad, to_adapted) = c.adapted();
    let u = ad.coaugmentation();
    let cap = policy.weight_cap;
    let letters: Vec<usize> = (0..ad.len()).filter(|&g| g != u && ad.weight(g) <= cap).collect();
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(vec![], 0)];
    while let Some((w, wt)) = stack.pop() {
        if w.len() == cap {
            continue;
        }
        for &l in letters.iter().rev() {
            let wt2 = wt + ad.weight(l);
            if wt2 <= cap {
                let mut w2 = w.clone();
                w2.push(l);
                words.push(w2.clone());
                stack.push((w2, wt2));
            }
        }
    }
    let deg = |w: &[usize]| w.iter().map(|&g| ad.degree(g) - 1).sum::<i64>();
    words.sort_by(|x, y| deg(x).cmp(&deg(y)).then_with(|| x.cmp(y)));
    let index = Arc::new(WordIndex::new(words));
    let words = &index.words;
    let basis = GradedBasis::from_degrees(words.iter().map(|w| deg(w)).collect());
    let mut diff = Vec::with_capacity(words.len());
    for w in words {
        let mut acc = BTreeMap::new();
        let mut eta = 0i64;
        for i in 0..w.len() {
            let s = f.sign(eta.rem_euclid(2) as usize);
            for &(t, k) in ad.d_basis(w[i]) {
                if t == u {
                    return Err(Error::InvalidAlgebra("differential leaves the coideal".into()));
                }
                let mut w2 = w.clone();
                w2[i] = t;
                let id = index.find(&w2).expect("weight does not grow");
                push(f, &mut acc, id, f.neg(f.mul(s, k)));
            }
            for (a, b, k) in ad.reduced_coproduct(w[i]) {
                let mut w2 = w[..i].to_vec();
                w2.push(a);
                w2.push(b);
                w2.extend_from_slice(&w[i + 1..]);
                if let Some(id) = index.find(&w2) {
                    let s2 = f.sign(ad.degree(a).rem_euclid(2) as usize);
                    push(f, &mut acc, id, f.mul(s, f.mul(s2, k)));
                }
            }
            eta += ad.degree(w[i]) - 1;
        }
        diff.push(collect(acc));
    }
    let complex = complex_from_columns(f, &basis, &diff, true)?;
    let empty = index.find(&[]).unwrap();
    let augmentation = (0..words.len()).map(|g| u32::from(g == empty)).collect();
    let weights = words.iter().map(|w| w.iter().map(|&g| ad.weight(g)).sum()).collect();
    let algebra = DGAlgebra::from_words(complex, index.clone(), vec![(empty, 1)], augmentation, weights, cap);
    Ok(Cobar {
        algebra,
        adapted: ad,
        to_adapted,
        words: index,
    })
}
