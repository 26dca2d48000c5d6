use std::collections::BTreeMap;

use super::bar::bar_words;
use super::interval::{interval_coalgebra, JEnd, Orientation};
use super::{bar, cobar, collect, push, tensor_index, Cobar, DGAlgebra, DGCoalgebra, SVec, TruncationPolicy};
use crate::chain::{ChainComplex, ChainMap, TensorLayout};
use crate::cube::{CubeMor, Entry};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::square::chain_square;

/// Degrees inside the window where `H_n(B_{≤W} A) = H_n(B A)`.
///
/// Words of weight `w` have degree at least `w(m + 1)` for `m` the lowest
/// degree of the augmentation ideal, so the words cut off by the cap live in
/// degrees `≥ (W + 1)(m + 1)` and cannot touch `H_n` while `n + 1` is below.
pub fn bar_safe_degrees(a: &DGAlgebra, policy: &TruncationPolicy) -> Vec<i64> {
    let u = a.adapted_unit();
    let m = (0..a.len()).filter(|&g| Some(g) != u).map(|g| a.degree(g)).min();
    policy
        .interior()
        .filter(|&n| match m {
            None => true,
            Some(m) if m < 0 => false,
            Some(m) => n + 1 < (policy.weight_cap as i64 + 1) * (m + 1),
        })
        .collect()
}

/// Homology comparison in one degree.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DegreeVerdict {
    pub degree: i64,
    pub source: usize,
    pub target: usize,
    pub rank: usize,
    pub quasi_iso: bool,
}

/// A quasi-isomorphism verdict restricted to a safe window.
#[derive(Debug, Clone, serde::Serialize)]
pub struct QuasiIsoReport {
    pub policy: TruncationPolicy,
    pub safe: Vec<i64>,
    pub degrees: Vec<DegreeVerdict>,
}

impl QuasiIsoReport {
    pub fn pass(&self) -> bool {
        self.degrees.iter().all(|d| d.quasi_iso)
    }

    fn of(map: &ChainMap, policy: &TruncationPolicy, safe: Vec<i64>) -> Self {
        let degrees = safe
            .iter()
            .map(|&n| DegreeVerdict {
                degree: n,
                source: map.src().homology_dim(n),
                target: map.dst().homology_dim(n),
                rank: map.homology_rank(n),
                quasi_iso: map.is_quasi_iso_at(n),
            })
            .collect();
        Self {
            policy: *policy,
            safe,
            degrees,
        }
    }
}

/// Degrees where the weight-truncated `B^∨ B A` has the homology of the
/// untruncated one.
///
/// Filter by total weight: the graded pieces are the weight-`w` parts of
/// `B^∨ B` of `A` with its products on the augmentation ideal forgotten,
/// which are acyclic for `w ≥ 2`. So every cap `≥ 1` is exact in all
/// degrees, and only the brutal window ends are lost.
fn cobar_bar_safe_degrees(a: &DGAlgebra, policy: &TruncationPolicy) -> Result<Vec<i64>> {
    policy.check_window()?;
    let trivial = a.len() <= 1;
    if policy.weight_cap == 0 && !trivial {
        return Err(Error::EmptySafeWindow);
    }
    let safe: Vec<i64> = policy.interior().collect();
    if safe.is_empty() {
        return Err(Error::EmptySafeWindow);
    }
    Ok(safe)
}

/// The algebra map `B^∨ B A -> A`: `⟨[a_1]|…|[a_n]⟩ ↦ a_1⋯a_n`, zero on
/// words containing a longer bar word. `labels` gives the bar word of each
/// letter of the cobar.
fn counit_columns(a: &DGAlgebra, cb: &Cobar, labels: &[Vec<usize>]) -> Vec<SVec> {
    cb.words()
        .iter()
        .map(|w| {
            let mut v = a.unit().clone();
            for &l in w {
                match labels[l].as_slice() {
                    &[x] => v = a.mul(&v, &vec![(x, 1)]),
                    _ => return vec![],
                }
            }
            v
        })
        .collect()
}

fn windowed_map(src: &ChainComplex, dst: &ChainComplex, cols: &[SVec], sb: &super::GradedBasis, db: &super::GradedBasis, policy: &TruncationPolicy) -> Result<ChainMap> {
    let f = src.field();
    let (lo, hi) = (policy.lo, policy.hi);
    let sw = src.window(lo, hi);
    let dw = dst.window(lo, hi);
    let mut comps = BTreeMap::new();
    for n in lo..=hi {
        let mut m = Matrix::zeros(f, dw.dim(n), sw.dim(n));
        for g in sb.in_degree(n) {
            for &(t, c) in &cols[g] {
                debug_assert_eq!(db.degree(t), n);
                m.add_at(db.local(t), sb.local(g), c);
            }
        }
        comps.insert(n, m);
    }
    ChainMap::new(sw, dw, comps)
}

/// The counit `B^∨ B A -> A` on the complexes windowed by the policy.
pub fn counit_map(a: &DGAlgebra, policy: &TruncationPolicy) -> Result<ChainMap> {
    let b = bar(a, policy)?;
    let cb = cobar(&b, policy)?;
    let u = a.adapted_unit().expect("checked by bar");
    let labels = bar_words(a, u, policy.weight_cap);
    let cols = counit_columns(a, &cb, &labels);
    windowed_map(cb.algebra.complex(), a.complex(), &cols, cb.algebra.basis(), a.basis(), policy)
}

/// Whether `B^∨ B A -> A` is a quasi-isomorphism in the safe window.
pub fn counit_check(a: &DGAlgebra, policy: &TruncationPolicy) -> Result<QuasiIsoReport> {
    let safe = cobar_bar_safe_degrees(a, policy)?;
    let map = counit_map(a, policy)?;
    Ok(QuasiIsoReport::of(&map, policy, safe))
}

/// `C_n(A) = B^∨(J^{⊗n} ⊗ B(A))` within a truncation policy.
#[derive(Debug, Clone)]
pub struct CnSquare {
    pub n: usize,
    pub policy: TruncationPolicy,
    pub end: JEnd,
    pub coalgebra: DGCoalgebra,
    pub cobar: Cobar,
    /// Depth of the iterated reduced coproduct on the coideal, if it dies
    /// within the weight cap plus one.
    pub conilpotency: Option<usize>,
}

impl CnSquare {
    /// The complex restricted to the degree window.
    pub fn windowed(&self) -> ChainComplex {
        self.cobar.algebra.complex().window(self.policy.lo, self.policy.hi)
    }
}

pub fn c_n_square(a: &DGAlgebra, n: usize, policy: &TruncationPolicy, end: JEnd) -> Result<CnSquare> {
    let b = bar(a, policy)?;
    let j = interval_coalgebra(a.field(), n, Orientation::Standard, end);
    let coalgebra = j.tensor(&b)?;
    let cb = cobar(&coalgebra, policy)?;
    let conilpotency = cb.adapted.conilpotency_depth(policy.weight_cap + 1);
    Ok(CnSquare {
        n,
        policy: *policy,
        end,
        coalgebra,
        cobar: cb,
        conilpotency,
    })
}

/// `C_φ : C_m(A) -> C_n(A)` induced by `L_J(φ) ⊗ id` on coalgebra factors.
///
/// Only cube morphisms fixing the coaugmentation word induce maps of
/// cobar constructions, so constants at the other end are rejected.
pub fn c_n_map(a: &DGAlgebra, phi: &CubeMor, policy: &TruncationPolicy, end: JEnd) -> Result<ChainMap> {
    let other = match end {
        JEnd::Zero => 1,
        JEnd::One => 0,
    };
    if phi.entries().iter().any(|e| *e == Entry::Const(other)) {
        return Err(Error::Precondition(format!(
            "a constant {other} does not preserve the coaugmentation of C_n"
        )));
    }
    let f = a.field();
    let src = c_n_square(a, phi.src(), policy, end)?;
    let dst = c_n_square(a, phi.dst(), policy, end)?;
    let l = chain_square(f).interval_map(phi);
    let b = bar(a, policy)?;
    let jm = interval_coalgebra(f, phi.src(), Orientation::Standard, end);
    let jn = interval_coalgebra(f, phi.dst(), Orientation::Standard, end);
    let (_, src_pairs) = tensor_index(jm.basis(), b.basis(), &TensorLayout::new(jm.complex(), b.complex()));
    let (dst_idx, _) = tensor_index(jn.basis(), b.basis(), &TensorLayout::new(jn.complex(), b.complex()));
    // L ⊗ id on the unadapted bases
    let on_basis: Vec<SVec> = src_pairs
        .iter()
        .map(|&(w, x)| {
            let deg = jm.degree(w);
            let col = l.component(deg);
            let k = jm.basis().local(w);
            (0..col.rows())
                .filter_map(|r| {
                    let c = col.get(r, k);
                    (c != 0).then(|| (dst_idx[&(jn.basis().global(deg, r), x)], c))
                })
                .collect()
        })
        .collect();
    // adapted source element b' = b - ε(b) u maps to f(b) - ε(b) f(u)
    let su = src.coalgebra.coaugmentation();
    let letters: Vec<SVec> = (0..on_basis.len())
        .map(|g| {
            let mut acc = BTreeMap::new();
            let e = if g == su { 0 } else { src.coalgebra.counit()[g] };
            for &(t, c) in &on_basis[g] {
                push(f, &mut acc, t, c);
            }
            for &(t, c) in &on_basis[su] {
                push(f, &mut acc, t, f.neg(f.mul(e, c)));
            }
            let mut out = BTreeMap::new();
            for (t, c) in collect(acc) {
                for &(t2, c2) in &dst.cobar.to_adapted[t] {
                    push(f, &mut out, t2, f.mul(c, c2));
                }
            }
            collect(out)
        })
        .collect();
    let du = dst.cobar.adapted.coaugmentation();
    let mut cols = Vec::with_capacity(src.cobar.words().len());
    for w in src.cobar.words() {
        let mut acc: BTreeMap<Vec<usize>, u32> = BTreeMap::from([(vec![], 1)]);
        for &l in w {
            let mut next = BTreeMap::new();
            for (prefix, c) in &acc {
                for &(t, e) in &letters[l] {
                    if t == du {
                        return Err(Error::Precondition("letter image meets the coaugmentation".into()));
                    }
                    let mut p2 = prefix.clone();
                    p2.push(t);
                    let v = next.entry(p2).or_insert(0);
                    *v = f.add(*v, f.mul(*c, e));
                }
            }
            acc = next;
        }
        let mut col = BTreeMap::new();
        for (word, c) in acc {
            let id = dst
                .cobar
                .find(&word)
                .ok_or_else(|| Error::Precondition("image word outside the truncation".into()))?;
            push(f, &mut col, id, c);
        }
        cols.push(collect(col));
    }
    windowed_map(
        src.cobar.algebra.complex(),
        dst.cobar.algebra.complex(),
        &cols,
        src.cobar.algebra.basis(),
        dst.cobar.algebra.basis(),
        policy,
    )
}

/// Whether `C_0(A) = B^∨(J^{⊗0} ⊗ B A) -> A` is a quasi-isomorphism in the
/// safe window.
pub fn c0_replacement_check(a: &DGAlgebra, policy: &TruncationPolicy) -> Result<QuasiIsoReport> {
    let safe = cobar_bar_safe_degrees(a, policy)?;
    let c0 = c_n_square(a, 0, policy, JEnd::Zero)?;
    let u = a.adapted_unit().expect("checked by bar");
    // J^{⊗0} ⊗ B has the bar words as its basis, in the same order
    let labels = bar_words(a, u, policy.weight_cap);
    let cols = counit_columns(a, &c0.cobar, &labels);
    let map = windowed_map(
        c0.cobar.algebra.complex(),
        a.complex(),
        &cols,
        c0.cobar.algebra.basis(),
        a.basis(),
        policy,
    )?;
    Ok(QuasiIsoReport::of(&map, policy, safe))
}
