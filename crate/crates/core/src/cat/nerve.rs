use super::{FiniteCategory, Functor};
use crate::error::{Error, Result};
use crate::sset::{Indexed, SDeg, SimplexSource, SimplicialMap, SimplicialSet};

/// A chain `start -> ... ` of composable morphisms; nondegenerate keys
/// contain no identities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NerveKey {
    pub start: usize,
    pub mors: Vec<usize>,
}

/// Drops identities from a chain: `(eta, key)` with `eta` the vertex
/// surjection onto the normalized chain.
pub(crate) fn normalize_chain(c: &FiniteCategory, start: usize, mors: &[usize]) -> (Vec<usize>, NerveKey) {
    let mut eta = Vec::with_capacity(mors.len() + 1);
    eta.push(0);
    let mut kept = Vec::new();
    for &f in mors {
        if !c.is_identity(f) {
            kept.push(f);
        }
        eta.push(kept.len());
    }
    (eta, NerveKey { start, mors: kept })
}

/// Face `d_i` of a chain of length `n`, identities kept.
pub(crate) fn chain_face(c: &FiniteCategory, start: usize, mors: &[usize], i: usize) -> (usize, Vec<usize>) {
    let n = mors.len();
    if i == 0 {
        let s = if n == 0 { start } else { c.dst(mors[0]) };
        (s, mors[1..].to_vec())
    } else if i == n {
        (start, mors[..n - 1].to_vec())
    } else {
        let mut m = mors[..i - 1].to_vec();
        m.push(c.compose(mors[i], mors[i - 1]));
        m.extend_from_slice(&mors[i + 1..]);
        (start, m)
    }
}

struct NerveSource<'a>(&'a FiniteCategory);

impl SimplexSource for NerveSource<'_> {
    type Key = NerveKey;

    fn nondegenerate(&self, n: usize) -> Vec<NerveKey> {
        let c = self.0;
        let mut out = Vec::new();
        if n == 0 {
            return (0..c.num_objects())
                .map(|start| NerveKey {
                    start,
                    mors: Vec::new(),
                })
                .collect();
        }
        fn rec(c: &FiniteCategory, n: usize, cur: &mut Vec<usize>, out: &mut Vec<NerveKey>) {
            if cur.len() == n {
                out.push(NerveKey {
                    start: c.src(cur[0]),
                    mors: cur.clone(),
                });
                return;
            }
            let b = c.dst(*cur.last().expect("nonempty"));
            for &g in c.outs(b) {
                if !c.is_identity(g) {
                    cur.push(g);
                    rec(c, n, cur, out);
                    cur.pop();
                }
            }
        }
        for f in 0..c.num_morphisms() {
            if !c.is_identity(f) {
                let mut cur = vec![f];
                rec(c, n, &mut cur, &mut out);
            }
        }
        out
    }

    fn face(&self, key: &NerveKey, _n: usize, i: usize) -> (Vec<usize>, NerveKey) {
        let (s, m) = chain_face(self.0, key.start, &key.mors, i);
        normalize_chain(self.0, s, &m)
    }
}

/// `N(C)` truncated at `cap`.
pub fn nerve(c: &FiniteCategory, cap: usize) -> Result<Indexed<NerveKey>> {
    SimplicialSet::build(&NerveSource(c), cap)
}

/// `N(F) : N(C) -> N(D)` on nerves built by [`nerve`].
pub fn nerve_map(
    f: &Functor,
    dst_cat: &FiniteCategory,
    src: &Indexed<NerveKey>,
    dst: &Indexed<NerveKey>,
) -> Result<SimplicialMap> {
    let mut images = Vec::with_capacity(src.keys.len());
    for keys in &src.keys {
        let mut row = Vec::with_capacity(keys.len());
        for k in keys {
            let mors: Vec<usize> = k.mors.iter().map(|&m| f.mor[m]).collect();
            let (eta, key) = normalize_chain(dst_cat, f.obj[k.start], &mors);
            let dim = key.mors.len();
            let idx = dst
                .lookup(dim, &key)
                .ok_or_else(|| Error::CapExceeded {
                    cap: dst.set.cap(),
                    requested: dim,
                })?;
            row.push(SDeg { eta, dim, idx });
        }
        images.push(row);
    }
    Ok(SimplicialMap { images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    #[test]
    fn ordinal_nerves() {
        assert_eq!(nerve(&FiniteCategory::ordinal(1), 3).unwrap().set.counts(), &[2, 1, 0, 0]);
        assert_eq!(nerve(&FiniteCategory::ordinal(2), 3).unwrap().set.counts(), &[3, 3, 1, 0]);
    }

    #[test]
    fn terminal_object_means_contractible() {
        let cats = [
            FiniteCategory::ordinal(3),
            FiniteCategory::cospan(),
            FiniteCategory::walking_iso(),
            FiniteCategory::ordinal(1).product(&FiniteCategory::ordinal(2)),
            FiniteCategory::terminal(),
        ];
        for c in cats {
            assert!(c.has_terminal());
            let h = nerve(&c, 4).unwrap().set.homology(Fp::two());
            assert_eq!(h, vec![1, 0, 0, 0]);
        }
    }

    #[test]
    fn classifying_space_of_z2() {
        // RP^∞ over F_2
        let h = nerve(&FiniteCategory::cyclic_group(2), 5).unwrap().set.homology(Fp::two());
        assert_eq!(h, vec![1, 1, 1, 1, 1]);
        let h = nerve(&FiniteCategory::cyclic_group(2), 5).unwrap().set.homology(Fp::new(3).unwrap());
        assert_eq!(h, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn opposite_nerve_counts() {
        for c in [FiniteCategory::span(), FiniteCategory::cyclic_group(3), FiniteCategory::ordinal(2)] {
            let a = nerve(&c, 3).unwrap().set;
            let b = nerve(&c.opposite(), 3).unwrap().set;
            assert_eq!(a.counts(), b.counts());
            assert_eq!(a.opposite().homology(Fp::two()), b.homology(Fp::two()));
        }
    }

    #[test]
    fn functor_induces_valid_map() {
        let c = FiniteCategory::ordinal(2);
        let d = FiniteCategory::ordinal(1);
        let f = Functor {
            obj: vec![0, 1, 1],
            mor: c
                .morphisms()
                .iter()
                .map(|m| {
                    let (a, b) = ([0, 1, 1][m.src], [0, 1, 1][m.dst]);
                    d.hom(a, b)[0]
                })
                .collect(),
        };
        f.validate(&c, &d).unwrap();
        let (nc, nd) = (nerve(&c, 3).unwrap(), nerve(&d, 3).unwrap());
        let m = nerve_map(&f, &d, &nc, &nd).unwrap();
        m.validate(&nc.set, &nd.set).unwrap();
    }
}
