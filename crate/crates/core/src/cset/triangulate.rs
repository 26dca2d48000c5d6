use super::{CubicalMap, CubicalSet, DegCell};
use crate::cube::{CubeMor, Entry};
use crate::error::Result;
use crate::sset::{epi_mono, Indexed, SDeg, SimplexSource, SimplicialMap, SimplicialSet};

/// A nondegenerate simplex of the triangulation: a nondegenerate cell of
/// dimension `u` and a strictly increasing chain of vertices of `{0,1}^u`
/// (bitmasks, bit `j` is coordinate `j+1`) from `0...0` to `1...1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangulationKey {
    pub cell: usize,
    pub chain: Vec<u32>,
}

struct Source<'a>(&'a CubicalSet);

fn full(u: usize) -> u32 {
    if u == 0 {
        0
    } else {
        (1u32 << u) - 1
    }
}

fn chains(u: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(cur: &mut Vec<u32>, steps_left: usize, top: u32, out: &mut Vec<Vec<u32>>) {
        let last = *cur.last().expect("nonempty");
        if steps_left == 0 {
            if last == top {
                out.push(cur.clone());
            }
            return;
        }
        let free = top & !last;
        // iterate nonempty subsets of the unset coordinates
        let mut sub = free;
        while sub != 0 {
            cur.push(last | sub);
            rec(cur, steps_left - 1, top, out);
            cur.pop();
            sub = (sub - 1) & free;
        }
    }
    let mut cur = vec![0u32];
    rec(&mut cur, k, full(u), &mut out);
    out
}

/// Project a weakly increasing chain of `{0,1}^s` through an epi
/// `eta : [s] -> [t]` (keeping the coordinates `eta` reads).
fn project(chain: &[u32], eta: &CubeMor) -> Vec<u32> {
    chain
        .iter()
        .map(|&v| {
            let mut w = 0u32;
            for (r, e) in eta.entries().iter().enumerate() {
                if let Entry::Var(j) = *e {
                    if v >> (j - 1) & 1 == 1 {
                        w |= 1 << r;
                    }
                }
            }
            w
        })
        .collect()
}

/// Normal form of a weakly increasing vertex chain inside the element `x`.
fn normalize(x: &CubicalSet, elem: &DegCell, chain: &[u32]) -> (Vec<usize>, TriangulationKey) {
    let u = elem.dim();
    let (first, last) = (chain[0], *chain.last().expect("nonempty"));
    let mut entries = Vec::with_capacity(u);
    let mut kept = Vec::new();
    for j in 0..u {
        let (a, b) = (first >> j & 1, last >> j & 1);
        if a == b {
            entries.push(Entry::Const(a as u8));
        } else {
            kept.push(j);
            entries.push(Entry::Var(kept.len()));
        }
    }
    let mu = CubeMor::new(kept.len(), entries).expect("support face is a mono");
    let restricted: Vec<u32> = chain
        .iter()
        .map(|&v| {
            kept.iter()
                .enumerate()
                .fold(0u32, |w, (r, &j)| w | ((v >> j & 1) << r))
        })
        .collect();
    let e = x.act(&mu, elem);
    let projected = project(&restricted, &e.eta);
    let (eta, image) = epi_mono(&projected);
    (
        eta,
        TriangulationKey {
            cell: e.cell,
            chain: image,
        },
    )
}

impl SimplexSource for Source<'_> {
    type Key = TriangulationKey;

    fn nondegenerate(&self, n: usize) -> Vec<TriangulationKey> {
        let mut out = Vec::new();
        for (c, cell) in self.0.cells().iter().enumerate() {
            if cell.dim >= n && (cell.dim > 0 || n == 0) {
                for chain in chains(cell.dim, n) {
                    out.push(TriangulationKey { cell: c, chain });
                }
            }
        }
        out
    }

    fn face(&self, key: &TriangulationKey, _n: usize, i: usize) -> (Vec<usize>, TriangulationKey) {
        let mut chain = key.chain.clone();
        chain.remove(i);
        normalize(self.0, &self.0.nondeg(key.cell), &chain)
    }
}

/// `L_Δ(X)` truncated at simplicial dimension `cap`: each nondegenerate
/// `n`-cell contributes a copy of `Δ[1]^n` glued along its faces.
pub fn triangulate(x: &CubicalSet, cap: usize) -> Result<Indexed<TriangulationKey>> {
    SimplicialSet::build(&Source(x), cap)
}

/// `L_Δ(f)` between triangulations built with the same cap.
pub fn triangulate_map(
    f: &CubicalMap,
    src: &Indexed<TriangulationKey>,
    dst: &Indexed<TriangulationKey>,
) -> SimplicialMap {
    let images = src
        .keys
        .iter()
        .map(|keys| {
            keys.iter()
                .map(|k| {
                    let img = &f.assign()[k.cell];
                    let (eta, key) = normalize(f.dst(), img, &k.chain);
                    let dim = eta.last().copied().unwrap_or(0);
                    let idx = dst.lookup(dim, &key).expect("triangulation image present");
                    SDeg { eta, dim, idx }
                })
                .collect()
        })
        .collect();
    SimplicialMap { images }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::{boundary, normalized_chains, representable};
    use crate::field::Fp;

    #[test]
    fn interval_and_square() {
        assert_eq!(triangulate(&representable(1), 1).unwrap().set.counts(), &[2, 1]);
        assert_eq!(triangulate(&representable(2), 2).unwrap().set.counts(), &[4, 5, 2]);
        assert_eq!(triangulate(&representable(3), 3).unwrap().set.counts(), &[8, 19, 18, 6]);
    }

    #[test]
    fn sphere_homology_matches_cubical_chains() {
        let f = Fp::two();
        let (b, _) = boundary(3);
        let t = triangulate(&b, 3).unwrap().set;
        assert_eq!(t.homology(f), vec![1, 0, 1]);
        assert_eq!(normalized_chains(&b, f).homology_in(0, 2), vec![1, 0, 1]);
    }

    #[test]
    fn maps_triangulate() {
        let (b, inc) = boundary(2);
        let ts = triangulate(&b, 3).unwrap();
        let td = triangulate(&representable(2), 3).unwrap();
        let m = triangulate_map(&inc, &ts, &td);
        m.validate(&ts.set, &td.set).unwrap();
    }
}
