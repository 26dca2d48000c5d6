use super::nerve::chain_face;
use super::{nerve, nerve_map, CatDiagram, FiniteCategory};
use crate::cset::{triangulate, triangulate_map, CubicalMap, CubicalSet};
use crate::error::{Error, Result};
use crate::sset::{Indexed, SDeg, SimplexSource, SimplicialMap, SimplicialSet};

/// A diagram `J -> sSet` of truncated simplicial sets.
#[derive(Debug, Clone)]
pub struct SSetDiagram {
    pub shape: FiniteCategory,
    pub values: Vec<SimplicialSet>,
    pub maps: Vec<SimplicialMap>,
}

impl SSetDiagram {
    pub fn validate(&self) -> Result<()> {
        let j = &self.shape;
        if self.values.len() != j.num_objects() || self.maps.len() != j.num_morphisms() {
            return Err(Error::InvalidFunctor("diagram tables do not match the shape".into()));
        }
        for f in 0..j.num_morphisms() {
            self.maps[f].validate(&self.values[j.src(f)], &self.values[j.dst(f)])?;
        }
        Ok(())
    }
}

/// A diagram `J -> cSet`.
#[derive(Debug, Clone)]
pub struct CSetDiagram {
    pub shape: FiniteCategory,
    pub values: Vec<CubicalSet>,
    pub maps: Vec<CubicalMap>,
}

impl CSetDiagram {
    pub fn validate(&self) -> Result<()> {
        let j = &self.shape;
        if self.values.len() != j.num_objects() || self.maps.len() != j.num_morphisms() {
            return Err(Error::InvalidFunctor("diagram tables do not match the shape".into()));
        }
        for f in 0..j.num_morphisms() {
            let m = &self.maps[f];
            if *m.src() != self.values[j.src(f)] || *m.dst() != self.values[j.dst(f)] {
                return Err(Error::InvalidFunctor(format!("map {f} has the wrong ends")));
            }
            m.validate()?;
        }
        Ok(())
    }
}

/// A simplex of the diagonal: a chain `a_0 -> ... -> a_n` of `J`,
/// identities allowed, and an `n`-simplex of `F(a_0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HocolimKey {
    pub start: usize,
    pub mors: Vec<usize>,
    pub x: SDeg,
}

struct Diagonal<'a>(&'a SSetDiagram);

impl Diagonal<'_> {
    /// Collapse the positions where both the chain and the simplex are
    /// degenerate.
    fn normalize(&self, start: usize, mors: Vec<usize>, x: SDeg) -> (Vec<usize>, HocolimKey) {
        let j = &self.0.shape;
        let n = mors.len();
        let mut eta = vec![0];
        let mut kept = Vec::with_capacity(n);
        let mut xeta = vec![x.eta[0]];
        for p in 0..n {
            let common = j.is_identity(mors[p]) && x.eta[p] == x.eta[p + 1];
            if common {
                eta.push(*eta.last().expect("nonempty"));
            } else {
                eta.push(eta.last().expect("nonempty") + 1);
                kept.push(mors[p]);
                xeta.push(x.eta[p + 1]);
            }
        }
        (
            eta,
            HocolimKey {
                start,
                mors: kept,
                x: SDeg {
                    eta: xeta,
                    dim: x.dim,
                    idx: x.idx,
                },
            },
        )
    }
}

impl SimplexSource for Diagonal<'_> {
    type Key = HocolimKey;

    fn nondegenerate(&self, n: usize) -> Vec<HocolimKey> {
        let j = &self.0.shape;
        let mut chains: Vec<(usize, Vec<usize>)> = (0..j.num_objects()).map(|a| (a, Vec::new())).collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for (s, m) in &chains {
                let b = m.last().map_or(*s, |&f| j.dst(f));
                for &g in j.outs(b) {
                    let mut m2 = m.clone();
                    m2.push(g);
                    next.push((*s, m2));
                }
            }
            chains = next;
        }
        let mut out = Vec::new();
        for (s, m) in chains {
            for x in self.0.values[s].elements(n) {
                let degenerate = (0..n).any(|p| j.is_identity(m[p]) && x.eta[p] == x.eta[p + 1]);
                if !degenerate {
                    out.push(HocolimKey {
                        start: s,
                        mors: m.clone(),
                        x,
                    });
                }
            }
        }
        out
    }

    fn face(&self, key: &HocolimKey, _n: usize, i: usize) -> (Vec<usize>, HocolimKey) {
        let d = self.0;
        let (start, mors) = chain_face(&d.shape, key.start, &key.mors, i);
        let base = &d.values[key.start];
        let x = if i == 0 {
            let f = key.mors[0];
            d.maps[f].apply(&d.values[d.shape.dst(f)], &base.face_of(&key.x, 0))
        } else {
            base.face_of(&key.x, i)
        };
        self.normalize(start, mors, x)
    }
}

/// The diagonal of `(p, q) ↦ ⊔_{a_0 -> ... -> a_p} F(a_0)_q`, truncated at
/// `cap`. Values must be truncated at `cap` or above.
pub fn hocolim_sset(d: &SSetDiagram, cap: usize) -> Result<Indexed<HocolimKey>> {
    if let Some(v) = d.values.iter().find(|v| v.cap() < cap) {
        return Err(Error::CapExceeded {
            cap: v.cap(),
            requested: cap,
        });
    }
    SimplicialSet::build(&Diagonal(d), cap)
}

/// `hocolim (L_Δ ∘ F)`.
pub fn hocolim_cset(d: &CSetDiagram, cap: usize) -> Result<Indexed<HocolimKey>> {
    let tri = d
        .values
        .iter()
        .map(|v| triangulate(v, cap))
        .collect::<Result<Vec<_>>>()?;
    let j = &d.shape;
    let maps = (0..j.num_morphisms())
        .map(|f| triangulate_map(&d.maps[f], &tri[j.src(f)], &tri[j.dst(f)]))
        .collect();
    let sd = SSetDiagram {
        shape: j.clone(),
        values: tri.into_iter().map(|t| t.set).collect(),
        maps,
    };
    hocolim_sset(&sd, cap)
}

/// `x ↦ N(F(x))` for a diagram of categories.
pub fn nerve_diagram(d: &CatDiagram, cap: usize) -> Result<SSetDiagram> {
    let j = &d.shape;
    let ns = d.values.iter().map(|c| nerve(c, cap)).collect::<Result<Vec<_>>>()?;
    let maps = (0..j.num_morphisms())
        .map(|f| nerve_map(&d.maps[f], &d.values[j.dst(f)], &ns[j.src(f)], &ns[j.dst(f)]))
        .collect::<Result<Vec<_>>>()?;
    Ok(SSetDiagram {
        shape: j.clone(),
        values: ns.into_iter().map(|n| n.set).collect(),
        maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{grothendieck, grothendieck_t, nerve, CatDiagram, Functor};
    use crate::cset::{boundary, representable};
    use crate::field::Fp;
    use crate::sset::StandardSimplex;

    fn nerve_diagram(d: &CatDiagram, cap: usize) -> SSetDiagram {
        super::nerve_diagram(d, cap).unwrap()
    }

    #[test]
    fn point_shape_gives_value() {
        let d = CatDiagram::constant(FiniteCategory::terminal(), FiniteCategory::cyclic_group(2));
        let sd = nerve_diagram(&d, 4);
        let h = hocolim_sset(&sd, 4).unwrap().set.homology(Fp::two());
        assert_eq!(h, sd.values[0].homology(Fp::two()));
    }

    #[test]
    fn constant_point_gives_nerve() {
        let pt = SimplicialSet::build(&StandardSimplex(0), 4).unwrap().set;
        for j in [FiniteCategory::span(), FiniteCategory::cyclic_group(2), FiniteCategory::ordinal(2)] {
            let n = j.num_morphisms();
            let idmap = SimplicialMap {
                images: (0..=4).map(|k| if k == 0 { vec![SDeg::nondegenerate(0, 0)] } else { Vec::new() }).collect(),
            };
            let sd = SSetDiagram {
                shape: j.clone(),
                values: vec![pt.clone(); j.num_objects()],
                maps: vec![idmap; n],
            };
            sd.validate().unwrap();
            let h = hocolim_sset(&sd, 4).unwrap().set.homology(Fp::two());
            assert_eq!(h, nerve(&j, 4).unwrap().set.homology(Fp::two()));
        }
    }

    #[test]
    fn thomason_on_a_span_of_circles() {
        // a span of categories whose nerves are spheres and points
        let z2 = FiniteCategory::cyclic_group(2);
        let t = FiniteCategory::terminal();
        let j = FiniteCategory::span();
        let to_t = Functor {
            obj: vec![0],
            mor: vec![0, 0],
        };
        let maps = j
            .morphisms()
            .iter()
            .enumerate()
            .map(|(f, m)| {
                if j.is_identity(f) {
                    if m.src == 1 {
                        Functor::identity(&z2)
                    } else {
                        Functor::identity(&t)
                    }
                } else {
                    to_t.clone()
                }
            })
            .collect();
        let d = CatDiagram::new(j, vec![t.clone(), z2, t], maps).unwrap();
        let sd = nerve_diagram(&d, 4);
        let h = hocolim_sset(&sd, 4).unwrap().set.homology(Fp::two());
        let g = grothendieck(&d).category;
        let hg = nerve(&g, 4).unwrap().set.homology(Fp::two());
        assert_eq!(h, hg);
        let ht = nerve(&grothendieck_t(&d).category, 4).unwrap().set.homology(Fp::two());
        assert_eq!(hg, ht);
        // suspension of RP^∞
        assert_eq!(h, vec![1, 0, 1, 1]);
    }

    #[test]
    fn cubical_pushout_of_points() {
        let j = FiniteCategory::span();
        let pt = representable(0);
        let maps = (0..j.num_morphisms()).map(|_| CubicalMap::identity(&pt)).collect();
        let d = CSetDiagram {
            shape: j,
            values: vec![pt.clone(); 3],
            maps,
        };
        d.validate().unwrap();
        let h = hocolim_cset(&d, 3).unwrap().set.homology(Fp::two());
        assert_eq!(h, vec![1, 0, 0]);
    }

    #[test]
    fn cubical_single_value() {
        let d = CSetDiagram {
            shape: FiniteCategory::terminal(),
            values: vec![boundary(2).0],
            maps: vec![CubicalMap::identity(&boundary(2).0)],
        };
        let h = hocolim_cset(&d, 3).unwrap().set.homology(Fp::two());
        assert_eq!(h, vec![1, 1, 0]);
        let d = CSetDiagram {
            shape: FiniteCategory::terminal(),
            values: vec![representable(1)],
            maps: vec![CubicalMap::identity(&representable(1))],
        };
        assert_eq!(hocolim_cset(&d, 3).unwrap().set.homology(Fp::two()), vec![1, 0, 0]);
    }
}
