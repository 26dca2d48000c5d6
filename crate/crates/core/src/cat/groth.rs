use std::collections::HashMap;

use super::{CatDiagram, FiniteCategory, Functor, Morphism};
use crate::cset::{CubicalMap, CubicalSet, DegCell};
use crate::cube::{enumerate_hom, CubeMor};

/// An object `(x, y)` of a Grothendieck construction, `y` an object of `F(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrothObject {
    pub x: usize,
    pub y: usize,
}

/// A Grothendieck construction with its canonical projection.
#[derive(Debug, Clone)]
pub struct Grothendieck {
    pub category: FiniteCategory,
    pub projection: Functor,
    pub objects: Vec<GrothObject>,
}

/// `∫_J F`: morphisms `(x, y) -> (x', y')` are pairs `(f, g)` with
/// `f : x -> x'` and `g : F(f)(y) -> y'`.
pub fn grothendieck(d: &CatDiagram) -> Grothendieck {
    let j = &d.shape;
    let mut objects = Vec::new();
    let mut obj_index = HashMap::new();
    for x in 0..j.num_objects() {
        for y in 0..d.values[x].num_objects() {
            obj_index.insert(GrothObject { x, y }, objects.len());
            objects.push(GrothObject { x, y });
        }
    }
    let mut mors = Vec::new();
    let mut pairs = Vec::new();
    let mut mor_index = HashMap::new();
    for (o, &GrothObject { x, y }) in objects.iter().enumerate() {
        for &f in j.outs(x) {
            let x2 = j.dst(f);
            let fx = &d.values[x2];
            let y0 = d.maps[f].obj[y];
            for &g in fx.outs(y0) {
                let t = obj_index[&GrothObject { x: x2, y: fx.dst(g) }];
                mor_index.insert((o, f, g), mors.len());
                pairs.push((o, f, g));
                mors.push(Morphism {
                    name: format!("({},{})", j.morphisms()[f].name, fx.morphisms()[g].name),
                    src: o,
                    dst: t,
                });
            }
        }
    }
    let names = objects
        .iter()
        .map(|o| format!("({},{})", j.objects()[o.x], d.values[o.x].objects()[o.y]))
        .collect();
    let ids = objects
        .iter()
        .enumerate()
        .map(|(i, o)| mor_index[&(i, j.id(o.x), d.values[o.x].id(o.y))])
        .collect();
    let category = FiniteCategory::new_unchecked(names, mors, ids, |b, a| {
        let ((o, f, g), (_, f2, g2)) = (pairs[a], pairs[b]);
        let c = &d.values[j.dst(f2)];
        let moved = d.maps[f2].mor[g];
        mor_index[&(o, j.compose(f2, f), c.compose(g2, moved))]
    })
    .expect("Grothendieck construction tables");
    let projection = Functor {
        obj: objects.iter().map(|o| o.x).collect(),
        mor: pairs.iter().map(|p| p.1).collect(),
    };
    Grothendieck {
        category,
        projection,
        objects,
    }
}

/// `∫ᵗ_J F = (∫_J F^op)^op`, projecting to `J^op`.
pub fn grothendieck_t(d: &CatDiagram) -> Grothendieck {
    let g = grothendieck(&d.opposite_values());
    Grothendieck {
        category: g.category.opposite(),
        projection: g.projection.opposite(),
        objects: g.objects,
    }
}

/// `Tw(C)` with its projections to `C^op` and `C`. Objects are the
/// morphisms of `C`; a morphism `f -> f'` is a pair `(u, v)` with
/// `f' = v ∘ f ∘ u`.
pub fn twisted_arrows(c: &FiniteCategory) -> (FiniteCategory, Functor, Functor) {
    let mut mors = Vec::new();
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for f in 0..c.num_morphisms() {
        let (a, b) = (c.src(f), c.dst(f));
        for &u in c.ins(a) {
            for &v in c.outs(b) {
                let t = c.compose(v, c.compose(f, u));
                index.insert((f, u, v), mors.len());
                pairs.push((f, u, v));
                mors.push(Morphism {
                    name: format!("({},{})", c.morphisms()[u].name, c.morphisms()[v].name),
                    src: f,
                    dst: t,
                });
            }
        }
    }
    let names = c.morphisms().iter().map(|m| m.name.clone()).collect();
    let ids = (0..c.num_morphisms())
        .map(|f| index[&(f, c.id(c.src(f)), c.id(c.dst(f)))])
        .collect();
    let tw = FiniteCategory::new_unchecked(names, mors, ids, |q, p| {
        let ((f, u, v), (_, u2, v2)) = (pairs[p], pairs[q]);
        index[&(f, c.compose(u, u2), c.compose(v2, v))]
    })
    .expect("twisted arrow tables");
    let to_op = Functor {
        obj: (0..c.num_morphisms()).map(|f| c.src(f)).collect(),
        mor: pairs.iter().map(|p| p.1).collect(),
    };
    let to_c = Functor {
        obj: (0..c.num_morphisms()).map(|f| c.dst(f)).collect(),
        mor: pairs.iter().map(|p| p.2).collect(),
    };
    (tw, to_op, to_c)
}

/// The full subcategory of `□` on `[0], ..., [cap]`, with its morphisms.
pub fn box_category(cap: usize) -> (FiniteCategory, Vec<CubeMor>) {
    let mut cubes = Vec::new();
    let mut index = HashMap::new();
    for m in 0..=cap {
        for n in 0..=cap {
            for phi in enumerate_hom(m, n) {
                index.insert(phi.clone(), cubes.len());
                cubes.push(phi);
            }
        }
    }
    let mors = cubes
        .iter()
        .map(|phi| Morphism {
            name: format!("{phi:?}"),
            src: phi.src(),
            dst: phi.dst(),
        })
        .collect();
    let names = (0..=cap).map(|n| format!("[{n}]")).collect();
    let ids = (0..=cap).map(|n| index[&CubeMor::identity(n)]).collect();
    let c = FiniteCategory::new_unchecked(names, mors, ids, |g, f| index[&cubes[g].after(&cubes[f])])
        .expect("box category tables");
    (c, cubes)
}

/// An object `(□[n], x)` of `□ ↓ X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementObject {
    pub dim: usize,
    pub elem: DegCell,
}

/// `□ ↓ X` restricted to elements of dimension at most `cap`.
#[derive(Debug, Clone)]
pub struct Elements {
    pub category: FiniteCategory,
    pub objects: Vec<ElementObject>,
    pub object_index: HashMap<DegCell, usize>,
    /// The morphism `φ : (□[m], φ^* x) -> (□[n], x)`, keyed by `(φ, x)`.
    pub morphism_index: HashMap<(CubeMor, usize), usize>,
    pub cubes: Vec<CubeMor>,
}

pub fn category_of_elements(x: &CubicalSet, cap: usize) -> Elements {
    let mut objects = Vec::new();
    let mut object_index = HashMap::new();
    for n in 0..=cap {
        for e in x.elements(n) {
            object_index.insert(e.clone(), objects.len());
            objects.push(ElementObject { dim: n, elem: e });
        }
    }
    let homs: Vec<Vec<Vec<CubeMor>>> = (0..=cap)
        .map(|m| (0..=cap).map(|n| enumerate_hom(m, n)).collect())
        .collect();
    let mut mors = Vec::new();
    let mut cubes = Vec::new();
    let mut morphism_index = HashMap::new();
    for (t, o) in objects.iter().enumerate() {
        for hs in homs.iter().take(cap + 1) {
            for phi in &hs[o.dim] {
                let y = x.act(phi, &o.elem);
                let s = object_index[&y];
                morphism_index.insert((phi.clone(), t), mors.len());
                mors.push(Morphism {
                    name: format!("{phi:?}@{t}"),
                    src: s,
                    dst: t,
                });
                cubes.push(phi.clone());
            }
        }
    }
    let names = objects
        .iter()
        .map(|o| format!("({},{:?},{})", o.dim, o.elem.eta, o.elem.cell))
        .collect();
    let ids = (0..objects.len())
        .map(|t| morphism_index[&(CubeMor::identity(objects[t].dim), t)])
        .collect();
    let category = FiniteCategory::new_unchecked(names, mors.clone(), ids, |g, f| {
        morphism_index[&(cubes[g].after(&cubes[f]), mors[g].dst)]
    })
    .expect("category of elements tables");
    Elements {
        category,
        objects,
        object_index,
        morphism_index,
        cubes,
    }
}

/// `□ ↓ f : □ ↓ X -> □ ↓ Y`.
pub fn elements_functor(f: &CubicalMap, src: &Elements, dst: &Elements) -> Functor {
    let obj: Vec<usize> = src
        .objects
        .iter()
        .map(|o| dst.object_index[&f.apply(&o.elem)])
        .collect();
    let mor = src
        .category
        .morphisms()
        .iter()
        .enumerate()
        .map(|(i, m)| dst.morphism_index[&(src.cubes[i].clone(), obj[m.dst])])
        .collect();
    Functor { obj, mor }
}

/// `n ↦ X_n` as a diagram of discrete categories over `(□_{≤cap})^op`.
pub fn elements_diagram(x: &CubicalSet, cap: usize) -> CatDiagram {
    let (bx, cubes) = box_category(cap);
    let shape = bx.opposite();
    let levels: Vec<Vec<DegCell>> = (0..=cap).map(|n| x.elements(n)).collect();
    let index: Vec<HashMap<DegCell, usize>> = levels
        .iter()
        .map(|l| l.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();
    let values = levels
        .iter()
        .map(|l| {
            let names: Vec<String> = l.iter().map(|e| format!("{:?}:{}", e.eta, e.cell)).collect();
            FiniteCategory::discrete(&names)
        })
        .collect::<Vec<_>>();
    // the morphism φ : [m] -> [n] of □ is a map [n] -> [m] of the shape
    let maps = cubes
        .iter()
        .map(|phi| {
            let obj: Vec<usize> = levels[phi.dst()]
                .iter()
                .map(|e| index[phi.src()][&x.act(phi, e)])
                .collect();
            let mor = obj.iter().map(|&o| values[phi.src()].id(o)).collect();
            Functor { obj, mor }
        })
        .collect();
    CatDiagram { shape, values, maps }
}

/// `x ↦ □ ↓ F(x)` for a diagram of cubical sets.
pub fn elements_of_diagram(
    shape: &FiniteCategory,
    values: &[CubicalSet],
    maps: &[CubicalMap],
    cap: usize,
) -> CatDiagram {
    let els: Vec<Elements> = values.iter().map(|v| category_of_elements(v, cap)).collect();
    let fs = (0..shape.num_morphisms())
        .map(|f| elements_functor(&maps[f], &els[shape.src(f)], &els[shape.dst(f)]))
        .collect();
    CatDiagram {
        shape: shape.clone(),
        values: els.into_iter().map(|e| e.category).collect(),
        maps: fs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{find_category_iso, nerve, nerve_map};
    use crate::cset::{boundary, representable};
    use crate::field::Fp;

    #[test]
    fn grothendieck_examples() {
        let j = FiniteCategory::span();
        let g = grothendieck(&CatDiagram::constant(j.clone(), FiniteCategory::terminal()));
        g.category.validate().unwrap();
        assert!(find_category_iso(&g.category, &j, 100_000).unwrap().is_some());
        g.projection.validate(&g.category, &j).unwrap();

        let one = FiniteCategory::ordinal(1);
        let g = grothendieck(&CatDiagram::constant(one.clone(), one.clone()));
        assert_eq!(g.category.num_objects(), 4);
        let sq = one.product(&one);
        assert!(find_category_iso(&g.category, &sq, 100_000).unwrap().is_some());

        let t = grothendieck_t(&CatDiagram::constant(j.clone(), FiniteCategory::terminal()));
        t.category.validate().unwrap();
        t.projection.validate(&t.category, &j.opposite()).unwrap();
        assert!(find_category_iso(&t.category, &j.opposite(), 100_000).unwrap().is_some());
    }

    #[test]
    fn twisted_arrow_examples() {
        let (tw, _, _) = twisted_arrows(&FiniteCategory::ordinal(1));
        assert_eq!(tw.num_objects(), 3);
        let (tw, _, _) = twisted_arrows(&FiniteCategory::terminal());
        assert!(find_category_iso(&tw, &FiniteCategory::terminal(), 100).unwrap().is_some());
        let f2 = Fp::two();
        for c in [FiniteCategory::ordinal(1), FiniteCategory::ordinal(2), FiniteCategory::walking_iso()] {
            let (tw, p, q) = twisted_arrows(&c);
            tw.validate().unwrap();
            let cop = c.opposite();
            p.validate(&tw, &cop).unwrap();
            q.validate(&tw, &c).unwrap();
            let nt = nerve(&tw, 4).unwrap();
            for (f, target) in [(&p, &cop), (&q, &c)] {
                let nc = nerve(target, 4).unwrap();
                let m = nerve_map(f, target, &nt, &nc).unwrap();
                assert!(m.is_homology_iso(&nt.set, &nc.set, f2, 2).unwrap());
            }
        }
    }

    #[test]
    fn box_category_validates() {
        let (c, cubes) = box_category(2);
        c.validate().unwrap();
        assert_eq!(cubes.len(), (0..=2).flat_map(|m| (0..=2).map(move |n| (m, n))).map(|(m, n)| enumerate_hom(m, n).len()).sum::<usize>());
    }

    #[test]
    fn elements_examples() {
        let e = category_of_elements(&representable(0), 0);
        assert_eq!((e.category.num_objects(), e.category.num_morphisms()), (1, 1));
        let e = category_of_elements(&representable(1), 1);
        assert_eq!(e.category.num_objects(), 5);
        e.category.validate().unwrap();
    }

    #[test]
    fn elements_is_transposed_grothendieck() {
        let x = representable(1);
        let t = grothendieck_t(&elements_diagram(&x, 1));
        t.category.validate().unwrap();
        let e = category_of_elements(&x, 1);
        assert!(find_category_iso(&t.category, &e.category, 1_000_000).unwrap().is_some());
    }

    #[test]
    fn elements_nerve_matches_cubical_homology() {
        for x in [representable(2), boundary(2).0] {
            let e = category_of_elements(&x, 2);
            let h = nerve(&e.category, 3).unwrap().set.homology(Fp::two());
            let expect = crate::cset::normalized_chains(&x, Fp::two()).homology_in(0, 2);
            assert_eq!(h, expect);
        }
    }
}
