use rand::seq::SliceRandom;
use rand::Rng;

use super::{enumerate_functors, CatDiagram, FiniteCategory, Functor};

/// A small category: a random preorder on up to three objects, or one of a
/// few fixed shapes with nontrivial nerves.
pub fn random_category<R: Rng + ?Sized>(rng: &mut R) -> FiniteCategory {
    match rng.gen_range(0..6) {
        0 => FiniteCategory::terminal(),
        1 => FiniteCategory::ordinal(rng.gen_range(1..3)),
        2 => FiniteCategory::cyclic_group(2),
        3 => FiniteCategory::span(),
        4 => FiniteCategory::walking_iso(),
        _ => {
            let n = rng.gen_range(2..4);
            // random relation on a random order of the objects, then closure
            let mut le = vec![vec![false; n]; n];
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            for a in 0..n {
                le[a][a] = true;
                for b in a + 1..n {
                    if rng.gen_bool(0.5) {
                        le[perm[a]][perm[b]] = true;
                    }
                }
            }
            for k in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        if le[a][k] && le[k][b] {
                            le[a][b] = true;
                        }
                    }
                }
            }
            let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            FiniteCategory::poset(&names, |a, b| le[a][b])
        }
    }
}

/// A diagram over `[1]`, `[2]`, a span or a cospan with random small values
/// and random functors on the indecomposable arrows.
pub fn random_cat_diagram<R: Rng + ?Sized>(rng: &mut R) -> CatDiagram {
    let shape = match rng.gen_range(0..4) {
        0 => FiniteCategory::ordinal(1),
        1 => FiniteCategory::ordinal(2),
        2 => FiniteCategory::span(),
        _ => FiniteCategory::cospan(),
    };
    let values: Vec<FiniteCategory> = (0..shape.num_objects()).map(|_| random_category(rng)).collect();
    let mut maps: Vec<Option<Functor>> = vec![None; shape.num_morphisms()];
    for a in 0..shape.num_objects() {
        maps[shape.id(a)] = Some(Functor::identity(&values[a]));
    }
    let decomposable = |f: usize| {
        (0..shape.num_morphisms()).any(|h| {
            !shape.is_identity(h)
                && shape.dst(h) == shape.dst(f)
                && shape
                    .ins(shape.src(h))
                    .iter()
                    .any(|&g| !shape.is_identity(g) && shape.compose(h, g) == f)
        })
    };
    for f in 0..shape.num_morphisms() {
        if maps[f].is_none() && !decomposable(f) {
            let fs = enumerate_functors(&values[shape.src(f)], &values[shape.dst(f)], false, 1_000_000)
                .expect("small search");
            maps[f] = Some(fs.choose(rng).expect("constant functors exist").clone());
        }
    }
    while maps.iter().any(Option::is_none) {
        for f in 0..shape.num_morphisms() {
            if maps[f].is_some() {
                continue;
            }
            'found: for h in 0..shape.num_morphisms() {
                for &g in shape.ins(shape.src(h)) {
                    if shape.compose(h, g) == f && !shape.is_identity(h) && !shape.is_identity(g) {
                        if let (Some(mh), Some(mg)) = (&maps[h], &maps[g]) {
                            maps[f] = Some(mh.after(mg));
                            break 'found;
                        }
                    }
                }
            }
        }
    }
    CatDiagram {
        shape,
        values,
        maps: maps.into_iter().map(|m| m.expect("assigned")).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_diagrams_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            random_category(&mut rng).validate().unwrap();
            random_cat_diagram(&mut rng).validate().unwrap();
        }
    }
}
