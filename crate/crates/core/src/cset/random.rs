use std::collections::BTreeSet;

use rand::Rng;

use super::{boundary, day_tensor, representable, CubicalSet};

/// A random finite cubical set with at most `max_cells` nondegenerate cells
/// and dimension at most 3: a random subcomplex of a cube or of a product,
/// optionally with a random subcomplex collapsed to a point (which produces
/// degenerate faces) and a random second component.
pub fn random_cubical_set<R: Rng>(rng: &mut R, max_cells: usize) -> CubicalSet {
    loop {
        let x = one(rng);
        if !x.is_empty() && x.len() <= max_cells {
            return x;
        }
    }
}

fn ambient<R: Rng>(rng: &mut R) -> CubicalSet {
    match rng.gen_range(0..4) {
        0 => representable(rng.gen_range(1..=3)),
        1 => boundary(rng.gen_range(2..=3)).0,
        2 => day_tensor(&boundary(2).0, &representable(1)),
        _ => day_tensor(&representable(1), &boundary(1).0),
    }
}

fn random_subcomplex<R: Rng>(rng: &mut R, x: &CubicalSet) -> BTreeSet<usize> {
    let seeds: Vec<usize> = (0..x.len()).filter(|_| rng.gen_bool(0.35)).collect();
    x.closure(seeds)
}

fn one<R: Rng>(rng: &mut R) -> CubicalSet {
    let amb = ambient(rng);
    let keep = random_subcomplex(rng, &amb);
    if keep.is_empty() {
        return CubicalSet::empty();
    }
    let (mut x, _) = amb.subcomplex(&keep).expect("closure is a subcomplex");
    if rng.gen_bool(0.5) {
        let a = random_subcomplex(rng, &x);
        x = x.collapse(&a).expect("closure is a subcomplex");
    }
    if rng.gen_bool(0.3) {
        let amb2 = representable(rng.gen_range(0..=2));
        let keep2 = random_subcomplex(rng, &amb2);
        if !keep2.is_empty() {
            let (y, _) = amb2.subcomplex(&keep2).expect("closure is a subcomplex");
            x = x.coproduct(&y);
        }
    }
    x
}
