use std::collections::BTreeMap;

use rand::Rng;

use super::ChainComplex;
use crate::field::Fp;
use crate::linalg::Matrix;

fn random_invertible<R: Rng + ?Sized>(rng: &mut R, f: Fp, n: usize) -> Matrix {
    loop {
        let mut m = Matrix::zeros(f, n, n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, rng.gen_range(0..f.p()));
            }
        }
        if m.rank() == n {
            return m;
        }
    }
}

/// A random complex supported in `[lo, hi]` with every `dim ≤ max_dim`:
/// random ranks for the differentials in normal form, then a random change
/// of basis in every degree.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, f: Fp, lo: i64, hi: i64, max_dim: usize) -> ChainComplex {
    let dims: Vec<usize> = (lo..=hi).map(|_| rng.gen_range(1..=max_dim)).collect();
    // ranks[i] = rank of d_{lo+i}, with ranks[i] + ranks[i+1] <= dims[i]
    let mut ranks = vec![0; dims.len()];
    for i in 1..dims.len() {
        let room = (dims[i - 1] - ranks[i - 1]).min(dims[i]);
        ranks[i] = rng.gen_range(0..=room);
    }
    let diffs = (1..dims.len())
        .map(|i| {
            // images avoid the vectors that d_{i-1} moves
            let mut m = Matrix::zeros(f, dims[i - 1], dims[i]);
            for j in 0..ranks[i] {
                m.set(ranks[i - 1] + j, j, 1);
            }
            m
        })
        .collect();
    let base = ChainComplex::new(f, lo, dims.clone(), diffs).expect("normal form squares to zero");
    let p: BTreeMap<i64, Matrix> = (lo..=hi)
        .zip(&dims)
        .map(|(n, &d)| (n, random_invertible(rng, f, d)))
        .collect();
    base.rebased(&p).expect("invertible change of basis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2, 3, 5] {
            let f = Fp::new(p).unwrap();
            for _ in 0..20 {
                let c = random_complex(&mut rng, f, -1, 2, 4);
                c.validate().unwrap();
                assert!((-1..=2).all(|n| (1..=4).contains(&c.dim(n))));
            }
        }
    }
}
