use super::CubicalSet;
use crate::chain::ChainComplex;
use crate::field::Fp;
use crate::linalg::Matrix;

/// Normalized cubical chains: nondegenerate cells, with
/// `∂x = Σ_k (-1)^k (d_k^1 x - d_k^0 x)` and degenerate faces sent to zero.
pub fn normalized_chains(x: &CubicalSet, field: Fp) -> ChainComplex {
    if x.is_empty() {
        return ChainComplex::zero(field);
    }
    let top = x.max_dim();
    let by_dim: Vec<Vec<usize>> = (0..=top).map(|d| x.cells_of_dim(d)).collect();
    let mut pos = vec![0usize; x.len()];
    for cells in &by_dim {
        for (i, &c) in cells.iter().enumerate() {
            pos[c] = i;
        }
    }
    let dims: Vec<usize> = by_dim.iter().map(Vec::len).collect();
    let diffs = (1..=top)
        .map(|n| {
            let mut m = Matrix::zeros(field, dims[n - 1], dims[n]);
            for (col, &c) in by_dim[n].iter().enumerate() {
                for k in 0..n {
                    let s = field.sign(k);
                    let hi = x.face(c, k, 1);
                    if hi.is_nondegenerate() {
                        m.add_at(pos[hi.cell], col, s);
                    }
                    let lo = x.face(c, k, 0);
                    if lo.is_nondegenerate() {
                        m.add_at(pos[lo.cell], col, field.neg(s));
                    }
                }
            }
            m
        })
        .collect();
    ChainComplex::new(field, 0, dims, diffs).expect("face table satisfies the cubical identities")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cset::{boundary, day_tensor, open_box, representable};

    #[test]
    fn cubes_are_contractible() {
        for p in [2, 3] {
            let f = Fp::new(p).unwrap();
            for n in 0..=4 {
                let h = normalized_chains(&representable(n), f).homology_in(0, n as i64);
                assert_eq!(h[0], 1);
                assert!(h[1..].iter().all(|&v| v == 0));
            }
        }
    }

    #[test]
    fn boundaries_are_spheres() {
        let f = Fp::new(3).unwrap();
        assert_eq!(normalized_chains(&boundary(2).0, f).homology_in(0, 1), vec![1, 1]);
        for n in 1..=4usize {
            let h = normalized_chains(&boundary(n).0, f).homology_in(0, n as i64 - 1);
            let mut want = vec![0; n];
            want[0] += 1;
            want[n - 1] += 1;
            assert_eq!(h, want, "n={n}");
        }
    }

    #[test]
    fn open_boxes_are_contractible() {
        let f = Fp::two();
        for n in 1..=4 {
            for k in 0..n {
                for e in 0..2 {
                    let h = normalized_chains(&open_box(n, k, e).unwrap().0, f).homology_in(0, n as i64);
                    assert_eq!(h[0], 1);
                    assert!(h[1..].iter().all(|&v| v == 0));
                }
            }
        }
    }

    #[test]
    fn cylinder_on_circle() {
        let x = day_tensor(&boundary(2).0, &representable(1));
        let h = normalized_chains(&x, Fp::new(5).unwrap()).homology_in(0, 2);
        assert_eq!(h, vec![1, 1, 0]);
    }
}
