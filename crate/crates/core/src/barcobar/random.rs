use rand::Rng;

use super::DGAlgebra;
use crate::field::Fp;

/// A small augmented dg algebra: a tensor product of one or two truncated
/// polynomial algebras, sometimes with the acyclic pair `dy = x` attached.
pub fn random_algebra<R: Rng + ?Sized>(rng: &mut R, f: Fp) -> DGAlgebra {
    let factor = |rng: &mut R| {
        let degree = rng.gen_range(0..=2);
        let k = rng.gen_range(2..=3);
        DGAlgebra::truncated_polynomial(f, degree, k).expect("valid parameters")
    };
    let mut a = factor(rng);
    if rng.gen_bool(0.4) {
        a = a.tensor(&factor(rng)).expect("tensor of algebras");
    } else if rng.gen_bool(0.5) {
        a = a.tensor(&DGAlgebra::small_dga(f)).expect("tensor of algebras");
    }
    a
}
