use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::interval::interval_complex;
use super::json::{algebra_from_json, algebra_to_json, coalgebra_from_json, coalgebra_to_json};
use super::*;
use crate::chain::ChainMap;
use crate::cube::{CubeMor, Entry};
use crate::linalg::Matrix;
use crate::square::chain_square;

fn fields() -> Vec<Fp> {
    vec![Fp::two(), Fp::new(3).unwrap(), Fp::new(5).unwrap()]
}

fn battery(f: Fp) -> Vec<(&'static str, DGAlgebra)> {
    vec![
        ("ground", DGAlgebra::ground(f)),
        ("dual numbers", DGAlgebra::truncated_polynomial(f, 0, 2).unwrap()),
        ("exterior", DGAlgebra::exterior(f, 1).unwrap()),
    ]
}

fn policy(cap: usize, lo: i64, hi: i64) -> TruncationPolicy {
    TruncationPolicy::new(cap, lo, hi)
}

#[test]
fn j_coalgebra_structure() {
    for f in fields() {
        let j = j_coalgebra(f);
        j.validate().unwrap();
        // letters: 0 = |0>, 1 = |1>, 2 = |01>
        assert_eq!(j.coproduct(2), &[(0, 2, 1), (2, 1, 1)]);
        assert_eq!(j.counit(), &[1, 1, 0]);
        // both iterated coproducts of |01>
        let mut left = BTreeSet::new();
        let mut right = BTreeSet::new();
        for &(a, b, _) in j.coproduct(2) {
            for &(a1, a2, _) in j.coproduct(a) {
                left.insert((a1, a2, b));
            }
            for &(b1, b2, _) in j.coproduct(b) {
                right.insert((a, b1, b2));
            }
        }
        let expected = BTreeSet::from([(0, 0, 2), (0, 2, 1), (2, 1, 1)]);
        assert_eq!(left, expected);
        assert_eq!(right, expected);
        // Δd|01> = |1>⊗|1> - |0>⊗|0>
        assert_eq!(j.d_basis(2), &vec![(0, f.neg(1)), (1, 1)]);
        for o in [Orientation::Standard, Orientation::Mirror] {
            for e in [JEnd::Zero, JEnd::One] {
                interval_coalgebra(f, 1, o, e).validate().unwrap();
            }
        }
    }
}

#[test]
fn interval_powers_match_the_square_structure() {
    for f in fields() {
        let q = chain_square(f);
        for n in 0..=3 {
            assert_eq!(interval_complex(f, n), q.interval_power(n));
            for o in [Orientation::Standard, Orientation::Mirror] {
                interval_coalgebra(f, n, o, JEnd::Zero).validate().unwrap();
            }
        }
    }
}

#[test]
fn cylinder_of_a_bar_construction() {
    let f = Fp::new(3).unwrap();
    let a = DGAlgebra::exterior(f, 1).unwrap();
    let c = bar(&a, &policy(3, -1, 7)).unwrap();
    for end in [JEnd::Zero, JEnd::One] {
        let cyl = cylinder_cog(&c, Orientation::Standard, end).unwrap();
        cyl.validate().unwrap();
        for n in -1..=8 {
            let expect = 2 * c.complex().dim(n) + c.complex().dim(n - 1);
            assert_eq!(cyl.complex().dim(n), expect, "degree {n}");
        }
    }
}

#[test]
fn bar_of_small_algebras() {
    for f in fields() {
        let p = policy(5, -1, 12);
        let b = bar(&DGAlgebra::ground(f), &p).unwrap();
        assert_eq!(b.len(), 1);
        let b = bar(&DGAlgebra::truncated_polynomial(f, 0, 2).unwrap(), &p).unwrap();
        b.validate().unwrap();
        for n in 0..=5 {
            assert_eq!(b.complex().dim(n), 1);
            assert!(b.complex().d(n).is_zero());
        }
        assert_eq!(b.complex().dim(6), 0);
        let b = bar(&DGAlgebra::exterior(f, 1).unwrap(), &p).unwrap();
        b.validate().unwrap();
        let h = b.complex().homology_in(0, 10);
        assert_eq!(h, vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
    }
}

/// `Tor^A(F, F)` by total degree, from a minimal free resolution of `F`
/// (only for `A` with zero differential).
fn tor_oracle(a: &DGAlgebra, max_total: i64) -> BTreeMap<i64, usize> {
    let f = a.field();
    let n = a.len();
    let u = a.adapted_unit().unwrap();
    let left_mul = |x: usize, v: &[u32]| {
        let mut out = vec![0; v.len()];
        for (k, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (i, b) = (k / n, k % n);
            for (t, e) in a.product(x, b) {
                out[i * n + t] = f.add(out[i * n + t], f.mul(c, e));
            }
        }
        out
    };
    let mut tor = BTreeMap::from([(0, 1)]);
    let mut gens = vec![0i64];
    let mut kernel: Vec<(i64, Vec<u32>)> = (0..n)
        .filter(|&g| g != u)
        .map(|g| {
            let mut v = vec![0; n];
            v[g] = 1;
            (a.degree(g), v)
        })
        .collect();
    for s in 1..=max_total {
        let dim = gens.len() * n;
        let mut chosen: Vec<(i64, Vec<u32>)> = Vec::new();
        let degrees: BTreeSet<i64> = kernel.iter().map(|(t, _)| *t).collect();
        for &t in &degrees {
            let mut span = Matrix::zeros(f, dim, 0);
            for (t2, k) in &kernel {
                for x in (0..n).filter(|&x| x != u) {
                    if t2 + a.degree(x) == t {
                        span = span.hstack(&Matrix::column(f, &left_mul(x, k)));
                    }
                }
            }
            for (t2, k) in &kernel {
                if *t2 != t {
                    continue;
                }
                let bigger = span.hstack(&Matrix::column(f, k));
                if bigger.rank() > span.rank() {
                    span = bigger;
                    chosen.push((t, k.clone()));
                }
            }
        }
        for (t, _) in &chosen {
            if s + t <= max_total {
                *tor.entry(s + t).or_default() += 1;
            }
        }
        if chosen.is_empty() {
            break;
        }
        // P_s = ⊕ A e_i -> P_{s-1}, e_i ↦ g_i
        let r = chosen.len();
        let col_deg = |k: usize| chosen[k / n].0 + a.degree(k % n);
        let mut d = Matrix::zeros(f, dim, r * n);
        for i in 0..r {
            for b in 0..n {
                let img = left_mul(b, &chosen[i].1);
                for (row, &c) in img.iter().enumerate() {
                    d.set(row, i * n + b, c);
                }
            }
        }
        let mut next = Vec::new();
        let col_degrees: BTreeSet<i64> = (0..r * n).map(col_deg).collect();
        for t in col_degrees {
            let cols: Vec<usize> = (0..r * n).filter(|&k| col_deg(k) == t).collect();
            let ker = d.select_cols(&cols).kernel();
            for j in 0..ker.cols() {
                let mut v = vec![0; r * n];
                for (i, &k) in cols.iter().enumerate() {
                    v[k] = ker.get(i, j);
                }
                next.push((t, v));
            }
        }
        gens = chosen.iter().map(|(t, _)| *t).collect();
        kernel = next;
    }
    tor
}

#[test]
fn bar_homology_matches_tor() {
    for f in fields() {
        let algebras = vec![
            DGAlgebra::truncated_polynomial(f, 0, 2).unwrap(),
            DGAlgebra::truncated_polynomial(f, 0, 3).unwrap(),
            DGAlgebra::truncated_polynomial(f, 2, 3).unwrap(),
            DGAlgebra::exterior(f, 1).unwrap(),
            DGAlgebra::exterior(f, 1).unwrap().tensor(&DGAlgebra::truncated_polynomial(f, 2, 2).unwrap()).unwrap(),
        ];
        for a in &algebras {
            let p = policy(5, -1, 9);
            let b = bar(a, &p).unwrap();
            let safe = bar_safe_degrees(a, &p);
            assert!(!safe.is_empty());
            let tor = tor_oracle(a, *safe.last().unwrap());
            for &n in &safe {
                assert_eq!(
                    b.complex().homology_dim(n),
                    tor.get(&n).copied().unwrap_or(0),
                    "degree {n} over F_{}",
                    f.p()
                );
            }
        }
    }
}

#[test]
fn cobar_of_small_coalgebras() {
    for f in fields() {
        let c = cobar(&DGCoalgebra::ground(f), &TruncationPolicy::default()).unwrap();
        assert_eq!(c.algebra.len(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let a = random_algebra(&mut rng, f);
            let p = policy(2, -3, 9);
            let coalg = bar(&a, &p).unwrap();
            coalg.validate().unwrap();
            // d² = 0 is checked while building
            let cb = cobar(&coalg, &p).unwrap();
            if cb.algebra.len() <= 60 {
                cb.algebra.validate().unwrap();
            }
        }
    }
}

#[test]
fn windows_and_caps_are_checked() {
    let f = Fp::two();
    let a = DGAlgebra::truncated_polynomial(f, 0, 2).unwrap();
    assert!(matches!(bar(&a, &policy(3, 0, 1)), Err(Error::WindowTooSmall { .. })));
    assert!(matches!(counit_check(&a, &policy(0, -1, 5)), Err(Error::EmptySafeWindow)));
    assert!(counit_check(&DGAlgebra::ground(f), &policy(0, -1, 5)).unwrap().pass());
}

#[test]
fn counit_is_a_quasi_iso_in_the_safe_window() {
    for f in [Fp::two(), Fp::new(3).unwrap()] {
        for (name, a) in battery(f) {
            let r = counit_check(&a, &TruncationPolicy::default()).unwrap();
            assert_eq!(r.safe, vec![0, 1, 2, 3, 4]);
            assert!(r.pass(), "{name} over F_{}: {:?}", f.p(), r.degrees);
            if name == "dual numbers" {
                assert_eq!(r.degrees[0].source, 2);
            }
        }
        let r = counit_check(&DGAlgebra::small_dga(f), &policy(3, -1, 4)).unwrap();
        assert!(r.pass(), "{:?}", r.degrees);
    }
}

#[test]
fn counit_of_the_ground_field_is_an_isomorphism() {
    let f = Fp::new(5).unwrap();
    let m = counit_map(&DGAlgebra::ground(f), &TruncationPolicy::default()).unwrap();
    assert!(m.is_iso());
}

#[test]
fn verdicts_are_stable_under_larger_caps() {
    let f = Fp::new(3).unwrap();
    for (_, a) in battery(f) {
        let small = counit_check(&a, &policy(4, -1, 5)).unwrap();
        let large = counit_check(&a, &policy(6, -1, 5)).unwrap();
        assert_eq!(small.safe, large.safe);
        assert_eq!(small.degrees, large.degrees);
    }
}

fn permuted(a: &DGAlgebra, perm: &[usize]) -> DGAlgebra {
    let f = a.field();
    let n = a.len();
    let mut products = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            let v: SVec = a.product(x, y).into_iter().map(|(k, c)| (perm[k], c)).collect();
            let mut v = v;
            v.sort_unstable();
            products.insert((perm[x], perm[y]), v);
        }
    }
    let c = a.complex();
    let pb = a.basis();
    let mut mats = BTreeMap::new();
    if let Some((lo, hi)) = c.support() {
        for d in lo..=hi {
            let r = pb.in_degree(d);
            let mut m = Matrix::zeros(f, r.len(), r.len());
            for g in r.clone() {
                m.set(pb.local(perm[g]), pb.local(g), 1);
            }
            mats.insert(d, m);
        }
    }
    let complex = c.rebased(&mats).unwrap();
    let unit = a.unit().iter().map(|&(g, c)| (perm[g], c)).collect();
    let mut aug = vec![0; n];
    for g in 0..n {
        aug[perm[g]] = a.augmentation()[g];
    }
    DGAlgebra::new(complex, products, unit, aug).unwrap()
}

#[test]
fn verdicts_do_not_depend_on_basis_order() {
    let f = Fp::new(3).unwrap();
    let a = DGAlgebra::exterior(f, 1).unwrap().tensor(&DGAlgebra::exterior(f, 1).unwrap()).unwrap();
    // degree 1 holds x⊗1 and 1⊗x; swap them
    let r = a.basis().in_degree(1);
    let mut perm: Vec<usize> = (0..a.len()).collect();
    perm.swap(r.start, r.start + 1);
    let b = permuted(&a, &perm);
    let p = policy(3, -1, 4);
    let ra = counit_check(&a, &p).unwrap();
    let rb = counit_check(&b, &p).unwrap();
    assert_eq!(ra.degrees, rb.degrees);
    assert!(ra.pass());
    let (ba, bb) = (bar(&a, &p).unwrap(), bar(&b, &p).unwrap());
    assert_eq!(ba.complex().homology_in(0, 4), bb.complex().homology_in(0, 4));
}

#[test]
fn convolution_path_factorizes_the_diagonal() {
    for f in [Fp::two(), Fp::new(3).unwrap()] {
        let mut algebras = battery(f);
        algebras.push(("small dga", DGAlgebra::small_dga(f)));
        for (name, a) in algebras {
            for o in [Orientation::Standard, Orientation::Mirror] {
                let cp = convolution_path(&a, o).unwrap();
                assert!(cp.pass(), "{name} over F_{}", f.p());
            }
        }
        let cp = convolution_path(&DGAlgebra::ground(f), Orientation::Standard).unwrap();
        let c = cp.algebra.complex();
        assert_eq!((c.dim(0), c.dim(-1)), (2, 1));
        assert_eq!(c.total_dim(), 3);
    }
}

#[test]
fn square_structure_on_algebras() {
    let f = Fp::two();
    let a = DGAlgebra::truncated_polynomial(f, 0, 2).unwrap();
    let r = c0_replacement_check(&a, &policy(6, -1, 4)).unwrap();
    assert_eq!(r.safe, vec![0, 1, 2, 3]);
    assert!(r.pass());
    assert!(c0_replacement_check(&DGAlgebra::ground(f), &policy(6, -1, 4)).unwrap().pass());

    let p = policy(2, -3, 4);
    let c0 = c_n_square(&a, 0, &p, JEnd::Zero).unwrap();
    assert!(c0.conilpotency.is_some());
    let c1 = c_n_square(&a, 1, &p, JEnd::Zero).unwrap();
    assert_eq!(c1.conilpotency, None);
    let direct = cobar(&cylinder_cog(&bar(&a, &p).unwrap(), Orientation::Standard, JEnd::Zero).unwrap(), &p).unwrap();
    assert_eq!(direct.algebra.complex(), c1.cobar.algebra.complex());

    let sigma = CubeMor::codegeneracy(0, 0).unwrap();
    let m = c_n_map(&a, &sigma, &p, JEnd::Zero).unwrap();
    assert_eq!(m.src(), &c1.windowed());
    let delta0 = CubeMor::coface(0, 0, 0).unwrap();
    let back = c_n_map(&a, &delta0, &p, JEnd::Zero).unwrap();
    // σ δ^0 = id
    assert!(m.compose(&back).unwrap() == ChainMap::identity(&c0.windowed()));
    let delta1 = CubeMor::coface(0, 0, 1).unwrap();
    assert!(c_n_map(&a, &delta1, &p, JEnd::Zero).is_err());
    assert!(c_n_map(&a, &delta1, &p, JEnd::One).is_ok());
    assert!(delta1.entries().contains(&Entry::Const(1)));
}

#[test]
fn json_round_trip() {
    let f = Fp::new(3).unwrap();
    let a = DGAlgebra::small_dga(f);
    let back = algebra_from_json(&algebra_to_json(&a)).unwrap();
    assert_eq!(algebra_to_json(&back), algebra_to_json(&a));
    let c = bar(&a, &policy(2, -1, 5)).unwrap();
    let back = coalgebra_from_json(&coalgebra_to_json(&c)).unwrap();
    assert_eq!(coalgebra_to_json(&back), coalgebra_to_json(&c));
    let mut bad = algebra_to_json(&a);
    bad["products"][0][2] = serde_json::json!(17);
    match algebra_from_json(&bad) {
        Err(Error::Schema { path, .. }) => assert_eq!(path, "products[0]"),
        other => panic!("expected a schema error, got {other:?}"),
    }
    let mut bad = algebra_to_json(&a);
    bad["products"] = serde_json::json!([]);
    assert!(matches!(algebra_from_json(&bad), Err(Error::InvalidAlgebra(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_algebras_have_valid_bar_constructions(seed in any::<u64>(), odd in any::<bool>()) {
        let f = if odd { Fp::new(3).unwrap() } else { Fp::two() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_algebra(&mut rng, f);
        a.validate().unwrap();
        let p = policy(2, -1, 3);
        let b = bar(&a, &p).unwrap();
        b.validate().unwrap();
        prop_assert!(b.conilpotency_depth(3).is_some());
        let r = counit_check(&a, &p).unwrap();
        prop_assert!(r.pass(), "{:?}", r.degrees);
    }
}
