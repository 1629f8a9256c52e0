mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use vqs::classify::{self, Kind};
use vqs::embedding;
use vqs::io;
use vqs::iso_groups::{self, Semantics};
use vqs::{Budget, Fe, Field, Matrix, Subspace, VirtualQuadraticSpace};

const ORDERS: [u32; 8] = [2, 3, 4, 5, 7, 8, 9, 25];

fn field_and_rng(fi: usize, seed: u64) -> (Field, ChaCha8Rng) {
    (gf_of(ORDERS[fi % ORDERS.len()]), ChaCha8Rng::seed_from_u64(seed))
}

fn random_subspace(rng: &mut ChaCha8Rng, f: &Field, n: usize, k: usize) -> Subspace {
    Subspace::row_space(&random_matrix(rng, f, k, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ops_match_polynomial_arithmetic(fi in 0usize..8, a in any::<u32>(), b in any::<u32>()) {
        let f = gf_of(ORDERS[fi]);
        let sf = SlowField::of(&f);
        let (a, b) = (Fe(a % f.order()), Fe(b % f.order()));
        prop_assert_eq!(f.add(a, b), sf.add(a, b));
        prop_assert_eq!(f.mul(a, b), sf.mul(a, b));
        prop_assert_eq!(f.sub(a, b), sf.sub(a, b));
        match f.inv(b) {
            Some(bi) => prop_assert_eq!(sf.mul(b, bi), Fe(1)),
            None => prop_assert_eq!(b, Fe(0)),
        }
        if f.is_square(a) {
            let r = f.sqrt(a).unwrap();
            prop_assert_eq!(sf.mul(r, r), a);
        } else {
            prop_assert!(sf.elements().iter().all(|&x| sf.mul(x, x) != a));
        }
    }

    #[test]
    fn rref_is_idempotent_and_kernel_is_exact(fi in 0usize..8, seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let (f, mut rng) = field_and_rng(fi, seed);
        let m = random_matrix(&mut rng, &f, rows, cols);
        let e = m.rref();
        prop_assert_eq!(&e.matrix.rref().matrix, &e.matrix);
        prop_assert_eq!(e.rank, e.pivots.len());
        let ker = m.kernel();
        prop_assert_eq!(ker.dim() + e.rank, cols);
        for v in ker.basis_vectors() {
            prop_assert!(m.apply(&v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn sum_and_intersection_dimensions(fi in 0usize..8, seed in any::<u64>(), n in 1usize..6, ka in 0usize..6, kb in 0usize..6) {
        let (f, mut rng) = field_and_rng(fi, seed);
        let a = random_subspace(&mut rng, &f, n, ka);
        let b = random_subspace(&mut rng, &f, n, kb);
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        prop_assert!(a.is_subspace_of(&s) && b.is_subspace_of(&s));
    }

    #[test]
    fn perp_is_an_involution_for_invertible_gram(fi in 0usize..8, seed in any::<u64>(), n in 1usize..6, k in 0usize..6) {
        let (f, mut rng) = field_and_rng(fi, seed);
        let g = random_invertible(&mut rng, &f, n);
        let s = random_subspace(&mut rng, &f, n, k);
        let p = s.perp(&g).unwrap();
        prop_assert_eq!(p.dim(), n - s.dim());
        prop_assert_eq!(p.perp(&g.transpose()).unwrap(), s);
    }

    #[test]
    fn polar_form_is_the_gram_pairing(fi in 0usize..8, seed in any::<u64>(), n in 1usize..5) {
        let (f, mut rng) = field_and_rng(fi, seed);
        let sf = SlowField::of(&f);
        let qs = random_form(&mut rng, &f, n);
        let x = random_matrix(&mut rng, &f, 1, n).row(0).to_vec();
        let y = random_matrix(&mut rng, &f, 1, n).row(0).to_vec();
        prop_assert_eq!(qs.bilinear(&x, &y), sf.polar(qs.coeffs(), &x, &y));
        prop_assert_eq!(qs.evaluate(&x).unwrap(), sf.eval(qs.coeffs(), &x));
        prop_assert!(qs.gram().is_symmetric());
    }

    #[test]
    fn radical_matches_definition(fi in 0usize..5, seed in any::<u64>(), n in 1usize..4, deficient in any::<bool>()) {
        let (f, mut rng) = field_and_rng(fi, seed);
        let mut qs = random_form(&mut rng, &f, n);
        if deficient {
            let mut m = random_matrix(&mut rng, &f, n, n);
            for r in 0..n {
                m.set(r, 0, Fe(0));
            }
            qs = qs.pullback(&m).unwrap();
        }
        let want = brute_radical(&qs);
        let got = qs.radical();
        prop_assert_eq!(members(&got), want);
        prop_assert_eq!(qs.has_trivial_radical(), got.is_zero());
    }

    #[test]
    fn is_isometry_matches_pointwise(fi in 0usize..5, seed in any::<u64>(), n in 1usize..4) {
        let (f, mut rng) = field_and_rng(fi, seed);
        let qs = random_form(&mut rng, &f, n);
        let m = random_matrix(&mut rng, &f, n, n);
        prop_assert_eq!(qs.is_isometry(&m).unwrap(), pointwise_isometry(&qs, &m));
        // a pullback along g makes g^{-1} h g an isometry whenever h is one
        let g = random_invertible(&mut rng, &f, n);
        let moved = qs.pullback(&g).unwrap();
        let neg = Matrix::from_vec(&f, n, n, (0..n * n).map(|i| if i % (n + 1) == 0 { f.neg(Fe::ONE) } else { Fe::ZERO }).collect()).unwrap();
        let conj = g.inverse().unwrap().unwrap().mul(&neg).unwrap().mul(&g).unwrap();
        prop_assert!(moved.is_isometry(&conj).unwrap());
        prop_assert!(pointwise_isometry(&moved, &conj));
    }

    #[test]
    fn embedding_is_minimal_and_non_degenerate(fi in 0usize..8, seed in any::<u64>(), n in 1usize..5) {
        let (f, mut rng) = field_and_rng(fi, seed);
        let qs = random_form(&mut rng, &f, n);
        let vqs = embedding::embed_ambient(&qs).unwrap();
        let dim_n = qs.gram().kernel().dim();
        prop_assert_eq!(vqs.ambient().dim(), n + dim_n);
        prop_assert!(vqs.ambient().is_nondegenerate());
        prop_assert!(vqs.is_minimal());
        prop_assert_eq!(vqs.restricted_form(), qs.clone());
        prop_assert_eq!(vqs.isotropic_part().dim(), dim_n);
        prop_assert_eq!(vqs.is_nondegenerate(), qs.has_trivial_radical());
        if f.is_char_two() && vqs.is_nondegenerate() {
            prop_assert!(dim_n <= 1);
        }
    }

    #[test]
    fn minimalize_is_idempotent(fi in 0usize..5, seed in any::<u64>(), n in 1usize..4) {
        let (f, mut rng) = field_and_rng(fi, seed);
        let qs = random_form(&mut rng, &f, n);
        let base = embedding::embed_ambient(&qs).unwrap();
        // pad with a hyperbolic plane orthogonal to everything
        let ambient = base.ambient().direct_sum(&vqs::QuadraticSpace::hyperbolic(&f, 1)).unwrap();
        let big = ambient.dim();
        let u: Vec<Vec<Fe>> = base.subspace().basis_vectors().into_iter().map(|mut v| { v.resize(big, Fe(0)); v }).collect();
        let padded = VirtualQuadraticSpace::new(ambient, Subspace::from_vectors(&f, big, &u).unwrap()).unwrap();
        prop_assert!(!padded.is_minimal());
        let (once, d) = embedding::minimalize(&padded).unwrap();
        prop_assert_eq!(d.m_hat.dim(), 2);
        prop_assert_eq!(once.ambient().dim(), base.ambient().dim());
        let (twice, d2) = embedding::minimalize(&once).unwrap();
        prop_assert_eq!(&twice, &once);
        prop_assert!(d2.m_hat.is_zero());
    }

    #[test]
    fn classification_is_invariant_under_change_of_basis(fi in 0usize..5, seed in any::<u64>(), n in 1usize..5) {
        let (f, mut rng) = field_and_rng(fi, seed);
        let qs = random_form(&mut rng, &f, n);
        prop_assume!(qs.has_trivial_radical());
        let g = random_invertible(&mut rng, &f, n);
        let b = Budget::default();
        let r1 = classify::canonical_form(&qs, &b).unwrap();
        let r2 = classify::canonical_form(&qs.pullback(&g).unwrap(), &b).unwrap();
        prop_assert_eq!(r1.isometry_key(), r2.isometry_key());
        prop_assert_eq!(&r1.canonical, &r2.canonical);
        prop_assert_eq!(r1.witt_index, r1.kind.witt_index(n));
    }

    #[test]
    fn form_json_round_trips(fi in 0usize..8, seed in any::<u64>(), n in 1usize..5, k in 0usize..5) {
        let (f, mut rng) = field_and_rng(fi, seed);
        let qs = random_form(&mut rng, &f, n);
        let text = serde_json::to_string(&io::form_doc(&qs)).unwrap();
        prop_assert_eq!(io::parse_form(&text).unwrap().form, io::ParsedForm::Plain(qs.clone()));
        let vqs = embedding::embed_ambient(&qs).unwrap();
        let u = random_subspace(&mut rng, &f, vqs.ambient().dim(), k);
        let v = VirtualQuadraticSpace::new(vqs.ambient().clone(), u).unwrap();
        let text = serde_json::to_string(&io::virtual_doc(&v)).unwrap();
        let parsed = io::parse_form(&text).unwrap();
        prop_assert!(parsed.warnings.is_empty());
        prop_assert_eq!(parsed.form, io::ParsedForm::Virtual(v));
    }

    #[test]
    fn enumerated_groups_are_groups(fi in 0usize..3, seed in any::<u64>(), n in 1usize..4) {
        let (f, mut rng) = field_and_rng(fi, seed);
        let qs = random_form(&mut rng, &f, n);
        let set = iso_groups::enumerate_isometries(&qs, &Budget::default()).unwrap();
        prop_assert!(set.check_group_axioms(seed).is_ok());
        prop_assert_eq!(set.elements.len(), brute_isometries(&qs).len());
    }
}

#[test]
fn census_invariants() {
    let mut cases: Vec<(u32, usize)> = [2u32, 3, 4, 5].iter().flat_map(|&q| (1..=3).map(move |n| (q, n))).collect();
    cases.push((2, 4));
    for (q, n) in cases {
        let f = gf_of(q);
        let r = classify::class_census(&f, n, &Budget::default()).unwrap();
        let expected = if n % 2 == 0 { 2 } else { 1 };
        assert_eq!(r.classes.len(), expected, "GF({q})^{n}");
        assert_eq!(r.expected_classes, expected);
        assert_eq!(r.classes.iter().map(|c| c.forms).sum::<u64>(), r.trivial_radical_forms);
        for c in &r.classes {
            assert!(c.representative.has_trivial_radical());
            assert_eq!(c.witt_index, c.kind.witt_index(n));
        }
    }
}

#[test]
fn order_formula_semantics_flag() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
        for dim in 1..=8 {
            for kind in Kind::for_dim(dim) {
                let c = iso_groups::order_formula(q, dim, kind, Semantics::Classical).unwrap();
                let v = iso_groups::order_formula(q, dim, kind, Semantics::Virtual).unwrap();
                if dim % 2 == 1 && q % 2 == 0 {
                    assert_eq!(v, c * 2u32, "q={q} dim={dim}");
                } else {
                    assert_eq!(v, c, "q={q} dim={dim} {kind}");
                }
            }
        }
    }
}
