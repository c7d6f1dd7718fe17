mod common;

use common::{catalog, p, random_mixed};
use degloci_core::catalog::{hirzebruch, product, projective_bundle_over_curve, projective_space, quadric};
use degloci_core::oracle::solve_linear;
use degloci_core::rational::{int, is_normalized};
use degloci_core::ring::PresentationBuilder;
use degloci_core::{Error, GradedClass, Monomial};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn normal_forms_do_not_depend_on_rule_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (label, x) in catalog() {
        let ring = x.ring();
        for m in ring.monomials_up_to(x.dimension()) {
            let cached = ring.normal_form(&m).unwrap();
            for _ in 0..100 {
                let mut choose = |opts: &[usize]| rng.gen_range(0..opts.len());
                let fresh = ring.normal_form_by(&m, &mut choose).unwrap();
                assert_eq!(fresh, cached, "{}: {}", label, ring.render_monomial(&m));
            }
        }
    }
}

#[test]
fn normal_forms_are_idempotent() {
    for (label, x) in catalog() {
        let ring = x.ring();
        for m in ring.monomials_up_to(x.dimension()) {
            for (out, _) in ring.normal_form(&m).unwrap().terms() {
                let again = ring.normal_form(out).unwrap();
                assert_eq!(again, GradedClass::from_terms(ring, [(out.clone(), int(1))]).unwrap(), "{}", label);
                assert_eq!(again.terms().count(), 1);
            }
        }
    }
}

#[test]
fn hyperplane_degree_matches_catalog() {
    let expected: &[(&str, i64)] = &[
        ("P1", 1), ("P2", 1), ("P3", 1), ("P4", 1), ("P5", 1),
        ("Q2", 2), ("Q3", 2), ("Q4", 2), ("Q5", 2), ("Q6", 2),
        ("P1xP1", 2), ("P1xP2", 3), ("P2xP2", 6), ("P1xP1xP1", 6),
        ("X0", 2), ("X1", 3), ("X2", 4), ("X3", 5),
        ("Bl6P2", 3), ("Bl8P2", 1), ("Bl0P2", 9),
    ];
    let all = catalog();
    for (label, d) in expected {
        let (_, x) = all.iter().find(|(l, _)| l == label).unwrap();
        assert_eq!(x.hyperplane().pow(x.dimension() as u32).integrate(), int(*d), "{}", label);
        assert_eq!(x.degree(), *d);
    }
    for (label, x) in &all {
        assert_eq!(x.hyperplane().pow(x.dimension() as u32).integrate(), int(x.degree()), "{}", label);
        assert!(x.degree() >= 1);
    }
}

#[test]
fn segre_product_degrees_are_binomial() {
    for n in 2..=5usize {
        for k in 1..n {
            let x = product(&[p(n - k), p(k)]).unwrap();
            let binom = (1..=k).fold(1i64, |acc, i| acc * (n - k + i) as i64 / i as i64);
            assert_eq!(x.degree(), binom, "P{}xP{}", n - k, k);
        }
    }
}

#[test]
fn presentation_examples() {
    let p3 = projective_space(3).unwrap();
    let h4 = p3.ring().parse_monomial("h^4").unwrap();
    assert!(p3.ring().normal_form(&h4).unwrap().is_zero());
    assert_eq!(p3.hyperplane().pow(3).integrate(), int(1));

    let scroll = projective_bundle_over_curve(3, 4, 0).unwrap();
    let xi3 = scroll.ring().parse_monomial("xi^3").unwrap();
    let expected = (&scroll.generator("xi").unwrap().pow(2) * &scroll.generator("f").unwrap()).scale(&int(4));
    assert_eq!(scroll.ring().normal_form(&xi3).unwrap(), expected);

    let q4 = quadric(4).unwrap();
    let ab = q4.ring().parse_monomial("a*b").unwrap();
    assert!(q4.ring().normal_form(&ab).unwrap().is_zero());
    assert_eq!(q4.hyperplane().pow(4).integrate(), int(2));
    let (a, b) = (q4.generator("a").unwrap(), q4.generator("b").unwrap());
    assert_eq!((&a + &b).pow(2).integrate(), int(2));

    let x1 = hirzebruch(1, 1, 2).unwrap();
    let (c0, f) = (x1.generator("C0").unwrap(), x1.generator("f").unwrap());
    let h = &c0 + &f.scale(&int(2));
    assert_eq!(h.pow(2), (&c0 * &f).scale(&int(3)));
    assert_eq!((&c0 + &f).pow(2).integrate(), int(1));
}

#[test]
fn mixing_rings_is_malformed() {
    let p2 = projective_space(2).unwrap();
    let p3 = projective_space(3).unwrap();
    assert!(matches!(p2.hyperplane().try_mul(p3.hyperplane()), Err(Error::Malformed(_))));
    assert!(matches!(p2.ring().multiply(p2.hyperplane(), p3.hyperplane()), Err(Error::Malformed(_))));
    assert!(matches!(p2.ring().normal_form(&Monomial::from_exponents(vec![1, 1])), Err(Error::Malformed(_))));
    assert!(p2.generator("z").is_err());
}

#[test]
fn first_hirzebruch_surface_is_the_quadric_surface() {
    let x0 = hirzebruch(0, 1, 1).unwrap();
    let q = product(&[p(1), p(1)]).unwrap();
    let map = |c: &GradedClass| -> GradedClass {
        let mut out = q.zero();
        for (m, v) in c.terms() {
            let e = m.exponents();
            let img = &q.generator("h1").unwrap().pow(e[0]) * &q.generator("h2").unwrap().pow(e[1]);
            out += &img.scale(v);
        }
        out
    };
    let ring = x0.ring();
    let monomials = ring.monomials_up_to(2);
    for a in &monomials {
        for b in &monomials {
            let (ca, cb) = (ring.normal_form(a).unwrap(), ring.normal_form(b).unwrap());
            assert_eq!(map(&(&ca * &cb)), &map(&ca) * &map(&cb));
            assert_eq!((&ca * &cb).integrate(), (&map(&ca) * &map(&cb)).integrate());
        }
    }
    assert_eq!(map(x0.canonical()), q.canonical().clone());
}

/// The middle-degree products on `Q_4` are pinned down by symmetry
/// `a^2 = b^2`, `a + b = H^2`, `H^4 = 2`, and the two spinor identities
/// `c_2(S' + S'')^2 = 8`, `c_4(S' + S'') = 0` with `c(S') = 1 + H + a`,
/// `c(S'') = 1 + H + b`. Unknowns: `u = ∫a^2 = ∫b^2`, `v = ∫ab`.
#[test]
fn even_quadric_middle_products_are_forced() {
    // (a+b)^2 = H^4:  2u + 2v = 2
    // c_2 = H^2 + a + b = 2(a + b), so c_2^2 = 4(2u + 2v) = 8 (same equation)
    // c_4 = c_2(S') c_2(S'') = ab:  v = 0
    let rows = vec![vec![int(2), int(2)], vec![int(8), int(8)], vec![int(0), int(1)]];
    let solution = solve_linear(rows, vec![int(2), int(8), int(0)]).unwrap();
    assert_eq!(solution, vec![int(1), int(0)]);

    let q4 = quadric(4).unwrap();
    let (a, b) = (q4.generator("a").unwrap(), q4.generator("b").unwrap());
    assert_eq!(a.pow(2).integrate(), solution[0]);
    assert_eq!(b.pow(2).integrate(), solution[0]);
    assert_eq!((&a * &b).integrate(), solution[1]);

    // n/2 odd: same-family classes are disjoint, opposite families meet in a point
    for n in [2usize, 6] {
        let q = quadric(n).unwrap();
        let (a, b) = (q.generator("a").unwrap(), q.generator("b").unwrap());
        assert_eq!(a.pow(2).integrate(), int(0), "Q{}", n);
        assert_eq!((&a * &b).integrate(), int(1), "Q{}", n);
        assert_eq!((&a + &b), q.hyperplane().pow(n as u32 / 2));
    }
}

#[test]
fn presentations_reject_incomplete_integration() {
    let built = PresentationBuilder::new(1).generator("t", 1).build();
    assert!(built.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_a_commutative_ring_law(seed in any::<u64>(), which in 0usize..40) {
        let all = catalog();
        let (label, x) = &all[which % all.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_mixed(x, &mut rng), random_mixed(x, &mut rng), random_mixed(x, &mut rng));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c), "{}", label);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        let q = int(rng.gen_range(-5..=5));
        prop_assert_eq!((&a + &b.scale(&q)).integrate(), a.integrate() + q * b.integrate());
        for (_, v) in (&a * &b).terms() {
            prop_assert!(is_normalized(v));
        }
        prop_assert!((&a * &b).component(0).is_homogeneous_of(0));
    }
}
