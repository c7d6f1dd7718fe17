mod common;

use common::{catalog, p, random_atom, random_class, random_geometric, surfaces, threefolds};
use degloci_core::analysis::{
    bigness, chi_structure_sheaf, degeneracy_class, en_hilbert_polynomial, euler_char, porteous_singular_class,
    rr_c3_crosscheck,
};
use degloci_core::bundle::{chern, spinor, BundleExpr, ChernData};
use degloci_core::catalog::{hirzebruch, noether_defect, product, projective_space, quadric};
use degloci_core::oracle::determinant_p;
use degloci_core::predictor::{predict_components, Flag, PredictorInput, VerdictKind};
use degloci_core::rational::int;
use degloci_core::schur::{schur_p, truncated_closed_form};
use degloci_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn hrr_is_integral_on_genuine_bundles() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let all = catalog();
    for i in 0..200 {
        let (label, x) = &all[i % all.len()];
        let e = random_geometric(x, &mut rng, 2);
        euler_char(x, &e).unwrap_or_else(|err| panic!("{}: {:?}: {}", label, e, err));
    }
}

#[test]
fn noether_formula_on_every_surface() {
    for (label, x) in surfaces() {
        let chi = chi_structure_sheaf(&x).unwrap();
        assert_eq!(noether_defect(&x, &chi).unwrap(), int(0), "{}", label);
    }
}

#[test]
fn structure_sheaf_euler_characteristics() {
    for (label, x) in catalog() {
        let chi = chi_structure_sheaf(&x).unwrap();
        let expected = match label.as_str() {
            "curve of genus 1" => 0,
            "curve of genus 2" => -1,
            "P1xcurve of genus 2" => -1,
            l if l.contains("over genus 1") => 0,
            l if l.contains("over genus 2") => -1,
            _ => 1,
        };
        assert_eq!(chi, int(expected), "{}", label);
    }
}

#[test]
fn euler_characteristic_examples() {
    let p3 = projective_space(3).unwrap();
    let h = p3.generator("h").unwrap();
    assert_eq!(chi_structure_sheaf(&p3).unwrap(), int(1));
    let e = BundleExpr::line(&h).sum(BundleExpr::line(&h.scale(&int(2))));
    assert_eq!(euler_char(&p3, &e.dual()).unwrap(), int(0));
    let x1 = hirzebruch(1, 1, 2).unwrap();
    let l = BundleExpr::line(&(&x1.generator("C0").unwrap() + &x1.generator("f").unwrap()));
    assert_eq!(euler_char(&x1, &l.clone()).unwrap(), int(3));
    assert_eq!(euler_char(&x1, &l.clone().sum(l)).unwrap(), int(6));
}

#[test]
fn schur_recurrence_matches_literal_determinant() {
    for n in 2..=8 {
        assert_eq!(schur_p(n).unwrap(), determinant_p(n).unwrap(), "n = {}", n);
    }
    for n in 2..=12 {
        assert_eq!(schur_p(n).unwrap().mod_x2_squared(), truncated_closed_form(n));
    }
}

#[test]
fn rr_c3_on_random_atoms() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let folds = threefolds();
    let mut count = 0;
    for i in 0..40 {
        let (label, x) = &folds[i % folds.len()];
        let rank = 2 + i % 3;
        let e = random_atom(x, rank, &mut rng);
        let res = rr_c3_crosscheck(x, &e).unwrap();
        assert!(res.pass, "{}: lhs {} rhs {}", label, res.lhs, res.rhs);
        if rank == 2 {
            assert_eq!(res.rhs, int(0));
        }
        count += 1;
    }
    assert!(count >= 25);
}

#[test]
fn segre_closed_form_when_higher_classes_vanish() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut checked = 0;
    for (label, x) in surfaces().into_iter().chain(threefolds()) {
        for _ in 0..6 {
            let rank = rng.gen_range(2..=4);
            let mut total = x.one() + random_class(&x, 1, &mut rng, 3);
            total += &random_class(&x, 2, &mut rng, 3);
            let e = BundleExpr::atom("A", rank, total);
            let b = bigness(&x, &e).unwrap();
            assert_eq!(b.closed_form.as_ref(), Some(&b.top_segre), "{}", label);
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn bigness_examples() {
    let x = product(&[p(1), p(2)]).unwrap();
    let h2 = x.generator("h2").unwrap();
    let e = BundleExpr::line(&h2).copies(2).unwrap();
    let b = bigness(&x, &e).unwrap();
    assert_eq!(b.top_segre, int(0));
    assert!(!b.big);
    assert!(!bigness(&x, &BundleExpr::trivial(&x, 3)).unwrap().big);
}

#[test]
fn hilbert_polynomial_of_points_is_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let ms = [-2, 0, 1, 4];
    for (label, x) in surfaces().into_iter().chain(threefolds()) {
        let k = x.dimension();
        for _ in 0..3 {
            let rank = rng.gen_range(k..=4);
            let lines: Vec<_> = (0..rank).map(|_| BundleExpr::line(&random_class(&x, 1, &mut rng, 2))).collect();
            let e = BundleExpr::sum_all(lines).unwrap();
            let values = en_hilbert_polynomial(&x, &e, k, &ms).unwrap();
            let ck = chern(&e, &x).unwrap().c(k).integrate();
            assert!(values.iter().all(|v| *v == ck), "{}: {:?} vs {}", label, values, ck);
        }
    }
    let x1 = hirzebruch(1, 1, 2).unwrap();
    let l = BundleExpr::line(&(&x1.generator("C0").unwrap() + &x1.generator("f").unwrap()));
    assert_eq!(en_hilbert_polynomial(&x1, &l.clone().sum(l), 2, &[0, 3]).unwrap(), vec![int(1), int(1)]);
}

#[test]
fn degeneracy_examples() {
    for (n, k, r) in [(3usize, 1usize, 2usize), (3, 2, 3), (4, 2, 4)] {
        let x = product(&[p(n - k), p(k)]).unwrap();
        let base = &x.projection(2).unwrap().target;
        let h = base.generator("h").unwrap();
        let e = BundleExpr::line(&h).copies(k).unwrap().pullback(2).sum(BundleExpr::trivial(&x, r - k));
        let dc = degeneracy_class(&x, &e, k).unwrap();
        assert_eq!(dc.class, x.generator("h2").unwrap().pow(k as u32));
        assert!(!dc.empty);
        assert!(chern(&e, &x).unwrap().c(k + 1).is_zero());
    }
    let q4 = quadric(4).unwrap();
    let e = spinor(&q4, 1).unwrap().sum(spinor(&q4, 2).unwrap());
    let (class, note) = porteous_singular_class(&q4, &e, 2).unwrap();
    assert!(class.is_zero());
    assert!(note.is_some());
    let p4 = projective_space(4).unwrap();
    let rank2 = BundleExpr::line(&p4.generator("h").unwrap()).copies(2).unwrap();
    assert!(porteous_singular_class(&p4, &rank2, 2).unwrap().0.is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn predictor_never_contradicts_itself(
        seed in any::<u64>(),
        which in 0usize..40,
        k in 1usize..=3,
        s in 0u64..3,
        h in 0u64..3,
        flag_bits in 0u8..16,
    ) {
        let all = catalog();
        let (_, x) = &all[which % all.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = rng.gen_range(1..=4);
        let e = if rng.gen_bool(0.2) { BundleExpr::trivial(x, rank) } else { random_atom(x, rank, &mut rng) };
        let mut flags: Vec<Flag> = [Flag::H1StructureZero, Flag::VBig, Flag::Ulrich, Flag::AcmSubcanonicalDetH]
            .into_iter()
            .enumerate()
            .filter(|(i, _)| flag_bits & (1 << i) != 0)
            .map(|(_, f)| f)
            .collect();
        if x.dimension() >= 4 {
            flags.push(Flag::NGe4);
        }
        let input = PredictorInput::new(k, s, h, &flags);
        let ck_zero = chern(&e, x).unwrap().c(k).is_zero();
        match predict_components(x, &e, &input) {
            Ok(v) => {
                let kinds: Vec<VerdictKind> = v.conclusions.iter().map(|c| c.kind).collect();
                let connected = kinds.contains(&VerdictKind::Connected);
                for kind in &kinds {
                    if let VerdictKind::Exactly(m) = kind {
                        prop_assert!(*m >= 1);
                        prop_assert!(!(connected && *m >= 2));
                        for other in &kinds {
                            if let VerdictKind::AtLeast(p) = other {
                                prop_assert!(p <= m);
                            }
                        }
                    }
                }
                prop_assert_eq!(kinds.contains(&VerdictKind::Empty), ck_zero);
                prop_assert_eq!(v.kind == VerdictKind::Empty, ck_zero);
            }
            Err(Error::InconsistentInputs(_)) | Err(Error::Malformed(_)) => {}
            Err(other) => prop_assert!(false, "unexpected error {}", other),
        }
    }

    #[test]
    fn chern_data_round_trip(seed in any::<u64>()) {
        let x = projective_space(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_atom(&x, 3, &mut rng);
        let d = chern(&e, &x).unwrap();
        prop_assert_eq!(ChernData::new(d.rank, d.total.clone()).unwrap(), d);
    }
}
