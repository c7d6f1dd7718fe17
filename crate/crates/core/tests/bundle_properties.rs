mod common;

use common::{catalog, p, random_atom, random_chern, random_class, random_geometric};
use degloci_core::bundle::{ch_of, chern, chern_character, segre, BundleExpr, ChernData};
use degloci_core::catalog::{product, projective_bundle_over_curve, projective_space};
use degloci_core::oracle::{roots_chern, RootOp};
use degloci_core::rational::{binomial, int};
use degloci_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_forms_agree_with_root_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (label, x) in catalog() {
        for trial in 0..50 {
            let rank = 1 + trial % 4;
            let c = random_chern(&x, rank, &mut rng);
            let atom = BundleExpr::atom("A", rank, c.total.clone());

            let dual = chern(&atom.clone().dual(), &x).unwrap();
            assert_eq!(dual, roots_chern(&RootOp::Dual, &x, &c).unwrap(), "{} dual", label);

            let l = random_class(&x, 1, &mut rng, 3);
            let twisted = chern(&atom.clone().twist(l.clone()), &x).unwrap();
            assert_eq!(twisted, roots_chern(&RootOp::Twist(l), &x, &c).unwrap(), "{} twist", label);

            let p = rng.gen_range(0..=rank);
            let ext = chern(&atom.clone().ext(p), &x).unwrap();
            let oracle = roots_chern(&RootOp::Ext(p), &x, &c).unwrap();
            assert_eq!(ext.rank, oracle.rank, "{} ext rank", label);
            assert_eq!(ext.total, oracle.total, "{} ext({}) of rank {}", label, p, rank);
        }
    }
}

#[test]
fn exterior_square_of_rank_three_doubles_c1() {
    let x = projective_space(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = random_chern(&x, 3, &mut rng);
    let ext = roots_chern(&RootOp::Ext(2), &x, &c).unwrap();
    assert_eq!(ext.c(1), c.c(1).scale(&int(2)));
}

#[test]
fn pullback_from_plane_factor() {
    let x = product(&[p(1), p(2)]).unwrap();
    let base = &x.projection(2).unwrap().target;
    let h = base.generator("h").unwrap();
    let e = BundleExpr::line(&h).copies(2).unwrap().pullback(2);
    let d = chern(&e, &x).unwrap();
    assert_eq!(d.c(2), x.generator("h2").unwrap().pow(2));
    assert!(matches!(chern(&BundleExpr::line(&h).pullback(3), &x), Err(Error::Malformed(_))));
}

/// Classes pulled back from a base of dimension `t - 1` vanish from degree `t` on.
#[test]
fn pullbacks_from_lower_dimensional_bases_truncate() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (label, x) in catalog() {
        for i in 1..=x.projections().len() {
            let base = &x.projection(i).unwrap().target;
            let t = base.dimension() + 1;
            for _ in 0..5 {
                let rank = rng.gen_range(1..=4);
                let d = chern(&random_atom(base, rank, &mut rng).pullback(i), &x).unwrap();
                for k in t..=x.dimension() {
                    assert!(d.c(k).is_zero(), "{} factor {} c_{}", label, i, k);
                }
            }
        }
    }
}

#[test]
fn segre_examples() {
    let p2 = projective_space(2).unwrap();
    let h = p2.generator("h").unwrap();
    let e = BundleExpr::line(&h).copies(2).unwrap();
    assert_eq!(segre(&e.dual(), &p2).unwrap().component(2).integrate(), int(3));
    assert_eq!(segre(&BundleExpr::trivial(&p2, 4), &p2).unwrap(), p2.one());

    // rank 2 on P(F) with F of degree 4 over P^1, E = L (+) G with L = xi - f
    // and G a line bundle with c_1 = deg N f, deg N = (r-1)(deg F + g - 1)
    let x = projective_bundle_over_curve(3, 4, 0).unwrap();
    let (xi, f) = (x.generator("xi").unwrap(), x.generator("f").unwrap());
    let l = &xi - &f;
    let g = BundleExpr::line(&f.scale(&int(3)));
    let e = BundleExpr::line(&l).sum(g);
    assert_eq!(segre(&e.dual(), &x).unwrap().component(3).integrate(), int(4));
}

#[test]
fn exterior_power_caps() {
    let p2 = projective_space(2).unwrap();
    let h = p2.generator("h").unwrap();
    let six = BundleExpr::line(&h).copies(6).unwrap();
    assert_eq!(chern(&six.clone().ext(3), &p2).unwrap().rank, 20);
    assert!(matches!(chern(&six.sum(BundleExpr::trivial(&p2, 1)).ext(2), &p2), Err(Error::Unsupported(_))));
    let c = ChernData::new(6, p2.one()).unwrap();
    assert!(matches!(roots_chern(&RootOp::Dual, &p2, &c), Err(Error::Unsupported(_))));
}

fn random_expr(x: &degloci_core::VarietyModel, rng: &mut ChaCha8Rng, depth: usize) -> BundleExpr {
    match if depth == 0 { 0 } else { rng.gen_range(0..5) } {
        0 => {
            let rank = rng.gen_range(1..=3);
            random_atom(x, rank, rng)
        }
        1 => random_expr(x, rng, depth - 1).sum(random_expr(x, rng, depth - 1)),
        2 => random_expr(x, rng, depth - 1).dual(),
        3 => random_expr(x, rng, depth - 1).twist(random_class(x, 1, rng, 2)),
        _ => random_expr(x, rng, depth - 1).det(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bundle_identities(seed in any::<u64>(), which in 0usize..40) {
        let all = catalog();
        let (label, x) = &all[which % all.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(x, &mut rng, 2);
        let d = chern(&e, x).unwrap();
        let n = x.dimension();

        prop_assert_eq!(&chern(&e.clone().dual().dual(), x).unwrap(), &d, "{}", label);
        prop_assert_eq!(&chern(&e.clone().twist(x.zero()), x).unwrap(), &d);
        prop_assert_eq!(chern(&e.clone().det(), x).unwrap().total, &x.one() + &d.c(1));
        prop_assert_eq!(&d.total * &segre(&e, x).unwrap(), x.one());
        prop_assert_eq!(d.rank, e.rank());
        if e.rank() <= 4 {
            let p = rng.gen_range(0..=e.rank());
            prop_assert_eq!(chern(&e.clone().ext(p), x).unwrap().rank as i64, binomial(e.rank() as i64, p as i64));
        }

        let f = random_expr(x, &mut rng, 1);
        let ch_sum = chern_character(&e.clone().sum(f.clone()), x).unwrap();
        prop_assert_eq!(ch_sum, &chern_character(&e, x).unwrap() + &chern_character(&f, x).unwrap());
        let l = random_class(x, 1, &mut rng, 2);
        let line = ChernData::new(1, &x.one() + &l).unwrap();
        let ch_twist = chern_character(&e.clone().twist(l), x).unwrap();
        prop_assert_eq!(ch_twist, &chern_character(&e, x).unwrap() * &ch_of(&line, n));
    }

    #[test]
    fn geometric_bundles_have_consistent_ranks(seed in any::<u64>(), which in 0usize..40) {
        let all = catalog();
        let (_, x) = &all[which % all.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_geometric(x, &mut rng, 2);
        let d = chern(&e, x).unwrap();
        prop_assert_eq!(d.rank, e.rank());
        prop_assert_eq!(chern_character(&e, x).unwrap().constant_term(), int(e.rank() as i64));
    }
}
