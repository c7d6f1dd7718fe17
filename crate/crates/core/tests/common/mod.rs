//! Shared fixtures for the integration suites: the catalog sweep and
//! random classes and bundles.
#![allow(dead_code)]

use std::sync::Arc;

use degloci_core::bundle::{spinor, tangent, BundleExpr, ChernData};
use degloci_core::catalog::{
    blown_up_plane, curve, hirzebruch, product, projective_bundle_over_curve, projective_space, quadric,
    CatalogKind, VarietyModel,
};
use degloci_core::rational::int;
use degloci_core::GradedClass;
use rand::Rng;

pub fn p(n: usize) -> Arc<VarietyModel> {
    Arc::new(projective_space(n).unwrap())
}

/// Every catalog family at a few parameter values.
pub fn catalog() -> Vec<(String, VarietyModel)> {
    let mut out: Vec<VarietyModel> = Vec::new();
    for n in 1..=5 {
        out.push(projective_space(n).unwrap());
    }
    for n in 2..=6 {
        out.push(quadric(n).unwrap());
    }
    for g in 0..=2 {
        out.push(curve(g).unwrap());
    }
    out.push(product(&[p(1), p(1)]).unwrap());
    out.push(product(&[p(1), p(2)]).unwrap());
    out.push(product(&[p(2), p(2)]).unwrap());
    out.push(product(&[p(1), p(1), p(1)]).unwrap());
    out.push(product(&[p(1), Arc::new(curve(2).unwrap())]).unwrap());
    out.push(product(&[p(1), Arc::new(quadric(2).unwrap())]).unwrap());
    for (rank, deg, g) in [(2, 3, 0), (3, 4, 0), (2, 3, 1), (3, 5, 2), (4, 6, 1)] {
        out.push(projective_bundle_over_curve(rank, deg, g).unwrap());
    }
    for e in 0..=3 {
        out.push(hirzebruch(e, 1, e as i64 + 1).unwrap());
    }
    for k in 0..=8 {
        out.push(blown_up_plane(k).unwrap());
    }
    out.into_iter().map(|x| (x.kind().label(), x)).collect()
}

pub fn surfaces() -> Vec<(String, VarietyModel)> {
    catalog().into_iter().filter(|(_, x)| x.dimension() == 2).collect()
}

pub fn threefolds() -> Vec<(String, VarietyModel)> {
    catalog().into_iter().filter(|(_, x)| x.dimension() == 3).collect()
}

/// Random integer combination of the degree-`d` basis.
pub fn random_class(x: &VarietyModel, d: usize, rng: &mut impl Rng, bound: i64) -> GradedClass {
    let ring = x.ring();
    let terms: Vec<_> = ring.basis(d).iter().map(|m| (m.clone(), int(rng.gen_range(-bound..=bound)))).collect();
    GradedClass::from_terms(ring, terms).unwrap()
}

/// Random class with components in every degree `0..=n`.
pub fn random_mixed(x: &VarietyModel, rng: &mut impl Rng) -> GradedClass {
    let mut acc = x.zero();
    for d in 0..=x.dimension() {
        acc += &random_class(x, d, rng, 3);
    }
    acc
}

pub fn random_chern(x: &VarietyModel, rank: usize, rng: &mut impl Rng) -> ChernData {
    let mut total = x.one();
    for i in 1..=rank.min(x.dimension()) {
        total += &random_class(x, i, rng, 4);
    }
    ChernData::new(rank, total).unwrap()
}

pub fn random_atom(x: &VarietyModel, rank: usize, rng: &mut impl Rng) -> BundleExpr {
    BundleExpr::atom("A", rank, random_chern(x, rank, rng).total)
}

/// Random bundle built only from genuine bundles, so that HRR must give integers.
pub fn random_geometric(x: &VarietyModel, rng: &mut impl Rng, depth: usize) -> BundleExpr {
    let choice = if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..8) };
    match choice {
        0 => BundleExpr::line(&random_class(x, 1, rng, 3)),
        1 => tangent(x),
        2 => match x.kind() {
            CatalogKind::Quadric { n } if *n <= 4 => {
                let which = if *n == 3 { 1 } else { rng.gen_range(1..=2) };
                spinor(x, which).unwrap()
            }
            _ => BundleExpr::trivial(x, rng.gen_range(1..=2)),
        },
        3 | 4 => random_geometric(x, rng, depth - 1).sum(random_geometric(x, rng, depth - 1)),
        5 => random_geometric(x, rng, depth - 1).dual(),
        6 => random_geometric(x, rng, depth - 1).twist(random_class(x, 1, rng, 2)),
        _ => {
            let inner = random_geometric(x, rng, 0);
            if inner.rank() >= 2 && inner.rank() <= 4 {
                inner.ext(2)
            } else if !x.projections().is_empty() {
                let i = rng.gen_range(1..=x.projections().len());
                let base = &x.projection(i).unwrap().target;
                BundleExpr::line(&random_class(base, 1, rng, 3)).pullback(i)
            } else {
                inner.det()
            }
        }
    }
}
