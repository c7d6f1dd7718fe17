//! Brute-force verifiers, deliberately independent of the closed formulas
//! used elsewhere:
//!
//! * [`roots_chern`] expands products over formal Chern roots and rewrites
//!   the symmetric result in elementary symmetric functions by solving a
//!   linear system;
//! * [`determinant_p`] expands the banded determinant by cofactors;
//! * [`kunneth_check`] multiplies on a product variety factor by factor.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::bundle::ChernData;
use crate::catalog::{CatalogKind, VarietyModel};
use crate::error::{malformed, unsupported, Error, Result};
use crate::rational::{binomial, Rational};
use crate::ring::{GradedClass, Monomial};
use crate::schur::SchurPoly;

/// Largest rank handled by the root expansion.
pub const MAX_ORACLE_RANK: usize = 5;

/// Sparse polynomial over `Q` in `nvars` variables of weight 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Product with every term of total degree above `max` dropped.
    pub fn mul_truncated(&self, other: &Poly, max: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (a, u) in &self.terms {
            let da: u32 = a.iter().sum();
            for (b, v) in &other.terms {
                if da + b.iter().sum::<u32>() > max {
                    continue;
                }
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, u * v);
            }
        }
        out
    }

    pub fn homogeneous_part(&self, degree: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == degree).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }
}

/// Solves `A a = b` exactly by Gaussian elimination; `None` if inconsistent
/// or underdetermined. `rows[i]` is row `i` of `A`.
pub fn solve_linear(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(p) = (pivot_row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            return None;
        };
        rows.swap(pivot_row, p);
        rhs.swap(pivot_row, p);
        let inv = Rational::one() / rows[pivot_row][col].clone();
        for j in col..ncols {
            rows[pivot_row][j] = &rows[pivot_row][j] * &inv;
        }
        rhs[pivot_row] = &rhs[pivot_row] * &inv;
        for i in 0..rows.len() {
            if i == pivot_row || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for j in col..ncols {
                let delta = &factor * &rows[pivot_row][j];
                rows[i][j] -= delta;
            }
            let delta = &factor * &rhs[pivot_row];
            rhs[i] -= delta;
        }
        pivot_row += 1;
    }
    if rhs[pivot_row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(rhs[..ncols].to_vec())
}

#[derive(Clone, Debug)]
pub enum RootOp {
    Dual,
    /// Tensor with the line bundle of the given divisor class.
    Twist(GradedClass),
    Ext(usize),
}

/// Exponent vectors `λ_1..λ_r` with `Σ j λ_j = weight`.
fn weighted_partitions(r: usize, weight: usize) -> Vec<Vec<u32>> {
    fn go(j: usize, r: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j > r {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for times in 0..=left / j {
            cur.push(times as u32);
            go(j + 1, r, left - times * j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, r, weight, &mut Vec::new(), &mut out);
    out
}

/// Chern data of `op(E)` for `E` with data `c` of rank at most 5, by
/// expanding over formal roots `x_1..x_r` (and `y = c_1(L)` for twists).
pub fn roots_chern(op: &RootOp, x: &VarietyModel, c: &ChernData) -> Result<ChernData> {
    let r = c.rank;
    if r > MAX_ORACLE_RANK {
        return Err(unsupported!("the root oracle handles rank at most {}", MAX_ORACLE_RANK));
    }
    let n = x.dimension() as u32;
    let nvars = r + 1;
    let y = r;
    let roots: Vec<Poly> = match op {
        RootOp::Dual => (0..r).map(|i| Poly::var(nvars, i).scale(&-Rational::one())).collect(),
        RootOp::Twist(l) => {
            if !l.is_homogeneous_of(1) {
                return Err(malformed!("twist needs a divisor class"));
            }
            (0..r).map(|i| Poly::var(nvars, i).add(&Poly::var(nvars, y))).collect()
        }
        RootOp::Ext(p) => subsets(r, *p)
            .into_iter()
            .map(|s| s.into_iter().fold(Poly::zero(nvars), |acc, i| acc.add(&Poly::var(nvars, i))))
            .collect(),
    };
    let new_rank = roots.len();
    let one = Poly::constant(nvars, Rational::one());
    let mut total = one.clone();
    for root in &roots {
        total = total.mul_truncated(&one.add(root), n);
    }
    // elementary symmetric functions of the original roots
    let mut e_total = one.clone();
    for i in 0..r {
        e_total = e_total.mul_truncated(&one.add(&Poly::var(nvars, i)), r as u32);
    }
    let e: Vec<Poly> = (0..=r as u32).map(|j| e_total.homogeneous_part(j)).collect();

    let ring = c.total.ring();
    let line = match op {
        RootOp::Twist(l) => l.clone(),
        _ => GradedClass::zero(ring),
    };
    let uses_y = matches!(op, RootOp::Twist(_));
    let mut result = GradedClass::one(ring);
    for k in 1..=n as usize {
        let target = total.homogeneous_part(k as u32);
        let mut basis: Vec<(Vec<u32>, u32, Poly)> = Vec::new();
        for beta in 0..=if uses_y { k } else { 0 } {
            for lambda in weighted_partitions(r, k - beta) {
                let mut p = Poly::var(nvars, y);
                p = p_pow(&p, beta as u32, nvars);
                for (j, &times) in lambda.iter().enumerate() {
                    for _ in 0..times {
                        p = p.mul_truncated(&e[j + 1], u32::MAX);
                    }
                }
                basis.push((lambda, beta as u32, p));
            }
        }
        if basis.is_empty() {
            if target.terms.is_empty() {
                continue;
            }
            return Err(Error::InternalConsistency("symmetric part has no elementary expansion".into()));
        }
        let mut monomials: Vec<Vec<u32>> = target.terms.keys().cloned().collect();
        for (_, _, p) in &basis {
            monomials.extend(p.terms.keys().cloned());
        }
        monomials.sort();
        monomials.dedup();
        let rows: Vec<Vec<Rational>> = monomials
            .iter()
            .map(|m| basis.iter().map(|(_, _, p)| p.terms.get(m).cloned().unwrap_or_else(Rational::zero)).collect())
            .collect();
        let rhs: Vec<Rational> =
            monomials.iter().map(|m| target.terms.get(m).cloned().unwrap_or_else(Rational::zero)).collect();
        let coeffs = solve_linear(rows, rhs).ok_or_else(|| {
            Error::InternalConsistency(alloc::format!("degree {} part is not symmetric in the roots", k))
        })?;
        for ((lambda, beta, _), a) in basis.iter().zip(coeffs) {
            if a.is_zero() {
                continue;
            }
            let mut term = line.pow(*beta);
            for (j, &times) in lambda.iter().enumerate() {
                term = &term * &c.c(j + 1).pow(times);
            }
            result += &term.scale(&a);
        }
    }
    debug_assert_eq!(new_rank as i64, match op {
        RootOp::Ext(p) => binomial(r as i64, *p as i64),
        _ => r as i64,
    });
    Ok(ChernData { rank: new_rank, total: result })
}

fn p_pow(p: &Poly, e: u32, nvars: usize) -> Poly {
    let mut acc = Poly::constant(nvars, Rational::one());
    for _ in 0..e {
        acc = acc.mul_truncated(p, u32::MAX);
    }
    acc
}

fn subsets(r: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << r) {
        if mask.count_ones() as usize == p {
            out.push((0..r).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

/// The `n x n` determinant with `x1` on the diagonal, `x2` just above it and
/// `1` just below it, by cofactor expansion along the first row.
pub fn determinant_p(n: usize) -> Result<SchurPoly> {
    if n == 0 || n > 8 {
        return Err(unsupported!("the literal determinant is limited to 1 <= n <= 8"));
    }
    let entry = |i: usize, j: usize| -> SchurPoly {
        if i == j {
            SchurPoly::monomial(1, 1, 0)
        } else if j == i + 1 {
            SchurPoly::monomial(1, 0, 1)
        } else if i == j + 1 {
            SchurPoly::monomial(1, 0, 0)
        } else {
            SchurPoly::zero()
        }
    };
    fn det(row: usize, cols: &[usize], entry: &dyn Fn(usize, usize) -> SchurPoly) -> SchurPoly {
        if cols.is_empty() {
            return SchurPoly::monomial(1, 0, 0);
        }
        let mut acc = SchurPoly::zero();
        for (pos, &col) in cols.iter().enumerate() {
            let a = entry(row, col);
            if a == SchurPoly::zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != col).collect();
            let minor = det(row + 1, &rest, entry);
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            acc = acc.add(&a.mul(&minor).scale(sign));
        }
        acc
    }
    let cols: Vec<usize> = (0..n).collect();
    Ok(det(0, &cols, &entry))
}

/// Multiplies `a` and `b` on a product variety by normalizing each factor's
/// part in the factor ring and tensoring, then compares with the product
/// ring's own multiplication.
pub fn kunneth_check(x: &VarietyModel, a: &GradedClass, b: &GradedClass) -> Result<bool> {
    if !matches!(x.kind(), CatalogKind::Product { .. }) {
        return Err(malformed!("Künneth check needs a product variety"));
    }
    if !a.same_ring(&x.one()) || !b.same_ring(&x.one()) {
        return Err(malformed!("classes must live on the product"));
    }
    let factors: Vec<&VarietyModel> = x.projections().iter().map(|p| p.target.as_ref()).collect();
    let widths: Vec<usize> = factors.iter().map(|f| f.ring().generators().len()).collect();
    let mut expected: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let prod = ma.times(mb);
            let mut pieces: Vec<(Vec<u32>, Rational)> = vec![(Vec::new(), ca * cb)];
            let mut offset = 0;
            for (f, &w) in factors.iter().zip(&widths) {
                let part = Monomial::from_exponents(prod.exponents()[offset..offset + w].to_vec());
                offset += w;
                let nf = if f.ring().degree_of(&part) > f.dimension() {
                    f.zero()
                } else {
                    f.ring().normal_form(&part)?
                };
                let mut next = Vec::new();
                for (prefix, coeff) in &pieces {
                    for (m, v) in nf.terms() {
                        let mut e = prefix.clone();
                        e.extend_from_slice(m.exponents());
                        next.push((e, coeff * v));
                    }
                }
                pieces = next;
            }
            for (e, v) in pieces {
                let slot = expected.entry(Monomial::from_exponents(e)).or_insert_with(Rational::zero);
                *slot += v;
            }
        }
    }
    expected.retain(|_, v| !v.is_zero());
    let direct: BTreeMap<Monomial, Rational> =
        (a * b).terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    Ok(direct == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{chern, BundleExpr};
    use crate::catalog::{product, projective_space};
    use crate::rational::int;
    use crate::schur::schur_p;
    use alloc::sync::Arc;

    #[test]
    fn linear_solver() {
        let rows = vec![vec![int(2), int(1)], vec![int(1), int(-1)], vec![int(3), int(0)]];
        assert_eq!(solve_linear(rows.clone(), vec![int(3), int(0), int(3)]), Some(vec![int(1), int(1)]));
        assert_eq!(solve_linear(rows, vec![int(3), int(0), int(4)]), None);
    }

    #[test]
    fn dual_and_split_exterior_square() {
        let p3 = projective_space(3).unwrap();
        let h = p3.generator("h").unwrap();
        let c = chern(&BundleExpr::atom("E", 2, &(&p3.one() + &h.scale(&int(3))) + &h.pow(2)), &p3).unwrap();
        let dual = roots_chern(&RootOp::Dual, &p3, &c).unwrap();
        assert_eq!(dual.c(1), -c.c(1));
        assert_eq!(dual.c(2), c.c(2));

        let lines = [1, 2, 5].map(|a| BundleExpr::line(&h.scale(&int(a))));
        let e = BundleExpr::sum_all(lines).unwrap();
        let ext = roots_chern(&RootOp::Ext(2), &p3, &chern(&e, &p3).unwrap()).unwrap();
        let pairwise = BundleExpr::sum_all([3, 6, 7].map(|a| BundleExpr::line(&h.scale(&int(a))))).unwrap();
        assert_eq!(ext, chern(&pairwise, &p3).unwrap());
    }

    #[test]
    fn literal_determinants() {
        assert_eq!(determinant_p(2).unwrap(), schur_p(2).unwrap());
        let p5 = determinant_p(5).unwrap();
        assert_eq!(
            p5,
            SchurPoly::monomial(1, 5, 0).add(&SchurPoly::monomial(-4, 3, 1)).add(&SchurPoly::monomial(3, 1, 2))
        );
        assert!(determinant_p(9).is_err());
    }

    #[test]
    fn kunneth_on_segre_product() {
        let p1 = Arc::new(projective_space(1).unwrap());
        let p2 = Arc::new(projective_space(2).unwrap());
        let x = product(&[p1, p2]).unwrap();
        let h = x.hyperplane().clone();
        assert!(kunneth_check(&x, &h.pow(2), &h).unwrap());
        assert_eq!(h.pow(3).integrate(), int(3));
        assert!(kunneth_check(&projective_space(2).unwrap(), &h, &h).is_err());
    }
}
