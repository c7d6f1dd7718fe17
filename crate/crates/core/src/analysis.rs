//! Numerical invariants of bundles: Euler characteristics by HRR,
//! degeneracy-locus classes, bigness, Eagon–Northcott Hilbert polynomials
//! and the Riemann–Roch check on the top Chern class of threefold bundles.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::bundle::{ch_of, chern, segre_of, todd, BundleExpr, ChernData};
use crate::catalog::VarietyModel;
use crate::error::{malformed, unsupported, Error, Result};
use crate::rational::{binomial, int, rat, Rational};
use crate::ring::GradedClass;
use crate::schur::schur_p;

/// `∫ ch(e) td(X)` without any integrality check.
pub fn hrr_chi(x: &VarietyModel, e: &BundleExpr) -> Result<Rational> {
    let d = chern(e, x)?;
    Ok(chi_of(x, &d))
}

pub fn chi_of(x: &VarietyModel, d: &ChernData) -> Rational {
    (&ch_of(d, x.dimension()) * &todd(x)).integrate()
}

/// Euler characteristic by HRR; a non-integer value means the model is wrong.
pub fn euler_char(x: &VarietyModel, e: &BundleExpr) -> Result<Rational> {
    let chi = hrr_chi(x, e)?;
    if !chi.is_integer() {
        return Err(Error::InternalConsistency(format!(
            "Euler characteristic {} on {} is not an integer",
            chi,
            x.kind().label()
        )));
    }
    Ok(chi)
}

/// `χ(O_X)`.
pub fn chi_structure_sheaf(x: &VarietyModel) -> Result<Rational> {
    euler_char(x, &BundleExpr::trivial(x, 1))
}

pub const GLOBALLY_GENERATED_NOTE: &str =
    "assumes the bundle is globally generated and the morphism is general";

#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyClass {
    /// `c_k(e)`, the class of the degeneracy locus.
    pub class: GradedClass,
    pub empty: bool,
    pub note: &'static str,
}

fn check_k(k: usize, rank: usize, n: usize) -> Result<()> {
    if k == 0 || k > rank.min(n) {
        return Err(malformed!("k = {} must lie in 1..={} (rank {}, dimension {})", k, rank.min(n), rank, n));
    }
    Ok(())
}

/// Class of the locus where `O^{r+1-k} -> e` drops rank; empty iff `c_k = 0`.
pub fn degeneracy_class(x: &VarietyModel, e: &BundleExpr, k: usize) -> Result<DegeneracyClass> {
    let d = chern(e, x)?;
    check_k(k, d.rank, x.dimension())?;
    let class = d.c(k);
    Ok(DegeneracyClass { empty: class.is_zero(), class, note: GLOBALLY_GENERATED_NOTE })
}

/// `c_{k+1}^2 - c_k c_{k+2}`, the class of the locus where the rank drops by one more.
/// The note is set when the class lives above the dimension.
pub fn porteous_singular_class(
    x: &VarietyModel,
    e: &BundleExpr,
    k: usize,
) -> Result<(GradedClass, Option<String>)> {
    let d = chern(e, x)?;
    let class = &d.c(k + 1).pow(2) - &(&d.c(k) * &d.c(k + 2));
    let note = (2 * k + 2 > x.dimension()).then(|| {
        format!("degree {} exceeds dimension {}; the class is zero by truncation", 2 * k + 2, x.dimension())
    });
    Ok((class, note))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bigness {
    /// `∫ s_n(e^*)`.
    pub top_segre: Rational,
    pub big: bool,
    /// `∫ c_1^n - (n-1) c_1^{n-2} c_2`, evaluated when `c_2^2 = 0` and `c_3 = 0`.
    pub closed_form: Option<Rational>,
}

/// Bigness of a nef bundle from the top Segre class of its dual.
pub fn bigness(x: &VarietyModel, e: &BundleExpr) -> Result<Bigness> {
    let n = x.dimension();
    let dual = chern(&e.clone().dual(), x)?;
    let top_segre = segre_of(&dual, n).component(n).integrate();
    let d = chern(e, x)?;
    let mut closed_form = None;
    if n >= 2 && d.c(2).pow(2).is_zero() && d.c(3).is_zero() {
        let p = schur_p(n)?.mod_x2_squared();
        let value = p.evaluate(&d.c(1), &d.c(2)).integrate();
        if value != top_segre {
            return Err(Error::InternalConsistency(format!(
                "top Segre class {} differs from the closed form {}",
                top_segre, value
            )));
        }
        closed_form = Some(value);
    }
    Ok(Bigness { big: top_segre.is_positive(), top_segre, closed_form })
}

/// `χ(O_Z(m))` for the locus `Z` cut out by `O^{r+1-k} -> e`, from the
/// Eagon–Northcott resolution
/// `0 -> O(-D)^{b(r-1,r-k)} -> e(-D)^{b(r-2,r-k)} -> ... -> Λ^{k-1}e(-D) -> O -> O_Z -> 0`
/// with `D = c_1(e)`.
pub fn en_hilbert_polynomial(
    x: &VarietyModel,
    e: &BundleExpr,
    k: usize,
    m_values: &[i64],
) -> Result<Vec<Rational>> {
    if k > 3 {
        return Err(unsupported!("Eagon–Northcott terms are modeled for k <= 3"));
    }
    let d = chern(e, x)?;
    let r = d.rank;
    check_k(k, r, x.dimension())?;
    let minus_d = -d.c(1);
    let h = x.hyperplane();
    let mut out = Vec::with_capacity(m_values.len());
    for &m in m_values {
        let mh = h.scale(&int(m));
        let mut chi = euler_char(x, &BundleExpr::line(&mh))?;
        for j in 0..k {
            let mult = binomial((r - 1 - j) as i64, (r - k) as i64);
            if mult == 0 {
                continue;
            }
            let term = e.clone().ext(j).twist(&minus_d + &mh);
            let sign = if (k - 1 - j).is_multiple_of(2) { int(1) } else { int(-1) };
            chi -= sign * int(mult) * euler_char(x, &term)?;
        }
        out.push(chi);
    }
    if k == x.dimension() {
        let expected = d.c(k).integrate();
        if let Some(bad) = out.iter().find(|v| **v != expected) {
            return Err(Error::InternalConsistency(format!(
                "zero-dimensional locus has Hilbert polynomial value {} but degree {}",
                bad, expected
            )));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RrC3 {
    pub lhs: Rational,
    pub rhs: Rational,
    pub pass: bool,
}

/// On a threefold, compares `∫ c_3(e)` with
/// `2[r χ(O_X) - χ(e^*) - χ(O_Y) - ½ ∫ c_2(e)(c_1(X) - c_1(e))]`,
/// where `Y` is a divisor in `|det e|` and `χ(O_Y)` is taken from its
/// closed form in `d_1 = c_1(e)` and the tangent classes.
pub fn rr_c3_crosscheck(x: &VarietyModel, e: &BundleExpr) -> Result<RrC3> {
    if x.dimension() != 3 {
        return Err(unsupported!("the c_3 check is defined on threefolds"));
    }
    let d = chern(e, x)?;
    if d.rank < 2 {
        return Err(malformed!("the c_3 check needs rank at least 2"));
    }
    let tangent = ChernData { rank: 3, total: x.tangent_chern().clone() };
    let (c1x, c2x) = (tangent.c(1), tangent.c(2));
    let d1 = d.c(1);
    let chi_o = chi_structure_sheaf(x)?;
    let chi_dual = hrr_chi(x, &e.clone().dual())?;
    let chi_y = (&(&d1 * &(&d1 - &c1x)) * &(&d1.scale(&int(2)) - &c1x)).integrate() * rat(1, 12)
        + (&d1 * &c2x).integrate() * rat(1, 12);
    let correction = (&d.c(2) * &(&c1x - &d1)).integrate() * rat(1, 2);
    let lhs = int(2) * (int(d.rank as i64) * chi_o - chi_dual - chi_y - correction);
    let rhs = d.c(3).integrate();
    Ok(RrC3 { pass: lhs == rhs, lhs, rhs })
}
