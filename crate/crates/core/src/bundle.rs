//! Bundle expressions and their characteristic classes.
//!
//! Whitney sums multiply total Chern classes, duals flip odd classes, line
//! twists use the binomial expansion, and exterior powers go through the
//! Chern character: `ch(Λ^p E)` follows from Adams operations by Newton's
//! identity `p·λ^p = Σ (-1)^{i-1} ψ^i λ^{p-i}`, and the total Chern class is
//! recovered from the power sums.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::catalog::{CatalogKind, VarietyModel};
use crate::error::{malformed, unsupported, Error, Result};
use crate::rational::{binomial, factorial, int, Rational};
use crate::ring::GradedClass;

/// Largest rank accepted by exterior powers.
pub const MAX_EXT_RANK: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub enum BundleExpr {
    Atom { name: String, rank: usize, total: GradedClass },
    Sum(Box<BundleExpr>, Box<BundleExpr>),
    Dual(Box<BundleExpr>),
    TwistByLine(Box<BundleExpr>, GradedClass),
    Det(Box<BundleExpr>),
    Ext(usize, Box<BundleExpr>),
    /// Pullback along the 1-based registered projection of the ambient variety.
    Pullback { projection: usize, inner: Box<BundleExpr> },
}

impl BundleExpr {
    pub fn atom(name: &str, rank: usize, total: GradedClass) -> Self {
        BundleExpr::Atom { name: name.into(), rank, total }
    }

    /// `O(D)` for a divisor class `D`.
    pub fn line(divisor: &GradedClass) -> Self {
        let total = &GradedClass::one(divisor.ring()) + divisor;
        BundleExpr::Atom { name: "line".into(), rank: 1, total }
    }

    pub fn trivial(x: &VarietyModel, rank: usize) -> Self {
        BundleExpr::Atom { name: "trivial".into(), rank, total: x.one() }
    }

    pub fn sum(self, other: BundleExpr) -> Self {
        BundleExpr::Sum(Box::new(self), Box::new(other))
    }

    /// Direct sum of all items; `None` for an empty list.
    pub fn sum_all(items: impl IntoIterator<Item = BundleExpr>) -> Option<Self> {
        items.into_iter().reduce(BundleExpr::sum)
    }

    /// `self^{⊕ copies}`.
    pub fn copies(self, copies: usize) -> Option<Self> {
        Self::sum_all(core::iter::repeat_n(self, copies))
    }

    pub fn dual(self) -> Self {
        BundleExpr::Dual(Box::new(self))
    }

    pub fn twist(self, divisor: GradedClass) -> Self {
        BundleExpr::TwistByLine(Box::new(self), divisor)
    }

    pub fn det(self) -> Self {
        BundleExpr::Det(Box::new(self))
    }

    pub fn ext(self, p: usize) -> Self {
        BundleExpr::Ext(p, Box::new(self))
    }

    pub fn pullback(self, projection: usize) -> Self {
        BundleExpr::Pullback { projection, inner: Box::new(self) }
    }

    pub fn rank(&self) -> usize {
        match self {
            BundleExpr::Atom { rank, .. } => *rank,
            BundleExpr::Sum(a, b) => a.rank() + b.rank(),
            BundleExpr::Dual(e) | BundleExpr::TwistByLine(e, _) => e.rank(),
            BundleExpr::Pullback { inner, .. } => inner.rank(),
            BundleExpr::Det(_) => 1,
            BundleExpr::Ext(p, e) => binomial(e.rank() as i64, *p as i64) as usize,
        }
    }
}

/// Rank together with the total Chern class.
#[derive(Clone, Debug, PartialEq)]
pub struct ChernData {
    pub rank: usize,
    pub total: GradedClass,
}

impl ChernData {
    pub fn new(rank: usize, total: GradedClass) -> Result<Self> {
        if total.constant_term() != Rational::one() || !total.component(0).is_homogeneous_of(0) {
            return Err(malformed!("total Chern class must start with 1"));
        }
        if let Some(top) = total.top_degree() {
            if top > rank {
                return Err(malformed!("rank {} bundle cannot have c_{} = {}", rank, top, total.component(top)));
            }
        }
        Ok(ChernData { rank, total })
    }

    /// `c_i`; zero above the rank or the dimension.
    pub fn c(&self, i: usize) -> GradedClass {
        self.total.component(i)
    }
}

/// Total Chern class of `e` on `x`.
pub fn chern(e: &BundleExpr, x: &VarietyModel) -> Result<ChernData> {
    let n = x.dimension();
    let belongs = |c: &GradedClass| -> Result<()> {
        if c.same_ring(&x.one()) {
            Ok(())
        } else {
            Err(malformed!("bundle expression refers to a class outside {}", x.kind().label()))
        }
    };
    match e {
        BundleExpr::Atom { rank, total, .. } => {
            belongs(total)?;
            ChernData::new(*rank, total.clone())
        }
        BundleExpr::Sum(a, b) => {
            let (a, b) = (chern(a, x)?, chern(b, x)?);
            Ok(ChernData { rank: a.rank + b.rank, total: &a.total * &b.total })
        }
        BundleExpr::Dual(inner) => {
            let d = chern(inner, x)?;
            let mut total = x.zero();
            for i in 0..=n {
                let c = d.c(i);
                total += &(if i % 2 == 0 { c } else { -c });
            }
            Ok(ChernData { rank: d.rank, total })
        }
        BundleExpr::TwistByLine(inner, divisor) => {
            belongs(divisor)?;
            if !divisor.is_homogeneous_of(1) {
                return Err(malformed!("twist needs a divisor class"));
            }
            let d = chern(inner, x)?;
            Ok(ChernData { rank: d.rank, total: twisted_total(&d, divisor, n) })
        }
        BundleExpr::Det(inner) => {
            let d = chern(inner, x)?;
            Ok(ChernData { rank: 1, total: &x.one() + &d.c(1) })
        }
        BundleExpr::Ext(p, inner) => {
            let d = chern(inner, x)?;
            exterior_power(&d, *p, n)
        }
        BundleExpr::Pullback { projection, inner } => {
            let proj = x.projection(*projection)?;
            let d = chern(inner, &proj.target)?;
            Ok(ChernData { rank: d.rank, total: proj.pullback.apply(&d.total)? })
        }
    }
}

/// `c_k(E ⊗ L) = Σ_i binom(r-i, k-i) c_i(E) c_1(L)^{k-i}`.
fn twisted_total(d: &ChernData, l: &GradedClass, n: usize) -> GradedClass {
    let r = d.rank;
    let mut total = GradedClass::zero(l.ring());
    for k in 0..=r.min(n) {
        for i in 0..=k {
            let coeff = binomial((r - i) as i64, (k - i) as i64);
            if coeff != 0 {
                total += &(&d.c(i) * &l.pow((k - i) as u32)).scale(&int(coeff));
            }
        }
    }
    total
}

/// Power sums `p_1..p_n` of the Chern roots, by Newton's identities.
pub fn power_sums(d: &ChernData, n: usize) -> Vec<GradedClass> {
    let ring = d.total.ring();
    let mut p: Vec<GradedClass> = Vec::with_capacity(n + 1);
    p.push(GradedClass::scalar(ring, int(d.rank as i64)));
    for k in 1..=n {
        let mut acc = d.c(k).scale(&int(if k % 2 == 1 { k as i64 } else { -(k as i64) }));
        for i in 1..k {
            let sign = if i % 2 == 1 { int(1) } else { int(-1) };
            acc += &(&d.c(i) * &p[k - i]).scale(&sign);
        }
        p.push(acc);
    }
    p
}

/// Chern character of a bundle with the given Chern data.
pub fn ch_of(d: &ChernData, n: usize) -> GradedClass {
    let p = power_sums(d, n);
    let mut ch = p[0].clone();
    for (k, pk) in p.iter().enumerate().skip(1) {
        ch += &pk.scale(&(Rational::one() / factorial(k)));
    }
    ch
}

/// Recovers Chern data from a Chern character whose degree-0 part is the rank.
fn chern_from_ch(ch: &GradedClass, n: usize) -> Result<ChernData> {
    let rank_q = ch.constant_term();
    let rank = match crate::rational::as_i64(&rank_q) {
        Some(r) if r >= 0 => r as usize,
        _ => return Err(Error::InternalConsistency(alloc::format!("rank {} is not a natural number", rank_q))),
    };
    let ring = ch.ring();
    let p: Vec<GradedClass> = (0..=n).map(|k| ch.component(k).scale(&factorial(k))).collect();
    let mut c: Vec<GradedClass> = Vec::with_capacity(n + 1);
    c.push(GradedClass::one(ring));
    for k in 1..=n {
        let mut acc = GradedClass::zero(ring);
        for i in 1..=k {
            let sign = if i % 2 == 1 { int(1) } else { int(-1) };
            acc += &(&c[k - i] * &p[i]).scale(&sign);
        }
        c.push(acc.scale(&(Rational::one() / int(k as i64))));
    }
    let mut total = GradedClass::zero(ring);
    for ck in &c {
        total += ck;
    }
    ChernData::new(rank, total).map_err(|e| Error::InternalConsistency(alloc::format!("{}", e)))
}

/// Adams operation `ψ^j` on a Chern character.
fn adams(ch: &GradedClass, j: i64, n: usize) -> GradedClass {
    let mut out = GradedClass::zero(ch.ring());
    for k in 0..=n {
        out += &ch.component(k).scale(&int(j.pow(k as u32)));
    }
    out
}

fn exterior_power(d: &ChernData, p: usize, n: usize) -> Result<ChernData> {
    if d.rank > MAX_EXT_RANK {
        return Err(unsupported!("exterior powers are limited to rank {}", MAX_EXT_RANK));
    }
    let ring = d.total.ring();
    if p > d.rank {
        return ChernData::new(0, GradedClass::one(ring));
    }
    let ch = ch_of(d, n);
    let mut lambdas: Vec<GradedClass> = alloc::vec![GradedClass::one(ring)];
    for q in 1..=p {
        let mut acc = GradedClass::zero(ring);
        for i in 1..=q {
            let term = &adams(&ch, i as i64, n) * &lambdas[q - i];
            acc += &(if i % 2 == 1 { term } else { -term });
        }
        lambdas.push(acc.scale(&(Rational::one() / int(q as i64))));
    }
    let out = chern_from_ch(&lambdas[p], n)?;
    let expected = binomial(d.rank as i64, p as i64) as usize;
    if out.rank != expected {
        return Err(Error::InternalConsistency(alloc::format!(
            "exterior power rank {} differs from binomial {}",
            out.rank,
            expected
        )));
    }
    Ok(out)
}

/// Total Segre class: the inverse of the total Chern class.
pub fn segre(e: &BundleExpr, x: &VarietyModel) -> Result<GradedClass> {
    let d = chern(e, x)?;
    Ok(segre_of(&d, x.dimension()))
}

pub fn segre_of(d: &ChernData, n: usize) -> GradedClass {
    let ring = d.total.ring();
    let mut s: Vec<GradedClass> = alloc::vec![GradedClass::one(ring)];
    for k in 1..=n {
        let mut acc = GradedClass::zero(ring);
        for i in 1..=k {
            acc += &(&d.c(i) * &s[k - i]);
        }
        s.push(-acc);
    }
    s.iter().fold(GradedClass::zero(ring), |acc, x| &acc + x)
}

pub fn chern_character(e: &BundleExpr, x: &VarietyModel) -> Result<GradedClass> {
    Ok(ch_of(&chern(e, x)?, x.dimension()))
}

/// Coefficients `b_1..b_n` of `log(t / (1 - e^{-t}))`.
fn todd_log_coefficients(n: usize) -> Vec<Rational> {
    // (1 - e^{-t})/t = Σ (-1)^j t^j/(j+1)!
    let g: Vec<Rational> = (0..=n)
        .map(|j| {
            let s = if j % 2 == 0 { int(1) } else { int(-1) };
            s / factorial(j + 1)
        })
        .collect();
    // log(t/(1-e^{-t})) = -log(g); g = 1 + u
    let mut u = g.clone();
    u[0] = Rational::zero();
    let mut log_g = alloc::vec![Rational::zero(); n + 1];
    let mut power = alloc::vec![Rational::zero(); n + 1];
    power[0] = Rational::one();
    for i in 1..=n {
        power = series_mul(&power, &u, n);
        let coeff = if i % 2 == 1 { int(1) } else { int(-1) } / int(i as i64);
        for k in 0..=n {
            log_g[k] += &power[k] * &coeff;
        }
    }
    log_g.into_iter().map(|c| -c).collect()
}

fn series_mul(a: &[Rational], b: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = alloc::vec![Rational::zero(); n + 1];
    for i in 0..=n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..=n - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

/// `exp(y)` for a nilpotent class `y` without constant term.
fn exp_nilpotent(y: &GradedClass, n: usize) -> GradedClass {
    let mut acc = GradedClass::one(y.ring());
    let mut term = GradedClass::one(y.ring());
    for j in 1..=n {
        term = (&term * y).scale(&(Rational::one() / int(j as i64)));
        acc += &term;
    }
    acc
}

/// Todd class of a bundle with the given Chern data.
pub fn todd_of(d: &ChernData, n: usize) -> GradedClass {
    let b = todd_log_coefficients(n);
    let p = power_sums(d, n);
    let mut y = GradedClass::zero(d.total.ring());
    for k in 1..=n {
        y += &p[k].scale(&b[k]);
    }
    exp_nilpotent(&y, n)
}

/// Todd class of the tangent bundle of `x`.
pub fn todd(x: &VarietyModel) -> GradedClass {
    let n = x.dimension();
    let tangent = ChernData { rank: n, total: x.tangent_chern().clone() };
    todd_of(&tangent, n)
}

/// Tangent bundle of a catalog model as an atom.
pub fn tangent(x: &VarietyModel) -> BundleExpr {
    BundleExpr::atom("tangent", x.dimension(), x.tangent_chern().clone())
}

/// Spinor bundles on `Q_2`, `Q_3`, `Q_4` (twisted so that they are Ulrich).
/// `which` selects the family (1 or 2) on even quadrics and must be 1 on `Q_3`.
pub fn spinor(x: &VarietyModel, which: usize) -> Result<BundleExpr> {
    let n = match x.kind() {
        CatalogKind::Quadric { n } => *n,
        other => return Err(malformed!("spinor bundles live on quadrics, not {}", other.label())),
    };
    let pick = |name: &str| x.generator(name);
    let (rank, total) = match (n, which) {
        (2, 1) => (1, &x.one() + &pick("a")?),
        (2, 2) => (1, &x.one() + &pick("b")?),
        (3, 1) => (2, &(&x.one() + x.hyperplane()) + &pick("L")?),
        (4, 1) => (2, &(&x.one() + x.hyperplane()) + &pick("a")?),
        (4, 2) => (2, &(&x.one() + x.hyperplane()) + &pick("b")?),
        (2 | 4, _) | (3, _) => return Err(malformed!("Q{} has no spinor bundle number {}", n, which)),
        _ => return Err(unsupported!("spinor bundles are registered on Q2, Q3 and Q4 only")),
    };
    let name = alloc::format!("spinor{}", which);
    Ok(BundleExpr::atom(&name, rank, total))
}
