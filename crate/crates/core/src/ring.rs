//! Truncated graded-commutative rings over the rationals.
//!
//! A [`RingPresentation`] is a polynomial ring on weighted generators modulo a
//! finite set of rewrite rules plus degree truncation. Every monomial of
//! weighted degree at most the ring dimension is reduced once, at construction,
//! to a combination of irreducible basis monomials; multiplication then works
//! on those cached normal forms. Integration reads the top-degree component
//! against a fixed table.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{malformed, Error, Result};
use crate::rational::{format_rational, int, Rational};

/// Upper bound on rewrite steps for a single monomial before the system is
/// declared non-terminating.
pub const MAX_REWRITE_STEPS: usize = 100_000;

/// Exponent vector indexed by generator id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(generators: usize) -> Self {
        Monomial(vec![0; generators])
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// Single generator `g` raised to `e`.
    pub fn power(generators: usize, g: usize, e: u32) -> Self {
        let mut m = Self::one(generators);
        m.0[g] = e;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn weighted_degree(&self, degrees: &[usize]) -> usize {
        self.0.iter().zip(degrees).map(|(&e, &d)| e as usize * d).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

/// `lhs -> rhs` with `rhs` already a combination of irreducible monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Monomial,
    pub rhs: Vec<(Monomial, Rational)>,
}

/// A set of generators whose joint weighted degree may not exceed `bound`.
///
/// A single variety has one block covering every generator; products keep one
/// block per factor, which is what makes the tensor product truncate correctly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationBlock {
    pub generators: Vec<usize>,
    pub bound: usize,
}

type Terms = BTreeMap<Monomial, Rational>;

#[derive(Debug, PartialEq, Eq)]
pub struct RingPresentation {
    generators: Vec<Generator>,
    rules: Vec<RewriteRule>,
    blocks: Vec<TruncationBlock>,
    dimension: usize,
    integration: BTreeMap<Monomial, Rational>,
    basis: Vec<Vec<Monomial>>,
    normal_forms: BTreeMap<Monomial, Terms>,
}

/// Collects generators, rules and integrals before validation.
#[derive(Clone, Debug, Default)]
pub struct PresentationBuilder {
    generators: Vec<Generator>,
    rules: Vec<RewriteRule>,
    blocks: Vec<TruncationBlock>,
    dimension: usize,
    integration: Vec<(Monomial, Rational)>,
}

impl PresentationBuilder {
    pub fn new(dimension: usize) -> Self {
        PresentationBuilder { dimension, ..Default::default() }
    }

    pub fn generator(mut self, name: &str, degree: usize) -> Self {
        self.generators.push(Generator { name: name.into(), degree });
        self
    }

    pub fn generators(&self) -> usize {
        self.generators.len()
    }

    pub fn rule(mut self, lhs: Monomial, rhs: Vec<(Monomial, Rational)>) -> Self {
        self.rules.push(RewriteRule { lhs, rhs });
        self
    }

    pub fn block(mut self, generators: Vec<usize>, bound: usize) -> Self {
        self.blocks.push(TruncationBlock { generators, bound });
        self
    }

    pub fn integral(mut self, m: Monomial, value: Rational) -> Self {
        self.integration.push((m, value));
        self
    }

    pub fn build(self) -> Result<Arc<RingPresentation>> {
        RingPresentation::new(self)
    }
}

impl RingPresentation {
    fn new(b: PresentationBuilder) -> Result<Arc<Self>> {
        let ngens = b.generators.len();
        if b.generators.iter().any(|g| g.degree == 0) {
            return Err(malformed!("generators must have positive degree"));
        }
        let check_len = |m: &Monomial| {
            if m.len() == ngens {
                Ok(())
            } else {
                Err(malformed!("monomial has {} exponents, ring has {} generators", m.len(), ngens))
            }
        };
        for r in &b.rules {
            check_len(&r.lhs)?;
            for (m, _) in &r.rhs {
                check_len(m)?;
            }
        }
        let mut blocks = b.blocks;
        if blocks.is_empty() {
            blocks.push(TruncationBlock { generators: (0..ngens).collect(), bound: b.dimension });
        }
        let mut ring = RingPresentation {
            generators: b.generators,
            rules: b.rules,
            blocks,
            dimension: b.dimension,
            integration: BTreeMap::new(),
            basis: Vec::new(),
            normal_forms: BTreeMap::new(),
        };

        for r in &ring.rules {
            let d = ring.degree_of(&r.lhs);
            for (m, _) in &r.rhs {
                if ring.degree_of(m) != d {
                    return Err(malformed!("rule for {} is not homogeneous", ring.render_monomial(&r.lhs)));
                }
                if ring.reducible(m) {
                    return Err(malformed!(
                        "right-hand side {} of rule for {} is not irreducible",
                        ring.render_monomial(m),
                        ring.render_monomial(&r.lhs)
                    ));
                }
            }
        }

        let all = ring.monomials_up_to(ring.dimension);
        ring.basis = vec![Vec::new(); ring.dimension + 1];
        for m in &all {
            if !ring.truncated(m) && !ring.reducible(m) {
                let d = ring.degree_of(m);
                ring.basis[d].push(m.clone());
            }
        }
        let mut normal_forms = BTreeMap::new();
        for m in all {
            let mut steps = 0;
            let nf = ring.rewrite(&m, &mut |_| 0, &mut steps)?;
            normal_forms.insert(m, nf);
        }
        ring.normal_forms = normal_forms;

        for (m, v) in b.integration {
            check_len(&m)?;
            ring.integration.insert(m, v);
        }
        for m in &ring.basis[ring.dimension] {
            if !ring.integration.contains_key(m) {
                return Err(malformed!(
                    "integration table misses top-degree basis monomial {}",
                    ring.render_monomial(m)
                ));
            }
        }
        Ok(Arc::new(ring))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn blocks(&self) -> &[TruncationBlock] {
        &self.blocks
    }

    pub fn integration_table(&self) -> &BTreeMap<Monomial, Rational> {
        &self.integration
    }

    pub fn generator_id(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Irreducible monomials of each degree, in a fixed order.
    pub fn basis(&self, degree: usize) -> &[Monomial] {
        self.basis.get(degree).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree_of(&self, m: &Monomial) -> usize {
        let degrees: Vec<usize> = self.generators.iter().map(|g| g.degree).collect();
        m.weighted_degree(&degrees)
    }

    fn truncated(&self, m: &Monomial) -> bool {
        self.degree_of(m) > self.dimension
            || self.blocks.iter().any(|b| {
                let d: usize = b
                    .generators
                    .iter()
                    .map(|&g| m.0[g] as usize * self.generators[g].degree)
                    .sum();
                d > b.bound
            })
    }

    fn reducible(&self, m: &Monomial) -> bool {
        self.rules.iter().any(|r| r.lhs.divides(m))
    }

    /// All monomials of weighted degree at most `max`, in lexicographic order.
    pub fn monomials_up_to(&self, max: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.generators.len()];
        self.enumerate(0, max, &mut cur, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, g: usize, budget: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if g == self.generators.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let d = self.generators[g].degree;
        let mut e = 0;
        while e * d <= budget {
            cur[g] = e as u32;
            self.enumerate(g + 1, budget - e * d, cur, out);
            e += 1;
        }
        cur[g] = 0;
    }

    /// Rewrites `m` to normal form. Whenever several rules apply, `choose`
    /// receives the applicable rule indices and returns a position in that list.
    fn rewrite(
        &self,
        m: &Monomial,
        choose: &mut dyn FnMut(&[usize]) -> usize,
        steps: &mut usize,
    ) -> Result<Terms> {
        let mut out = Terms::new();
        if self.truncated(m) {
            return Ok(out);
        }
        let applicable: Vec<usize> =
            (0..self.rules.len()).filter(|&i| self.rules[i].lhs.divides(m)).collect();
        if applicable.is_empty() {
            out.insert(m.clone(), Rational::one());
            return Ok(out);
        }
        *steps += 1;
        if *steps > MAX_REWRITE_STEPS {
            return Err(Error::InternalConsistency(alloc::format!(
                "rewriting {} did not terminate",
                self.render_monomial(m)
            )));
        }
        let pick = applicable[choose(&applicable) % applicable.len()];
        let rule = &self.rules[pick];
        let q = rule.lhs.quotient_of(m);
        for (rm, c) in &rule.rhs {
            for (nm, nc) in self.rewrite(&rm.times(&q), choose, steps)? {
                add_term(&mut out, nm, c.clone() * nc);
            }
        }
        Ok(out)
    }

    /// Normal form of a monomial using the fixed rule order.
    pub fn normal_form(self: &Arc<Self>, m: &Monomial) -> Result<GradedClass> {
        if m.len() != self.generators.len() {
            return Err(malformed!("unknown generator in monomial of length {}", m.len()));
        }
        let terms = match self.normal_forms.get(m) {
            Some(t) => t.clone(),
            None => Terms::new(),
        };
        Ok(GradedClass { ring: self.clone(), terms })
    }

    /// Normal form computed afresh, with `choose` selecting among applicable rules.
    pub fn normal_form_by(
        self: &Arc<Self>,
        m: &Monomial,
        choose: &mut dyn FnMut(&[usize]) -> usize,
    ) -> Result<GradedClass> {
        if m.len() != self.generators.len() {
            return Err(malformed!("unknown generator in monomial of length {}", m.len()));
        }
        let mut steps = 0;
        let terms = self.rewrite(m, choose, &mut steps)?;
        Ok(GradedClass { ring: self.clone(), terms })
    }

    pub fn multiply(self: &Arc<Self>, a: &GradedClass, b: &GradedClass) -> Result<GradedClass> {
        self.check_owns(a)?;
        self.check_owns(b)?;
        let mut out = Terms::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let prod = ma.times(mb);
                if let Some(nf) = self.normal_forms.get(&prod) {
                    for (m, c) in nf {
                        add_term(&mut out, m.clone(), ca.clone() * cb * c);
                    }
                }
            }
        }
        Ok(GradedClass { ring: self.clone(), terms: out })
    }

    pub fn integrate(&self, a: &GradedClass) -> Rational {
        a.terms
            .iter()
            .filter_map(|(m, c)| self.integration.get(m).map(|v| c.clone() * v))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    fn check_owns(&self, a: &GradedClass) -> Result<()> {
        if core::ptr::eq(self, Arc::as_ptr(&a.ring)) || *a.ring == *self {
            Ok(())
        } else {
            Err(malformed!("class belongs to a different ring presentation"))
        }
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (g, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.generators[g].name.clone()),
                _ => parts.push(alloc::format!("{}^{}", self.generators[g].name, e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Inverse of [`render_monomial`](Self::render_monomial).
    pub fn parse_monomial(&self, s: &str) -> Result<Monomial> {
        let mut m = Monomial::one(self.generators.len());
        if s.trim() == "1" {
            return Ok(m);
        }
        for factor in s.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    (n.trim(), e.trim().parse::<u32>().map_err(|_| malformed!("bad exponent in {}", s))?)
                }
                None => (factor.trim(), 1),
            };
            let g = self.generator_id(name).ok_or_else(|| malformed!("unknown generator {}", name))?;
            m.0[g] += exp;
        }
        Ok(m)
    }
}

fn add_term(terms: &mut Terms, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Element of a truncated ring, kept in normal form.
#[derive(Clone)]
pub struct GradedClass {
    ring: Arc<RingPresentation>,
    terms: Terms,
}

impl GradedClass {
    pub fn zero(ring: &Arc<RingPresentation>) -> Self {
        GradedClass { ring: ring.clone(), terms: Terms::new() }
    }

    pub fn scalar(ring: &Arc<RingPresentation>, c: Rational) -> Self {
        let mut terms = Terms::new();
        add_term(&mut terms, Monomial::one(ring.generators.len()), c);
        GradedClass { ring: ring.clone(), terms }
    }

    pub fn one(ring: &Arc<RingPresentation>) -> Self {
        Self::scalar(ring, Rational::one())
    }

    pub fn generator(ring: &Arc<RingPresentation>, name: &str) -> Result<Self> {
        let g = ring.generator_id(name).ok_or_else(|| malformed!("unknown generator {}", name))?;
        ring.normal_form(&Monomial::power(ring.generators.len(), g, 1))
    }

    /// Builds a class from arbitrary (not necessarily reduced) terms.
    pub fn from_terms(
        ring: &Arc<RingPresentation>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut out = GradedClass::zero(ring);
        for (m, c) in terms {
            out = out + ring.normal_form(&m)?.scale(&c);
        }
        Ok(out)
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn same_ring(&self, other: &GradedClass) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    /// Homogeneous component of the given degree.
    pub fn component(&self, degree: usize) -> GradedClass {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.degree_of(m) == degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        GradedClass { ring: self.ring.clone(), terms }
    }

    /// Components of degree at most `degree`.
    pub fn truncate(&self, degree: usize) -> GradedClass {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.degree_of(m) <= degree)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        GradedClass { ring: self.ring.clone(), terms }
    }

    /// Coefficient of the degree-0 part.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.ring.generators.len()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_homogeneous_of(&self, degree: usize) -> bool {
        self.terms.keys().all(|m| self.ring.degree_of(m) == degree)
    }

    /// Largest degree with a nonzero component.
    pub fn top_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| self.ring.degree_of(m)).max()
    }

    pub fn scale(&self, c: &Rational) -> GradedClass {
        if c.is_zero() {
            return GradedClass::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c)).collect();
        GradedClass { ring: self.ring.clone(), terms }
    }

    pub fn try_add(&self, other: &GradedClass) -> Result<GradedClass> {
        if !self.same_ring(other) {
            return Err(malformed!("adding classes from different rings"));
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(GradedClass { ring: self.ring.clone(), terms })
    }

    pub fn try_mul(&self, other: &GradedClass) -> Result<GradedClass> {
        self.ring.multiply(self, other)
    }

    pub fn pow(&self, e: u32) -> GradedClass {
        let mut acc = GradedClass::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn integrate(&self) -> Rational {
        self.ring.integrate(self)
    }

    /// Coefficient of a basis monomial.
    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `degree -> [(monomial, coefficient)]`, basis order within each degree.
    pub fn by_degree(&self) -> BTreeMap<usize, Vec<(String, Rational)>> {
        let mut out: BTreeMap<usize, Vec<(String, Rational)>> = BTreeMap::new();
        for d in 0..=self.ring.dimension {
            for m in self.ring.basis(d) {
                if let Some(c) = self.terms.get(m) {
                    out.entry(d).or_default().push((self.ring.render_monomial(m), c.clone()));
                }
            }
        }
        out
    }
}

impl PartialEq for GradedClass {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Eq for GradedClass {}

impl fmt::Debug for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (_, parts) in self.by_degree() {
            for (m, c) in parts {
                let neg = c < Rational::zero();
                let mag = if neg { -c.clone() } else { c.clone() };
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if neg { '-' } else { '+' })?;
                }
                first = false;
                match (m.as_str(), mag == Rational::one()) {
                    ("1", _) => write!(f, "{}", format_rational(&mag))?,
                    (_, true) => write!(f, "{}", m)?,
                    (_, false) => write!(f, "{}*{}", format_rational(&mag), m)?,
                }
            }
        }
        Ok(())
    }
}

// Operators panic on mixed rings; use the `try_*` forms where that can happen.

impl Add for &GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: &GradedClass) -> GradedClass {
        self.try_add(rhs).expect("classes from different rings")
    }
}

impl Add for GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: GradedClass) -> GradedClass {
        &self + &rhs
    }
}

impl AddAssign<&GradedClass> for GradedClass {
    fn add_assign(&mut self, rhs: &GradedClass) {
        *self = &*self + rhs;
    }
}

impl Neg for &GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        self.scale(&int(-1))
    }
}

impl Neg for GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        -&self
    }
}

impl Sub for &GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: &GradedClass) -> GradedClass {
        self + &(-rhs)
    }
}

impl Sub for GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: GradedClass) -> GradedClass {
        &self - &rhs
    }
}

impl Mul for &GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: &GradedClass) -> GradedClass {
        self.try_mul(rhs).expect("classes from different rings")
    }
}

impl Mul for GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: GradedClass) -> GradedClass {
        &self * &rhs
    }
}

/// Ring homomorphism given by the images of the source generators.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: Arc<RingPresentation>,
    target: Arc<RingPresentation>,
    images: Vec<GradedClass>,
}

impl RingMap {
    pub fn new(
        source: &Arc<RingPresentation>,
        target: &Arc<RingPresentation>,
        images: Vec<GradedClass>,
    ) -> Result<Self> {
        if images.len() != source.generators.len() {
            return Err(malformed!("ring map needs one image per source generator"));
        }
        for (g, img) in source.generators.iter().zip(&images) {
            if !img.same_ring(&GradedClass::zero(target)) {
                return Err(malformed!("image of {} lives outside the target ring", g.name));
            }
            if !img.is_homogeneous_of(g.degree) {
                return Err(malformed!("image of {} is not homogeneous of degree {}", g.name, g.degree));
            }
        }
        Ok(RingMap { source: source.clone(), target: target.clone(), images })
    }

    pub fn source(&self) -> &Arc<RingPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<RingPresentation> {
        &self.target
    }

    pub fn apply(&self, a: &GradedClass) -> Result<GradedClass> {
        if !a.same_ring(&GradedClass::zero(&self.source)) {
            return Err(malformed!("class is not in the source ring of the map"));
        }
        let mut out = GradedClass::zero(&self.target);
        for (m, c) in a.terms() {
            let mut img = GradedClass::scalar(&self.target, c.clone());
            for (g, &e) in m.exponents().iter().enumerate() {
                img = &img * &self.images[g].pow(e);
            }
            out += &img;
        }
        Ok(out)
    }
}
