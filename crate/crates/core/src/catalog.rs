//! Catalog of varieties: Chow-ring presentation, polarization, canonical
//! class and total Chern class of the tangent bundle.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::error::{malformed, unsupported, Result};
use crate::rational::{as_i64, int, Rational};
use crate::ring::{GradedClass, Monomial, PresentationBuilder, RingMap, RingPresentation};

/// Which constructor produced a model, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogKind {
    ProjectiveSpace { n: usize },
    Quadric { n: usize },
    Product { factors: Vec<CatalogKind> },
    BundleOverCurve { rank: usize, deg_f: i64, genus: usize },
    Hirzebruch { e: usize },
    BlownUpPlane { points: usize },
    Curve { genus: usize },
}

impl CatalogKind {
    pub fn label(&self) -> String {
        use alloc::format;
        match self {
            CatalogKind::ProjectiveSpace { n } => format!("P{}", n),
            CatalogKind::Quadric { n } => format!("Q{}", n),
            CatalogKind::Product { factors } => {
                factors.iter().map(CatalogKind::label).collect::<Vec<_>>().join("x")
            }
            CatalogKind::BundleOverCurve { rank, deg_f, genus } => {
                format!("P(F) rank {} deg {} over genus {}", rank, deg_f, genus)
            }
            CatalogKind::Hirzebruch { e } => format!("X{}", e),
            CatalogKind::BlownUpPlane { points } => format!("Bl{}P2", points),
            CatalogKind::Curve { genus } => format!("curve of genus {}", genus),
        }
    }
}

/// A morphism to another catalog model, recorded as the pullback on Chow rings.
#[derive(Clone, Debug)]
pub struct Projection {
    pub target: Arc<VarietyModel>,
    pub pullback: RingMap,
}

#[derive(Clone, Debug)]
pub struct VarietyModel {
    kind: CatalogKind,
    ring: Arc<RingPresentation>,
    hyperplane: GradedClass,
    canonical: GradedClass,
    tangent_chern: GradedClass,
    degree: i64,
    projections: Vec<Projection>,
}

impl VarietyModel {
    fn assemble(
        kind: CatalogKind,
        ring: Arc<RingPresentation>,
        hyperplane: GradedClass,
        canonical: GradedClass,
        tangent_chern: GradedClass,
        projections: Vec<Projection>,
    ) -> Result<Self> {
        let n = ring.dimension();
        if !hyperplane.is_homogeneous_of(1) || !canonical.is_homogeneous_of(1) {
            return Err(malformed!("polarization and canonical class must be divisor classes"));
        }
        let d = hyperplane.pow(n as u32).integrate();
        let degree = match as_i64(&d) {
            Some(d) if d >= 1 => d,
            _ => return Err(malformed!("polarization has degree {}, expected a positive integer", d)),
        };
        Ok(VarietyModel { kind, ring, hyperplane, canonical, tangent_chern, degree, projections })
    }

    pub fn kind(&self) -> &CatalogKind {
        &self.kind
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn dimension(&self) -> usize {
        self.ring.dimension()
    }

    pub fn hyperplane(&self) -> &GradedClass {
        &self.hyperplane
    }

    pub fn canonical(&self) -> &GradedClass {
        &self.canonical
    }

    pub fn tangent_chern(&self) -> &GradedClass {
        &self.tangent_chern
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn projections(&self) -> &[Projection] {
        &self.projections
    }

    /// 1-based projection lookup, matching the factor numbering used by products.
    pub fn projection(&self, index: usize) -> Result<&Projection> {
        if index == 0 || index > self.projections.len() {
            return Err(malformed!("{} has no projection {}", self.kind.label(), index));
        }
        Ok(&self.projections[index - 1])
    }

    pub fn generator(&self, name: &str) -> Result<GradedClass> {
        GradedClass::generator(&self.ring, name)
    }

    pub fn one(&self) -> GradedClass {
        GradedClass::one(&self.ring)
    }

    pub fn zero(&self) -> GradedClass {
        GradedClass::zero(&self.ring)
    }

    /// Topological Euler number: degree of the top Chern class of the tangent bundle.
    pub fn euler_number(&self) -> Rational {
        self.tangent_chern.component(self.dimension()).integrate()
    }

    /// Replaces the polarization; the new class must still have positive degree.
    pub fn with_polarization(&self, hyperplane: GradedClass) -> Result<Self> {
        if !hyperplane.same_ring(&self.hyperplane) {
            return Err(malformed!("polarization lives in another ring"));
        }
        Self::assemble(
            self.kind.clone(),
            self.ring.clone(),
            hyperplane,
            self.canonical.clone(),
            self.tangent_chern.clone(),
            self.projections.clone(),
        )
    }
}

fn mono(ngens: usize, exps: &[(usize, u32)]) -> Monomial {
    let mut e = vec![0u32; ngens];
    for &(g, k) in exps {
        e[g] += k;
    }
    Monomial::from_exponents(e)
}

/// `(1 + x)^k` truncated by the ring.
fn one_plus_pow(x: &GradedClass, k: u32) -> GradedClass {
    (&GradedClass::one(x.ring()) + x).pow(k)
}

/// Inverse of `1 + x` for nilpotent `x`.
fn inverse_one_plus(x: &GradedClass) -> GradedClass {
    let n = x.ring().dimension();
    let mut acc = GradedClass::one(x.ring());
    let mut term = GradedClass::one(x.ring());
    for _ in 0..n {
        term = -(&term * x);
        acc += &term;
    }
    acc
}

pub fn projective_space(n: usize) -> Result<VarietyModel> {
    if n == 0 {
        return Err(unsupported!("projective space of dimension 0"));
    }
    let ring = PresentationBuilder::new(n)
        .generator("h", 1)
        .integral(mono(1, &[(0, n as u32)]), int(1))
        .build()?;
    let h = GradedClass::generator(&ring, "h")?;
    let canonical = h.scale(&int(-(n as i64 + 1)));
    let tangent = one_plus_pow(&h, n as u32 + 1);
    VarietyModel::assemble(CatalogKind::ProjectiveSpace { n }, ring, h, canonical, tangent, Vec::new())
}

/// Smooth quadric `Q_n` in `P^{n+1}`.
///
/// Odd `n = 2m+1`: generators `H` and `L` (class of a maximal linear space,
/// codimension `m+1`) with `H^{m+1} = 2L`.
/// Even `n = 2m`: generators `H`, `a`, `b` with `a`, `b` the two families of
/// maximal linear spaces, `H^m = a + b`, `H a = H b`. Same-family products
/// are the point when `m` is even and vanish when `m` is odd; cross products
/// the other way round.
pub fn quadric(n: usize) -> Result<VarietyModel> {
    if n < 2 {
        return Err(unsupported!("quadrics need dimension at least 2"));
    }
    let m = n / 2;
    let ring = if n % 2 == 1 {
        PresentationBuilder::new(n)
            .generator("H", 1)
            .generator("L", m + 1)
            .rule(mono(2, &[(0, m as u32 + 1)]), vec![(mono(2, &[(1, 1)]), int(2))])
            .integral(mono(2, &[(0, m as u32), (1, 1)]), int(1))
            .build()?
    } else {
        let mu = m as u32;
        let (h, a, b) = (0, 1, 2);
        let aa = mono(3, &[(a, 2)]);
        let ab = mono(3, &[(a, 1), (b, 1)]);
        let mut builder = PresentationBuilder::new(n)
            .generator("H", 1)
            .generator("a", m)
            .generator("b", m)
            .rule(mono(3, &[(h, mu)]), vec![(mono(3, &[(a, 1)]), int(1)), (mono(3, &[(b, 1)]), int(1))]);
        if m > 1 {
            builder = builder.rule(mono(3, &[(h, 1), (b, 1)]), vec![(mono(3, &[(h, 1), (a, 1)]), int(1))]);
        }
        let point = if m.is_multiple_of(2) {
            builder = builder
                .rule(mono(3, &[(b, 2)]), vec![(aa.clone(), int(1))])
                .rule(ab.clone(), vec![]);
            aa
        } else {
            builder = builder.rule(aa, vec![]).rule(mono(3, &[(b, 2)]), vec![]);
            ab
        };
        builder.integral(point, int(1)).build()?
    };
    let h = GradedClass::generator(&ring, "H")?;
    let canonical = h.scale(&int(-(n as i64)));
    let tangent = &one_plus_pow(&h, n as u32 + 2) * &inverse_one_plus(&h.scale(&int(2)));
    VarietyModel::assemble(CatalogKind::Quadric { n }, ring, h, canonical, tangent, Vec::new())
}

/// Smooth curve of genus `g` with the point class as polarization.
pub fn curve(genus: usize) -> Result<VarietyModel> {
    let ring = PresentationBuilder::new(1)
        .generator("p", 1)
        .integral(mono(1, &[(0, 1)]), int(1))
        .build()?;
    let p = GradedClass::generator(&ring, "p")?;
    let canonical = p.scale(&int(2 * genus as i64 - 2));
    let tangent = &GradedClass::one(&ring) + &p.scale(&int(2 - 2 * genus as i64));
    VarietyModel::assemble(CatalogKind::Curve { genus }, ring, p, canonical, tangent, Vec::new())
}

/// Künneth product with the Segre polarization. Generators of factor `i`
/// (1-based) get the suffix `i`.
pub fn product(factors: &[Arc<VarietyModel>]) -> Result<VarietyModel> {
    if factors.len() < 2 {
        return Err(malformed!("a product needs at least two factors"));
    }
    let dim: usize = factors.iter().map(|f| f.dimension()).sum();
    let ngens: usize = factors.iter().map(|f| f.ring().generators().len()).sum();
    let mut builder = PresentationBuilder::new(dim);
    let mut offsets = Vec::new();
    let mut offset = 0;
    for (i, f) in factors.iter().enumerate() {
        offsets.push(offset);
        for g in f.ring().generators() {
            builder = builder.generator(&alloc::format!("{}{}", g.name, i + 1), g.degree);
        }
        offset += f.ring().generators().len();
    }
    let shift = |i: usize, m: &Monomial| {
        let mut e = vec![0u32; ngens];
        for (g, &k) in m.exponents().iter().enumerate() {
            e[offsets[i] + g] = k;
        }
        Monomial::from_exponents(e)
    };
    for (i, f) in factors.iter().enumerate() {
        for r in f.ring().rules() {
            builder = builder.rule(
                shift(i, &r.lhs),
                r.rhs.iter().map(|(m, c)| (shift(i, m), c.clone())).collect(),
            );
        }
        for b in f.ring().blocks() {
            builder = builder.block(b.generators.iter().map(|g| offsets[i] + g).collect(), b.bound);
        }
    }
    // top classes of the product are products of factor top classes
    let mut tops: Vec<(Monomial, Rational)> = vec![(Monomial::one(ngens), Rational::one())];
    for (i, f) in factors.iter().enumerate() {
        let mut next = Vec::new();
        for (m, v) in &tops {
            for (fm, fv) in f.ring().integration_table() {
                next.push((m.times(&shift(i, fm)), v.clone() * fv));
            }
        }
        tops = next;
    }
    for (m, v) in tops {
        builder = builder.integral(m, v);
    }
    let ring = builder.build()?;

    let mut projections = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        let images = (0..f.ring().generators().len())
            .map(|g| ring.normal_form(&Monomial::power(ngens, offsets[i] + g, 1)))
            .collect::<Result<Vec<_>>>()?;
        projections.push(Projection { target: f.clone(), pullback: RingMap::new(f.ring(), &ring, images)? });
    }
    let mut hyperplane = GradedClass::zero(&ring);
    let mut canonical = GradedClass::zero(&ring);
    let mut tangent = GradedClass::one(&ring);
    for p in &projections {
        hyperplane += &p.pullback.apply(p.target.hyperplane())?;
        canonical += &p.pullback.apply(p.target.canonical())?;
        tangent = &tangent * &p.pullback.apply(p.target.tangent_chern())?;
    }
    let kind = CatalogKind::Product { factors: factors.iter().map(|f| f.kind().clone()).collect() };
    VarietyModel::assemble(kind, ring, hyperplane, canonical, tangent, projections)
}

/// `P(F)` for a rank `rank` bundle `F` of degree `deg_f` on a genus `genus`
/// curve, polarized by the tautological class `xi`; `f` is the fiber class.
/// Relations: `f^2 = 0`, `xi^rank = deg_f * xi^(rank-1) * f`.
pub fn projective_bundle_over_curve(rank: usize, deg_f: i64, genus: usize) -> Result<VarietyModel> {
    if rank < 2 {
        return Err(unsupported!("projective bundle needs fiber rank at least 2"));
    }
    let n = rank;
    let (xi, f) = (0, 1);
    let ring = PresentationBuilder::new(n)
        .generator("xi", 1)
        .generator("f", 1)
        .rule(mono(2, &[(f, 2)]), vec![])
        .rule(mono(2, &[(xi, n as u32)]), vec![(mono(2, &[(xi, n as u32 - 1), (f, 1)]), int(deg_f))])
        .integral(mono(2, &[(xi, n as u32 - 1), (f, 1)]), int(1))
        .build()?;
    let xi_c = GradedClass::generator(&ring, "xi")?;
    let f_c = GradedClass::generator(&ring, "f")?;
    let g = genus as i64;
    let canonical = &xi_c.scale(&int(-(n as i64))) + &f_c.scale(&int(deg_f + 2 * g - 2));
    let relative = &one_plus_pow(&xi_c, n as u32)
        - &(&f_c.scale(&int(deg_f)) * &one_plus_pow(&xi_c, n as u32 - 1));
    let tangent = &(&GradedClass::one(&ring) + &f_c.scale(&int(2 - 2 * g))) * &relative;

    let base = Arc::new(curve(genus)?);
    let pullback = RingMap::new(base.ring(), &ring, vec![f_c])?;
    let projections = vec![Projection { target: base, pullback }];
    VarietyModel::assemble(
        CatalogKind::BundleOverCurve { rank, deg_f, genus },
        ring,
        xi_c,
        canonical,
        tangent,
        projections,
    )
}

/// Hirzebruch surface `X_e` with section `C0` (`C0^2 = -e`) and fiber `f`,
/// polarized by `alpha*C0 + beta*f`.
pub fn hirzebruch(e: usize, alpha: i64, beta: i64) -> Result<VarietyModel> {
    let (c0, f) = (0, 1);
    let point = mono(2, &[(c0, 1), (f, 1)]);
    let c0_sq = if e == 0 { vec![] } else { vec![(point.clone(), int(-(e as i64)))] };
    let ring = PresentationBuilder::new(2)
        .generator("C0", 1)
        .generator("f", 1)
        .rule(mono(2, &[(f, 2)]), vec![])
        .rule(mono(2, &[(c0, 2)]), c0_sq)
        .integral(point, int(1))
        .build()?;
    let c0_c = GradedClass::generator(&ring, "C0")?;
    let f_c = GradedClass::generator(&ring, "f")?;
    let hyperplane = &c0_c.scale(&int(alpha)) + &f_c.scale(&int(beta));
    let canonical = &c0_c.scale(&int(-2)) + &f_c.scale(&int(-(e as i64) - 2));
    let pt = &c0_c * &f_c;
    let tangent = &(&GradedClass::one(&ring) - &canonical) + &pt.scale(&int(4));
    let base = Arc::new(projective_space(1)?);
    let pullback = RingMap::new(base.ring(), &ring, vec![f_c])?;
    VarietyModel::assemble(
        CatalogKind::Hirzebruch { e },
        ring,
        hyperplane,
        canonical,
        tangent,
        vec![Projection { target: base, pullback }],
    )
}

/// Plane blown up at `points` general points, generators `l`, `e1..ek`,
/// polarized by the anticanonical class.
pub fn blown_up_plane(points: usize) -> Result<VarietyModel> {
    if points > 8 {
        return Err(unsupported!("blow-ups of more than 8 points are not modeled"));
    }
    let k = points;
    let ngens = k + 1;
    let l = 0;
    let l_sq = mono(ngens, &[(l, 2)]);
    let mut builder = PresentationBuilder::new(2).generator("l", 1);
    for i in 1..=k {
        builder = builder.generator(&alloc::format!("e{}", i), 1);
    }
    for i in 1..=k {
        builder = builder
            .rule(mono(ngens, &[(l, 1), (i, 1)]), vec![])
            .rule(mono(ngens, &[(i, 2)]), vec![(l_sq.clone(), int(-1))]);
        for j in i + 1..=k {
            builder = builder.rule(mono(ngens, &[(i, 1), (j, 1)]), vec![]);
        }
    }
    let ring = builder.integral(l_sq, int(1)).build()?;
    let line = GradedClass::generator(&ring, "l")?;
    let mut canonical = line.scale(&int(-3));
    for i in 1..=k {
        canonical += &GradedClass::generator(&ring, &alloc::format!("e{}", i))?;
    }
    let pt = line.pow(2);
    let tangent =
        &(&GradedClass::one(&ring) - &canonical) + &pt.scale(&int(3 + k as i64));
    let hyperplane = -&canonical;
    VarietyModel::assemble(
        CatalogKind::BlownUpPlane { points },
        ring,
        hyperplane,
        canonical,
        tangent,
        Vec::new(),
    )
}

/// `12 chi(O) - K^2 - e` on a surface, which must vanish. `chi_o` comes from HRR.
pub fn noether_defect(x: &VarietyModel, chi_o: &Rational) -> Result<Rational> {
    if x.dimension() != 2 {
        return Err(unsupported!("Noether's formula is a surface identity"));
    }
    let k2 = x.canonical().pow(2).integrate();
    Ok(int(12) * chi_o - k2 - x.euler_number())
}
