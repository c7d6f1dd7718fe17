//! Connected-component verdicts for degeneracy loci `D_{r-k}(φ)` of general
//! morphisms `φ: O^{r+1-k} -> E`.
//!
//! The rules read Chern classes from the ring and cohomological data (`s`,
//! `h`, flags) from the caller. Every fired rule records a conclusion and a
//! citation anchor; incompatible conclusions are reported as
//! [`Error::InconsistentInputs`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bundle::{chern, BundleExpr, ChernData};
use crate::catalog::{CatalogKind, VarietyModel};
use crate::error::{malformed, Error, Result};
use crate::rational::{as_i64, int};
use crate::ring::GradedClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    /// `H^1(O_X) = 0`.
    H1StructureZero,
    VBig,
    Ulrich,
    /// `E` is ACM with `det E` a multiple of `H` and `X` subcanonical.
    AcmSubcanonicalDetH,
    NGe4,
}

impl Flag {
    pub const ALL: [Flag; 5] =
        [Flag::H1StructureZero, Flag::VBig, Flag::Ulrich, Flag::AcmSubcanonicalDetH, Flag::NGe4];

    pub fn name(self) -> &'static str {
        match self {
            Flag::H1StructureZero => "h1_structure_zero",
            Flag::VBig => "v_big",
            Flag::Ulrich => "ulrich",
            Flag::AcmSubcanonicalDetH => "acm_subcanonical_detH",
            Flag::NGe4 => "n_ge_4",
        }
    }

    pub fn parse(s: &str) -> Option<Flag> {
        Flag::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PredictorInput {
    pub k: usize,
    /// `h^0(E^*)`.
    pub s: u64,
    /// `h^1(E^*)`.
    pub h: u64,
    pub flags: BTreeSet<Flag>,
}

impl PredictorInput {
    pub fn new(k: usize, s: u64, h: u64, flags: &[Flag]) -> Self {
        PredictorInput { k, s, h, flags: flags.iter().copied().collect() }
    }

    pub fn has(&self, f: Flag) -> bool {
        self.flags.contains(&f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    Empty,
    Connected,
    Disconnected,
    AtLeast(u64),
    Exactly(u64),
    Inconclusive,
}

impl VerdictKind {
    pub fn tag(&self) -> &'static str {
        match self {
            VerdictKind::Empty => "empty",
            VerdictKind::Connected => "connected",
            VerdictKind::Disconnected => "disconnected",
            VerdictKind::AtLeast(_) => "at_least",
            VerdictKind::Exactly(_) => "exactly",
            VerdictKind::Inconclusive => "inconclusive",
        }
    }

    pub fn count(&self) -> Option<u64> {
        match self {
            VerdictKind::AtLeast(m) | VerdictKind::Exactly(m) => Some(*m),
            _ => None,
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.count() {
            Some(m) => write!(f, "{}({})", self.tag(), m),
            None => write!(f, "{}", self.tag()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conclusion {
    pub kind: VerdictKind,
    pub citation: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub rank: usize,
    pub conclusions: Vec<Conclusion>,
    pub citations: Vec<&'static str>,
    /// Caller-supplied inputs the fired rules relied on.
    pub consumed: Vec<String>,
    pub notes: Vec<String>,
}

pub mod anchor {
    pub const EMPTY: &str = "rule:empty-iff-ck-zero";
    pub const NEXT_CLASS: &str = "rule:next-class-nonzero-connected";
    pub const LOWER_BOUND: &str = "rule:components-lower-bound";
    pub const DISCONNECTED: &str = "rule:disconnected-when-rank-large";
    pub const EXACT_H0: &str = "rule:exact-count-h1-dual-zero";
    pub const EXACT_H1: &str = "rule:exact-count-h1-dual-positive";
    pub const K3_BOUND: &str = "rule:codim3-lower-bound";
    pub const K3_EXACT: &str = "rule:codim3-exact-count";
    pub const V_BIG: &str = "rule:v-big-connected";
    pub const ULRICH: &str = "rule:ulrich-codim2";
    pub const PATTERN: &str = "rule:p2xp2-pullback-pattern";
}

pub const REDUCED_NOTE: &str = "assumes the degeneracy locus is reduced of pure codimension k";
pub const NUMERIC_C1_CUBED_NOTE: &str =
    "c_1^3 = 0: the exact-count rules based on h^1(E^*) are not applied";

struct Collector {
    conclusions: Vec<Conclusion>,
    consumed: BTreeSet<String>,
    notes: Vec<String>,
}

impl Collector {
    fn fire(&mut self, kind: VerdictKind, citation: &'static str, inputs: &[&str]) {
        self.conclusions.push(Conclusion { kind, citation });
        self.consumed.extend(inputs.iter().map(|s| String::from(*s)));
    }
}

/// Runs the rule cascade on `e` over `x`.
pub fn predict_components(x: &VarietyModel, e: &BundleExpr, input: &PredictorInput) -> Result<Verdict> {
    let d = chern(e, x)?;
    let (r, n, k) = (d.rank, x.dimension(), input.k);
    if k == 0 || k > 3 || k > r.min(n) {
        return Err(malformed!("k = {} must lie in 1..={} and be at most 3", k, r.min(n)));
    }
    if input.has(Flag::NGe4) != (n >= 4) {
        return Err(Error::InconsistentInputs(format!(
            "flag n_ge_4 is {} but the variety has dimension {}",
            if input.has(Flag::NGe4) { "set" } else { "unset" },
            n
        )));
    }
    let c = |i: usize| d.c(i);
    let (s, h) = (input.s, input.h);
    let r64 = r as u64;
    let mut out = Collector { conclusions: Vec::new(), consumed: BTreeSet::new(), notes: Vec::new() };
    out.notes.push(REDUCED_NOTE.into());

    let ck_zero = c(k).is_zero();
    if ck_zero {
        out.fire(VerdictKind::Empty, anchor::EMPTY, &[]);
    } else if r64 < k as u64 + s {
        return Err(Error::InconsistentInputs(format!(
            "c_{} != 0 needs r >= k + s, but r = {}, k = {}, s = {}",
            k, r, k, s
        )));
    }

    if !ck_zero && k <= 2 {
        if !c(k + 1).is_zero() {
            out.fire(VerdictKind::Connected, anchor::NEXT_CLASS, &[]);
        } else {
            let k64 = k as u64;
            out.fire(VerdictKind::AtLeast(r64 + 1 - k64 - s), anchor::LOWER_BOUND, &["s"]);
            if r64 > k64 + s {
                out.fire(VerdictKind::Disconnected, anchor::DISCONNECTED, &["s"]);
            }
            if k == 2 {
                let c1_cubed = c(1).pow(3);
                if c1_cubed.is_zero() {
                    out.notes.push(NUMERIC_C1_CUBED_NOTE.into());
                } else if h == 0 {
                    out.fire(VerdictKind::Exactly(r64 - s - 1), anchor::EXACT_H0, &["s", "h"]);
                } else if s == 0 && input.has(Flag::H1StructureZero) {
                    out.fire(VerdictKind::Exactly(r64 + h - 1), anchor::EXACT_H1, &["s", "h", "h1_structure_zero"]);
                }
            }
        }
    }

    if k == 3 && input.has(Flag::H1StructureZero) && c(4).is_zero() && !c(3).is_zero() {
        out.fire(VerdictKind::AtLeast(r64 - 2 - s), anchor::K3_BOUND, &["s", "h1_structure_zero"]);
        if input.has(Flag::AcmSubcanonicalDetH) && input.has(Flag::NGe4) {
            out.fire(
                VerdictKind::Exactly(r64 - s - 2),
                anchor::K3_EXACT,
                &["s", "h1_structure_zero", "acm_subcanonical_detH", "n_ge_4"],
            );
        }
    }

    if input.has(Flag::VBig) && r >= 1 && n >= 1 && k <= 2.min(r - 1).min(n - 1) {
        out.fire(VerdictKind::Connected, anchor::V_BIG, &["v_big"]);
    }

    if input.has(Flag::Ulrich) && k == 2 && r >= 3 && !c(2).is_zero() {
        let kind = if c(3).is_zero() { VerdictKind::AtLeast(r64 - 1) } else { VerdictKind::Connected };
        out.fire(kind, anchor::ULRICH, &["ulrich"]);
    }

    if input.has(Flag::Ulrich) && k == 2 {
        if let Some(count) = p2xp2_pattern(x, &d)? {
            out.fire(VerdictKind::Exactly(count), anchor::PATTERN, &["ulrich"]);
        }
    }

    check_conflicts(&out.conclusions)?;
    let kind = combine(&out.conclusions);
    let mut citations: Vec<&'static str> = Vec::new();
    for c in &out.conclusions {
        if !citations.contains(&c.citation) {
            citations.push(c.citation);
        }
    }
    Ok(Verdict {
        kind,
        rank: r,
        conclusions: out.conclusions,
        citations,
        consumed: out.consumed.into_iter().collect(),
        notes: out.notes,
    })
}

/// On `P2 x P2`, a bundle with total Chern class pulled back from
/// `(1 + 2h)^r` on one factor: returns `∫ c_2` on that factor.
fn p2xp2_pattern(x: &VarietyModel, d: &ChernData) -> Result<Option<u64>> {
    let p2 = CatalogKind::ProjectiveSpace { n: 2 };
    match x.kind() {
        CatalogKind::Product { factors } if factors.len() == 2 && factors.iter().all(|f| *f == p2) => {}
        _ => return Ok(None),
    }
    for i in 1..=2 {
        let proj = x.projection(i)?;
        let base = &proj.target;
        let h = base.generator("h")?;
        let base_total = (&base.one() + &h.scale(&int(2))).pow(d.rank as u32);
        if proj.pullback.apply(&base_total)? == d.total {
            let c2: GradedClass = base_total.component(2);
            return Ok(as_i64(&c2.integrate()).and_then(|v| u64::try_from(v).ok()));
        }
    }
    Ok(None)
}

fn incompatible(a: VerdictKind, b: VerdictKind) -> bool {
    use VerdictKind::*;
    let one_way = |a: VerdictKind, b: VerdictKind| match (a, b) {
        (Empty, Connected | Disconnected | AtLeast(_) | Exactly(_)) => true,
        (Connected, Disconnected) => true,
        (Connected, AtLeast(m)) | (Connected, Exactly(m)) => m >= 2,
        (Exactly(m), AtLeast(p)) => p > m,
        (Exactly(m), Disconnected) => m == 1,
        (Exactly(m), Exactly(p)) => m != p,
        _ => false,
    };
    one_way(a, b) || one_way(b, a)
}

fn check_conflicts(conclusions: &[Conclusion]) -> Result<()> {
    for (i, a) in conclusions.iter().enumerate() {
        for b in &conclusions[i + 1..] {
            if incompatible(a.kind, b.kind) {
                return Err(Error::InconsistentInputs(format!(
                    "{} ({}) contradicts {} ({})",
                    a.kind, a.citation, b.kind, b.citation
                )));
            }
        }
    }
    Ok(())
}

fn combine(conclusions: &[Conclusion]) -> VerdictKind {
    let kinds: Vec<VerdictKind> = conclusions.iter().map(|c| c.kind).collect();
    if kinds.contains(&VerdictKind::Empty) {
        return VerdictKind::Empty;
    }
    if let Some(k) = kinds.iter().find(|k| matches!(k, VerdictKind::Exactly(_))) {
        return *k;
    }
    if kinds.contains(&VerdictKind::Connected) {
        return VerdictKind::Connected;
    }
    if let Some(m) = kinds.iter().filter_map(|k| match k {
        VerdictKind::AtLeast(m) => Some(*m),
        _ => None,
    }).max()
    {
        return VerdictKind::AtLeast(m);
    }
    if kinds.contains(&VerdictKind::Disconnected) {
        return VerdictKind::Disconnected;
    }
    VerdictKind::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{product, projective_space};
    use alloc::sync::Arc;

    fn p2xp2() -> VarietyModel {
        let p2 = Arc::new(projective_space(2).unwrap());
        product(&[p2.clone(), p2]).unwrap()
    }

    #[test]
    fn trivial_bundle_is_empty() {
        let p3 = projective_space(3).unwrap();
        let v = predict_components(&p3, &BundleExpr::trivial(&p3, 3), &PredictorInput::new(2, 0, 0, &[])).unwrap();
        assert_eq!(v.kind, VerdictKind::Empty);
        assert_eq!(v.citations, [anchor::EMPTY]);
    }

    #[test]
    fn rank_two_exact_count_with_h1() {
        let x = p2xp2();
        let (h1, h2) = (x.generator("h1").unwrap(), x.generator("h2").unwrap());
        let total = &(&(&x.one() + &h1) + &h2) + &(&h1.pow(2) + &h2.pow(2));
        let e = BundleExpr::atom("F", 2, total);
        let input = PredictorInput::new(2, 0, 1, &[Flag::H1StructureZero, Flag::NGe4]);
        let v = predict_components(&x, &e, &input).unwrap();
        assert_eq!(v.kind, VerdictKind::Exactly(2));
        assert!(v.consumed.contains(&"h".into()));
    }

    #[test]
    fn pattern_rule_and_flag_validation() {
        let x = p2xp2();
        let h2 = x.generator("h2").unwrap();
        let e = BundleExpr::line(&h2.scale(&int(2))).copies(3).unwrap();
        let input = PredictorInput::new(2, 0, 0, &[Flag::Ulrich, Flag::NGe4]);
        assert_eq!(predict_components(&x, &e, &input).unwrap().kind, VerdictKind::Exactly(12));
        let bad = PredictorInput::new(2, 0, 0, &[Flag::Ulrich]);
        assert!(matches!(predict_components(&x, &e, &bad), Err(Error::InconsistentInputs(_))));
    }

    #[test]
    fn conflicts_are_errors() {
        let p3 = projective_space(3).unwrap();
        let h = p3.generator("h").unwrap();
        // c_2 != 0 and c_3 = 0 with r = 3, s = 0: disconnected
        let e = BundleExpr::line(&h).copies(2).unwrap().sum(BundleExpr::trivial(&p3, 1));
        let plain = predict_components(&p3, &e, &PredictorInput::new(2, 0, 0, &[])).unwrap();
        assert!(plain.conclusions.iter().any(|c| c.kind == VerdictKind::Disconnected));
        let vbig = PredictorInput::new(2, 0, 0, &[Flag::VBig]);
        assert!(matches!(predict_components(&p3, &e, &vbig), Err(Error::InconsistentInputs(_))));
        let too_many_sections = PredictorInput::new(2, 2, 0, &[]);
        assert!(matches!(predict_components(&p3, &e, &too_many_sections), Err(Error::InconsistentInputs(_))));
        assert!(predict_components(&p3, &e, &PredictorInput::new(4, 0, 0, &[])).is_err());
    }

    #[test]
    fn precedence() {
        use VerdictKind::*;
        let c = |kind| Conclusion { kind, citation: "x" };
        assert_eq!(combine(&[c(AtLeast(1)), c(Disconnected), c(AtLeast(3))]), AtLeast(3));
        assert_eq!(combine(&[c(Connected), c(AtLeast(1))]), Connected);
        assert_eq!(combine(&[c(AtLeast(1)), c(Exactly(2))]), Exactly(2));
        assert_eq!(combine(&[]), Inconclusive);
        assert!(incompatible(Exactly(1), Disconnected));
        assert!(!incompatible(Exactly(1), Connected));
    }
}
