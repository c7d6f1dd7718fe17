//! Runs a checked scenario against the engine.
//!
//! Declarations bind names; every query and every failed declaration yields
//! one [`Record`]. A failure is recorded and the run moves on.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use degloci_core::analysis::{
    bigness, chi_structure_sheaf, degeneracy_class, en_hilbert_polynomial, euler_char, porteous_singular_class,
    rr_c3_crosscheck,
};
use degloci_core::bundle::{chern, segre, spinor, tangent, BundleExpr, ChernData};
use degloci_core::catalog::{self, CatalogKind, VarietyModel};
use degloci_core::oracle::determinant_p;
use degloci_core::predictor::{predict_components, Flag, PredictorInput};
use degloci_core::rational::{format_rational, int, rat, Rational};
use degloci_core::schur::{schur_p, truncated_closed_form};
use degloci_core::ulrich::ulrich_report;
use degloci_core::{Error as CoreError, GradedClass};

use crate::ast::{BinOp, DeclKind, Expr, ExprKind, Pos, Scenario, Statement};
use crate::error::DslError;
use crate::pretty;
use crate::signature::{bind, class_function, lookup, Bound, BUNDLES, QUERIES, VARIETIES};

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    /// The statement in canonical form.
    pub statement: String,
    pub line: usize,
    pub outcome: Result<Value, DslError>,
    pub citations: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn all_ok(&self) -> bool {
        self.records.iter().all(|r| r.outcome.is_ok())
    }
}

#[derive(Clone)]
struct Bundle {
    expr: BundleExpr,
    on: Arc<VarietyModel>,
}

#[derive(Default)]
struct Env {
    varieties: HashMap<String, Arc<VarietyModel>>,
    bundles: HashMap<String, Bundle>,
    /// Names whose declaration failed.
    failed: HashMap<String, DeclKind>,
}

/// Extra output of a query besides its result value.
#[derive(Default)]
struct Extras {
    citations: Vec<String>,
    notes: Vec<String>,
}

type Res<T> = Result<T, DslError>;

fn core_at(pos: Pos) -> impl Fn(CoreError) -> DslError {
    move |e| DslError::engine(pos, e)
}

fn malformed(pos: Pos, msg: impl Into<String>) -> DslError {
    DslError::new("malformed", pos, msg)
}

pub fn execute(s: &Scenario) -> Report {
    let mut env = Env::default();
    let mut records = Vec::new();
    for st in &s.statements {
        let pos = st.pos();
        match st {
            Statement::Decl { kind, name, value, .. } => {
                let done = match kind {
                    DeclKind::Variety => env.variety(value).map(|v| {
                        env.varieties.insert(name.clone(), v);
                    }),
                    DeclKind::Bundle => env.bundle(value).map(|b| {
                        env.bundles.insert(name.clone(), b);
                    }),
                };
                if let Err(err) = done {
                    env.failed.insert(name.clone(), *kind);
                    records.push(Record {
                        statement: pretty::statement(st),
                        line: pos.line,
                        outcome: Err(err),
                        citations: Vec::new(),
                        notes: Vec::new(),
                    });
                }
            }
            Statement::Query { name, args, .. } => {
                let mut extras = Extras::default();
                let outcome = lookup(QUERIES, name)
                    .ok_or_else(|| DslError::new("unbound", pos, format!("unknown query '{}'", name)))
                    .and_then(|sig| bind(sig, args, pos))
                    .and_then(|b| env.query(name, &b, pos, &mut extras));
                records.push(Record {
                    statement: pretty::statement(st),
                    line: pos.line,
                    outcome,
                    citations: extras.citations,
                    notes: extras.notes,
                });
            }
        }
    }
    Report { records }
}

fn int_of(e: &Expr) -> Res<i64> {
    match &e.kind {
        ExprKind::Int(n) => i64::try_from(*n).map_err(|_| malformed(e.pos, "integer out of range")),
        ExprKind::Neg(inner) => Ok(-int_of(inner)?),
        _ => Err(DslError::new("type", e.pos, "expected an integer")),
    }
}

fn nat_of(e: &Expr) -> Res<usize> {
    let n = int_of(e)?;
    usize::try_from(n).map_err(|_| malformed(e.pos, format!("expected a non-negative integer, got {}", n)))
}

fn required<'a>(b: &Bound<'a>, i: usize, pos: Pos) -> Res<&'a Expr> {
    b.get(i).ok_or_else(|| DslError::new("arity", pos, "missing argument"))
}

fn same_variety(a: &VarietyModel, b: &VarietyModel) -> bool {
    a.one().same_ring(&b.one())
}

impl Env {
    fn variety(&self, e: &Expr) -> Res<Arc<VarietyModel>> {
        let pos = e.pos;
        match &e.kind {
            ExprKind::Ident(name) => self.varieties.get(name).cloned().ok_or_else(|| self.missing(name, pos)),
            ExprKind::Call { name, args } => {
                let sig = lookup(VARIETIES, name)
                    .ok_or_else(|| DslError::new("unbound", pos, format!("unknown variety constructor '{}'", name)))?;
                let b = bind(sig, args, pos)?;
                let arg = |i| required(&b, i, pos);
                let core = core_at(pos);
                let model = match name.as_str() {
                    "projective_space" => catalog::projective_space(nat_of(arg(0)?)?).map_err(core)?,
                    "quadric" => catalog::quadric(nat_of(arg(0)?)?).map_err(core)?,
                    "curve" => catalog::curve(nat_of(arg(0)?)?).map_err(core)?,
                    "product" => {
                        let Bound::Variadic(items) = &b else { unreachable!() };
                        let factors = items.iter().map(|f| self.variety(f)).collect::<Res<Vec<_>>>()?;
                        catalog::product(&factors).map_err(core)?
                    }
                    "bundle_over_curve" => {
                        catalog::projective_bundle_over_curve(nat_of(arg(0)?)?, int_of(arg(1)?)?, nat_of(arg(2)?)?)
                            .map_err(core)?
                    }
                    "hirzebruch" => {
                        let ee = nat_of(arg(0)?)?;
                        let x = catalog::hirzebruch(ee, 1, ee as i64 + 1).map_err(core)?;
                        self.polarize(x, b.get(1))?
                    }
                    "blown_up_plane" => {
                        let x = catalog::blown_up_plane(nat_of(arg(0)?)?).map_err(core)?;
                        self.polarize(x, b.get(1))?
                    }
                    other => return Err(DslError::new("unbound", pos, format!("unknown variety constructor '{}'", other))),
                };
                Ok(Arc::new(model))
            }
            _ => Err(DslError::new("type", pos, "expected a variety")),
        }
    }

    fn polarize(&self, x: VarietyModel, h: Option<&Expr>) -> Res<VarietyModel> {
        match h {
            None => Ok(x),
            Some(h) => {
                let class = self.poly(h, &x)?;
                if !class.is_homogeneous_of(1) || class.is_zero() {
                    return Err(malformed(h.pos, "the polarization must be a nonzero divisor class"));
                }
                x.with_polarization(class).map_err(core_at(h.pos))
            }
        }
    }

    fn missing(&self, name: &str, pos: Pos) -> DslError {
        if self.failed.contains_key(name) {
            malformed(pos, format!("'{}' has no value because its declaration failed", name))
        } else {
            DslError::new("unbound", pos, format!("'{}' is not declared", name))
        }
    }

    fn bundle(&self, e: &Expr) -> Res<Bundle> {
        let pos = e.pos;
        match &e.kind {
            ExprKind::Ident(name) => self.bundles.get(name).cloned().ok_or_else(|| self.missing(name, pos)),
            ExprKind::Call { name, args } => {
                let sig = lookup(BUNDLES, name)
                    .ok_or_else(|| DslError::new("unbound", pos, format!("unknown bundle constructor '{}'", name)))?;
                let b = bind(sig, args, pos)?;
                let arg = |i| required(&b, i, pos);
                let core = core_at(pos);
                let out = match name.as_str() {
                    "atom" => {
                        let on = self.variety(arg(0)?)?;
                        let rank = nat_of(arg(1)?)?;
                        let total = self.poly(arg(2)?, &on)?;
                        ChernData::new(rank, total.clone()).map_err(core)?;
                        Bundle { expr: BundleExpr::atom("atom", rank, total), on }
                    }
                    "line" => {
                        let on = self.variety(arg(0)?)?;
                        let d = self.divisor(arg(1)?, &on)?;
                        Bundle { expr: BundleExpr::line(&d), on }
                    }
                    "trivial" => {
                        let on = self.variety(arg(0)?)?;
                        Bundle { expr: BundleExpr::trivial(&on, nat_of(arg(1)?)?), on }
                    }
                    "tangent" => {
                        let on = self.variety(arg(0)?)?;
                        Bundle { expr: tangent(&on), on }
                    }
                    "spinor" => {
                        let on = self.variety(arg(0)?)?;
                        Bundle { expr: spinor(&on, nat_of(arg(1)?)?).map_err(core)?, on }
                    }
                    "sum" => {
                        let Bound::Variadic(items) = &b else { unreachable!() };
                        let parts = items.iter().map(|i| self.bundle(i)).collect::<Res<Vec<_>>>()?;
                        let on = parts[0].on.clone();
                        if let Some((p, _)) = items.iter().zip(&parts).find(|(_, b)| !same_variety(&b.on, &on)) {
                            return Err(malformed(p.pos, "summands live on different varieties"));
                        }
                        let expr = BundleExpr::sum_all(parts.into_iter().map(|b| b.expr)).expect("two summands");
                        Bundle { expr, on }
                    }
                    "dual" => {
                        let inner = self.bundle(arg(0)?)?;
                        Bundle { expr: inner.expr.dual(), on: inner.on }
                    }
                    "twist" => {
                        let inner = self.bundle(arg(0)?)?;
                        let d = self.divisor(arg(1)?, &inner.on)?;
                        Bundle { expr: inner.expr.twist(d), on: inner.on }
                    }
                    "det" => {
                        let inner = self.bundle(arg(0)?)?;
                        Bundle { expr: inner.expr.det(), on: inner.on }
                    }
                    "ext" => {
                        let p = nat_of(arg(0)?)?;
                        let inner = self.bundle(arg(1)?)?;
                        Bundle { expr: inner.expr.ext(p), on: inner.on }
                    }
                    "pullback" => {
                        let factor = nat_of(arg(0)?)?;
                        let inner = self.bundle(arg(1)?)?;
                        let on = self.variety(arg(2)?)?;
                        let proj = on.projection(factor).map_err(core)?;
                        if !same_variety(&proj.target, &inner.on) {
                            return Err(malformed(
                                pos,
                                format!(
                                    "the bundle lives on {} but projection {} of {} goes to {}",
                                    inner.on.kind().label(),
                                    factor,
                                    on.kind().label(),
                                    proj.target.kind().label()
                                ),
                            ));
                        }
                        Bundle { expr: inner.expr.pullback(factor), on }
                    }
                    other => return Err(DslError::new("unbound", pos, format!("unknown bundle constructor '{}'", other))),
                };
                // Surface bad data at the declaration rather than at first use.
                chern(&out.expr, &out.on).map_err(core_at(pos))?;
                Ok(out)
            }
            _ => Err(DslError::new("type", pos, "expected a bundle")),
        }
    }

    fn divisor(&self, e: &Expr, x: &VarietyModel) -> Res<GradedClass> {
        let d = self.poly(e, x)?;
        if !d.is_zero() && !d.is_homogeneous_of(1) {
            return Err(malformed(e.pos, "expected a divisor class"));
        }
        Ok(d)
    }

    /// Evaluates a class expression in the Chow ring of `x`.
    fn poly(&self, e: &Expr, x: &VarietyModel) -> Res<GradedClass> {
        let pos = e.pos;
        match &e.kind {
            ExprKind::Int(n) => Ok(x.one().scale(&int(*n as i64))),
            ExprKind::Ident(name) => match x.generator(name) {
                Ok(g) => Ok(g),
                Err(_) if name == "H" => Ok(x.hyperplane().clone()),
                Err(_) if name == "K" => Ok(x.canonical().clone()),
                Err(_) => Err(malformed(pos, format!("{} has no generator '{}'", x.kind().label(), name))),
            },
            ExprKind::Neg(inner) => Ok(-self.poly(inner, x)?),
            ExprKind::Pow { base, exp } => Ok(self.poly(base, x)?.pow(*exp)),
            ExprKind::Binary { op, lhs, rhs } => {
                let a = self.poly(lhs, x)?;
                let b = self.poly(rhs, x)?;
                match op {
                    BinOp::Add => Ok(&a + &b),
                    BinOp::Sub => Ok(&a - &b),
                    BinOp::Mul => Ok(&a * &b),
                    BinOp::Div => {
                        let q = b.constant_term();
                        if !b.is_homogeneous_of(0) || b.is_zero() {
                            return Err(malformed(rhs.pos, "division is only by a nonzero number"));
                        }
                        Ok(a.scale(&(int(1) / q)))
                    }
                }
            }
            ExprKind::Call { name, args } => {
                let (kind, k) =
                    class_function(name).ok_or_else(|| malformed(pos, format!("unknown class function '{}'", name)))?;
                let arg = args.first().ok_or_else(|| DslError::new("arity", pos, "missing bundle"))?;
                let b = self.bundle(&arg.value)?;
                if !same_variety(&b.on, x) {
                    return Err(malformed(pos, format!("{} lives on {}, not {}", name, b.on.kind().label(), x.kind().label())));
                }
                let total = match kind {
                    'c' => chern(&b.expr, &b.on).map_err(core_at(pos))?.total,
                    _ => segre(&b.expr, &b.on).map_err(core_at(pos))?,
                };
                // Same presentation, possibly another allocation: rebase onto x.
                let comp = total.component(k);
                Ok(x.one().try_mul(&comp).map_err(core_at(pos))?)
            }
            ExprKind::List(_) => Err(DslError::new("type", pos, "expected a class expression")),
        }
    }

    fn query(&self, name: &str, b: &Bound<'_>, pos: Pos, ex: &mut Extras) -> Res<Value> {
        let arg = |i| required(b, i, pos);
        let core = core_at(pos);
        match name {
            "schur" => return schur_report(nat_of(arg(0)?)?, pos),
            "integrate" => {
                let x = self.variety(arg(0)?)?;
                let c = self.poly(arg(1)?, &x)?;
                return Ok(json!({ "variety": x.kind().label(), "class": c.to_string(), "value": q(&c.integrate()) }));
            }
            "noether" => {
                let x = self.variety(arg(0)?)?;
                let chi = chi_structure_sheaf(&x).map_err(&core)?;
                let defect = catalog::noether_defect(&x, &chi).map_err(&core)?;
                return Ok(json!({
                    "chi_structure_sheaf": q(&chi),
                    "canonical_squared": q(&x.canonical().pow(2).integrate()),
                    "euler_number": q(&x.euler_number()),
                    "defect": q(&defect),
                }));
            }
            _ => {}
        }
        let bundle = self.bundle(arg(0)?)?;
        let (e, x) = (&bundle.expr, bundle.on.as_ref());
        let n = x.dimension();
        match name {
            "chern" => {
                let d = chern(e, x).map_err(core)?;
                let mut classes = Map::new();
                for i in 1..=d.rank.min(n) {
                    classes.insert(format!("c{}", i), Value::String(d.c(i).to_string()));
                }
                let mut out = json!({
                    "variety": x.kind().label(),
                    "rank": d.rank,
                    "total": d.total.to_string(),
                    "classes": classes,
                    "top_integral": q(&d.c(n).integrate()),
                });
                if let CatalogKind::Quadric { n: qn } = x.kind() {
                    out["quadric_normalization"] = quadric_normalization(x, &d, *qn);
                }
                Ok(out)
            }
            "segre" => {
                let s = segre(e, x).map_err(core)?;
                let mut classes = Map::new();
                for i in 1..=n {
                    classes.insert(format!("s{}", i), Value::String(s.component(i).to_string()));
                }
                Ok(json!({ "total": s.to_string(), "classes": classes, "top_integral": q(&s.component(n).integrate()) }))
            }
            "euler" => Ok(json!({ "chi": q(&euler_char(x, e).map_err(core)?) })),
            "big" => {
                let bg = bigness(x, e).map_err(core)?;
                Ok(json!({
                    "top_segre_of_dual": q(&bg.top_segre),
                    "big": bg.big,
                    "closed_form": bg.closed_form.as_ref().map(q),
                }))
            }
            "rr_c3" => {
                let r = rr_c3_crosscheck(x, e).map_err(core)?;
                Ok(json!({ "lhs": q(&r.lhs), "rhs": q(&r.rhs), "pass": r.pass }))
            }
            "ulrich_report" => {
                let rep = ulrich_report(x, e).map_err(core)?;
                let checks: Vec<Value> = rep
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "name": c.name,
                            "left": q(&c.left),
                            "relation": c.relation.symbol(),
                            "right": q(&c.right),
                            "pass": c.pass,
                            "label": c.label,
                        })
                    })
                    .collect();
                Ok(json!({ "rank": rep.rank, "degree": rep.degree, "all_pass": rep.all_pass(), "checks": checks }))
            }
            "degeneracy" => {
                let k = nat_of(arg(1)?)?;
                let dc = degeneracy_class(x, e, k).map_err(core)?;
                ex.notes.push(dc.note.to_string());
                Ok(json!({
                    "k": k,
                    "class": dc.class.to_string(),
                    "empty": dc.empty,
                    "degree": if k == n { Value::String(format_rational(&dc.class.integrate())) } else { Value::Null },
                }))
            }
            "porteous_sing" => {
                let k = nat_of(arg(1)?)?;
                let (class, note) = porteous_singular_class(x, e, k).map_err(core)?;
                ex.notes.extend(note);
                Ok(json!({ "k": k, "class": class.to_string() }))
            }
            "en_hilbert" => {
                let k = nat_of(arg(1)?)?;
                let ExprKind::List(items) = &arg(2)?.kind else {
                    return Err(DslError::new("type", pos, "expected a list of integers"));
                };
                let ms = items.iter().map(int_of).collect::<Res<Vec<_>>>()?;
                let values = en_hilbert_polynomial(x, e, k, &ms).map_err(core)?;
                let table: Vec<Value> = ms.iter().zip(&values).map(|(m, v)| json!({ "m": m, "chi": q(v) })).collect();
                Ok(json!({ "k": k, "values": table }))
            }
            "predict" => {
                let k = nat_of(arg(1)?)?;
                let s = nat_of(arg(2)?)? as u64;
                let h = nat_of(arg(3)?)? as u64;
                let flags: Vec<Flag> = match b.get(4) {
                    Some(Expr { kind: ExprKind::List(items), .. }) => items
                        .iter()
                        .map(|i| match &i.kind {
                            ExprKind::Ident(f) => {
                                Flag::parse(f).ok_or_else(|| DslError::new("unbound", i.pos, format!("unknown flag '{}'", f)))
                            }
                            _ => Err(DslError::new("type", i.pos, "expected a flag")),
                        })
                        .collect::<Res<_>>()?,
                    Some(other) => return Err(DslError::new("type", other.pos, "expected a list of flags")),
                    None => Vec::new(),
                };
                let v = predict_components(x, e, &PredictorInput::new(k, s, h, &flags)).map_err(core)?;
                ex.citations.extend(v.citations.iter().map(|c| c.to_string()));
                ex.notes.extend(v.notes.iter().cloned());
                let conclusions: Vec<Value> = v
                    .conclusions
                    .iter()
                    .map(|c| json!({ "verdict": c.kind.to_string(), "citation": c.citation }))
                    .collect();
                Ok(json!({
                    "verdict": v.kind.to_string(),
                    "kind": v.kind.tag(),
                    "count": v.kind.count(),
                    "rank": v.rank,
                    "conclusions": conclusions,
                    "consumed": v.consumed,
                }))
            }
            other => Err(DslError::new("unbound", pos, format!("unknown query '{}'", other))),
        }
    }
}

fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// On a quadric, classes above the middle degree are multiples of linear
/// subspaces; `H^j` is twice the linear space there, so the multiple of `H^j`
/// is half the linear-space multiple. Both readings are reported.
fn quadric_normalization(x: &VarietyModel, d: &ChernData, qn: usize) -> Value {
    let h = x.hyperplane();
    let mut out = Vec::new();
    for j in (qn / 2 + 1)..=d.rank.min(qn) {
        let c = d.c(j);
        if c.is_zero() {
            continue;
        }
        let linear = (&c * &h.pow((qn - j) as u32)).integrate();
        out.push(json!({
            "degree": j,
            "class": c.to_string(),
            "linear_space_multiple": q(&linear),
            "hyperplane_power_multiple": q(&(linear.clone() * rat(1, 2))),
            "ambiguous_normalization": true,
        }));
    }
    Value::Array(out)
}

fn schur_report(n: usize, pos: Pos) -> Res<Value> {
    let p = schur_p(n).map_err(core_at(pos))?;
    let truncated = p.mod_x2_squared();
    let determinant = if n <= 8 { Some(determinant_p(n).map_err(core_at(pos))? == p) } else { None };
    Ok(json!({
        "n": n,
        "polynomial": p.to_string(),
        "mod_x2_squared": truncated.to_string(),
        "matches_closed_form": truncated == truncated_closed_form(n),
        "matches_determinant": determinant,
    }))
}
