//! Constructor and query signatures, argument binding and the parse-time
//! name/arity/type check.

use std::collections::HashMap;

use degloci_core::predictor::Flag;

use crate::ast::{Arg, DeclKind, Expr, ExprKind, Pos, Scenario, Statement};
use crate::error::DslError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ty {
    Int,
    /// Class expression in the generators, `H`, `K`, `c_i(E)` and `s_i(E)`.
    Poly,
    Variety,
    Bundle,
    IntList,
    FlagList,
}

impl Ty {
    fn describe(self) -> &'static str {
        match self {
            Ty::Int => "an integer",
            Ty::Poly => "a class expression",
            Ty::Variety => "a variety",
            Ty::Bundle => "a bundle",
            Ty::IntList => "a list of integers",
            Ty::FlagList => "a list of flags",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Param {
    pub name: &'static str,
    pub ty: Ty,
    pub required: bool,
}

const fn req(name: &'static str, ty: Ty) -> Param {
    Param { name, ty, required: true }
}

const fn opt(name: &'static str, ty: Ty) -> Param {
    Param { name, ty, required: false }
}

#[derive(Clone, Copy, Debug)]
pub struct Sig {
    pub name: &'static str,
    pub params: &'static [Param],
    /// Variadic signatures take at least two positional arguments of this type.
    pub variadic: Option<Ty>,
}

const fn sig(name: &'static str, params: &'static [Param]) -> Sig {
    Sig { name, params, variadic: None }
}

const fn many(name: &'static str, ty: Ty) -> Sig {
    Sig { name, params: &[], variadic: Some(ty) }
}

pub const VARIETIES: &[Sig] = &[
    sig("projective_space", &[req("n", Ty::Int)]),
    sig("quadric", &[req("n", Ty::Int)]),
    sig("curve", &[req("genus", Ty::Int)]),
    many("product", Ty::Variety),
    sig("bundle_over_curve", &[req("rank", Ty::Int), req("degree", Ty::Int), req("genus", Ty::Int)]),
    sig("hirzebruch", &[req("e", Ty::Int), opt("H", Ty::Poly)]),
    sig("blown_up_plane", &[req("points", Ty::Int), opt("H", Ty::Poly)]),
];

pub const BUNDLES: &[Sig] = &[
    sig("atom", &[req("on", Ty::Variety), req("rank", Ty::Int), req("chern", Ty::Poly)]),
    sig("line", &[req("on", Ty::Variety), req("divisor", Ty::Poly)]),
    sig("trivial", &[req("on", Ty::Variety), req("rank", Ty::Int)]),
    sig("tangent", &[req("on", Ty::Variety)]),
    sig("spinor", &[req("on", Ty::Variety), req("which", Ty::Int)]),
    many("sum", Ty::Bundle),
    sig("dual", &[req("bundle", Ty::Bundle)]),
    sig("twist", &[req("bundle", Ty::Bundle), req("divisor", Ty::Poly)]),
    sig("det", &[req("bundle", Ty::Bundle)]),
    sig("ext", &[req("p", Ty::Int), req("bundle", Ty::Bundle)]),
    sig("pullback", &[req("factor", Ty::Int), req("bundle", Ty::Bundle), req("on", Ty::Variety)]),
];

pub const QUERIES: &[Sig] = &[
    sig("chern", &[req("bundle", Ty::Bundle)]),
    sig("segre", &[req("bundle", Ty::Bundle)]),
    sig("euler", &[req("bundle", Ty::Bundle)]),
    sig("big", &[req("bundle", Ty::Bundle)]),
    sig("rr_c3", &[req("bundle", Ty::Bundle)]),
    sig("ulrich_report", &[req("bundle", Ty::Bundle)]),
    sig("degeneracy", &[req("bundle", Ty::Bundle), req("k", Ty::Int)]),
    sig("porteous_sing", &[req("bundle", Ty::Bundle), req("k", Ty::Int)]),
    sig("en_hilbert", &[req("bundle", Ty::Bundle), req("k", Ty::Int), req("m", Ty::IntList)]),
    sig(
        "predict",
        &[req("bundle", Ty::Bundle), req("k", Ty::Int), req("s", Ty::Int), req("h", Ty::Int), opt("flags", Ty::FlagList)],
    ),
    sig("schur", &[req("n", Ty::Int)]),
    sig("integrate", &[req("on", Ty::Variety), req("class", Ty::Poly)]),
    sig("noether", &[req("on", Ty::Variety)]),
];

pub fn lookup(table: &'static [Sig], name: &str) -> Option<&'static Sig> {
    table.iter().find(|s| s.name == name)
}

/// `c_3` -> `('c', 3)`, `s_2` -> `('s', 2)`.
pub fn class_function(name: &str) -> Option<(char, usize)> {
    let (head, index) = name.split_once('_')?;
    let kind = match head {
        "c" => 'c',
        "s" => 's',
        _ => return None,
    };
    Some((kind, index.parse().ok()?))
}

/// Arguments matched to parameters.
#[derive(Debug)]
pub enum Bound<'a> {
    Fixed(Vec<Option<&'a Expr>>),
    Variadic(Vec<&'a Expr>),
}

impl<'a> Bound<'a> {
    pub fn get(&self, i: usize) -> Option<&'a Expr> {
        match self {
            Bound::Fixed(v) => v.get(i).copied().flatten(),
            Bound::Variadic(v) => v.get(i).copied(),
        }
    }
}

pub fn bind<'a>(sig: &Sig, args: &'a [Arg], pos: Pos) -> Result<Bound<'a>, DslError> {
    if let Some(ty) = sig.variadic {
        if let Some(a) = args.iter().find(|a| a.key.is_some()) {
            return Err(DslError::new("arity", a.pos, format!("{} takes no keyword arguments", sig.name)));
        }
        if args.len() < 2 {
            return Err(DslError::new(
                "arity",
                pos,
                format!("{} needs at least two arguments ({}), got {}", sig.name, ty.describe(), args.len()),
            ));
        }
        return Ok(Bound::Variadic(args.iter().map(|a| &a.value).collect()));
    }
    let mut slots: Vec<Option<&Expr>> = vec![None; sig.params.len()];
    let mut seen_keyword = false;
    for (i, a) in args.iter().enumerate() {
        let slot = match &a.key {
            None => {
                if seen_keyword {
                    return Err(DslError::new("arity", a.pos, "positional argument after a keyword argument"));
                }
                if i >= sig.params.len() {
                    return Err(DslError::new(
                        "arity",
                        a.pos,
                        format!("{} takes at most {} arguments", sig.name, sig.params.len()),
                    ));
                }
                i
            }
            Some(key) => {
                seen_keyword = true;
                sig.params.iter().position(|p| p.name == key).ok_or_else(|| {
                    DslError::new("arity", a.pos, format!("{} has no argument named '{}'", sig.name, key))
                })?
            }
        };
        if slots[slot].is_some() {
            return Err(DslError::new("arity", a.pos, format!("argument '{}' given twice", sig.params[slot].name)));
        }
        slots[slot] = Some(&a.value);
    }
    for (p, s) in sig.params.iter().zip(&slots) {
        if p.required && s.is_none() {
            return Err(DslError::new("arity", pos, format!("{} is missing argument '{}'", sig.name, p.name)));
        }
    }
    Ok(Bound::Fixed(slots))
}

/// Rejects unknown names, wrong arities and ill-typed arguments before anything runs.
pub fn check_scenario(s: &Scenario) -> Result<(), DslError> {
    let mut env: HashMap<&str, DeclKind> = HashMap::new();
    for st in &s.statements {
        match st {
            Statement::Decl { kind, name, value, pos } => {
                if env.contains_key(name.as_str()) {
                    return Err(DslError::new("type", *pos, format!("'{}' is already declared", name)));
                }
                let ty = match kind {
                    DeclKind::Variety => Ty::Variety,
                    DeclKind::Bundle => Ty::Bundle,
                };
                check_expr(&env, value, ty)?;
                env.insert(name, *kind);
            }
            Statement::Query { name, args, pos } => {
                let sig = lookup(QUERIES, name)
                    .ok_or_else(|| DslError::new("unbound", *pos, format!("unknown query '{}'", name)))?;
                check_call(&env, sig, args, *pos)?;
            }
        }
    }
    Ok(())
}

fn check_call(env: &HashMap<&str, DeclKind>, sig: &Sig, args: &[Arg], pos: Pos) -> Result<(), DslError> {
    match bind(sig, args, pos)? {
        Bound::Variadic(items) => {
            let ty = sig.variadic.unwrap_or(Ty::Poly);
            items.iter().try_for_each(|e| check_expr(env, e, ty))
        }
        Bound::Fixed(slots) => {
            for (p, e) in sig.params.iter().zip(slots) {
                if let Some(e) = e {
                    check_expr(env, e, p.ty)?;
                }
            }
            Ok(())
        }
    }
}

fn type_error(e: &Expr, ty: Ty) -> DslError {
    DslError::new("type", e.pos, format!("expected {}", ty.describe()))
}

fn check_named(env: &HashMap<&str, DeclKind>, e: &Expr, name: &str, want: DeclKind, ty: Ty) -> Result<(), DslError> {
    match env.get(name) {
        None => Err(DslError::new("unbound", e.pos, format!("'{}' is not declared", name))),
        Some(k) if *k == want => Ok(()),
        Some(k) => Err(DslError::new("type", e.pos, format!("'{}' is a {}, expected {}", name, k.keyword(), ty.describe()))),
    }
}

fn check_expr(env: &HashMap<&str, DeclKind>, e: &Expr, ty: Ty) -> Result<(), DslError> {
    match ty {
        Ty::Int => match &e.kind {
            ExprKind::Int(_) => Ok(()),
            ExprKind::Neg(inner) if matches!(inner.kind, ExprKind::Int(_)) => Ok(()),
            _ => Err(type_error(e, ty)),
        },
        Ty::IntList => match &e.kind {
            ExprKind::List(items) => items.iter().try_for_each(|i| check_expr(env, i, Ty::Int)),
            _ => Err(type_error(e, ty)),
        },
        Ty::FlagList => match &e.kind {
            ExprKind::List(items) => items.iter().try_for_each(|i| match &i.kind {
                ExprKind::Ident(f) if Flag::parse(f).is_some() => Ok(()),
                ExprKind::Ident(f) => Err(DslError::new("unbound", i.pos, format!("unknown flag '{}'", f))),
                _ => Err(type_error(i, Ty::FlagList)),
            }),
            _ => Err(type_error(e, ty)),
        },
        Ty::Variety | Ty::Bundle => {
            let (want, table) =
                if ty == Ty::Variety { (DeclKind::Variety, VARIETIES) } else { (DeclKind::Bundle, BUNDLES) };
            match &e.kind {
                ExprKind::Ident(name) => check_named(env, e, name, want, ty),
                ExprKind::Call { name, args } => match lookup(table, name) {
                    Some(sig) => check_call(env, sig, args, e.pos),
                    None => Err(DslError::new("unbound", e.pos, format!("unknown {} constructor '{}'", want.keyword(), name))),
                },
                _ => Err(type_error(e, ty)),
            }
        }
        Ty::Poly => match &e.kind {
            ExprKind::Int(_) | ExprKind::Ident(_) => Ok(()),
            ExprKind::Neg(inner) | ExprKind::Pow { base: inner, .. } => check_expr(env, inner, ty),
            ExprKind::Binary { lhs, rhs, .. } => {
                check_expr(env, lhs, ty)?;
                check_expr(env, rhs, ty)
            }
            ExprKind::Call { name, args } => {
                if class_function(name).is_none() {
                    return Err(DslError::new("unbound", e.pos, format!("unknown class function '{}'", name)));
                }
                match args.as_slice() {
                    [Arg { key: None, value, .. }] => check_expr(env, value, Ty::Bundle),
                    _ => Err(DslError::new("arity", e.pos, format!("{} takes one bundle", name))),
                }
            }
            ExprKind::List(_) => Err(type_error(e, ty)),
        },
    }
}

#[cfg(test)]
mod tests {
    use crate::parser::parse;

    fn kind_of(src: &str) -> &'static str {
        parse(src).unwrap_err().kind
    }

    #[test]
    fn names_arities_and_types() {
        assert_eq!(kind_of("query chern(E)"), "unbound");
        assert_eq!(kind_of("query frobnicate(1)"), "unbound");
        assert_eq!(kind_of("variety X = projective_space(2, 3)"), "arity");
        assert_eq!(kind_of("variety X = product(projective_space(2))"), "arity");
        assert_eq!(kind_of("variety X = projective_space(2)\nquery chern(X)"), "type");
        assert_eq!(kind_of("variety X = projective_space(2)\nvariety X = quadric(2)"), "type");
        assert_eq!(kind_of("variety X = projective_space(2)\nbundle E = line(X, h)\nquery degeneracy(E, k=1, k=2)"), "arity");
        assert_eq!(kind_of("variety X = projective_space(2)\nbundle E = line(X, h)\nquery predict(E, 1, 0, 0, flags=[wat])"), "unbound");
        assert_eq!(kind_of("variety X = projective_space(2)\nquery integrate(X, c_1(F))"), "unbound");
    }

    #[test]
    fn keywords_and_positions_mix() {
        parse("variety X = hirzebruch(e=1, H=C0 + 2*f)\nbundle E = atom(X, chern=1 + f, rank=1)\nquery predict(E, 1, h=0, s=0)").unwrap();
        let err = parse("variety X = projective_space(n=2, 3)").unwrap_err();
        assert_eq!((err.kind, err.line), ("arity", 1));
    }
}
