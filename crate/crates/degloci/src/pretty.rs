//! Canonical rendering of scripts; parsing the output gives back an equal tree.

use crate::ast::{Arg, BinOp, Expr, ExprKind, Scenario, Statement};

pub fn scenario(s: &Scenario) -> String {
    let mut out = String::new();
    for st in &s.statements {
        out.push_str(&statement(st));
        out.push('\n');
    }
    out
}

pub fn statement(st: &Statement) -> String {
    match st {
        Statement::Decl { kind, name, value, .. } => format!("{} {} = {}", kind.keyword(), name, expr(value)),
        Statement::Query { name, args: a, .. } => format!("query {}({})", name, args(a)),
    }
}

pub fn args(args: &[Arg]) -> String {
    args.iter()
        .map(|a| match &a.key {
            Some(k) => format!("{}={}", k, expr(&a.value)),
            None => expr(&a.value),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn precedence(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Binary { op: BinOp::Add | BinOp::Sub, .. } => 1,
        ExprKind::Binary { .. } => 2,
        ExprKind::Neg(_) => 3,
        ExprKind::Pow { .. } => 4,
        _ => 5,
    }
}

fn wrapped(e: &Expr, min: u8) -> String {
    if precedence(e) < min {
        format!("({})", expr(e))
    } else {
        expr(e)
    }
}

pub fn expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Int(n) => n.to_string(),
        ExprKind::Ident(s) => s.clone(),
        ExprKind::Call { name, args: a } => format!("{}({})", name, args(a)),
        ExprKind::List(items) => format!("[{}]", items.iter().map(expr).collect::<Vec<_>>().join(", ")),
        ExprKind::Neg(inner) => format!("-{}", wrapped(inner, 3)),
        ExprKind::Binary { op, lhs, rhs } => {
            let p = precedence(e);
            let sep = if matches!(op, BinOp::Add | BinOp::Sub) { " " } else { "" };
            format!("{}{}{}{}{}", wrapped(lhs, p), sep, op.symbol(), sep, wrapped(rhs, p + 1))
        }
        ExprKind::Pow { base, exp } => format!("{}^{}", wrapped(base, 5), exp),
    }
}
