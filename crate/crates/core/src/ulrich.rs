//! Numerical necessary conditions for a bundle to be Ulrich.

use alloc::vec::Vec;

use crate::analysis::euler_char;
use crate::bundle::{chern, BundleExpr};
use crate::catalog::VarietyModel;
use crate::error::Result;
use crate::rational::{int, rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equal,
    AtLeast,
    AtMost,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equal => "=",
            Relation::AtLeast => ">=",
            Relation::AtMost => "<=",
        }
    }

    fn holds(self, left: &Rational, right: &Rational) -> bool {
        match self {
            Relation::Equal => left == right,
            Relation::AtLeast => left >= right,
            Relation::AtMost => left <= right,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub left: Rational,
    pub relation: Relation,
    pub right: Rational,
    pub pass: bool,
    /// Set when the identity only holds under the Ulrich vanishings.
    pub label: Option<&'static str>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UlrichReport {
    pub rank: usize,
    pub degree: i64,
    pub checks: Vec<Check>,
}

impl UlrichReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const ULRICH_CONDITIONAL: &str = "Ulrich-conditional";

fn push(checks: &mut Vec<Check>, name: &'static str, left: Rational, relation: Relation, right: Rational) {
    let pass = relation.holds(&left, &right);
    checks.push(Check { name, left, relation, right, pass, label: None });
}

/// Slope identity, `χ = rd`, the Bogomolov margin and, on surfaces with
/// `c_2 = 1`, the constraints `r = 2`, `c_1^2 = 2d - 2`, `2 <= d <= 3`.
pub fn ulrich_report(x: &VarietyModel, e: &BundleExpr) -> Result<UlrichReport> {
    let d = chern(e, x)?;
    let n = x.dimension();
    let r = d.rank as i64;
    let deg = x.degree();
    let h = x.hyperplane();
    let mut checks = Vec::new();

    let h_n1 = h.pow(n as u32 - 1);
    let slope_left = (&d.c(1) * &h_n1).integrate();
    let k_plus = x.canonical() + &h.scale(&int(n as i64 + 1));
    let slope_right = rat(r, 2) * (&k_plus * &h_n1).integrate();
    push(&mut checks, "slope", slope_left, Relation::Equal, slope_right);

    let chi = euler_char(x, e)?;
    push(&mut checks, "euler_characteristic", chi, Relation::Equal, int(r * deg));
    checks.last_mut().unwrap().label = Some(ULRICH_CONDITIONAL);

    if n >= 2 {
        let disc = &d.c(2).scale(&int(4)) - &d.c(1).pow(2);
        let margin = (&disc * &h.pow(n as u32 - 2)).integrate();
        push(&mut checks, "bogomolov_margin", margin, Relation::AtLeast, int(0));
    }

    if n == 2 && d.c(2).integrate() == int(1) {
        push(&mut checks, "c2_one_rank", int(r), Relation::Equal, int(2));
        push(&mut checks, "c2_one_c1_squared", d.c(1).pow(2).integrate(), Relation::Equal, int(2 * deg - 2));
        push(&mut checks, "c2_one_degree_min", int(deg), Relation::AtLeast, int(2));
        push(&mut checks, "c2_one_degree_max", int(deg), Relation::AtMost, int(3));
    }
    Ok(UlrichReport { rank: d.rank, degree: deg, checks })
}
