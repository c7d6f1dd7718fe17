//! The polynomials `P_n(x1, x2)` given by the banded determinant with `x1`
//! on the diagonal, `x2` above it and `1` below it. With `x1 = c_1`,
//! `x2 = c_2` they compute the top Segre class of the dual of a bundle whose
//! higher Chern classes vanish.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use crate::error::{malformed, Result};
use crate::rational::int;
use crate::ring::GradedClass;

/// Integer polynomial in `x1` (weight 1) and `x2` (weight 2); keys are
/// `(exponent of x1, exponent of x2)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SchurPoly {
    terms: BTreeMap<(u32, u32), i64>,
}

impl SchurPoly {
    pub fn zero() -> Self {
        SchurPoly::default()
    }

    pub fn monomial(coeff: i64, a: u32, b: u32) -> Self {
        let mut p = SchurPoly::zero();
        p.add_term(a, b, coeff);
        p
    }

    pub fn add_term(&mut self, a: u32, b: u32, coeff: i64) {
        let slot = self.terms.entry((a, b)).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&(a, b));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn coefficient(&self, a: u32, b: u32) -> i64 {
        self.terms.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &SchurPoly) -> SchurPoly {
        let mut out = self.clone();
        for ((a, b), c) in other.terms() {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn scale(&self, c: i64) -> SchurPoly {
        let mut out = SchurPoly::zero();
        for ((a, b), v) in self.terms() {
            out.add_term(a, b, v * c);
        }
        out
    }

    pub fn mul(&self, other: &SchurPoly) -> SchurPoly {
        let mut out = SchurPoly::zero();
        for ((a, b), u) in self.terms() {
            for ((c, d), v) in other.terms() {
                out.add_term(a + c, b + d, u * v);
            }
        }
        out
    }

    /// Weight of every term, if all terms share one.
    pub fn weight(&self) -> Option<u32> {
        let mut weights = self.terms.keys().map(|(a, b)| a + 2 * b);
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    /// Drops every term divisible by `x2^2`.
    pub fn mod_x2_squared(&self) -> SchurPoly {
        SchurPoly { terms: self.terms.iter().filter(|((_, b), _)| *b < 2).map(|(k, v)| (*k, *v)).collect() }
    }

    /// Substitutes classes for `x1` and `x2`.
    pub fn evaluate(&self, x1: &GradedClass, x2: &GradedClass) -> GradedClass {
        let mut acc = GradedClass::zero(x1.ring());
        for ((a, b), c) in self.terms() {
            acc += &(&x1.pow(a) * &x2.pow(b)).scale(&int(c));
        }
        acc
    }
}

impl fmt::Display for SchurPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest power of x1 first
        for (i, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            let mut factors: alloc::vec::Vec<String> = alloc::vec::Vec::new();
            for (name, e) in [("x1", *a), ("x2", *b)] {
                match e {
                    0 => {}
                    1 => factors.push(name.into()),
                    _ => factors.push(alloc::format!("{}^{}", name, e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", mag)?;
            } else {
                if mag != 1 {
                    write!(f, "{}*", mag)?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `P_n` by the recurrence `P_n = x1 P_{n-1} - x2 P_{n-2}`, `P_0 = 1`, `P_1 = x1`.
pub fn schur_p(n: usize) -> Result<SchurPoly> {
    if n < 2 {
        return Err(malformed!("P_n is defined here for n >= 2, got {}", n));
    }
    let x1 = SchurPoly::monomial(1, 1, 0);
    let minus_x2 = SchurPoly::monomial(-1, 0, 1);
    let mut prev = SchurPoly::monomial(1, 0, 0);
    let mut cur = x1.clone();
    for _ in 2..=n {
        let next = x1.mul(&cur).add(&minus_x2.mul(&prev));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `x1^n - (n-1) x1^{n-2} x2`.
pub fn truncated_closed_form(n: usize) -> SchurPoly {
    let n32 = n as u32;
    SchurPoly::monomial(1, n32, 0).add(&SchurPoly::monomial(-(n as i64 - 1), n32 - 2, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn small_cases() {
        assert_eq!(schur_p(2).unwrap().to_string(), "x1^2 - x2");
        assert_eq!(schur_p(3).unwrap().to_string(), "x1^3 - 2*x1*x2");
        assert_eq!(schur_p(4).unwrap().to_string(), "x1^4 - 3*x1^2*x2 + x2^2");
        assert!(schur_p(1).is_err());
    }

    #[test]
    fn weight_and_truncation() {
        for n in 2..=12 {
            let p = schur_p(n).unwrap();
            assert_eq!(p.weight(), Some(n as u32));
            assert_eq!(p.mod_x2_squared(), truncated_closed_form(n));
        }
    }
}
