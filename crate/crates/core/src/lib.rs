//! Exact intersection-theory engine for vector bundles on a catalog of
//! projective varieties.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is exact rational
//! arithmetic in truncated Chow rings:
//!
//! * [`ring`]: graded rings given by rewrite rules, with integration;
//! * [`catalog`]: projective spaces, quadrics, products, scrolls over curves,
//!   Hirzebruch surfaces and blown-up planes;
//! * [`bundle`]: bundle expressions and their Chern, Segre, Chern-character
//!   and Todd classes;
//! * [`analysis`]: Euler characteristics, degeneracy-locus classes, bigness,
//!   Eagon–Northcott Hilbert polynomials and Riemann–Roch cross-checks;
//! * [`predictor`] and [`ulrich`]: connected-component verdicts and Ulrich
//!   numerical reports;
//! * [`oracle`]: brute-force verifiers used to cross-check the above.
#![no_std]

extern crate alloc;

pub mod error;
pub mod rational;
pub mod ring;
pub mod catalog;
pub mod bundle;
pub mod schur;
pub mod analysis;
pub mod predictor;
pub mod ulrich;
pub mod oracle;

pub use error::{Error, Result};
pub use rational::Rational;
pub use ring::{GradedClass, Monomial, RingPresentation};
pub use catalog::VarietyModel;
pub use bundle::{BundleExpr, ChernData};
