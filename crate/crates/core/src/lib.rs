//! Exact discriminants of bivariate polynomials over Q and the decision
//! procedures built on them: minimality, Newton polytope invariants, the
//! GL2(Q[x]) reduction, coordinate extraction, local invariants,
//! parametrisation search and classification of forms with small
//! discriminant degree.

pub mod classify;
pub mod elimination;
pub mod error;
pub mod gaction;
pub mod irreducibility;
pub mod linalg;
pub mod localinv;
pub mod minimality;
mod modular;
pub mod param;
pub mod poly;
pub mod polytope;
pub mod selftest;

pub use error::{Error, Result};
pub use poly::{parse_form, parse_poly, BForm, BPoly, Rat, UPoly};
