//! Exact power-series approximation engine.
//!
//! The crate implements truncated multivariate power series ("jets") over
//! arbitrary-precision rationals, monomial ideals and descending filtrations
//! built from them, polynomial systems with exact Jacobian/adjugate data, and
//! a Newton-style lifting loop that turns sufficiently accurate approximate
//! solutions into true solutions at a requested truncation order, with
//! machine-checkable certificates for every claim it makes.  A separate
//! module provides the one floating-point component: smooth cutoff functions
//! on a 1-D grid and the bound checks used to assemble a function with
//! prescribed Taylor data.
//!
//! Everything except `borel` is exact rational arithmetic; `f64` never leaks
//! out of that module.  The crate is `no_std` (with `alloc`); IO, file
//! formats and the command-line driver live in the companion `jetlift` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod borel;
pub mod context;
pub mod expr;
pub mod homotopy;
pub mod ideal;
pub mod jet;
pub mod lift;
pub mod system;

pub use context::VarContext;
pub use jet::{Jet, Monomial, Rational, Valuation};
