//! Auxiliary-function engine for L'Hospital-type monotonicity rules.
//!
//! For a pair `f, g` on an open interval with `g'` of constant sign, the
//! auxiliary function `H = (f'/g') g - f` decides the monotonicity of the
//! quotient `f/g` through `(f/g)' = (g'/g^2) H`. This crate evaluates `H`,
//! classifies monotone patterns on grids, applies the monotonicity rules,
//! and reproduces the sharp constants of a family of hyperbolic,
//! trigonometric and mean inequalities.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod apps;
pub mod aux_h;
pub mod catalog;
pub mod chains;
pub mod classify;
pub mod error;
pub mod means;
pub mod numerics;
pub mod par;
pub mod roots;
pub mod rules;
pub mod series;
pub mod suites;
pub mod tables;

pub use error::{Endpoint, Error, Result};

/// Version of the engine, recorded in reproduction reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
