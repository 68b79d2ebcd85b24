//! Numerical approximation of fractional derivatives and solvers for
//! fractional problems of the calculus of variations and optimal control.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: gamma, generalized binomials, Mittag-Leffler, Stirling functions.
//! - [`operators`]: meshes, sampled curves, Grünwald-Letnikov and Diethelm
//!   finite differences, closed-form reference derivatives and error norms.
//! - [`functions`]: the analytic test functions used throughout the studies.
//! - [`expansions`]: integer-order and moment expansions of Riemann-Liouville,
//!   Caputo and Hadamard derivatives, plus their truncation-error bounds.
//! - [`direct`]: the Euler-like direct method.
//! - [`indirect`]: expansion-based reductions to classical Euler-Lagrange
//!   equations and two-point boundary value problems.

// Parameter checks are written as `!(a < b)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod direct;
pub mod error;
pub mod expansions;
pub mod functions;
pub mod indirect;
pub mod linalg;
pub mod operators;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use operators::{Mesh, SampledCurve};
