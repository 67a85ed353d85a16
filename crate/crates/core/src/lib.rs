//! Numerical toolkit for one-parameter continuous semigroups of holomorphic
//! self-maps of the unit disk.
//!
//! The crate is organised bottom-up:
//!
//! * [`expr`] parses, evaluates, differentiates and Taylor-expands
//!   holomorphic functions given as expression trees;
//! * [`generator`] tests the infinitesimal-generator inequality, finds the
//!   Denjoy–Wolff point and builds the Berkson–Porta factorisation;
//! * [`flow`] integrates `∂u/∂t + f(u) = 0`;
//! * [`linearize`] solves the Schröder and Abel equations;
//! * [`boundary`] estimates angular limits and runs the boundary rigidity
//!   tests;
//! * [`commute`] decides whether two semigroups commute.

pub mod boundary;
pub mod commute;
pub mod contour;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod flow;
pub mod generator;
pub mod grid;
pub mod linearize;
pub mod quadrature;

pub use error::{Error, Result};
pub use expr::{parse, taylor, ComplexValue, EvalError, Expr, ParseError, TaylorJet};
pub use grid::PolarGrid;

/// Tolerance for structural residuals (factorisations, representations).
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Tolerance for sign checks such as `Re g >= 0`.
pub const SIGN_TOL: f64 = 1e-7;
/// `|f'(τ)|` at or below this value is classified as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-5;
